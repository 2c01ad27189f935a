import pytest

from kappainv import Field, VarContext, parse_polynomial, weierstrass_validate


@pytest.fixture(scope="session")
def F2():
    return Field.finite(2)


@pytest.fixture(scope="session")
def F5():
    return Field.finite(5)


@pytest.fixture(scope="session")
def F7():
    return Field.finite(7)


@pytest.fixture(scope="session")
def QQ():
    return Field.rationals()


@pytest.fixture(scope="session")
def F4():
    return Field.finite(2, 2, (1, 1, 1))  # GF(4) = GF(2)[a]/(a^2 + a + 1)


def mk(text, d, field, aux=("z",)):
    """Parse a polynomial in a fresh context."""
    return parse_polynomial(text, VarContext(d, aux), field)


def mkw(text, d, field):
    """Parse and validate a Weierstrass polynomial."""
    return weierstrass_validate(mk(text, d, field))
