"""Exact coefficient arithmetic over Q, GF(p^k) and Z.

Coefficient values are plain Python objects interpreted by a ring object:
Fraction for Q, int in {0..p-1} for GF(p), a length-k tuple of such ints
for GF(p^k), and int for Z.  No floating point is used anywhere.

Finite fields are deliberately desk scale (q = p^k below ~2^16), which
keeps exhaustive root extraction and the irreducibility check of the
extension modulus trivially correct.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ConfigurationError, UnsupportedLiftError

_MAX_FIELD_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def integer_nth_root(m: int, n: int):
    """Exact integer n-th root of m >= 0, or None if m is not a perfect power."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m in (0, 1) or n == 1:
        return m
    x = 1 << ((m.bit_length() + n - 1) // n + 1)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    return x if x ** n == m else None


# ---------------------------------------------------------------------------
# dense polynomial helpers over GF(p), little-endian coefficient lists
# ---------------------------------------------------------------------------

def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    a = _ptrim(list(a))
    b = _ptrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = (a[-1] * inv_lead) % p
        d = len(a) - len(b)
        q[d] = c
        for i, bi in enumerate(b):
            a[d + i] = (a[d + i] - c * bi) % p
        _ptrim(a)
    return _ptrim(q), a


def _pegcd(a, b, p):
    # returns (g, s) with s*a = g mod b; enough for inverses
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    while r1:
        q, r = _pdivmod(r0, r1, p)
        qs1 = _pmul(q, s1, p)
        n = max(len(s0), len(qs1))
        s_new = [((s0[i] if i < len(s0) else 0) - (qs1[i] if i < len(qs1) else 0)) % p
                 for i in range(n)]
        r0, r1 = r1, r
        s0, s1 = s1, _ptrim(s_new)
    return r0, s0


class Field:
    """A coefficient field: Q when characteristic is 0, else GF(p^k).

    Doubles as the field specification: the characteristic, extension
    degree and (for k > 1) the monic irreducible modulus over GF(p) are
    validated at construction.
    """

    __slots__ = ("characteristic", "extension_degree", "modulus")

    def __init__(self, characteristic: int = 0, extension_degree: int = 1, modulus=None):
        p, k = characteristic, extension_degree
        if p == 0:
            if k != 1 or modulus is not None:
                raise ConfigurationError("characteristic 0 admits no extension data")
        else:
            if not is_prime(p):
                raise ConfigurationError(f"characteristic {p} is not prime")
            if k < 1:
                raise ConfigurationError("extension degree must be positive")
            if p ** k > _MAX_FIELD_ORDER:
                raise ConfigurationError(f"field order {p}^{k} exceeds the desk-scale bound 2^16")
            if k == 1:
                if modulus is not None:
                    raise ConfigurationError("prime fields take no modulus")
            else:
                if modulus is None:
                    raise ConfigurationError(f"GF({p}^{k}) requires a degree-{k} modulus")
                modulus = tuple(c % p for c in modulus)
                if len(modulus) != k + 1 or modulus[-1] != 1:
                    raise ConfigurationError("modulus must be monic of degree k")
                if not _is_irreducible(list(modulus), p):
                    raise ConfigurationError("modulus is reducible over GF(p)")
        self.characteristic = p
        self.extension_degree = k
        self.modulus = modulus

    # -- constructors ------------------------------------------------------

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def finite(cls, p: int, k: int = 1, modulus=None) -> "Field":
        return cls(p, k, modulus)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Field)
                and self.characteristic == other.characteristic
                and self.extension_degree == other.extension_degree
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.characteristic, self.extension_degree, self.modulus))

    def __repr__(self):
        if self.characteristic == 0:
            return "QQ"
        if self.extension_degree == 1:
            return f"GF({self.characteristic})"
        return f"GF({self.characteristic}^{self.extension_degree})"

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def order(self):
        if self.characteristic == 0:
            return None
        return self.characteristic ** self.extension_degree

    # -- element construction ---------------------------------------------

    @property
    def zero(self):
        if self.characteristic == 0:
            return Fraction(0)
        if self.extension_degree == 1:
            return 0
        return (0,) * self.extension_degree

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if self.characteristic == 0:
            return Fraction(n)
        if self.extension_degree == 1:
            return n % self.characteristic
        return (n % self.characteristic,) + (0,) * (self.extension_degree - 1)

    def from_fraction(self, num: int, den: int):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if self.characteristic == 0:
            return Fraction(num, den)
        d = self.from_int(den)
        if self.is_zero(d):
            raise ZeroDivisionError(f"{den} is not invertible in {self!r}")
        return self.mul(self.from_int(num), self.inv(d))

    def element(self, index: int):
        """The index-th element in enumeration order (0, 1, ..., q-1)."""
        if self.characteristic == 0:
            raise ConfigurationError("enumeration order is defined for finite fields only")
        p, k = self.characteristic, self.extension_degree
        if k == 1:
            return index % p
        digits = []
        for _ in range(k):
            digits.append(index % p)
            index //= p
        return tuple(digits)

    # -- arithmetic ---------------------------------------------------------

    def is_zero(self, a) -> bool:
        return a == self.zero

    def add(self, a, b):
        if self.characteristic == 0:
            return a + b
        p, k = self.characteristic, self.extension_degree
        if k == 1:
            return (a + b) % p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.characteristic == 0:
            return -a
        p, k = self.characteristic, self.extension_degree
        if k == 1:
            return (-a) % p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if self.characteristic == 0:
            return a * b
        p, k = self.characteristic, self.extension_degree
        if k == 1:
            return (a * b) % p
        prod = _pmul(list(a), list(b), p)
        _, rem = _pdivmod(prod, list(self.modulus), p)
        return tuple(rem + [0] * (k - len(rem)))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 0:
            return 1 / a
        p, k = self.characteristic, self.extension_degree
        if k == 1:
            return pow(a, p - 2, p)
        g, s = _pegcd(list(a), list(self.modulus), p)
        # g is a nonzero constant since the modulus is irreducible
        c = pow(g[0], p - 2, p)
        s = [(x * c) % p for x in s]
        _, rem = _pdivmod(s, list(self.modulus), p)
        return tuple(rem + [0] * (k - len(rem)))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_(self, a, n: int):
        out = self.one
        base = a
        while n > 0:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    # -- rendering ----------------------------------------------------------

    def is_negative(self, a) -> bool:
        """Whether the canonical rendering of a carries a leading minus."""
        return self.characteristic == 0 and a < 0

    def abs_value(self, a):
        return -a if self.is_negative(a) else a

    def format_coeff(self, a) -> str:
        if self.characteristic == 0 or self.extension_degree == 1:
            return str(a)
        if a[1:] == (0,) * (self.extension_degree - 1):
            return str(a[0])  # prime-subfield value
        parts = []
        for i in range(self.extension_degree - 1, -1, -1):
            c = a[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}a" if i == 1 else f"{head}a^{i}")
        return "(" + " + ".join(parts) + ")"

    # -- roots ---------------------------------------------------------------

    def all_nth_roots(self, a, n: int) -> list:
        """Every c in the field with c**n == a, in enumeration order (Q: positive first)."""
        if self.characteristic == 0:
            return _rational_roots(a, n)
        q = self.order
        roots = []
        for i in range(q):
            c = self.element(i)
            if self.pow_(c, n) == a:
                roots.append(c)
        return roots

    def nth_root(self, a, n: int):
        """A deterministic n-th root of a, or None.

        Finite fields take the smallest root in enumeration order; over Q the
        root is the real one matching the sign of a (odd n) or the positive
        one (even n, a > 0).
        """
        roots = self.all_nth_roots(a, n)
        return roots[0] if roots else None

    def root_extension_degree(self, a, n: int, bound: int = 64) -> int:
        """Smallest k' with an n-th root of a in GF(q^k'), by order arithmetic.

        Over Q the exact minimal degree would need irreducibility analysis of
        x^n - a; the generic bound n (the degree of the root's extension always
        divides n) is returned instead.
        """
        if self.characteristic == 0:
            return n
        if self.is_zero(a):
            return 1
        q = self.order
        d = _multiplicative_order(self, a)
        for kk in range(1, bound + 1):
            big = q ** kk - 1
            g = _gcd(n, big)
            if (big // g) % d == 0:
                return kk
        raise ConfigurationError("no root found within the extension search bound")


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _multiplicative_order(field: Field, a) -> int:
    acc = a
    for k in range(1, field.order):
        if acc == field.one:
            return k
        acc = field.mul(acc, a)
    raise ConfigurationError("element has no multiplicative order (zero?)")


def _rational_roots(a: Fraction, n: int) -> list:
    if a == 0:
        return [Fraction(0)]
    if a < 0 and n % 2 == 0:
        return []
    num = integer_nth_root(abs(a.numerator), n)
    den = integer_nth_root(a.denominator, n)
    if num is None or den is None:
        return []
    r = Fraction(num, den)
    if n % 2 == 1:
        return [r if a > 0 else -r]
    return [r, -r]


def _is_irreducible(modulus, p: int) -> bool:
    """Exhaustive factor search; the candidate divisors are desk scale by construction."""
    k = len(modulus) - 1
    if k <= 0:
        return False
    for deg in range(1, k // 2 + 1):
        for idx in range(p ** deg):
            digits = []
            t = idx
            for _ in range(deg):
                digits.append(t % p)
                t //= p
            cand = digits + [1]
            _, rem = _pdivmod(list(modulus), cand, p)
            if not rem:
                return False
    return True


class IntegerRing:
    """Arbitrary-precision integers with the same operation surface as Field."""

    characteristic = 0
    extension_degree = 1
    is_rational = False

    zero = 0
    one = 1

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    @staticmethod
    def from_int(n: int) -> int:
        return n

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        q, r = divmod(a, b)
        if r:
            raise ZeroDivisionError(f"{a} is not divisible by {b} in ZZ")
        return q

    @staticmethod
    def pow_(a, n: int):
        return a ** n

    @staticmethod
    def is_negative(a) -> bool:
        return a < 0

    @staticmethod
    def abs_value(a):
        return abs(a)

    @staticmethod
    def format_coeff(a) -> str:
        return str(a)


ZZ = IntegerRing()
QQ = Field.rationals()


def nth_root(field: Field, a, n: int):
    """Module-level alias for Field.nth_root."""
    return field.nth_root(a, n)


def lift_coeff(field: Field, a) -> int:
    """Canonical integer lift of a prime-field value into {0, ..., p-1}."""
    if field.characteristic == 0:
        raise UnsupportedLiftError("lift is defined for prime fields, not characteristic 0")
    if field.extension_degree != 1:
        raise UnsupportedLiftError(
            f"lift of GF({field.characteristic}^{field.extension_degree}) values is unsupported; "
            "only prime fields lift canonically")
    return int(a)


def reduce_coeff(n: int, p: int) -> int:
    """Reduction of an integer into GF(p)."""
    if not is_prime(p):
        raise ConfigurationError(f"{p} is not prime")
    return n % p
