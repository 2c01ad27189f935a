"""Integer lifts of overweight presentations and their fiber comparison.

The lift keeps the structural signs of each relation (head minus tail minus
corrections) and lifts prime-field coefficients canonically into
{0, ..., p-1}; the final equation lifts coefficient-wise.  Reducing every
coefficient mod p recovers the source presentation, while over the
integers the eliminated hypersurface generally acquires ghost monomials:
terms whose coefficient is a nonzero multiple of p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigurationError, UnsupportedLiftError
from .kappa import OverweightPresentation
from .poly import Poly, VarContext, substitute
from .ring import ZZ, lift_coeff


@dataclass
class LiftedRelation:
    var: str
    rhs: Poly        # over ZZ: head - tail - corrections
    generator: Poly  # u_j - rhs over ZZ


@dataclass
class IntegerLift:
    prime: int
    relations: list          # LiftedRelation, chain order
    final: Poly              # over ZZ, coefficient-wise canonical lift
    weights: dict
    ctx: VarContext

    def generators(self) -> list:
        return [r.generator for r in self.relations] + [self.final]


@dataclass
class GhostReport:
    ghosts: list             # [(exponent tuple, integer coefficient)], canonical order
    hypersurface: Poly       # the eliminated equation over ZZ


@dataclass
class InitialIdealReport:
    omega: tuple
    generators_initial: list  # initial form of each generator, over ZZ, unnormalized
    fiber_independent: bool
    witness: object           # (generator index, exponent, coeff) or None


def _lift_poly(f: Poly, field) -> Poly:
    terms = {e: lift_coeff(field, c) for e, c in f.terms.items()}
    return Poly(f.ctx, ZZ, terms)


def lift_presentation(pres: OverweightPresentation) -> IntegerLift:
    """Structural integer lift of a presentation over a prime field."""
    field = pres.ring
    if field.characteristic == 0:
        raise UnsupportedLiftError("the presentation is already in characteristic 0")
    p = field.characteristic
    ctx = pres.ctx
    lifted = []
    for rel in pres.relations:
        terms = {}
        for sign, c, mono in rel.structural_pieces():
            key = tuple(mono) + (0,) * (ctx.nvars - len(mono))
            val = terms.get(key, 0) + sign * lift_coeff(field, c)
            if val:
                terms[key] = val
            else:
                terms.pop(key, None)
        rhs = Poly(ctx, ZZ, terms)
        gen = Poly.variable(ctx, ZZ, rel.var).sub(rhs)
        lifted.append(LiftedRelation(rel.var, rhs, gen))
    final = _lift_poly(pres.final.in_context(ctx), field)
    return IntegerLift(p, lifted, final, dict(pres.weights), ctx)


def eliminate_to_hypersurface(lift: IntegerLift) -> Poly:
    """Substitute each relation rhs for its variable, innermost first; exact over ZZ."""
    h = lift.final
    for rel in reversed(lift.relations):
        h = substitute(h, rel.var, rel.rhs)
    return h


def ghost_monomials(lift: IntegerLift) -> GhostReport:
    """Monomials of the eliminated hypersurface with coefficient in pZ \\ {0}."""
    h = eliminate_to_hypersurface(lift)
    p = lift.prime
    ghosts = [(e, c) for e, c in h.sorted_terms() if c % p == 0]
    assert all(c != 0 and c % p == 0 for _, c in ghosts)
    return GhostReport(ghosts, h)


def check_weight_vector(omega, ctx: VarContext) -> tuple:
    omega = tuple(Fraction(c) for c in omega)
    if len(omega) != ctx.nvars:
        raise ConfigurationError(
            f"weight vector has {len(omega)} components, expected {ctx.nvars}")
    if any(c <= 0 for c in omega):
        raise ConfigurationError("weight vector components must be strictly positive")
    return omega


def initial_forms_weighted(lift: IntegerLift, omega) -> InitialIdealReport:
    """Minimal-weight parts of every generator, with the unit-coefficient test.

    The fibers agree exactly when every retained coefficient is a unit mod p:
    then the mod-p and characteristic-0 initial ideals share their support.
    """
    omega = check_weight_vector(omega, lift.ctx)
    p = lift.prime
    inits = []
    fiber_independent = True
    witness = None
    for gi, gen in enumerate(lift.generators()):
        best = None
        kept = {}
        for e, c in gen.terms.items():
            w = sum(omega[i] * e[i] for i in range(len(e)))
            if best is None or w < best:
                best = w
                kept = {e: c}
            elif w == best:
                kept[e] = c
        init = Poly(lift.ctx, ZZ, kept)
        inits.append(init)
        for e, c in init.sorted_terms():
            if c % p == 0:
                fiber_independent = False
                if witness is None:
                    witness = (gi, e, c)
    return InitialIdealReport(omega, inits, fiber_independent, witness)


def default_tropical_weight(pres: OverweightPresentation, lam) -> tuple:
    """Kappa-derived candidate weight: omega_x = lambda, omega_v = <lambda, weight(v)>."""
    ctx = pres.ctx
    lam = tuple(Fraction(c) for c in lam)
    if len(lam) != ctx.d:
        raise ConfigurationError(f"lambda has {len(lam)} components, expected {ctx.d}")
    if any(c <= 0 for c in lam):
        raise ConfigurationError("lambda must be strictly positive componentwise")
    omega = list(lam)
    for name in ctx.aux:
        vec = pres.weights.get(name)
        if vec is None:
            raise ConfigurationError(f"presentation assigns no weight to {name}")
        omega.append(sum(l * Fraction(v) for l, v in zip(lam, vec)))
    return check_weight_vector(omega, ctx)
