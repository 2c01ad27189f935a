"""The kappa classification engine.

Stage by stage, the engine minimizes the (weighted) projected polyhedron of
the working polynomial under translations of the top chain variable,
records the single remaining vertex, decomposes the initial form there as a
binomial power (rewriting modulo the relation stack when the raw initial
form is not one), and descends by introducing a fresh chain variable for
the binomial.  The stage multiplicities strictly descend, so the run ends
with multiplicity one (terminal infinity, an overweight presentation is
emitted), an empty polyhedron (also infinity), a multi-vertex polyhedron
(terminal -1, translation-minimal), or resource exhaustion (inconclusive).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import ConfigurationError, ContractViolation, EngineError
from .poly import (Poly, Relation, VarContext, WeierstrassPoly, format_monomial,
                   normal_form, power_substitute, substitute)
from .polyhedron import (OrthantPolyhedron, polyhedron_leq, term_point,
                         weighted_projected_polyhedron)

_PREPARE_FUEL = 4096


class Terminal(enum.Enum):
    INFINITY = "inf"
    MINUS_ONE = "-1"
    INCONCLUSIVE = "inconclusive"


class _NotBinomialType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOT_BINOMIAL"


NOT_BINOMIAL = _NotBinomialType()


@dataclass(frozen=True)
class FieldExtensionRequired:
    """A decomposition pattern fit, but the needed root lives in an extension."""

    power: int
    degree: int


@dataclass(frozen=True)
class BinomialPower:
    """(main_var^inner_exp - coeff * x^tail_expo)^power, tail free of main_var."""

    main_var: str
    inner_exp: int
    power: int
    coeff: object
    tail_expo: tuple

    def expand(self, ctx: VarContext, ring) -> Poly:
        midx = ctx.var_index(self.main_var)
        head = tuple(self.inner_exp if i == midx else 0 for i in range(ctx.nvars))
        tail = tuple(self.tail_expo) + (0,) * (ctx.nvars - len(self.tail_expo))
        base = Poly(ctx, ring, {head: ring.one, tail: ring.neg(self.coeff)})
        return base.pow_(self.power)


@dataclass(frozen=True)
class KappaInvariant:
    """The vertex string with its terminal symbol and resource accounting."""

    vertices: tuple
    terminal: Terminal
    certified_truncation: int
    budget_used: int
    multiplicities: tuple   # (n, e1, e2, ...)
    inner_exponents: tuple  # (n1, n2, ...)

    def as_string(self, d: int) -> str:
        parts = []
        for v in self.vertices:
            if d == 1:
                parts.append(str(v[0]))
            else:
                parts.append("(" + ", ".join(str(c) for c in v) + ")")
        parts.append(self.terminal.value)
        return "(" + ", ".join(parts) + ")"


@dataclass
class OverweightPresentation:
    """Relation stack plus final equation, with per-variable weight vectors.

    weights maps every variable to a vector in Q^d: x_i to the i-th unit
    vector, z and the chain variables to the recorded vertices.
    """

    relations: tuple
    final: Poly
    final_head: object  # BinomialPower or None (empty-polyhedron terminal)
    weights: dict
    ctx: VarContext
    ring: object

    def weight_of(self, expo) -> tuple:
        d = self.ctx.d
        total = [Fraction(expo[i]) for i in range(d)]
        for i in range(d, len(expo)):
            if expo[i] == 0:
                continue
            name = self.ctx.var_name(i)
            vec = self.weights.get(name)
            if vec is None:
                raise ConfigurationError(f"no weight assigned to {name}")
            for c in range(d):
                total[c] += expo[i] * Fraction(vec[c])
        return tuple(total)

    def generator_strings(self) -> list:
        lines = [rel.structural_str() for rel in self.relations]
        lines.append(self.final.format())
        return lines

    def generator_polys(self) -> list:
        polys = [rel.generator_poly(self.ctx) for rel in self.relations]
        polys.append(self.final)
        return polys


@dataclass
class KappaConfig:
    truncation: int = 64
    budget: int = 256
    depth: int = 3

    def __post_init__(self):
        if self.truncation < 1 or self.budget < 1 or self.depth < 0:
            raise ConfigurationError("truncation and budget must be >= 1, depth >= 0")


class PrepStatus(enum.Enum):
    PREPARED = "prepared"
    INCONCLUSIVE = "inconclusive"


@dataclass
class PrepareResult:
    poly: Poly
    polyhedron: OrthantPolyhedron
    status: PrepStatus
    eliminations: int
    diagnostics: list = dc_field(default_factory=list)


@dataclass
class KappaResult:
    invariant: KappaInvariant
    presentation: object  # OverweightPresentation or None
    diagnostics: list


# ---------------------------------------------------------------------------
# initial forms
# ---------------------------------------------------------------------------

def _aux_weight_index(ctx: VarContext, weights: dict) -> dict:
    return {ctx.var_index(name): vec for name, vec in weights.items()}


def _vertex_str(v) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


def _initial_at(f: Poly, vertex, main_var: str, top_exp: int, weights: dict) -> Poly:
    ctx = f.ctx
    midx = ctx.var_index(main_var)
    aux = _aux_weight_index(ctx, weights)
    top = tuple(top_exp if i == midx else 0 for i in range(ctx.nvars))
    terms = {}
    for e, c in f.terms.items():
        if e == top:
            terms[e] = c
            continue
        pt = term_point(e, ctx.d, midx, top_exp, aux)
        if pt == vertex:
            terms[e] = c
    return Poly(ctx, f.ring, terms, f.trunc)


def initial_form(f: Poly, vertex, main_var: str, top_exp: int, weights: dict) -> Poly:
    """Monic top plus every term whose weighted point equals the given vertex."""
    P = weighted_projected_polyhedron(f, main_var, top_exp, weights)
    if tuple(vertex) not in P.vertices:
        raise ContractViolation(f"{vertex} is not a vertex of the projected polyhedron")
    return _initial_at(f, tuple(vertex), main_var, top_exp, weights)


# ---------------------------------------------------------------------------
# binomial power recognition
# ---------------------------------------------------------------------------

def _divisors_desc(n: int) -> list:
    return [e for e in range(n, 0, -1) if n % e == 0]


def _binom_mod(n: int, k: int, char: int) -> int:
    num = 1
    for i in range(k):
        num = num * (n - i) // (i + 1)
    return num % char if char else num


def _decompose_at(In: Poly, main_var: str, power: int, ctx: VarContext, ring):
    """Try to read In as (w^inner - c*tail)^power; None if the shape does not fit."""
    midx = ctx.var_index(main_var)
    N = max((e[midx] for e in In.terms), default=0)
    top = tuple(N if i == midx else 0 for i in range(ctx.nvars))
    if N < 1 or In.terms.get(top) != ring.one:
        raise ContractViolation("initial form is not monic in the main variable")
    if N % power:
        return None
    inner = N // power
    wfree = [(e, c) for e, c in In.terms.items() if e[midx] == 0]
    if len(wfree) != 1:
        return None
    gexpo, gamma = wfree[0]
    if any(v % power for v in gexpo):
        return None
    tail = tuple(v // power for v in gexpo)
    target = gamma if power % 2 == 0 else ring.neg(gamma)  # c^e = (-1)^e * gamma
    roots = ring.all_nth_roots(target, power)
    if not roots:
        if _pattern_support_matches(In, midx, inner, power, tail, ctx, ring):
            return FieldExtensionRequired(power, ring.root_extension_degree(target, power))
        return None
    for c in roots:
        bp = BinomialPower(main_var, inner, power, c, tail)
        if bp.expand(ctx, ring) == In:
            return bp
    return None


def _pattern_support_matches(In, midx, inner, power, tail, ctx, ring) -> bool:
    # support-level check used only when the root is missing: the terms must
    # sit exactly on the binomial grid, with the slots surviving in this
    # characteristic all present
    char = ring.characteristic
    grid = set()
    required = set()
    for j in range(power + 1):
        e = [t * j for t in tail]
        e[midx] = inner * (power - j)
        e = tuple(e)
        grid.add(e)
        if _binom_mod(power, j, char) != 0:
            required.add(e)
    support = set(In.terms)
    return required <= support <= grid


def binomial_power_decompose(In: Poly, main_var: str, ring=None):
    """Maximal-power binomial decomposition of a vertex initial form.

    Divisors of the main degree are tried in decreasing order; the first full
    expansion match wins.  A pattern blocked only by a missing root in the
    coefficient field preempts smaller powers and reports the extension
    degree that would unblock it.
    """
    ring = ring or In.ring
    ctx = In.ctx
    midx = ctx.var_index(main_var)
    N = max((e[midx] for e in In.terms), default=0)
    if N < 1:
        raise ContractViolation("main variable does not occur")
    for power in _divisors_desc(N):
        res = _decompose_at(In, main_var, power, ctx, ring)
        if isinstance(res, (BinomialPower, FieldExtensionRequired)):
            return res
    return NOT_BINOMIAL


# ---------------------------------------------------------------------------
# binomialization modulo the relation stack
# ---------------------------------------------------------------------------

class _ExtensionSignal(Exception):
    def __init__(self, info):
        self.info = info


def _apply_rewrite(f: Poly, expo: tuple, rel: Relation, T) -> Poly:
    """Replace one term's tail_j divisor through relation j, exactly.

    c_j * tail_j = w^{n_j} - u_j + h_j, so the term coeff*x^expo becomes
    coeff/c_j * (x^(expo-tail)) * (w^{n_j} - u_j + h_j); the working
    polynomial changes by a multiple of the relation generator only.  The
    result is deliberately NOT normal-formed: the upward rewrite (head
    powers at their bound) is what makes the binomial shape visible, and
    normalizing here would cancel the move.
    """
    ctx = f.ctx
    ring = f.ring
    coeff = f.terms[expo]
    tail = tuple(rel.tail_expo) + (0,) * (ctx.nvars - len(rel.tail_expo))
    rest = tuple(a - b for a, b in zip(expo, tail))
    uidx = ctx.var_index(rel.var)
    u_expo = tuple(1 if i == uidx else 0 for i in range(ctx.nvars))
    terms = {rel.head_monomial(ctx): ring.one, u_expo: ring.neg(ring.one)}
    for ck, mk in rel.corrections:
        key = tuple(mk) + (0,) * (ctx.nvars - len(mk))
        s = ring.sub(terms.get(key, ring.zero), ck)  # h_j = -sum corrections
        if ring.is_zero(s):
            terms.pop(key, None)
        else:
            terms[key] = s
    body = Poly(ctx, ring, terms).scale(ring.inv(rel.tail_coeff))
    replaced = body.mul_monomial(rest, coeff)
    return f.sub(Poly.monomial(ctx, ring, expo, coeff)).add(replaced, T)


def _search_at_power(f, vertex, main_var, top_exp, weights, relations, power, depth, T):
    In = _initial_at(f, vertex, main_var, top_exp, weights)
    if len(In.terms) > 1:
        res = _decompose_at(In, main_var, power, f.ctx, f.ring)
        if isinstance(res, BinomialPower):
            return f, res
        if isinstance(res, FieldExtensionRequired):
            raise _ExtensionSignal(res)
    if depth <= 0:
        return None
    ctx = f.ctx
    midx = ctx.var_index(main_var)
    top = tuple(top_exp if i == midx else 0 for i in range(ctx.nvars))
    ordered = [e for e, _ in In.sorted_terms() if e != top]
    for rel in reversed(list(relations)):
        tail = tuple(rel.tail_expo) + (0,) * (ctx.nvars - len(rel.tail_expo))
        for expo in ordered:
            if all(a >= b for a, b in zip(expo, tail)):
                f2 = _apply_rewrite(f, expo, rel, T)
                found = _search_at_power(f2, vertex, main_var, top_exp, weights,
                                         relations, power, depth - 1, T)
                if found is not None:
                    return found
    return None


def binomialize_modulo(f: Poly, vertex, main_var: str, top_exp: int,
                       relations, weights: dict, depth: int = 3, T=None):
    """Binomial-power form of the initial form at a vertex, modulo relations.

    Returns (outcome, poly): outcome is a BinomialPower (with poly rewritten
    along the successful chain of relation moves, heavier residue kept),
    NOT_BINOMIAL, or FieldExtensionRequired.  The search fixes the candidate
    power first, largest divisor first, so a rewrite that realizes a larger
    power beats a direct match at a smaller one.
    """
    try:
        for power in _divisors_desc(top_exp):
            found = _search_at_power(f, tuple(vertex), main_var, top_exp, weights,
                                     relations, power, depth, T)
            if found is not None:
                f2, bp = found
                return bp, f2
    except _ExtensionSignal as sig:
        return sig.info, f
    return NOT_BINOMIAL, f


# ---------------------------------------------------------------------------
# preparation (solvable-vertex elimination)
# ---------------------------------------------------------------------------

def prepare_polyhedron(f: Poly, relations, weights: dict, main_var: str, top_exp: int,
                       config: KappaConfig, pending_relation: Relation = None) -> PrepareResult:
    """Eliminate solvable vertices by translating the top variable.

    A vertex is solvable when its (binomialized) initial form is a power of
    a binomial linear in the top variable; the translation by the solving
    term strictly shrinks the polyhedron, which is asserted.  Translations
    are recorded on the pending relation when one is given.
    """
    T = config.truncation
    eliminations = 0
    diagnostics = []
    processed = set()
    for _ in range(_PREPARE_FUEL):
        P = weighted_projected_polyhedron(f, main_var, top_exp, weights)
        candidates = [v for v in P.vertices if v not in processed]
        if not candidates:
            return PrepareResult(f, P, PrepStatus.PREPARED, eliminations, diagnostics)
        acted = False
        for v in candidates:
            outcome, f2 = binomialize_modulo(f, v, main_var, top_exp, relations,
                                             weights, config.depth, T)
            if isinstance(outcome, FieldExtensionRequired):
                diagnostics.append(
                    f"solving the vertex {_vertex_str(v)} needs a degree-{outcome.degree} "
                    "field extension")
                return PrepareResult(f, P, PrepStatus.INCONCLUSIVE, eliminations, diagnostics)
            if outcome is NOT_BINOMIAL:
                processed.add(v)
                continue
            if outcome.inner_exp > 1:
                processed.add(v)
                if f2 is not f:
                    f = f2
                    acted = True
                    break
                continue
            # solvable: translate by the solving term
            if eliminations >= config.budget:
                diagnostics.append(f"elimination budget ({config.budget}) exhausted")
                return PrepareResult(f, P, PrepStatus.INCONCLUSIVE, eliminations, diagnostics)
            before = weighted_projected_polyhedron(f2, main_var, top_exp, weights)
            ctx = f2.ctx
            solving = Poly.monomial(
                ctx, f2.ring,
                tuple(outcome.tail_expo) + (0,) * (ctx.nvars - len(outcome.tail_expo)),
                outcome.coeff)
            shift = Poly.variable(ctx, f2.ring, main_var).add(solving)
            f = substitute(f2, main_var, shift, T)
            # the translation redefines the pending variable, so its relation
            # must record the solving term before any head power is rewritten
            # through it
            if pending_relation is not None:
                pending_relation.corrections.append((outcome.coeff, tuple(outcome.tail_expo)))
            f = normal_form(f, relations, T)
            after = weighted_projected_polyhedron(f, main_var, top_exp, weights)
            if not polyhedron_leq(after, before) or polyhedron_leq(before, after):
                raise EngineError("vertex elimination failed to strictly shrink the polyhedron")
            eliminations += 1
            acted = True
            break
        if not acted:
            P = weighted_projected_polyhedron(f, main_var, top_exp, weights)
            return PrepareResult(f, P, PrepStatus.PREPARED, eliminations, diagnostics)
    raise EngineError("preparation did not stabilize within its fuel bound")


# ---------------------------------------------------------------------------
# the full construction
# ---------------------------------------------------------------------------

def _unit_weights(d: int) -> dict:
    out = {}
    for i in range(d):
        out[f"x{i + 1}"] = tuple(Fraction(1) if j == i else Fraction(0) for j in range(d))
    return out


def compute_kappa(wf: WeierstrassPoly, config: KappaConfig = None) -> KappaResult:
    """Run the staged construction and assemble the invariant.

    The input is assumed irreducible; a non-binomial initial form at a
    single-vertex stage is reported as inconclusive with a diagnostic rather
    than guessed at.
    """
    config = config or KappaConfig()
    T = config.truncation
    f = wf.poly.truncate(T)
    ring = f.ring
    diagnostics = []
    relations = []
    weights = {}
    vertices = []
    mults = [wf.n]
    inner = []
    main = "z"
    top_exp = wf.n
    pending = None
    budget_used = 0
    presentation = None
    terminal = None

    while True:
        prep = prepare_polyhedron(f, relations, weights, main, top_exp, config, pending)
        f = prep.poly
        budget_used += prep.eliminations
        diagnostics.extend(prep.diagnostics)
        if prep.status is PrepStatus.INCONCLUSIVE:
            terminal = Terminal.INCONCLUSIVE
            break
        P = prep.polyhedron
        if P.is_empty:
            if f.trunc is not None:
                diagnostics.append(
                    f"no terms below the truncation certificate (T = {f.trunc}); "
                    "the empty polyhedron cannot be certified")
                terminal = Terminal.INCONCLUSIVE
                break
            terminal = Terminal.INFINITY
            if main != "z":
                # assign the head level so downstream weight vectors stay defined
                head_level = tuple(relations[-1].head_exp * Fraction(c)
                                   for c in weights[relations[-1].head_var])
                weights[main] = head_level
            presentation = OverweightPresentation(
                tuple(relations), f, None, {**_unit_weights(f.ctx.d), **weights},
                f.ctx, ring)
            break
        if len(P.vertices) > 1:
            diagnostics.append(
                f"prepared polyhedron has {len(P.vertices)} vertices "
                "(translation-minimal preparation)")
            terminal = Terminal.MINUS_ONE
            break
        v = P.vertices[0]
        outcome, f = binomialize_modulo(f, v, main, top_exp, relations, weights,
                                        config.depth, T)
        if isinstance(outcome, FieldExtensionRequired):
            diagnostics.append(
                f"decomposition at {_vertex_str(v)} needs a degree-{outcome.degree} "
                "field extension")
            terminal = Terminal.INCONCLUSIVE
            break
        if outcome is NOT_BINOMIAL:
            diagnostics.append("initial form not a binomial power; input may be reducible")
            terminal = Terminal.INCONCLUSIVE
            break
        bp = outcome
        if bp.inner_exp * bp.power != top_exp:
            raise EngineError("binomial degrees do not multiply to the stage multiplicity")
        if bp.inner_exp == 1:
            raise EngineError("solvable vertex survived preparation")
        vertices.append(v)
        inner.append(bp.inner_exp)
        mults.append(bp.power)
        if mults[-1] >= mults[-2]:
            raise EngineError("stage multiplicities failed to descend strictly")
        weights[main] = v
        if bp.power == 1:
            terminal = Terminal.INFINITY
            presentation = OverweightPresentation(
                tuple(relations), f, bp, {**_unit_weights(f.ctx.d), **weights},
                f.ctx, ring)
            break
        # descend: introduce the next chain variable for the binomial head
        newvar = f"u{len(relations) + 1}"
        ctx = f.ctx.extend(newvar)
        f = f.in_context(ctx)
        rel = Relation(var=newvar, head_var=main, head_exp=bp.inner_exp,
                       tail_coeff=bp.coeff,
                       tail_expo=tuple(bp.tail_expo) + (0,) * (ctx.nvars - 1 - len(bp.tail_expo)),
                       ctx=ctx, ring=ring)
        repl = Poly.variable(ctx, ring, newvar).add(
            Poly.monomial(ctx, ring,
                          tuple(bp.tail_expo) + (0,) * (ctx.nvars - len(bp.tail_expo)),
                          bp.coeff))
        relations.append(rel)
        f = power_substitute(f, main, bp.inner_exp, repl, T)
        f = normal_form(f, relations, T)
        pending = rel
        main = newvar
        top_exp = bp.power

    invariant = KappaInvariant(tuple(vertices), terminal, T, budget_used,
                               tuple(mults), tuple(inner))
    if presentation is not None:
        ok, violations = verify_overweight(presentation)
        if not ok:
            raise EngineError(f"emitted presentation failed its overweight self-check: {violations}")
    return KappaResult(invariant, presentation, diagnostics)


# ---------------------------------------------------------------------------
# overweight verification
# ---------------------------------------------------------------------------

def _vec_scale(k: int, vec) -> tuple:
    return tuple(Fraction(k) * Fraction(c) for c in vec)

def _strictly_larger(a, b) -> bool:
    """Strictly larger in the componentwise product order: >= everywhere, somewhere >."""
    return all(x >= y for x, y in zip(a, b)) and a != b


def verify_overweight(pres: OverweightPresentation):
    """Check the head-weight ties and that every tail monomial is strictly heavier.

    Returns (ok, violations); violations name the offending monomials.
    """
    violations = []
    ctx = pres.ctx

    def check_block(label, head_var, head_exp, tail_coeff_expo, h_monomials):
        v = pres.weights.get(head_var)
        if v is None:
            violations.append(f"{label}: no weight for head variable {head_var}")
            return
        level = _vec_scale(head_exp, v)
        if tail_coeff_expo is not None:
            w = pres.weight_of(tail_coeff_expo)
            if w != level:
                violations.append(
                    f"{label}: tail {format_monomial(tail_coeff_expo, ctx)} has weight {w}, "
                    f"head level is {level}")
        for mono in h_monomials:
            w = pres.weight_of(mono)
            if not _strictly_larger(w, level):
                violations.append(
                    f"{label}: {format_monomial(mono, ctx)} has weight {w}, "
                    f"not above the head level {level}")

    for rel in pres.relations:
        pad = ctx.nvars - len(rel.tail_expo)
        h_monos = [tuple(m) + (0,) * (ctx.nvars - len(m)) for _, m in rel.corrections]
        check_block(f"relation {rel.var}", rel.head_var, rel.head_exp,
                    tuple(rel.tail_expo) + (0,) * pad, h_monos)

    if pres.final_head is not None:
        bp = pres.final_head
        midx = ctx.var_index(bp.main_var)
        head = tuple(bp.inner_exp if i == midx else 0 for i in range(ctx.nvars))
        tail = tuple(bp.tail_expo) + (0,) * (ctx.nvars - len(bp.tail_expo))
        h_monos = [e for e in pres.final.terms if e not in (head, tail)]
        check_block("final equation", bp.main_var, bp.inner_exp, tail, h_monos)
    return (not violations), violations
