"""Algebraic relations among closed forms and moment invariant ideals.

The relations ideal of exponential polynomials is computed by adjoining a
counter symbol plus one symbol per base magnitude, dividing out the
binomial ideal of all multiplicative relations among the magnitudes (and a
sign-torsion symbol when bases are negative), then eliminating the
auxiliary symbols.  Transient prefixes are covered by intersecting with
the point ideals of their indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import (
    MonomialOrder,
    Polynomial,
    VarRing,
    mono_one,
    mono_str,
    poly_parse,
)
from .cfinite import ExpPoly, UniPoly, solve_closed_form
from .errors import ArityMismatch
from .groebner import (
    DEFAULT_BUDGET,
    IdealBasis,
    buchberger,
    eliminate,
    ideal_intersect,
)
from .loops import LoopProgram
from .moments import (
    DEFAULT_CLOSURE_BUDGET,
    degree_targets,
    moment_closure,
)


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class BaseLattice:
    """All integer vectors a with prod(base_i ** a_i) == 1."""

    bases: tuple[Fraction, ...]
    vectors: tuple[tuple[int, ...], ...]


def multiplicative_lattice(bases: list[Fraction]) -> BaseLattice:
    """Relation lattice of positive rational bases via prime exponents."""
    bases = [Fraction(b) for b in bases]
    if any(b <= 0 for b in bases):
        raise ValueError("bases must be positive")
    primes: set[int] = set()
    exps = []
    for b in bases:
        fac_n = _factorize(b.numerator)
        fac_d = _factorize(b.denominator)
        vec = {p: e for p, e in fac_n.items()}
        for p, e in fac_d.items():
            vec[p] = vec.get(p, 0) - e
        exps.append(vec)
        primes.update(vec)
    plist = sorted(primes)
    matrix = [[vec.get(p, 0) for vec in exps] for p in plist]
    if not plist:
        # every base is 1; the lattice is all of Z^s
        kernel = [
            tuple(1 if j == i else 0 for j in range(len(bases)))
            for i in range(len(bases))
        ]
        return BaseLattice(tuple(bases), tuple(kernel))
    kernel = linalg.integer_kernel(matrix)
    return BaseLattice(tuple(bases), tuple(tuple(v) for v in kernel))


@dataclass(frozen=True)
class MomentRing:
    """Formal variables E[...] for the moments of a program's monomials."""

    ring: VarRing
    base_ring: VarRing
    symbols: tuple[tuple[int, ...], ...]

    def name_of(self, symbol: tuple[int, ...]) -> str:
        return f"E[{mono_str(symbol, self.base_ring)}]"


def moment_ring(base_ring: VarRing, max_degree: int) -> MomentRing:
    """Moment variables for every monomial of degree 1..max_degree."""
    symbols = tuple(degree_targets(base_ring, max_degree))
    names = [f"E[{mono_str(e, base_ring)}]" for e in symbols]
    return MomentRing(VarRing(names), base_ring, symbols)


def _names_ring(names) -> VarRing:
    return names.ring if isinstance(names, MomentRing) else names


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "_"
    return name


def _point_ideal(ring: VarRing, order: MonomialOrder, values) -> IdealBasis:
    gens = []
    for nm, v in zip(ring.names, values):
        gens.append(Polynomial.var(ring, nm) - Polynomial.const(ring, v))
    return IdealBasis(ring, order, tuple(gens), reduced=True)


def _tail_ideal(
    forms: list[ExpPoly],
    ring: VarRing,
    order: MonomialOrder,
    n_start: int,
    budget: int,
) -> IdealBasis:
    """Relations holding for all n = n_start + m, m >= 0.

    Adjoins a counter symbol, one symbol per distinct base magnitude, and
    (when some base is negative) a sign symbol w with w^2 = 1 standing for
    (-1)^m; dividing out the magnitude lattice plus the sign torsion makes
    the auxiliary variety exactly the closure of the parametrization, so
    eliminating the auxiliaries yields every for-all-m relation.
    """
    # split each base into magnitude (a symbol) and sign (a power of w)
    reindexed: list[dict[tuple[Fraction, bool], UniPoly]] = []
    for f in forms:
        acc: dict[tuple[Fraction, bool], UniPoly] = {}
        for base, coeff in f.tail:
            key = (abs(base), base < 0)
            q = coeff.compose_affine(1, n_start) * base**n_start
            acc[key] = acc.get(key, UniPoly()) + q
        reindexed.append({k: q for k, q in acc.items() if not q.is_zero()})

    mags = sorted(
        {mag for acc in reindexed for (mag, _) in acc if mag != 1},
        reverse=True,
    )
    has_sign = any(neg for acc in reindexed for (_, neg) in acc)
    taken = set(ring.names)
    n_name = _fresh("n", taken)
    taken.add(n_name)
    t_names = []
    for i in range(len(mags)):
        t_names.append(_fresh(f"t{i + 1}", taken))
        taken.add(t_names[-1])
    w_name = _fresh("w", taken) if has_sign else None
    aux = [n_name] + t_names + ([w_name] if w_name else [])
    big = VarRing(aux + list(ring.names))
    big_order = MonomialOrder(order.kind, big, aux + list(order.priority))
    n_var = Polynomial.var(big, n_name)
    t_vars = {mag: Polynomial.var(big, t_names[i]) for i, mag in enumerate(mags)}

    def upoly_in_n(q: UniPoly) -> Polynomial:
        acc = Polynomial.zero(big)
        power = Polynomial.const(big, 1)
        for c in q.coeffs:
            acc = acc + power * c
            power = power * n_var
        return acc

    gens = []
    for nm, acc in zip(ring.names, reindexed):
        rhs = Polynomial.zero(big)
        for (mag, neg), q in acc.items():
            part = upoly_in_n(q)
            if mag != 1:
                part = part * t_vars[mag]
            if neg:
                part = part * Polynomial.var(big, w_name)
            rhs = rhs + part
        gens.append(Polynomial.var(big, nm) - rhs)
    if mags:
        lattice = multiplicative_lattice(mags)
        for vec in lattice.vectors:
            pos = Polynomial.const(big, 1)
            neg = Polynomial.const(big, 1)
            for a, mag in zip(vec, mags):
                if a > 0:
                    pos = pos * t_vars[mag] ** a
                elif a < 0:
                    neg = neg * t_vars[mag] ** (-a)
            gens.append(pos - neg)
    if w_name:
        w = Polynomial.var(big, w_name)
        gens.append(w * w - Polynomial.const(big, 1))
    basis = IdealBasis(big, big_order, tuple(gens))
    out = eliminate(basis, set(aux), budget)
    return IdealBasis(ring, order, tuple(g.lift(ring) for g in out.generators), True)


def relations_ideal(
    forms: list[ExpPoly],
    names,
    order: MonomialOrder | None = None,
    budget: int = DEFAULT_BUDGET,
) -> IdealBasis:
    """Basis of all polynomial relations holding among the forms for n >= 0.

    `names` is a VarRing (or MomentRing) with one variable per form.  The
    tail relations are computed from the first index past every transient;
    transient indices are covered by intersecting with their point ideals.
    """
    ring = _names_ring(names)
    if len(forms) != ring.arity:
        raise ArityMismatch(
            f"{len(forms)} forms for {ring.arity} names"
        )
    if order is None:
        order = MonomialOrder("degrevlex", ring)

    transient_len = max((len(f.transient) for f in forms), default=0)
    result = _tail_ideal(forms, ring, order, transient_len, budget)
    for n0 in range(transient_len):
        pt = _point_ideal(ring, order, [f.eval(n0) for f in forms])
        result = ideal_intersect(result, pt, budget)
    return result


def moment_invariant_ideal(
    loop: LoopProgram,
    degree: int,
    closure_budget: int = DEFAULT_CLOSURE_BUDGET,
    budget: int = DEFAULT_BUDGET,
) -> IdealBasis:
    """Basis of all invariant relations among moments of order <= degree.

    Pipeline: close the moments under expectation lifting, solve every
    target moment to an exponential polynomial, then compute the relations
    ideal of those closed forms.
    """
    mring = moment_ring(loop.variables, degree)
    system = moment_closure(loop, list(mring.symbols), closure_budget)
    forms = [
        solve_closed_form(system, system.index(sym)) for sym in mring.symbols
    ]
    return relations_ideal(forms, mring, budget=budget)


def _symbol_of_name(name: str, base_ring: VarRing) -> tuple[int, ...]:
    if not (name.startswith("E[") and name.endswith("]")):
        raise ValueError(f"not a moment variable: {name!r}")
    inner = name[2:-1]
    p = poly_parse(inner, base_ring)
    if len(p.terms) != 1:
        raise ValueError(f"moment variable must name a monomial: {name!r}")
    (exps, coeff), = p.terms.items()
    if coeff != 1:
        raise ValueError(f"moment variable must name a monic monomial: {name!r}")
    return exps


def psi_map(p: Polynomial, base_ring: VarRing) -> Polynomial:
    """Ring homomorphism sending each E[M] to the monomial M, expanded."""
    symbol_of = [
        _symbol_of_name(nm, base_ring) for nm in p.ring.names
    ]
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in p.terms.items():
        target = mono_one(base_ring.arity)
        for i, k in enumerate(e):
            if k:
                target = tuple(
                    a + k * b for a, b in zip(target, symbol_of[i])
                )
        out[target] = out.get(target, Fraction(0)) + c
    return Polynomial(base_ring, out)


def restrict_to_order_one(
    basis: IdealBasis, budget: int = DEFAULT_BUDGET
) -> IdealBasis:
    """Eliminate every moment variable of monomial degree >= 2."""
    drop = set()
    for nm in basis.ring.names:
        if not (nm.startswith("E[") and nm.endswith("]")):
            raise ValueError(f"not a moment ring variable: {nm!r}")
        inner = nm[2:-1]
        if inner == "1":
            continue
        deg = 0
        for part in inner.split("*"):
            deg += int(part.split("^")[1]) if "^" in part else 1
        if deg >= 2:
            drop.add(nm)
    return eliminate(basis, drop, budget)


def empirical_relations(
    value_table: list[list[Fraction]],
    names,
    degree: int,
    budget: int = DEFAULT_BUDGET,
) -> IdealBasis:
    """Kernel of evaluating all monomials of degree <= `degree` on samples.

    `value_table[j][n]` is the value of name j at index n.  Every returned
    polynomial vanishes on all sampled indices; soundness beyond the
    sampled horizon is empirical, not certified.
    """
    ring = _names_ring(names)
    if len(value_table) != ring.arity:
        raise ArityMismatch(f"{len(value_table)} value rows for {ring.arity} names")
    count = len(value_table[0])
    if any(len(row) != count for row in value_table):
        raise ArityMismatch("ragged value table")
    monomials = [mono_one(ring.arity)] + degree_targets(ring, degree)
    rows = []
    for n in range(count):
        row = []
        for e in monomials:
            v = Fraction(1)
            for j, k in enumerate(e):
                if k:
                    v *= value_table[j][n] ** k
            row.append(v)
        rows.append(row)
    kernel = linalg.nullspace(rows)
    order = MonomialOrder("degrevlex", ring)
    gens = []
    for vec in kernel:
        terms = {e: c for e, c in zip(monomials, vec) if c}
        if terms:
            gens.append(Polynomial(ring, terms))
    return buchberger(gens, order, budget)
