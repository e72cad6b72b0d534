"""Exact closed forms for linearly recurrent sequences.

A sequence produced by a moment system is annihilated by some monic
polynomial; splitting off its rational roots yields an exponential
polynomial `sum_i p_i(n) * base_i^n`, with the multiplicity of the root 0
becoming an explicit transient prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .errors import IrrationalEigenvalue, NoRecurrenceFound, ParseError
from .moments import MomentSystem


class UniPoly:
    """Dense univariate polynomial with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(
            [
                (self.coeffs[i] if i < len(self.coeffs) else 0)
                + (other.coeffs[i] if i < len(other.coeffs) else 0)
                for i in range(n)
            ]
        )

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if self.is_zero() or other.is_zero():
                return UniPoly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return UniPoly(out)
        return UniPoly([c * Fraction(other) for c in self.coeffs])

    __rmul__ = __mul__

    def deflate_root(self, r: Fraction) -> "UniPoly":
        """Synthetic division by (x - r); assumes r is a root."""
        out = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * r + c
            out.append(acc)
        assert out[-1] == 0, "not a root"
        return UniPoly(list(reversed(out[:-1])))

    def compose_affine(self, a, b) -> "UniPoly":
        """p(a*x + b), expanded."""
        arg = UniPoly([Fraction(b), Fraction(a)])
        acc = UniPoly()
        power = UniPoly([1])
        for c in self.coeffs:
            acc = acc + power * c
            power = power * arg
        return acc

    def format(self, var: str = "n") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"UniPoly({self.format()})"


def minimal_recurrence(terms: list[Fraction], max_order: int) -> UniPoly:
    """Monic annihilator of least degree fitting every supplied term.

    Searches degrees 0..max_order; each candidate is determined (and at the
    same time verified) by the full linear system over all windows of the
    term list.  Raises NoRecurrenceFound when nothing fits.
    """
    if len(terms) < 2 * max_order + 2:
        raise ValueError("need at least 2*max_order + 2 terms")
    terms = [Fraction(t) for t in terms]
    for d in range(max_order + 1):
        if d == 0:
            if all(t == 0 for t in terms):
                return UniPoly([1])
            continue
        rows = []
        rhs = []
        for n in range(len(terms) - d):
            rows.append(terms[n : n + d])
            rhs.append(terms[n + d])
        sol = linalg.solve(rows, rhs)
        if sol is not None:
            return UniPoly([-c for c in sol] + [Fraction(1)])
    raise NoRecurrenceFound(
        f"no linear recurrence of order <= {max_order} fits the terms"
    )


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def rational_roots(p: UniPoly) -> tuple[list[tuple[Fraction, int]], UniPoly]:
    """All rational roots with multiplicities, plus the rootless cofactor."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    roots: list[tuple[Fraction, int]] = []
    # root 0: trailing zero coefficients
    mult0 = 0
    while p.degree >= 1 and p.coeffs[0] == 0:
        p = UniPoly(p.coeffs[1:])
        mult0 += 1
    if mult0:
        roots.append((Fraction(0), mult0))
    if p.degree >= 1:
        # clear denominators, then apply the rational root theorem
        lcm = 1
        for c in p.coeffs:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
        ip = [int(c * lcm) for c in p.coeffs]
        candidates = set()
        for num in _divisors(ip[0]):
            for den in _divisors(ip[-1]):
                candidates.add(Fraction(num, den))
                candidates.add(Fraction(-num, den))
        for r in sorted(candidates):
            if p.degree < 1:
                break
            mult = 0
            while p.degree >= 1 and p(r) == 0:
                p = p.deflate_root(r)
                mult += 1
            if mult:
                roots.append((r, mult))
    roots.sort(key=lambda rm: rm[0])
    return roots, p


@dataclass(frozen=True)
class ExpPoly:
    """Transient prefix plus a tail `sum coeff_i(n) * base_i^n`.

    The transient lists explicit values for n = 0..len(transient)-1; the
    tail is valid from n = len(transient) on.  Bases are pairwise distinct
    nonzero rationals and coefficient polynomials are nonzero.
    """

    transient: tuple[Fraction, ...] = ()
    tail: tuple[tuple[Fraction, UniPoly], ...] = ()

    def __post_init__(self):
        bases = [b for b, _ in self.tail]
        if len(set(bases)) != len(bases):
            raise ValueError("bases must be pairwise distinct")
        if any(b == 0 for b in bases):
            raise ValueError("bases must be nonzero")
        if any(c.is_zero() for _, c in self.tail):
            raise ValueError("coefficient polynomials must be nonzero")

    def eval(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("defined for n >= 0")
        if n < len(self.transient):
            return self.transient[n]
        total = Fraction(0)
        for base, coeff in self.tail:
            total += coeff(n) * base**n
        return total

    def is_identically_zero(self) -> bool:
        return not self.tail and all(v == 0 for v in self.transient)

    def format(self) -> str:
        tail = " + ".join(f"({c.format()})*{b}^n" for b, c in self.tail) or "0"
        if self.transient:
            vals = ", ".join(str(v) for v in self.transient)
            return f"transient=[{vals}]; {tail}"
        return tail

    def to_json(self) -> dict:
        return {
            "transient": [str(v) for v in self.transient],
            "tail": [
                {"base": str(b), "coeffs": [str(c) for c in coeff.coeffs]}
                for b, coeff in self.tail
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExpPoly":
        try:
            transient = tuple(Fraction(v) for v in data.get("transient", []))
            tail = tuple(
                (Fraction(t["base"]), UniPoly([Fraction(c) for c in t["coeffs"]]))
                for t in data.get("tail", [])
            )
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad closed-form record: {exc}") from None
        return cls(transient, tail)

    def __str__(self) -> str:
        return self.format()


def expoly_eval(f: ExpPoly, n: int) -> Fraction:
    return f.eval(n)


def solve_closed_form(system: MomentSystem, symbol_index: int) -> ExpPoly:
    """Exact exponential-polynomial closed form of one moment sequence.

    The sequence's minimal annihilator is computed from the matrix-power
    values; a nonconstant cofactor after rational root extraction means an
    irrational eigenvalue actually occurs in this sequence, which the
    rational pipeline refuses with a typed error.  The answer is verified
    against 2*order + 4 sequence terms before being returned.
    """
    order = system.size
    count = 2 * order + 4
    terms = system.sequence(symbol_index, count)
    ann = minimal_recurrence(terms, order)
    roots, cofactor = rational_roots(ann)
    if cofactor.degree >= 1:
        raise IrrationalEigenvalue(
            "minimal annihilator has a nonconstant rootless cofactor "
            f"({cofactor.format('L')}); closed forms over the rationals "
            "cannot represent this sequence"
        )
    mult0 = next((m for r, m in roots if r == 0), 0)
    nonzero = [(r, m) for r, m in roots if r != 0]
    transient = tuple(terms[:mult0])

    dim = sum(m for _, m in nonzero)
    tail: list[tuple[Fraction, UniPoly]] = []
    if dim:
        # ansatz sum_{i,j} c_{i,j} n^j base_i^n matched on dim terms
        cols = [(r, j) for r, m in nonzero for j in range(m)]
        rows = []
        rhs = []
        for n in range(mult0, mult0 + dim):
            rows.append([Fraction(n) ** j * r**n for r, j in cols])
            rhs.append(terms[n])
        sol = linalg.solve(rows, rhs)
        if sol is None:
            raise NoRecurrenceFound("coefficient ansatz is inconsistent")
        by_base: dict[Fraction, list[Fraction]] = {}
        for (r, j), c in zip(cols, sol):
            by_base.setdefault(r, [Fraction(0)] * next(
                m for rr, m in nonzero if rr == r
            ))[j] = c
        for r in sorted(by_base):
            coeff = UniPoly(by_base[r])
            if not coeff.is_zero():
                tail.append((r, coeff))

    result = ExpPoly(transient, tuple(tail))
    for n in range(count):
        if result.eval(n) != terms[n]:
            raise NoRecurrenceFound(
                f"closed form disagrees with the sequence at n={n}"
            )
    return result
