"""Exact sparse multivariate polynomial arithmetic over the rationals.

Values are immutable after construction and all operations are pure, so
polynomials can be shared freely.  Coefficients are `fractions.Fraction`
(always in lowest terms, positive denominator); no floating point appears
anywhere.  Monomials are plain exponent tuples, one entry per ring variable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ArityMismatch, ParseError, UnknownVariable

Rational = Fraction

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_MOMENT_RE = re.compile(r"E\[[^\[\]]+\]")


def parse_rational(text: str) -> Fraction:
    """Parse 'p' or 'p/q' into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


def format_rational(q: Fraction) -> str:
    return str(q)


class VarRing:
    """An ordered tuple of distinct variable names.

    Names are plain identifiers or rendered moment symbols `E[...]`.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("ring needs at least one variable")
        seen = set()
        for nm in names:
            if not (_NAME_RE.fullmatch(nm) or _MOMENT_RE.fullmatch(nm)):
                raise ValueError(f"bad variable name {nm!r}")
            if nm in seen:
                raise ValueError(f"duplicate variable {nm!r}")
            seen.add(nm)
        self.names = names
        self._index = {nm: i for i, nm in enumerate(names)}

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, VarRing) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarRing({', '.join(self.names)})"


# -- monomial helpers (exponent tuples) -------------------------------------

def mono_one(arity: int) -> tuple[int, ...]:
    return (0,) * arity


def mono_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """True when monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(e: tuple[int, ...]) -> int:
    return sum(e)


def mono_str(e: tuple[int, ...], ring: VarRing) -> str:
    """Render an exponent tuple as e.g. 'x^2*y'; the unit monomial is '1'."""
    parts = []
    for nm, k in zip(ring.names, e):
        if k == 1:
            parts.append(nm)
        elif k > 1:
            parts.append(f"{nm}^{k}")
    return "*".join(parts) if parts else "1"


class MonomialOrder:
    """A total, multiplicative, well-founded order on monomials.

    `kind` is 'lex' or 'degrevlex'; `priority` lists the ring variables from
    highest to lowest.  Orders expose a sort key so that comparisons reduce
    to tuple comparison; keys are memoized since the same monomials recur
    constantly during basis computations.
    """

    __slots__ = ("kind", "ring", "priority", "_perm", "_rev_perm", "_cache")

    def __init__(self, kind: str, ring: VarRing, priority: Iterable[str] | None = None):
        if kind not in ("lex", "degrevlex"):
            raise ValueError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.ring = ring
        prio = tuple(priority) if priority is not None else ring.names
        if sorted(prio) != sorted(ring.names):
            raise ValueError("priority must be a permutation of the ring variables")
        self.priority = prio
        self._perm = tuple(ring.index(nm) for nm in prio)
        self._rev_perm = tuple(reversed(self._perm))
        self._cache: dict[tuple[int, ...], tuple] = {}

    def key(self, e: tuple[int, ...]):
        k = self._cache.get(e)
        if k is None:
            if self.kind == "lex":
                k = tuple(e[i] for i in self._perm)
            else:
                # graded, ties broken by the last variable (in priority
                # order) with the *smaller* exponent winning
                k = (sum(e), tuple(-e[i] for i in self._rev_perm))
            self._cache[e] = k
        return k

    def greater(self, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        return self.key(a) > self.key(b)

    def restricted(self, subring: VarRing) -> "MonomialOrder":
        """The same order on a ring with a subset of the variables."""
        prio = tuple(nm for nm in self.priority if nm in subring)
        return MonomialOrder(self.kind, subring, prio)

    def to_json(self) -> dict:
        return {"kind": self.kind, "priority": list(self.priority)}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.ring == other.ring
            and self.priority == other.priority
        )

    def __repr__(self) -> str:
        return f"MonomialOrder({self.kind}, {'>'.join(self.priority)})"


class EliminationOrder:
    """Block order: monomials compared first on a dropped variable block.

    Any monomial containing a dropped variable is larger than every monomial
    free of them, which is exactly what variable elimination needs.  Both
    blocks are compared by graded reverse lexicographic keys.
    """

    __slots__ = ("ring", "drop", "_drop_idx", "_keep_idx", "_cache")

    def __init__(self, ring: VarRing, drop: Iterable[str]):
        self.ring = ring
        self.drop = frozenset(drop)
        for nm in self.drop:
            ring.index(nm)
        self._drop_idx = tuple(i for i, nm in enumerate(ring.names) if nm in self.drop)
        self._keep_idx = tuple(i for i, nm in enumerate(ring.names) if nm not in self.drop)
        self._cache: dict[tuple[int, ...], tuple] = {}

    @staticmethod
    def _grevlex(e: tuple[int, ...], idx: tuple[int, ...]):
        return (sum(e[i] for i in idx), tuple(-e[i] for i in reversed(idx)))

    def key(self, e: tuple[int, ...]):
        k = self._cache.get(e)
        if k is None:
            k = (self._grevlex(e, self._drop_idx), self._grevlex(e, self._keep_idx))
            self._cache[e] = k
        return k

    def greater(self, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        return self.key(a) > self.key(b)


class Polynomial:
    """A sparse multivariate polynomial with exact rational coefficients.

    `terms` maps exponent tuples to nonzero Fractions; the zero polynomial
    has an empty term map.  Instances are treated as immutable.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: VarRing, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.ring = ring
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != ring.arity:
                    raise ArityMismatch(f"monomial arity {len(e)} != ring arity {ring.arity}")
                if c:
                    clean[e] = Fraction(c)
        self.terms = clean

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, ring: VarRing) -> "Polynomial":
        return cls(ring)

    @classmethod
    def const(cls, ring: VarRing, c) -> "Polynomial":
        c = Fraction(c)
        return cls(ring, {mono_one(ring.arity): c} if c else {})

    @classmethod
    def var(cls, ring: VarRing, name: str) -> "Polynomial":
        e = [0] * ring.arity
        e[ring.index(name)] = 1
        return cls(ring, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, ring: VarRing, e: tuple[int, ...], c=1) -> "Polynomial":
        return cls(ring, {tuple(e): Fraction(c)})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(mono_degree(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(mono_one(self.ring.arity), Fraction(0))

    def total_degree(self) -> int:
        return max((mono_degree(e) for e in self.terms), default=0)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def leading_term(self, order) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    # -- arithmetic ------------------------------------------------------

    def _require_same_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ArityMismatch("polynomials live in different rings")

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.ring, other)
        self._require_same_ring(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = Polynomial.__new__(Polynomial)
        out.ring, out.terms = self.ring, terms
        return out

    def __radd__(self, other) -> "Polynomial":
        return self.__add__(other)

    def __neg__(self) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.ring = self.ring
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.ring, other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial.const(self.ring, other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            out = Polynomial.__new__(Polynomial)
            out.ring = self.ring
            out.terms = {e: k * c for e, k in self.terms.items()} if c else {}
            return out
        self._require_same_ring(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = Polynomial.__new__(Polynomial)
        out.ring, out.terms = self.ring, terms
        return out

    def __rmul__(self, other) -> "Polynomial":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def monic(self, order) -> "Polynomial":
        if self.is_zero():
            return self
        _, lc = self.leading_term(order)
        return self * (Fraction(1) / lc)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.ring, other)
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    # -- evaluation & substitution ----------------------------------------

    def eval(self, point: Iterable[Fraction]) -> Fraction:
        point = tuple(point)
        if len(point) != self.ring.arity:
            raise ArityMismatch(
                f"point arity {len(point)} != ring arity {self.ring.arity}"
            )
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def substitute(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace variables by polynomials, fully expanded.

        All mapped polynomials must share one ring; unmapped variables must
        exist there too (so a super-ring of self.ring is allowed).
        """
        if not mapping:
            return self
        target = None
        for nm, q in mapping.items():
            self.ring.index(nm)
            if target is None:
                target = q.ring
            elif q.ring != target:
                raise ArityMismatch("substitution images live in different rings")
        assert target is not None
        images = []
        for nm in self.ring.names:
            if nm in mapping:
                images.append(mapping[nm])
            else:
                images.append(Polynomial.var(target, nm))

        result = Polynomial.zero(target)
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            got = cache.get((i, k))
            if got is None:
                got = images[i] ** k
                cache[(i, k)] = got
            return got

        for e, c in self.terms.items():
            term = Polynomial.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def lift(self, superring: VarRing) -> "Polynomial":
        """Re-express the polynomial in a ring containing all its variables."""
        if superring == self.ring:
            return self
        idx = [superring.index(nm) for nm in self.ring.names]
        terms = {}
        for e, c in self.terms.items():
            new = [0] * superring.arity
            for i, k in enumerate(e):
                new[idx[i]] = k
            terms[tuple(new)] = c
        return Polynomial(superring, terms)

    def project(self, subring: VarRing) -> "Polynomial":
        """Re-express in a smaller ring; fails if a dropped variable occurs."""
        idx = []
        for nm in self.ring.names:
            idx.append(subring.index(nm) if nm in subring else None)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * subring.arity
            for i, k in enumerate(e):
                if not k:
                    continue
                if idx[i] is None:
                    raise UnknownVariable(
                        f"variable {self.ring.names[i]!r} not in target ring"
                    )
                new[idx[i]] = k
            terms[tuple(new)] = c
        return Polynomial(subring, terms)

    # -- formatting ------------------------------------------------------

    def format(self, order: MonomialOrder | None = None) -> str:
        """Canonical text: terms descending in the given (default ring) order."""
        if not self.terms:
            return "0"
        if order is None:
            order = MonomialOrder("degrevlex", self.ring)
        pieces = []
        for e in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[e]
            mono = mono_str(e, self.ring)
            if mono == "1":
                body = format_rational(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{format_rational(abs(c))}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.format()})"


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<num>\d+)
      | (?P<name>[A-Za-z][A-Za-z0-9_]*(?:\[[^\[\]]+\])?)
      | (?P<op>[-+*^/()])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos == len(text):
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := primary ('^' nat)?
    primary:= nat ('/' nat)? | name | '(' expr ')' | '-' factor
    """

    def __init__(self, text: str, ring: VarRing):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos)
        return p

    def expr(self) -> Polynomial:
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        p = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        p = self.primary()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "num":
                raise ParseError("exponent must be a positive integer", pos)
            p = p ** int(val)
        return p

    def primary(self) -> Polynomial:
        kind, val, pos = self.next()
        if kind == "num":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.next()
                k3, v3, p3 = self.next()
                if k3 != "num":
                    raise ParseError("denominator must be an integer", p3)
                if int(v3) == 0:
                    raise ParseError("zero denominator", p3)
                return Polynomial.const(self.ring, Fraction(num, int(v3)))
            return Polynomial.const(self.ring, num)
        if kind == "name":
            if val not in self.ring:
                raise UnknownVariable(f"unknown variable {val!r}")
            return Polynomial.var(self.ring, val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        if kind == "op" and val == "-":
            return -self.factor()
        raise ParseError(f"unexpected token {val!r}", pos)


def poly_parse(text: str, ring: VarRing) -> Polynomial:
    """Parse polynomial text over the given ring (see the grammar above)."""
    return _Parser(text, ring).parse()


def multivariate_divide(
    p: Polynomial, divisors: list[Polynomial], order
) -> tuple[list[Polynomial], Polynomial]:
    """Divide p by an ordered list of divisors.

    Returns (quotients, remainder) with p == sum(q_i * d_i) + r and no
    monomial of r divisible by any divisor's leading monomial.
    """
    for d in divisors:
        if d.is_zero():
            raise ValueError("zero divisor")
    ring = p.ring
    key = order.key
    lead = [d.leading_term(order) for d in divisors]
    tails = [
        [(e, c) for e, c in d.terms.items() if e != le]
        for d, (le, _) in zip(divisors, lead)
    ]
    qterms: list[dict[tuple[int, ...], Fraction]] = [{} for _ in divisors]
    remainder: dict[tuple[int, ...], Fraction] = {}
    work = dict(p.terms)
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        for i, (le, lc) in enumerate(lead):
            if mono_divides(le, e):
                shift = mono_div(e, le)
                coef = c / lc
                qterms[i][shift] = qterms[i].get(shift, 0) + coef
                for te, tc in tails[i]:
                    pe = mono_mul(te, shift)
                    s = work.get(pe, 0) - coef * tc
                    if s:
                        work[pe] = s
                    else:
                        work.pop(pe, None)
                break
        else:
            remainder[e] = c
    return [Polynomial(ring, q) for q in qterms], Polynomial(ring, remainder)
