"""Exact Cantor normal form arithmetic for ordinals below epsilon_0.

An ordinal is a finite sum ``w^e1*c1 + ... + w^ek*ck`` with strictly
decreasing ordinal exponents and positive integer coefficients; the empty
sum is 0.  Values are immutable, hashable and totally ordered.  Addition,
multiplication, left subtraction and left division follow the usual
non-commutative ordinal conventions.

The expression grammar (also the wire format for scenario files and CSV):

    expr := term ('+' term)*
    term := 'w' ('^' atom)? ('*' nat)? | nat
    atom := nat | 'w' | '(' expr ')'

``str()`` produces the canonical form: ``w^E*k`` terms joined by `` + ``,
with exponent 1 and coefficient 1 elided.  ``parse_ordinal(str(a)) == a``
for every ordinal ``a``.
"""
from __future__ import annotations

from typing import Iterable, Optional, Tuple, Union

from .errors import OrdinalParseError, WalkslabError

OrdinalLike = Union["Ordinal", int]


class Ordinal:
    """An ordinal below epsilon_0 in Cantor normal form."""

    __slots__ = ("terms", "_hash", "_key")

    terms: Tuple[Tuple["Ordinal", int], ...]

    def __init__(self, value: int = 0):
        if not isinstance(value, int):
            raise TypeError(f"Ordinal() takes an int, got {value!r}")
        if value < 0:
            raise WalkslabError("ordinals are non-negative")
        if value == 0:
            object.__setattr__(self, "terms", ())
        else:
            object.__setattr__(self, "terms", ((ZERO, value),))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_key", None)

    @staticmethod
    def _make(terms: Tuple[Tuple["Ordinal", int], ...]) -> "Ordinal":
        o = Ordinal.__new__(Ordinal)
        object.__setattr__(o, "terms", terms)
        object.__setattr__(o, "_hash", None)
        object.__setattr__(o, "_key", None)
        return o

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Ordinal is immutable")

    def _sort_key(self):
        """Nested-tuple encoding whose native tuple order is the CNF order."""
        k = object.__getattribute__(self, "_key")
        if k is None:
            k = tuple((e._sort_key(), c) for (e, c) in self.terms)
            object.__setattr__(self, "_key", k)
        return k

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def __int__(self) -> int:
        if not self.terms:
            return 0
        if self.is_finite():
            return self.terms[0][1]
        raise WalkslabError(f"{self} is not a finite ordinal")

    # -- comparisons ---------------------------------------------------------

    def _cmp(self, other: "Ordinal") -> int:
        a, b = self._sort_key(), other._sort_key()
        if a == b:
            return 0
        return -1 if a < b else 1

    @staticmethod
    def _coerce(value: OrdinalLike) -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, int):
            return Ordinal(value)
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other):
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._sort_key() == o._sort_key()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) < 0

    def __le__(self, other):
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) <= 0

    def __gt__(self, other):
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) > 0

    def __ge__(self, other):
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) >= 0

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash(self._sort_key())
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: OrdinalLike) -> "Ordinal":
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ord_add(self, o)

    def __radd__(self, other: OrdinalLike) -> "Ordinal":
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ord_add(o, self)

    def __mul__(self, other: OrdinalLike) -> "Ordinal":
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ord_mul(self, o)

    def __rmul__(self, other: OrdinalLike) -> "Ordinal":
        o = Ordinal._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ord_mul(o, self)

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal<{format_ordinal(self)}>"


ZERO = Ordinal(0)
ONE = Ordinal(1)
OMEGA = Ordinal._make(((ONE, 1),))


def omega_power(exponent: OrdinalLike, coefficient: int = 1) -> Ordinal:
    """w^exponent * coefficient as a single-term ordinal."""
    e = Ordinal._coerce(exponent)
    if coefficient < 1:
        raise WalkslabError("coefficient must be positive")
    if e.is_zero():
        return Ordinal(coefficient)
    return Ordinal._make(((e, coefficient),))


def ord_cmp(a: OrdinalLike, b: OrdinalLike) -> int:
    """Three-way comparison: -1 (less), 0 (equal), 1 (greater)."""
    return Ordinal._coerce(a)._cmp(Ordinal._coerce(b))


def ord_add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Ordinal sum in CNF.  Terms of ``a`` below the lead exponent of ``b``
    are absorbed; equal lead exponents merge coefficients."""
    a = Ordinal._coerce(a)
    b = Ordinal._coerce(b)
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    eb = b.terms[0][0]
    keep = 0
    for (ea, _) in a.terms:
        if ea._cmp(eb) > 0:
            keep += 1
        else:
            break
    head = a.terms[:keep]
    if keep < len(a.terms) and a.terms[keep][0] == eb:
        merged = (eb, a.terms[keep][1] + b.terms[0][1])
        return Ordinal._make(head + (merged,) + b.terms[1:])
    return Ordinal._make(head + b.terms)


def left_subtract(p: OrdinalLike, q: OrdinalLike) -> Ordinal:
    """The unique r with p + r = q.  Requires p <= q."""
    p = Ordinal._coerce(p)
    q = Ordinal._coerce(q)
    i = 0
    while i < len(p.terms) and i < len(q.terms) and p.terms[i] == q.terms[i]:
        i += 1
    if i == len(p.terms):
        return Ordinal._make(q.terms[i:])
    if i == len(q.terms):
        raise WalkslabError(f"left_subtract: {p} > {q}")
    (ep, cp), (eq, cq) = p.terms[i], q.terms[i]
    c = ep._cmp(eq)
    if c < 0:
        return Ordinal._make(q.terms[i:])
    if c == 0 and cp < cq:
        return Ordinal._make(((eq, cq - cp),) + q.terms[i + 1:])
    raise WalkslabError(f"left_subtract: {p} > {q}")


def ord_mul(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Ordinal product in CNF, distributing ``b``'s terms over ``a``."""
    a = Ordinal._coerce(a)
    b = Ordinal._coerce(b)
    if a.is_zero() or b.is_zero():
        return ZERO
    ea = a.terms[0][0]
    ca = a.terms[0][1]
    out = ZERO
    for (f, c) in b.terms:
        if f.is_zero():
            # a * finite c: only the leading coefficient is multiplied
            part = Ordinal._make(((ea, ca * c),) + a.terms[1:])
        else:
            part = Ordinal._make(((ord_add(ea, f), c),))
        out = ord_add(out, part)
    return out


def ord_divmod(a: OrdinalLike, t: OrdinalLike) -> Tuple[Ordinal, Ordinal]:
    """Left division: the unique (q, r) with a = t*q + r and r < t."""
    a = Ordinal._coerce(a)
    t = Ordinal._coerce(t)
    if t.is_zero():
        raise WalkslabError("division by zero ordinal")
    if a._cmp(t) < 0:
        return ZERO, a
    e0, c0 = t.terms[0]
    hi = []
    mid_c = 0
    lo_start = len(a.terms)
    for idx, (e, c) in enumerate(a.terms):
        cmp = e._cmp(e0)
        if cmp > 0:
            hi.append((left_subtract(e0, e), c))
        elif cmp == 0:
            mid_c = c
        else:
            lo_start = idx
            break
    else:
        lo_start = len(a.terms)
    lo = Ordinal._make(a.terms[lo_start:])
    q_inf = Ordinal._make(tuple(hi))
    n_prime = ord_add(omega_power(e0, mid_c) if mid_c else ZERO, lo)
    if mid_c == 0:
        q_fin, r = 0, lo
    else:
        d = mid_c // c0
        while d > 0 and ord_mul(t, d)._cmp(n_prime) > 0:
            d -= 1
        r = left_subtract(ord_mul(t, d), n_prime)
        while r._cmp(t) >= 0:
            d += 1
            r = left_subtract(ord_mul(t, d), n_prime)
        q_fin = d
    return ord_add(q_inf, Ordinal(q_fin)), r


def left_divides(t: OrdinalLike, a: OrdinalLike) -> Tuple[bool, Optional[Ordinal]]:
    """Whether t*q = a for some q; the witness q is returned alongside."""
    t = Ordinal._coerce(t)
    a = Ordinal._coerce(a)
    if t.is_zero():
        raise WalkslabError("left_divides: divisor must be positive")
    q, r = ord_divmod(a, t)
    if r.is_zero():
        return True, q
    return False, None


def classify(a: OrdinalLike) -> Tuple[str, Optional[Ordinal]]:
    """Classify as ('zero', None), ('successor', predecessor) or ('limit', None)."""
    a = Ordinal._coerce(a)
    if a.is_zero():
        return "zero", None
    e, c = a.terms[-1]
    if e.is_zero():
        if c == 1:
            return "successor", Ordinal._make(a.terms[:-1])
        return "successor", Ordinal._make(a.terms[:-1] + ((e, c - 1),))
    return "limit", None


# -- canonical printing ------------------------------------------------------


def _format_exponent(e: Ordinal) -> str:
    if e.is_finite():
        return str(int(e))
    if e == OMEGA:
        return "w"
    return "(" + format_ordinal(e) + ")"


def format_ordinal(a: OrdinalLike) -> str:
    """Canonical, bit-exact rendering; see the module grammar."""
    a = Ordinal._coerce(a)
    if a.is_zero():
        return "0"
    parts = []
    for (e, c) in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        base = "w" if e == ONE else "w^" + _format_exponent(e)
        parts.append(base if c == 1 else f"{base}*{c}")
    return " + ".join(parts)


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            raise OrdinalParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def nat(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise OrdinalParseError("expected a natural number", start)
        return int(self.text[start:self.pos])

    def expr(self) -> Ordinal:
        out = self.term()
        while self.peek() == "+":
            self.take("+")
            out = ord_add(out, self.term())
        return out

    def term(self) -> Ordinal:
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            exponent = ONE
            if self.peek() == "^":
                self.take("^")
                exponent = self.atom()
            coeff = 1
            if self.peek() == "*":
                self.take("*")
                at = self.pos
                coeff = self.nat()
                if coeff == 0:
                    raise OrdinalParseError("coefficient 0 rejected", at)
            return omega_power(exponent, coeff)
        if ch.isdigit():
            return Ordinal(self.nat())
        raise OrdinalParseError("expected 'w' or a natural number", self.pos)

    def atom(self) -> Ordinal:
        ch = self.peek()
        if ch == "(":
            self.take("(")
            out = self.expr()
            self.take(")")
            return out
        if ch == "w":
            self.pos += 1
            return OMEGA
        if ch.isdigit():
            return Ordinal(self.nat())
        raise OrdinalParseError("expected exponent atom", self.pos)

    def expect_end(self):
        self._skip_ws()
        if self.pos != len(self.text):
            raise OrdinalParseError("trailing input", self.pos)


def parse_ordinal(text: str) -> Ordinal:
    """Parse an ordinal expression into CNF normal form."""
    p = _Parser(text)
    out = p.expr()
    p.expect_end()
    return out


def ord_max(values: Iterable[OrdinalLike], default: OrdinalLike = ZERO) -> Ordinal:
    """Maximum of a (possibly empty) collection; max of the empty set is 0."""
    best = Ordinal._coerce(default)
    for v in values:
        v = Ordinal._coerce(v)
        if v._cmp(best) > 0:
            best = v
    return best
