"""Finitely presented countable ordinal sets.

An ``FpSet`` is a finite union of parts, each a singleton or an arithmetic
ladder ``{base + step*n : n < count}`` whose step is a single CNF term
(``w^e * c``); ``count`` of ``None`` means the ladder is infinite (length
omega).  Parts are kept sorted, disjoint and in a canonical normal form, so
two presentations of the same underlying set compare equal.

Membership, restriction, order type, suprema and intersections are all
closed-form; no infinite enumeration happens anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import ValidationError
from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    left_subtract,
    ord_add,
    ord_cmp,
    ord_mul,
    omega_power,
)

_SPLIT_CAP = 100_000


@dataclass(frozen=True)
class Part:
    """One presentation part: {base + step*n : n < count} (count None = omega)."""

    base: Ordinal
    step: Ordinal
    count: Optional[int]

    def validate(self) -> None:
        if not (self.step.is_single_term() or self.step == ONE):
            raise ValidationError(f"ladder step must be a single CNF term, got {self.step}")
        if self.step.is_zero():
            raise ValidationError("ladder step must be positive")
        if self.count is not None and not (1 <= self.count <= _SPLIT_CAP):
            raise ValidationError(f"part count out of range: {self.count}")

    @property
    def infinite(self) -> bool:
        return self.count is None

    def elem(self, n: int) -> Ordinal:
        return ord_add(self.base, ord_mul(self.step, n))

    def last(self) -> Ordinal:
        assert self.count is not None
        return self.elem(self.count - 1)

    def sup(self) -> Ordinal:
        """Supremum of an infinite part: base + step*omega."""
        assert self.count is None
        return ord_add(self.base, ord_mul(self.step, OMEGA))

    def strict_upper(self) -> Ordinal:
        return self.sup() if self.count is None else ord_add(self.last(), ONE)

    def index_geq(self, xi: Ordinal) -> Optional[int]:
        """Least n with elem(n) >= xi, or None when every element is below xi."""
        if ord_cmp(xi, self.base) <= 0:
            return 0
        r = left_subtract(self.base, xi)
        e, c = self.step.terms[0]
        f, k = r.terms[0]
        cmp = f._cmp(e)
        if cmp > 0:
            return None
        if cmp < 0:
            n = 1
        else:
            n = -(-k // c)  # ceil
            if c * n == k and len(r.terms) > 1:
                n += 1
        if self.count is not None and n >= self.count:
            return None
        return n

    def count_below(self, xi: Ordinal) -> Ordinal:
        """Order type of the part restricted below xi."""
        i = self.index_geq(xi)
        if i is not None:
            return Ordinal(i)
        return OMEGA if self.count is None else Ordinal(self.count)

    def member(self, xi: Ordinal) -> bool:
        i = self.index_geq(xi)
        return i is not None and self.elem(i) == xi

    def min_geq(self, xi: Ordinal) -> Optional[Ordinal]:
        i = self.index_geq(xi)
        return None if i is None else self.elem(i)

    def sup_inter(self, xi: Ordinal) -> Optional[Ordinal]:
        """sup of the part's elements below xi; None when there are none."""
        i = self.index_geq(xi)
        if i == 0:
            return None
        if i is None:
            return self.last() if self.count is not None else self.sup()
        return self.elem(i - 1)

    def max_below(self, xi: Ordinal) -> Optional[Ordinal]:
        """Largest element < xi, or None (absent or not attained)."""
        i = self.index_geq(xi)
        if i == 0:
            return None
        if i is None:
            return self.last() if self.count is not None else None
        return self.elem(i - 1)


PartSpec = Union[Part, Ordinal, Tuple]


def _as_part(spec: PartSpec) -> Part:
    if isinstance(spec, Part):
        return spec
    if isinstance(spec, Ordinal):
        return Part(spec, ONE, 1)
    if isinstance(spec, tuple):
        if len(spec) == 2:
            return Part(spec[0], spec[1], None)
        if len(spec) == 3:
            return Part(spec[0], spec[1], spec[2])
    raise ValidationError(f"bad part spec: {spec!r}")


def _split_lead(base: Ordinal, e: Ordinal) -> Tuple[Ordinal, int]:
    """base = H + w^e*m + (lower terms); return (H, m)."""
    hi = []
    m = 0
    for (exp, c) in base.terms:
        cmp = exp._cmp(e)
        if cmp > 0:
            hi.append((exp, c))
        elif cmp == 0:
            m = c
        else:
            break
    return Ordinal._make(tuple(hi)), m


def _normalize(parts: Sequence[Part]) -> Tuple[Part, ...]:
    atoms: List[Part] = []
    for p in sorted(parts, key=lambda q: q.base):
        if p.count == 1:
            atoms.append(Part(p.base, ONE, 1))
        elif p.count is not None and p.step != ONE:
            atoms.extend(Part(p.elem(i), ONE, 1) for i in range(p.count))
        else:
            atoms.append(p)
    atoms.sort(key=lambda q: q.base)
    merged: List[Part] = []
    for p in atoms:
        if p.count is None:
            # absorb an immediately preceding element v with v + step == base
            while merged:
                q = merged[-1]
                if q.count is None:
                    break
                v = q.last()
                if ord_add(v, p.step) != p.base:
                    break
                p = Part(v, p.step, None)
                if q.count == 1:
                    merged.pop()
                else:
                    merged[-1] = Part(q.base, q.step, q.count - 1)
        elif merged:
            q = merged[-1]
            if (q.count is not None and q.step == ONE and p.step == ONE
                    and ord_add(q.last(), ONE) == p.base):
                merged[-1] = Part(q.base, ONE, q.count + p.count)
                continue
        merged.append(p)
    return tuple(merged)


class FpSet:
    """A finitely presented set of ordinals (canonical, immutable)."""

    __slots__ = ("parts", "_hash")

    def __init__(self, parts: Iterable[PartSpec] = ()):
        raw = [_as_part(p) for p in parts]
        for p in raw:
            p.validate()
        norm = _normalize(raw)
        prev_upper: Optional[Ordinal] = None
        for p in norm:
            if prev_upper is not None and ord_cmp(prev_upper, p.base) > 0:
                raise ValidationError(
                    f"parts overlap or are unordered near {p.base}")
            prev_upper = p.strict_upper()
        object.__setattr__(self, "parts", norm)
        object.__setattr__(self, "_hash", hash(norm))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("FpSet is immutable")

    def __eq__(self, other):
        return isinstance(other, FpSet) and self.parts == other.parts

    def __hash__(self):
        return object.__getattribute__(self, "_hash")

    def __repr__(self):
        bits = []
        for p in self.parts:
            if p.count == 1:
                bits.append(str(p.base))
            elif p.count is None:
                bits.append(f"{p.base}+{p.step}*n")
            else:
                bits.append(f"{p.base}+{p.step}*n(<{p.count})")
        return "FpSet{" + ", ".join(bits) + "}"

    def is_empty(self) -> bool:
        return not self.parts

    def member(self, xi: Ordinal) -> bool:
        return any(p.member(xi) for p in self.parts)

    def min_geq(self, xi: Ordinal) -> Optional[Ordinal]:
        for p in self.parts:
            v = p.min_geq(xi)
            if v is not None:
                return v
        return None

    def min(self) -> Optional[Ordinal]:
        return self.parts[0].base if self.parts else None

    def max(self) -> Optional[Ordinal]:
        if not self.parts:
            return None
        last = self.parts[-1]
        return None if last.count is None else last.last()

    def has_max(self) -> bool:
        return self.max() is not None

    def strict_sup(self) -> Ordinal:
        """sup{a+1 : a in x}; 0 for the empty set."""
        return self.parts[-1].strict_upper() if self.parts else ZERO

    def sup(self) -> Ordinal:
        """Ordinary supremum (= max when attained); 0 for the empty set."""
        m = self.max()
        return m if m is not None else self.strict_sup()

    def ot(self) -> Ordinal:
        out = ZERO
        for p in self.parts:
            out = ord_add(out, OMEGA if p.count is None else Ordinal(p.count))
        return out

    def ot_below(self, xi: Ordinal) -> Ordinal:
        out = ZERO
        for p in self.parts:
            out = ord_add(out, p.count_below(xi))
        return out

    def sup_inter(self, xi: Ordinal) -> Ordinal:
        """sup of the elements below xi, with sup of the empty set = 0."""
        for p in reversed(self.parts):
            v = p.sup_inter(xi)
            if v is not None:
                return v
        return ZERO

    def max_below(self, xi: Ordinal) -> Optional[Ordinal]:
        for p in reversed(self.parts):
            if p.index_geq(xi) == 0:
                continue
            return p.max_below(xi)
        return None

    def restrict(self, beta: Ordinal) -> "FpSet":
        """The set of elements strictly below beta."""
        kept: List[Part] = []
        for p in self.parts:
            if ord_cmp(p.base, beta) >= 0:
                break
            k = p.index_geq(beta)
            if k is None:
                kept.append(p)
            elif k > 0:
                kept.append(Part(p.base, p.step, k))
        return FpSet(kept)

    def elements_below(self, xi: Ordinal) -> Optional[List[Ordinal]]:
        """Explicit listing of the elements below xi; None when infinite."""
        out: List[Ordinal] = []
        for p in self.parts:
            k = p.index_geq(xi)
            if k is None:
                if p.count is None:
                    return None
                k = p.count
            out.extend(p.elem(i) for i in range(k))
        return out

    def first_n(self, n: int) -> List[Ordinal]:
        out: List[Ordinal] = []
        for p in self.parts:
            limit = n - len(out)
            if limit <= 0:
                break
            k = limit if p.count is None else min(p.count, limit)
            out.extend(p.elem(i) for i in range(k))
        return out

    def intersect(self, other: "FpSet") -> "FpSet":
        pieces: List[Part] = []
        for p in self.parts:
            for q in other.parts:
                pieces.extend(_part_intersect(p, q))
        return FpSet(pieces)

    def subset_of(self, other: "FpSet") -> bool:
        return self.intersect(other) == self


def _part_intersect(p: Part, q: Part) -> List[Part]:
    if p.count is not None:
        return [Part(p.elem(i), ONE, 1) for i in range(p.count) if q.member(p.elem(i))]
    if q.count is not None:
        return [Part(q.elem(i), ONE, 1) for i in range(q.count) if p.member(q.elem(i))]
    out: List[Part] = []
    if q.member(p.base):
        out.append(Part(p.base, ONE, 1))
    if p.base != q.base and p.member(q.base):
        out.append(Part(q.base, ONE, 1))
    e, c = p.step.terms[0]
    f, c2 = q.step.terms[0]
    if e != f:
        return out
    hp, mp = _split_lead(p.base, e)
    hq, mq = _split_lead(q.base, e)
    if hp != hq:
        return out
    g = gcd(c, c2)
    if (mp - mq) % g != 0:
        return out
    lcm = c * c2 // g
    lo = max(mp + c, mq + c2)
    v0 = None
    for v in range(lo, lo + lcm):
        if (v - mp) % c == 0 and (v - mq) % c2 == 0:
            v0 = v
            break
    if v0 is None:  # pragma: no cover - CRT always finds one in a full period
        return out
    base = ord_add(hp, omega_power(e, v0))
    tail = Part(base, omega_power(e, lcm), None)
    # drop the explicit base elements if the tail already covers them
    out = [s for s in out if not tail.member(s.base)]
    out.append(tail)
    return out


def as_fpset(value) -> FpSet:
    """Coerce an FpSet, an iterable of ordinals, or a part list to FpSet."""
    if isinstance(value, FpSet):
        return value
    if isinstance(value, (set, frozenset, list, tuple)):
        items = list(value)
        if all(isinstance(v, Ordinal) for v in items):
            return FpSet([Part(v, ONE, 1) for v in items])
    raise ValidationError(f"cannot interpret {value!r} as a set of ordinals")
