"""Thin lists built from walks, branch search, independent families and
finite-intersection-property witnesses.

Ground sets here are finite sets of ordinals.  Each family member x gets
``d_x = {l(xi, rho2(xi, target)) : xi in x} intersect x`` through a finite
injective pairing table; the target is the plain sup of x, or the least
element of a declared target set at or above it.  Levels, thinness and
branches follow the restriction-level reading: the level of y collects
``d_x intersect y`` over family members x extending y.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .cseq import CSeqProvider
from .errors import BudgetError, PairingError, ValidationError, WalkslabError
from .fpsets import FpSet, as_fpset
from .ordinal import ZERO, Ordinal, ord_cmp
from .walks import walk_trace

GroundSet = FrozenSet[Ordinal]


def default_budget() -> int:
    raw = os.environ.get("WALKSLAB_BUDGET", "")
    try:
        return int(raw) if raw else 1_000_000
    except ValueError:
        raise ValidationError(f"WALKSLAB_BUDGET is not an integer: {raw!r}")


class PairingTable:
    """Finite partial injective map (ordinal, nat) -> ordinal with inverse."""

    def __init__(self, entries: Iterable[Tuple[Ordinal, int, Ordinal]]):
        self.forward: Dict[Tuple[Ordinal, int], Ordinal] = {}
        self.inverse: Dict[Ordinal, Tuple[Ordinal, int]] = {}
        for xi, n, value in entries:
            key = (xi, n)
            if key in self.forward:
                raise PairingError(f"duplicate pairing entry for ({xi}, {n})")
            if value in self.inverse:
                raise PairingError(
                    f"pairing not injective: {value} hit by ({xi}, {n})"
                    f" and {self.inverse[value]}")
            self.forward[key] = value
            self.inverse[value] = key

    def apply(self, xi: Ordinal, n: int) -> Ordinal:
        try:
            return self.forward[(xi, n)]
        except KeyError:
            raise PairingError(f"missing pairing entry for ({xi}, {n})") from None


@dataclass
class ListContext:
    """Family of ground sets with designated hulls, walk provider, pairing
    table and target mode ('plain-sup' or 'target-set')."""

    family: Tuple[GroundSet, ...]
    hulls: Mapping[GroundSet, GroundSet]
    provider: CSeqProvider
    pairing: PairingTable
    mode: str = "plain-sup"
    target_set: FrozenSet[Ordinal] = frozenset()

    def __post_init__(self):
        if self.mode not in ("plain-sup", "target-set"):
            raise ValidationError(f"unknown list mode: {self.mode}")
        for x in self.family:
            hull = self.hulls.get(x)
            if hull is not None and not x <= hull:
                raise ValidationError("hull must contain its ground set")
        if self.mode == "target-set":
            if not self.target_set:
                raise ValidationError("target-set mode needs a nonempty target set")
            for x in self.family:
                self._target(x)  # raises when min(S \ sup x) is undefined

    def _target(self, x: GroundSet) -> Ordinal:
        if not x:
            return ZERO
        sup = max(x)
        if self.mode == "plain-sup":
            return sup
        above = [s for s in self.target_set if ord_cmp(s, sup) >= 0]
        if not above:
            raise ValidationError(
                f"target set has no element at or above sup {sup}")
        return min(above)


def d_of(x: GroundSet, ctx: ListContext) -> GroundSet:
    """{l(xi, rho2(xi, target)) : xi in x} intersect x."""
    if not x:
        return frozenset()
    target = ctx._target(x)
    out = set()
    for xi in sorted(x):
        steps = walk_trace(ctx.provider, xi, target).steps
        out.add(ctx.pairing.apply(xi, steps))
    return frozenset(out) & x


def levels(ctx: ListContext, y: GroundSet) -> FrozenSet[GroundSet]:
    """{ d_x intersect y : x in the family, y subseteq x }."""
    return frozenset(d_of(x, ctx) & y for x in ctx.family if y <= x)


@dataclass
class ThinRow:
    hull: GroundSet
    level: FrozenSet[GroundSet]
    passed: bool


@dataclass
class ThinReport:
    bound: int
    rows: List[ThinRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)


def thin_report(ctx: ListContext, bound: int) -> ThinReport:
    """Level size at every designated hull, pass iff strictly below bound."""
    report = ThinReport(bound)
    seen = []
    for x in ctx.family:
        hull = ctx.hulls.get(x, x)
        if hull in seen:
            continue
        seen.append(hull)
        level = levels(ctx, hull)
        report.rows.append(ThinRow(hull, level, len(level) < bound))
    return report


@dataclass
class BranchResult:
    branch: Optional[GroundSet]
    space: int  # exhaustiveness certificate: number of candidates examined


def branch_search(ctx: ListContext, support: GroundSet,
                  budget: Optional[int] = None) -> BranchResult:
    """Exhaustive search for d with d intersect x in the level of x for every
    family member; first witness in the canonical subset order."""
    for x in ctx.family:
        if not x <= support:
            raise ValidationError("support must contain every family member")
    budget = budget if budget is not None else default_budget()
    if 2 ** len(support) > budget:
        raise BudgetError(
            f"branch search space 2^{len(support)} exceeds budget {budget}")
    lev = {x: levels(ctx, x) for x in ctx.family}
    base = sorted(support)
    space = 2 ** len(base)
    for mask in range(space):
        d = frozenset(v for i, v in enumerate(base) if mask >> i & 1)
        if all(d & x in lev[x] for x in ctx.family):
            return BranchResult(d, space)
    return BranchResult(None, space)


class IndexedFamily:
    """Named predicates over candidates: characteristic-bit sets over a
    finite ground range, or sup-closure sets g(X) of declared ladders."""

    def __init__(self, kind: str, *, bits: int = 0,
                 gsets: Mapping[Ordinal, FpSet] = ()):
        if kind not in ("bits", "gset"):
            raise ValidationError(f"unknown indexed family kind: {kind}")
        self.kind = kind
        self.bits = bits
        self.gsets = dict(gsets or {})

    def indices(self) -> List[Ordinal]:
        if self.kind == "bits":
            return [Ordinal(i) for i in range(self.bits)]
        return sorted(self.gsets)

    def contains(self, alpha: Ordinal, cand) -> bool:
        if self.kind == "bits":
            return bool(int(cand) >> int(alpha) & 1)
        x = self.gsets.get(alpha)
        if x is None:
            raise ValidationError(f"no declared set for index {alpha}")
        return g_member(x, cand)


def g_member(x_set: FpSet, cand) -> bool:
    """sup(cand intersect X) = sup(cand), with sup of the empty set 0."""
    c = as_fpset(cand)
    return c.intersect(x_set).sup() == c.sup()


def indep_family(n: int, budget: Optional[int] = None):
    """Bit-slice independent family over {0..2^n-1} plus the verification
    report: every disjoint (a, b) meets count 2^(n-|a|-|b|) exactly."""
    budget = budget if budget is not None else default_budget()
    if n < 0 or 2 ** n > budget:
        raise BudgetError(f"ground set 2^{n} exceeds budget")
    fam = IndexedFamily("bits", bits=n)
    ground = range(2 ** n)
    rows = []
    ok = True
    idx = list(range(n))
    for a_size in range(n + 1):
        for a in itertools.combinations(idx, a_size):
            rest = [i for i in idx if i not in a]
            for b_size in range(len(rest) + 1):
                for b in itertools.combinations(rest, b_size):
                    count = sum(
                        1 for v in ground
                        if all(v >> i & 1 for i in a)
                        and not any(v >> j & 1 for j in b))
                    expected = 2 ** (n - len(a) - len(b))
                    good = count == expected
                    ok = ok and good
                    rows.append((a, b, count, expected, good))
    return fam, rows, ok


def b_member(x: GroundSet, ctx: ListContext, fam: IndexedFamily, cand) -> bool:
    """Whether the candidate realizes some level pattern of x: inside every
    indexed set named by the pattern, outside every other index of x."""
    hull = ctx.hulls.get(x)
    if hull is None:
        raise ValidationError("b_member needs a declared hull")
    for d in levels(ctx, hull):
        inside = all(fam.contains(a, cand) for a in d & x)
        outside = all(not fam.contains(a, cand) for a in x - d)
        if inside and outside:
            return True
    return False


@dataclass(frozen=True)
class CandidatePool:
    """Deterministic candidate enumeration: finite subsets of a grid by
    (size, lexicographic) order, then declared ladder sets."""

    grid: Tuple[Ordinal, ...]
    max_size: int
    ladders: Tuple[FpSet, ...] = ()

    def enumerate(self, budget: int) -> Iterable[Union[FrozenSet[Ordinal], FpSet]]:
        emitted = 0
        base = sorted(set(self.grid))
        for size in range(1, self.max_size + 1):
            for combo in itertools.combinations(base, size):
                emitted += 1
                if emitted > budget:
                    return
                yield frozenset(combo)
        for ladder in self.ladders:
            emitted += 1
            if emitted > budget:
                return
            yield ladder


@dataclass
class FipResult:
    witness: Optional[Union[FrozenSet[Ordinal], FpSet]]
    exhausted: bool
    examined: int


def fip_witness(xs: Sequence[GroundSet], ctx: ListContext, fam: IndexedFamily,
                lower: GroundSet, pool: CandidatePool,
                budget: Optional[int] = None) -> FipResult:
    """Scan the pool for a candidate passing b_member for every requested
    ground set, with min(candidate) at or above sup(lower).  'Exhausted' is
    a bounded-search verdict, explicitly not a disproof."""
    budget = budget if budget is not None else default_budget()
    floor = max(lower) if lower else None
    examined = 0
    for cand in pool.enumerate(budget):
        examined += 1
        lo = cand.min() if isinstance(cand, FpSet) else (min(cand) if cand else None)
        if floor is not None and (lo is None or ord_cmp(lo, floor) < 0):
            continue
        if all(b_member(x, ctx, fam, cand) for x in xs):
            return FipResult(cand, False, examined)
    return FipResult(None, True, examined)
