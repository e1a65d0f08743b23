"""Two-cardinal walks over finitely presented sets.

Walks descend through a set ``x`` of ordinals: from the strict sup, each
step first takes the least club element at or above the target (the
pre-next step), then rounds up into ``x``.  Clubs are assigned per set:
``{max x}`` whenever ``x`` has a maximum, otherwise a club in the strict
sup satisfying the one-point-per-gap condition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ValidationError, WalkslabError
from .fpsets import FpSet, Part
from .ordinal import ONE, ZERO, Ordinal, left_subtract, ord_add, ord_cmp, ord_max

_STEP_CAP = 100_000


def fp_member(x: FpSet, xi: Ordinal) -> bool:
    return x.member(xi)


def fp_restrict(x: FpSet, beta: Ordinal) -> FpSet:
    return x.restrict(beta)


def fp_strict_sup(x: FpSet) -> Ordinal:
    return x.strict_sup()


def canonical_set_club(x: FpSet) -> FpSet:
    """Singleton rule for sets with a maximum; for no-max sets the final
    infinite ladder of the presentation, in full."""
    if x.is_empty():
        raise ValidationError("no club for the empty set")
    m = x.max()
    if m is not None:
        return FpSet([Part(m, ONE, 1)])
    return FpSet([x.parts[-1]])


class SetCSeq:
    """Club assignment for every set a session reaches.  Overrides are
    matched extensionally; everything else is derived canonically."""

    def __init__(self, overrides: Iterable[Tuple[FpSet, FpSet]] = (),
                 derive: bool = True, validate: bool = True):
        self.overrides: Dict[FpSet, FpSet] = {}
        self.derive = derive
        for x, club in overrides:
            if validate:
                report = set_cseq_validate(x, club)
                if not report.ok:
                    raise ValidationError("; ".join(report.problems))
            self.overrides[x] = club

    def club_for(self, x: FpSet) -> FpSet:
        club = self.overrides.get(x)
        if club is not None:
            return club
        if not self.derive:
            raise WalkslabError(f"missing club presentation for {x!r}")
        return canonical_set_club(x)


@dataclass
class SetCseqReport:
    ok: bool
    problems: List[str] = field(default_factory=list)
    sampled: bool = False


def _gap_index(x: FpSet, v: Ordinal) -> Optional[Ordinal]:
    """Which gap [xi_i, xi_{i+1}) of x's increasing enumeration holds v; None
    when v lies below min(x) (that region is unconstrained)."""
    pos = x.ot_below(ord_add(v, ONE))
    if pos.is_zero():
        return None
    return pos  # gap i has key i+1; only equality matters


def set_cseq_validate(x: FpSet, club: FpSet, sample: int = 64) -> SetCseqReport:
    """Check the singleton rule, club-in-strict-sup, and the gap condition
    (closed form for step-aligned tails, sampled otherwise)."""
    report = SetCseqReport(ok=True)
    if x.is_empty():
        return SetCseqReport(False, ["empty set has no club"])
    m = x.max()
    if m is not None:
        if club != FpSet([Part(m, ONE, 1)]):
            report.ok = False
            report.problems.append(f"set has maximum {m}: club must be {{{m}}}")
        return report
    ssup = x.strict_sup()
    if club.is_empty():
        return SetCseqReport(False, ["club presentation is empty"])
    for p in club.parts:
        if ord_cmp(p.strict_upper(), ssup) > 0:
            report.ok = False
            report.problems.append(f"club element at or above strict sup near {p.base}")
    last = club.parts[-1]
    if last.count is not None or last.sup() != ssup:
        report.ok = False
        report.problems.append(f"club not cofinal in {ssup}")
    for i, p in enumerate(club.parts[:-1]):
        if p.count is None and club.parts[i + 1].base != p.sup():
            report.ok = False
            report.problems.append(f"club missing limit point {p.sup()}")
    _check_gaps(x, club, report, sample)
    return report


def _check_gaps(x: FpSet, club: FpSet, report: SetCseqReport, sample: int) -> None:
    claimed: Dict[Ordinal, Ordinal] = {}  # gap key -> witness element
    tails: List[Tuple[Ordinal, Ordinal]] = []  # (first key, witness); covers key+n

    def covered_by_tail(key: Ordinal) -> Optional[Ordinal]:
        for start, w in tails:
            if ord_cmp(key, start) >= 0 and left_subtract(start, key).is_finite():
                return w
        return None

    def claim(key: Optional[Ordinal], v: Ordinal) -> None:
        if key is None:
            return
        w = covered_by_tail(key)
        if w is not None:
            _gap_violation(x, report, w, v)
        elif key in claimed:
            _gap_violation(x, report, claimed[key], v)
        else:
            claimed[key] = v

    for p in club.parts:
        if p.count is not None:
            for i in range(p.count):
                claim(_gap_index(x, p.elem(i)), p.elem(i))
            continue
        # infinite club tail: find the x-part whose gaps it eventually fills
        host = None
        for xp in x.parts:
            if ord_cmp(xp.base, p.sup()) < 0:
                host = xp
        if host is None or host.count is not None or ord_cmp(p.sup(), host.sup()) > 0:
            report.ok = False
            report.problems.append(
                f"club tail at {p.base} is cofinal inside a single gap of x")
            continue
        k = p.index_geq(host.base)
        k = 0 if k is None else k
        for i in range(k):  # stray elements before the hosting ladder
            claim(_gap_index(x, p.elem(i)), p.elem(i))
        first = p.elem(k)
        if p.step == host.step:
            key0 = _gap_index(x, first)
            if key0 is not None:
                w = covered_by_tail(key0)
                if w is not None:
                    _gap_violation(x, report, w, first)
                for key, w in claimed.items():
                    if (ord_cmp(key, key0) >= 0
                            and left_subtract(key0, key).is_finite()):
                        _gap_violation(x, report, w, first)
                tails.append((key0, first))
        else:
            if ord_cmp(p.step, host.step) < 0:
                report.ok = False
                report.problems.append(
                    f"club tail step {p.step} finer than x step {host.step}:"
                    f" infinitely many club points share a gap")
                continue
            report.sampled = True
            for i in range(k, k + sample):
                claim(_gap_index(x, p.elem(i)), p.elem(i))


def _gap_violation(x: FpSet, report: SetCseqReport,
                   first: Ordinal, second: Ordinal) -> None:
    lo = x.max_below(ord_add(first, ONE))
    lo = lo if lo is not None else first
    hi = x.min_geq(ord_add(lo, ONE))
    span = f"[{lo}, {hi})" if hi is not None else f"[{lo}, ...)"
    report.ok = False
    report.problems.append(
        f"two club points {first} and {second} in gap {span}")


@dataclass(frozen=True)
class TwoWalkTrace:
    """Trace, pre-next steps, top-down code and overshoot maximum."""

    trace: Tuple[Ordinal, ...]
    pre_steps: Tuple[Ordinal, ...]
    code: Tuple[Ordinal, ...]
    lam: Ordinal

    @property
    def rho2(self) -> int:
        return len(self.code)


def two_walk(x: FpSet, alpha: Ordinal, cs: SetCSeq) -> TwoWalkTrace:
    """Walk from x to alpha.  Both structural propositions are asserted on
    every produced step: the walk reaches alpha exactly when the pre-next
    step does, and (whenever they differ) the pre-next step is the largest
    club element below the true next step."""
    if not x.member(alpha):
        raise WalkslabError(f"target not in set: {alpha}")
    trace: List[Ordinal] = [x.strict_sup()]
    pre_steps: List[Ordinal] = []
    code: List[Ordinal] = []
    sups: List[Ordinal] = []
    while trace[-1] != alpha:
        if len(trace) > _STEP_CAP:
            raise WalkslabError("two-cardinal walk exceeded step budget")
        cur = trace[-1]
        restricted = x.restrict(cur)
        club = cs.club_for(restricted)
        code.append(club.ot_below(alpha))
        sups.append(club.sup_inter(alpha))
        pre = club.min_geq(alpha)
        if pre is None:
            raise WalkslabError(f"club for {restricted!r} has no element >= {alpha}")
        nxt = x.min_geq(pre)
        if nxt is None or ord_cmp(nxt, cur) >= 0:
            raise WalkslabError(f"two-cardinal walk stalled at {cur}")
        if (nxt == alpha) != (pre == alpha):
            raise WalkslabError(
                f"pre-next/next disagreement at {cur}: pre={pre}, next={nxt}")
        if pre != nxt and pre != club.max_below(nxt):
            raise WalkslabError(
                f"pre-next step {pre} is not max(C intersect {nxt})")
        pre_steps.append(pre)
        trace.append(nxt)
    return TwoWalkTrace(tuple(trace), tuple(pre_steps), tuple(code), ord_max(sups))


def two_rho2(x: FpSet, alpha: Ordinal, cs: SetCSeq) -> int:
    return two_walk(x, alpha, cs).rho2


def triple_min(x: FpSet, y: FpSet, z: FpSet, cs: SetCSeq) -> Ordinal:
    """min of the intersection of the trace sets of the walks from z to the
    strict sups of x and y, under the chain condition; 0 on any other triple."""
    sx, sy = x.strict_sup(), y.strict_sup()
    if not (x.subset_of(y) and y.member(sx) and y.subset_of(z) and z.member(sy)):
        return ZERO
    ta = set(two_walk(z, sx, cs).trace)
    tb = set(two_walk(z, sy, cs).trace)
    common = ta & tb
    if not common:  # pragma: no cover - both traces start at strict_sup(z)
        return ZERO
    return min(common)


@dataclass(frozen=True)
class Partition:
    """Named disjoint cells of ordinals indexed by ordinals."""

    cells: Tuple[Tuple[Ordinal, FpSet], ...]

    def __post_init__(self):
        seen: List[Tuple[Ordinal, FpSet]] = []
        for idx, cell in self.cells:
            for jdx, other in seen:
                inter = cell.intersect(other)
                if not inter.is_empty():
                    raise ValidationError(
                        f"partition cells {idx} and {jdx} overlap at {inter.min()}")
            seen.append((idx, cell))

    def universe_member(self, v: Ordinal) -> bool:
        return any(cell.member(v) for _, cell in self.cells)

    def index_of(self, v: Ordinal) -> Ordinal:
        for idx, cell in self.cells:
            if cell.member(v):
                return idx
        return ZERO

    def indices(self) -> List[Ordinal]:
        return [idx for idx, _ in self.cells]


def color_c(x: FpSet, y: FpSet, z: FpSet, partition: Partition,
            cs: SetCSeq) -> Ordinal:
    """Index of the partition cell containing the triple minimum; 0 when the
    minimum lies outside every cell."""
    return partition.index_of(triple_min(x, y, z, cs))


def step_color(alpha: Ordinal, i: int, x: FpSet, partition: Partition,
               cs: SetCSeq) -> Ordinal:
    """Index of the cell containing the i-th trace element of the walk from
    x to alpha, else 0 (missing step, missing target, or off the cells)."""
    if i < 0 or not x.member(alpha):
        return ZERO
    wt = two_walk(x, alpha, cs)
    if i >= len(wt.trace):
        return ZERO
    step = wt.trace[i]
    if not partition.universe_member(step):
        return ZERO
    return partition.index_of(step)


def find_triples(family: Sequence[Tuple[str, FpSet]], delta: Ordinal,
                 cs: SetCSeq) -> List[Tuple[str, str, str]]:
    """All proper-inclusion chains {x, y, z} from the family whose triple
    minimum equals delta, by exhaustive enumeration in roster order."""
    out: List[Tuple[str, str, str]] = []
    n = len(family)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) < 3:
                    continue
                (nx, x), (ny, y), (nz, z) = family[i], family[j], family[k]
                if not (x.subset_of(y) and x != y and y.subset_of(z) and y != z):
                    continue
                if triple_min(x, y, z, cs) == delta:
                    out.append((nx, ny, nz))
    return out
