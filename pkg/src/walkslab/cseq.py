"""Club-sequence providers and their validators.

A provider answers the four club queries about ``C_beta`` for ordinals
``beta`` below its declared bound: ``min_above`` (least element >= xi),
``sup_below`` (sup of the elements < xi, 0 when empty), ``ot_below``
(order type below xi) and ``member``.  ``C_{gamma+1} = {gamma}`` always;
``C_0`` is undefined and queries at 0 are errors.

The canonical provider uses the standard fundamental-sequence assignment
(index starting at n = 0); the table provider answers from validated
finitely presented entries with optional canonical fallback.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ProviderError, ValidationError
from .fpsets import FpSet, Part
from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    classify,
    left_subtract,
    ord_add,
    ord_cmp,
    ord_mul,
    omega_power,
)


class CSeqProvider:
    """Query interface over (beta, xi) for a C-sequence below ``theta``."""

    def __init__(self, theta: Ordinal):
        self.theta = theta

    def _check(self, beta: Ordinal) -> None:
        if beta.is_zero():
            raise ProviderError("C_0 is undefined")
        if ord_cmp(beta, self.theta) >= 0:
            raise ProviderError(f"{beta} is beyond the session bound {self.theta}")

    def min_above(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        raise NotImplementedError

    def sup_below(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        raise NotImplementedError

    def ot_below(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        raise NotImplementedError

    def member(self, beta: Ordinal, xi: Ordinal) -> bool:
        raise NotImplementedError

    def elements_below(self, beta: Ordinal, xi: Ordinal) -> Optional[List[Ordinal]]:
        """Explicit listing of C_beta below xi; None when infinite."""
        raise NotImplementedError


class CanonicalProvider(CSeqProvider):
    """Standard fundamental sequences: C_{gamma+1} = {gamma}; for limit
    beta = delta + w^(e+1) the ladder {delta + w^e*n}; for a limit exponent
    the same assignment applied recursively inside the exponent."""

    def _split(self, beta: Ordinal) -> Tuple[Ordinal, Ordinal]:
        e, c = beta.terms[-1]
        head = beta.terms[:-1] if c == 1 else beta.terms[:-1] + ((e, c - 1),)
        return Ordinal._make(head), e

    def _elem(self, beta: Ordinal, n: int) -> Ordinal:
        delta, e = self._split(beta)
        kind, pred = classify(e)
        if kind == "successor":
            return ord_add(delta, ord_mul(omega_power(pred), n))
        return ord_add(delta, omega_power(self._elem(e, n)))

    def _index_geq(self, beta: Ordinal, xi: Ordinal) -> Optional[int]:
        """Least n with the n-th ladder element >= xi (limit beta only)."""
        delta, e = self._split(beta)
        if ord_cmp(xi, delta) <= 0:
            return 0
        r = left_subtract(delta, xi)
        if ord_cmp(r, omega_power(e)) >= 0:
            return None
        kind, pred = classify(e)
        if kind == "successor":
            f, k = r.terms[0]
            cmp = f._cmp(pred)
            if cmp < 0:
                return 1
            assert cmp == 0
            return k if len(r.terms) == 1 else k + 1
        f, k = r.terms[0]
        if k == 1 and len(r.terms) == 1:
            target = f
        else:
            target = ord_add(f, ONE)
        return self._index_geq(e, target)

    def min_above(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        self._check(beta)
        kind, pred = classify(beta)
        if kind == "successor":
            if ord_cmp(xi, pred) <= 0:
                return pred
            raise ProviderError(f"C_{beta} has no element >= {xi}")
        n = self._index_geq(beta, xi)
        if n is None:
            raise ProviderError(f"C_{beta} has no element >= {xi}")
        return self._elem(beta, n)

    def sup_below(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        self._check(beta)
        kind, pred = classify(beta)
        if kind == "successor":
            return pred if ord_cmp(pred, xi) < 0 else ZERO
        n = self._index_geq(beta, xi)
        if n is None:
            return beta
        if n == 0:
            return ZERO
        return self._elem(beta, n - 1)

    def ot_below(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        self._check(beta)
        kind, pred = classify(beta)
        if kind == "successor":
            return ONE if ord_cmp(pred, xi) < 0 else ZERO
        n = self._index_geq(beta, xi)
        return OMEGA if n is None else Ordinal(n)

    def member(self, beta: Ordinal, xi: Ordinal) -> bool:
        self._check(beta)
        kind, pred = classify(beta)
        if kind == "successor":
            return xi == pred
        n = self._index_geq(beta, xi)
        return n is not None and self._elem(beta, n) == xi

    def elements_below(self, beta: Ordinal, xi: Ordinal) -> Optional[List[Ordinal]]:
        self._check(beta)
        kind, pred = classify(beta)
        if kind == "successor":
            return [pred] if ord_cmp(pred, xi) < 0 else []
        n = self._index_geq(beta, xi)
        if n is None:
            return None
        return [self._elem(beta, i) for i in range(n)]


def canonical_provider(theta: Ordinal) -> CanonicalProvider:
    return CanonicalProvider(theta)


@dataclass(frozen=True)
class TableSpec:
    """A declared club: finite prefix plus ladder tails, with its order type."""

    beta: Ordinal
    prefix: Tuple[Ordinal, ...] = ()
    tails: Tuple[Tuple[Ordinal, Ordinal], ...] = ()
    order_type: Optional[Ordinal] = None

    def parts(self) -> List[Part]:
        out = [Part(v, ONE, 1) for v in self.prefix]
        out.extend(Part(b, s, None) for (b, s) in self.tails)
        return sorted(out, key=lambda p: p.base)

    def validate(self) -> FpSet:
        kind, _ = classify(self.beta)
        if kind != "limit":
            raise ValidationError(f"C_{self.beta}: table entries must have limit beta")
        if list(self.prefix) != sorted(set(self.prefix)):
            raise ValidationError(f"C_{self.beta}: prefix must be strictly increasing")
        parts = self.parts()
        try:
            club = FpSet(parts)
        except ValidationError as exc:
            raise ValidationError(f"C_{self.beta}: {exc}") from exc
        check_club_presentation(self.beta, club)
        if self.order_type is not None and club.ot() != self.order_type:
            raise ValidationError(
                f"C_{self.beta}: declared order type {self.order_type}"
                f" but presentation has {club.ot()}")
        return club


def check_club_presentation(beta: Ordinal, club: FpSet) -> None:
    """Closed and unbounded in beta: every limit point of the presentation
    below beta is present, and the last part is a tail cofinal in beta."""
    if club.is_empty():
        raise ValidationError(f"C_{beta}: empty presentation")
    parts = club.parts
    for p in parts:
        if ord_cmp(p.strict_upper(), beta) > 0:
            raise ValidationError(f"C_{beta}: element at or above beta near {p.base}")
    for i, p in enumerate(parts):
        if p.count is not None:
            continue
        s = p.sup()
        if i + 1 < len(parts):
            if parts[i + 1].base != s:
                raise ValidationError(f"C_{beta}: missing limit point {s}")
        elif s != beta:
            raise ValidationError(
                f"C_{beta}: tail converges to {s}, not cofinal in {beta}")
    if parts[-1].count is not None:
        raise ValidationError(f"C_{beta}: bounded presentation (no cofinal tail)")


class TableProvider(CSeqProvider):
    def __init__(self, theta: Ordinal, entries: Dict[Ordinal, FpSet],
                 fallback: bool = False):
        super().__init__(theta)
        self.entries = entries
        self.fallback = fallback
        self._canonical = CanonicalProvider(theta)

    def _resolve(self, beta: Ordinal) -> Optional[FpSet]:
        self._check(beta)
        club = self.entries.get(beta)
        if club is not None:
            return club
        kind, _ = classify(beta)
        if kind == "successor":
            return None  # forced singleton, handled by the canonical rule
        if self.fallback:
            return None
        raise ProviderError(f"no table entry for C_{beta} and fallback disabled")

    def min_above(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        club = self._resolve(beta)
        if club is None:
            return self._canonical.min_above(beta, xi)
        v = club.min_geq(xi)
        if v is None:
            raise ProviderError(f"C_{beta} has no element >= {xi}")
        return v

    def sup_below(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        club = self._resolve(beta)
        if club is None:
            return self._canonical.sup_below(beta, xi)
        return club.sup_inter(xi)

    def ot_below(self, beta: Ordinal, xi: Ordinal) -> Ordinal:
        club = self._resolve(beta)
        if club is None:
            return self._canonical.ot_below(beta, xi)
        return club.ot_below(xi)

    def member(self, beta: Ordinal, xi: Ordinal) -> bool:
        club = self._resolve(beta)
        if club is None:
            return self._canonical.member(beta, xi)
        return club.member(xi)

    def elements_below(self, beta: Ordinal, xi: Ordinal) -> Optional[List[Ordinal]]:
        club = self._resolve(beta)
        if club is None:
            return self._canonical.elements_below(beta, xi)
        return club.elements_below(xi)


def table_provider(specs: Iterable[TableSpec], theta: Ordinal,
                   fallback: bool = False, validate: bool = True) -> TableProvider:
    """Provider answering from the given entries.  ``validate=False`` skips
    the club checks; it exists for negative-control experiments only."""
    entries: Dict[Ordinal, FpSet] = {}
    for spec in specs:
        if ord_cmp(spec.beta, theta) >= 0:
            raise ValidationError(f"C_{spec.beta}: beta is beyond the bound {theta}")
        if spec.beta in entries:
            raise ValidationError(f"duplicate table entry for C_{spec.beta}")
        entries[spec.beta] = spec.validate() if validate else FpSet(spec.parts())
    return TableProvider(theta, entries, fallback=fallback)


@dataclass
class AvoidReport:
    rows: List[Tuple[Ordinal, List[Ordinal]]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return all(not v for _, v in self.rows)

    def violations(self) -> List[Tuple[Ordinal, List[Ordinal]]]:
        return [(b, v) for (b, v) in self.rows if v]


def avoid_check(provider: CSeqProvider, avoid_set: Iterable[Ordinal],
                sample: Iterable[Ordinal]) -> AvoidReport:
    """For each limit beta in the sample, report S intersect C_beta."""
    s = sorted(set(avoid_set))
    report = AvoidReport()
    for beta in sorted(set(sample)):
        kind, _ = classify(beta)
        if kind != "limit":
            raise ValidationError(f"avoid_check sample must be limit ordinals, got {beta}")
        hits = [v for v in s if provider.member(beta, v)]
        report.rows.append((beta, hits))
    return report


def coherence_count(provider: CSeqProvider, alpha: Ordinal,
                    candidates: Iterable[Ordinal],
                    probes: Sequence[Ordinal] = ()) -> int:
    """Number of distinct traces C_beta intersect alpha among candidates with
    alpha in Lim(C_beta).  Distinctness compares the order type at alpha and
    min_above agreement on the probe grid below alpha (values >= alpha are
    masked, so only the trace itself is probed)."""
    kind, _ = classify(alpha)
    if kind != "limit":
        raise ValidationError(f"coherence_count needs a limit alpha, got {alpha}")
    grid = sorted({q for q in probes if ord_cmp(q, alpha) < 0})
    keys = set()
    for beta in set(candidates):
        if ord_cmp(beta, alpha) < 0:
            continue
        if provider.sup_below(beta, alpha) != alpha:
            continue
        sig = []
        for q in grid:
            m = provider.min_above(beta, q)
            sig.append(m if ord_cmp(m, alpha) < 0 else None)
        keys.add((provider.ot_below(beta, alpha), tuple(sig)))
    return len(keys)
