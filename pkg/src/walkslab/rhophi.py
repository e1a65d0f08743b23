"""The graded two-place coloring built from ladder indices and walks.

``phi_eval`` turns a declared ladder family into index functions: at a
declared point the value of gamma is the least ladder index reaching it,
everywhere else the function is constantly 0.  ``capital_lambda`` finds the
largest club element at or below alpha whose position in the club is
divisible by the grading parameter theta, and ``rho_phi`` evaluates the
recursive coloring over the finite window above that pivot.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .cseq import CSeqProvider
from .errors import InfiniteWindowError, ProviderError, ValidationError, WalkslabError
from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    classify,
    left_subtract,
    ord_add,
    ord_cmp,
    ord_divmod,
    ord_max,
    ord_mul,
)


@dataclass(frozen=True)
class PhiFamily:
    """Grading parameter theta, the declared points, and one increasing
    cofinal ladder (base, step) per point."""

    theta: Ordinal
    ladders: Mapping[Ordinal, Tuple[Ordinal, Ordinal]]

    def __post_init__(self):
        if self.theta.is_zero():
            raise ValidationError("theta must be positive")
        for point, (base, step) in self.ladders.items():
            if not (step.is_single_term() or step == ONE) or step.is_zero():
                raise ValidationError(f"ladder step at {point} must be a single term")
            sup = ord_add(base, ord_mul(step, OMEGA))
            if sup != point:
                raise ValidationError(
                    f"ladder at {point} converges to {sup}, not to the point")

    @property
    def points(self):
        return frozenset(self.ladders)


def phi_eval(family: PhiFamily, point: Ordinal, gamma: Ordinal) -> Ordinal:
    """Least ladder index n with gamma <= s(n) at a declared point; 0 off
    the declared set.  Requires gamma < point."""
    if ord_cmp(gamma, point) >= 0:
        raise WalkslabError(f"phi is only defined below its point: {gamma} >= {point}")
    ladder = family.ladders.get(point)
    if ladder is None:
        return ZERO
    base, step = ladder
    if ord_cmp(gamma, base) <= 0:
        return ZERO
    r = left_subtract(base, gamma)
    e, c = step.terms[0]
    f, k = r.terms[0]
    cmp = f._cmp(e)
    if cmp > 0:  # pragma: no cover - impossible for a cofinal ladder
        raise ProviderError(f"{gamma} is beyond the ladder at {point}")
    if cmp < 0:
        return ONE
    n = -(-k // c)
    if c * n == k and len(r.terms) > 1:
        n += 1
    return Ordinal(n)


def _pivot_window(p: CSeqProvider, theta: Ordinal, alpha: Ordinal,
                  beta: Ordinal) -> Tuple[Ordinal, List[Ordinal]]:
    """The divisibility pivot in C_beta intersect (alpha+1), together with
    the listed club elements from the pivot up to (and including) alpha.
    Returns (0, []) when the intersection is empty."""
    succ = ord_add(alpha, ONE)
    total = p.ot_below(beta, succ)
    if total.is_zero():
        return ZERO, []
    q, r = ord_divmod(total, theta)
    if r.is_zero():
        kind, pred = classify(q)
        if kind != "successor":
            raise ProviderError(
                f"C_{beta} below {alpha} has limit order type {total}: not closed")
        r = theta
    if not r.is_finite():
        raise InfiniteWindowError(
            f"infinite-sup window: C_{beta} on [pivot, {alpha}) has order type {r}")
    steps = int(r)
    top = p.sup_below(beta, succ)
    if not p.member(beta, top):
        raise ProviderError(f"C_{beta} is not closed at {top}")
    window = [top]
    for _ in range(steps - 1):
        prev = p.sup_below(beta, window[-1])
        if not p.member(beta, prev):
            raise ProviderError(f"C_{beta} is not closed at {prev}")
        window.append(prev)
    window.reverse()
    return window[0], window


def capital_lambda(p: CSeqProvider, theta: Ordinal, alpha: Ordinal,
                   beta: Ordinal) -> Ordinal:
    """Largest xi in C_beta with xi <= alpha whose club position is divisible
    by theta; 0 when C_beta intersect (alpha+1) is empty."""
    if ord_cmp(alpha, beta) >= 0:
        raise WalkslabError("capital_lambda requires alpha < beta")
    pivot, _ = _pivot_window(p, theta, alpha, beta)
    return pivot


def rho_phi(p: CSeqProvider, family: PhiFamily, alpha: Ordinal, beta: Ordinal,
            memo: Optional[Dict[Tuple[Ordinal, Ordinal], Ordinal]] = None) -> Ordinal:
    """The recursive coloring: sup of the ladder index at the club overshoot,
    the value one walk step down, and the values below the window elements.
    Requires the window above the pivot to be finite."""
    if memo is None:
        memo = {}
    cmp = ord_cmp(alpha, beta)
    if cmp > 0:
        raise WalkslabError(f"rho_phi requires alpha <= beta, got {alpha} > {beta}")
    if cmp == 0:
        return ZERO
    key = (alpha, beta)
    cached = memo.get(key)
    if cached is not None:
        return cached
    _, window = _pivot_window(p, family.theta, alpha, beta)
    vals = [phi_eval(family, beta, p.sup_below(beta, alpha)),
            rho_phi(p, family, alpha, p.min_above(beta, alpha), memo)]
    for xi in window:
        if ord_cmp(xi, alpha) < 0:
            vals.append(rho_phi(p, family, xi, alpha, memo))
    out = ord_max(vals)
    memo[key] = out
    return out
