"""One-cardinal walks: traces, step counts, full codes, overshoot maxima.

A walk from beta to alpha repeatedly takes ``min(C_. \\ alpha)`` until it
lands on alpha.  The full code collects ``ot(C_(step) intersect alpha)``
deepest step first, so the splitting identity reads
``code(gamma, beta) = code(gamma, alpha) ++ code(alpha, beta)`` whenever
alpha lies on the walk from beta to gamma, and alpha sits in the trace at
index ``rho2(alpha, beta)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .cseq import CSeqProvider
from .errors import ValidationError, WalkslabError
from .ordinal import ONE, ZERO, Ordinal, ord_add, ord_cmp, ord_max


@dataclass(frozen=True)
class WalkTrace:
    """Full record of one walk: trace, code (rho0), lambda and lambda-bar."""

    trace: Tuple[Ordinal, ...]
    code: Tuple[Ordinal, ...]
    lam: Ordinal
    lam_bar: Ordinal

    @property
    def steps(self) -> int:
        return len(self.code)

    @property
    def alpha(self) -> Ordinal:
        return self.trace[-1]

    @property
    def beta(self) -> Ordinal:
        return self.trace[0]


def walk_trace(p: CSeqProvider, alpha: Ordinal, beta: Ordinal) -> WalkTrace:
    if ord_cmp(alpha, beta) > 0:
        raise WalkslabError(f"walk requires alpha <= beta, got {alpha} > {beta}")
    trace: List[Ordinal] = [beta]
    ot_along: List[Ordinal] = []
    sups: List[Ordinal] = []
    cur = beta
    while cur != alpha:
        ot_along.append(p.ot_below(cur, alpha))
        sups.append(p.sup_below(cur, alpha))
        nxt = p.min_above(cur, alpha)
        if ord_cmp(nxt, cur) >= 0:
            raise WalkslabError(f"walk stalled at {cur} (invalid club data)")
        trace.append(nxt)
        cur = nxt
    code = tuple(reversed(ot_along))
    lam = ord_max(sups)
    if len(trace) == 1:
        lam_bar = ZERO
    else:
        # C_{beta_i} has nothing in [alpha, beta_{i+1}), so the sups below
        # alpha also compute lambda(beta_{m-1}, beta)
        lam_pen = ord_max(sups[:-1])
        candidates = [v for v in (lam, lam_pen) if ord_cmp(v, alpha) < 0]
        lam_bar = ord_max(candidates)
    return WalkTrace(tuple(trace), code, lam, lam_bar)


def rho2(p: CSeqProvider, alpha: Ordinal, beta: Ordinal) -> int:
    return walk_trace(p, alpha, beta).steps


def rho0(p: CSeqProvider, alpha: Ordinal, beta: Ordinal) -> Tuple[Ordinal, ...]:
    return walk_trace(p, alpha, beta).code


def lambda_of(p: CSeqProvider, alpha: Ordinal, beta: Ordinal) -> Ordinal:
    return walk_trace(p, alpha, beta).lam


def lambda_bar_of(p: CSeqProvider, alpha: Ordinal, beta: Ordinal) -> Ordinal:
    return walk_trace(p, alpha, beta).lam_bar


@dataclass
class WindowRow:
    gamma: Ordinal
    clause_a: str  # "pass" | "fail" | "n/a"
    clause_b: str
    clause_c: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return "fail" not in (self.clause_a, self.clause_b, self.clause_c)


@dataclass
class WindowReport:
    alpha: Ordinal
    beta: Ordinal
    lam: Ordinal
    lam_bar: Ordinal
    matched_case: str  # "lam_bar==lam" | "lam_bar<lam"
    rows: List[WindowRow]
    vacuous: bool

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> List[WindowRow]:
        return [r for r in self.rows if not r.ok]


def _trace_memo(p, alpha, beta, memo) -> WalkTrace:
    if memo is None:
        return walk_trace(p, alpha, beta)
    key = (alpha, beta)
    wt = memo.get(key)
    if wt is None:
        wt = walk_trace(p, alpha, beta)
        memo[key] = wt
    return wt


def _case_checks(p: CSeqProvider, wt: WalkTrace, gamma: Ordinal,
                 memo: Optional[Dict] = None) -> Tuple[bool, bool, str]:
    """Evaluate the case-matched membership biconditional and the step-count
    additivity at gamma.  Returns (b_ok, c_ok, detail)."""
    alpha, beta = wt.alpha, wt.beta
    m = wt.steps
    r2 = _trace_memo(p, gamma, beta, memo).steps
    if wt.lam_bar == wt.lam:
        in_club = p.member(alpha, gamma)
        b_ok = in_club == (r2 == m + 1)
        c_ok = r2 == _trace_memo(p, gamma, alpha, memo).steps + m
        detail = f"gamma in C_{alpha}: {in_club}, rho2={r2}"
    else:
        anchor = wt.trace[m - 1]
        in_club = p.member(anchor, gamma)
        b_ok = in_club == (r2 == m)
        c_ok = r2 == _trace_memo(p, gamma, anchor, memo).steps + (m - 1)
        detail = f"gamma in C_{anchor}: {in_club}, rho2={r2}"
    return b_ok, c_ok, detail


def window_report(p: CSeqProvider, alpha: Ordinal, beta: Ordinal,
                  samples: Sequence[Ordinal],
                  memo: Optional[Dict] = None) -> WindowReport:
    """Check, for each sampled gamma strictly between lambda-bar and alpha:
    (a) the trace of the walk to gamma begins with the trace to alpha (only
    guaranteed above lambda), (b) the case-matched membership biconditional,
    (c) the matching step-count additivity."""
    if ord_cmp(alpha, beta) >= 0:
        raise WalkslabError("window_report requires alpha < beta")
    wt = _trace_memo(p, alpha, beta, memo)
    if ord_add(wt.lam_bar, ONE) == alpha:
        raise ValidationError(
            f"empty window: no ordinal strictly between {wt.lam_bar} and {alpha}")
    case = "lam_bar==lam" if wt.lam_bar == wt.lam else "lam_bar<lam"
    inside = [g for g in samples
              if ord_cmp(wt.lam_bar, g) < 0 and ord_cmp(g, alpha) < 0]
    rows: List[WindowRow] = []
    if memo is None:
        memo = {}
    for gamma in sorted(set(inside)):
        if ord_cmp(gamma, wt.lam) > 0:
            gt = _trace_memo(p, gamma, beta, memo)
            prefix_ok = gt.trace[:len(wt.trace)] == wt.trace
            a = "pass" if prefix_ok else "fail"
        else:
            a = "n/a"
        b_ok, c_ok, detail = _case_checks(p, wt, gamma, memo)
        rows.append(WindowRow(gamma, a, "pass" if b_ok else "fail",
                              "pass" if c_ok else "fail", detail))
    return WindowReport(alpha, beta, wt.lam, wt.lam_bar, case, rows,
                        vacuous=not rows)


def endpoint_row(p: CSeqProvider, alpha: Ordinal, beta: Ordinal,
                 memo: Optional[Dict] = None) -> WindowRow:
    """Evaluate clauses (b) and (c) at gamma = lambda-bar itself; recorded,
    never asserted (the guaranteed region is the open window)."""
    wt = _trace_memo(p, alpha, beta, memo)
    gamma = wt.lam_bar
    b_ok, c_ok, detail = _case_checks(p, wt, gamma, memo)
    return WindowRow(gamma, "n/a", "pass" if b_ok else "fail",
                     "pass" if c_ok else "fail", detail)
