import pytest
from hypothesis import given, settings

from strategies import ordinals
from walkslab.cseq import TableSpec, canonical_provider, table_provider, avoid_check
from walkslab.errors import ValidationError, WalkslabError
from walkslab.ordinal import OMEGA, ONE, ZERO, Ordinal, classify, ord_cmp, parse_ordinal
from walkslab.walks import (
    endpoint_row,
    lambda_bar_of,
    lambda_of,
    rho0,
    rho2,
    walk_trace,
    window_report,
)

w = OMEGA
o = parse_ordinal
THETA = o("w^3")


@pytest.fixture(scope="module")
def canon():
    return canonical_provider(THETA)


class TestWalkTrace:
    def test_one_step(self, canon):
        wt = walk_trace(canon, Ordinal(3), w)
        assert wt.trace == (w, Ordinal(3))
        assert wt.steps == 1
        assert wt.code == (Ordinal(3),)

    def test_two_steps_with_overshoot(self, canon):
        # worked by hand from the fundamental sequences:
        # C_{w^2} = {w*n} and C_{w*2} = {w+n}
        wt = walk_trace(canon, o("w+1"), o("w^2"))
        assert wt.trace == (o("w^2"), o("w*2"), o("w+1"))
        assert wt.steps == 2
        assert wt.code == (ONE, Ordinal(2))
        assert wt.lam == w
        assert wt.lam_bar == w

    def test_empty_walk(self, canon):
        wt = walk_trace(canon, w, w)
        assert wt.trace == (w,)
        assert wt.code == ()
        assert wt.lam == ZERO and wt.lam_bar == ZERO

    def test_alpha_above_beta_rejected(self, canon):
        with pytest.raises(WalkslabError):
            walk_trace(canon, o("w*2"), w)


class TestAccessors:
    def test_rho2_through_singletons(self, canon):
        assert rho2(canon, Ordinal(5), Ordinal(7)) == 2

    def test_rho2_one_step_to_successor(self, canon):
        for a in (Ordinal(4), w, o("w^2+3")):
            assert rho2(canon, a, a + 1) == 1

    def test_lambda_example(self, canon):
        assert lambda_of(canon, o("w*2"), o("w^2")) == w

    def test_lambda_bar_strictly_below_alpha(self, canon):
        # lambda hits alpha on a full table club; lambda_bar corrects below
        spec = TableSpec(o("w*2"), tails=((ZERO, ONE), (w, ONE)))
        p = table_provider([spec], THETA, fallback=True)
        wt = walk_trace(p, w, o("w*2"))
        assert wt.lam == w
        assert wt.lam_bar == ZERO


class TestSplitting:
    def test_forward_with_index(self, canon):
        gamma, alpha, beta = Ordinal(3), w, o("w^2")
        full = walk_trace(canon, gamma, beta)
        assert full.code == rho0(canon, gamma, alpha) + rho0(canon, alpha, beta)
        assert full.trace.index(alpha) == rho2(canon, alpha, beta)


class TestWindowReport:
    def test_all_pass_on_canonical(self, canon):
        samples = [o(f"w+{i}") for i in range(1, 10)]
        report = window_report(canon, o("w*2"), o("w^2"), samples)
        assert report.ok and len(report.rows) == 9
        assert report.matched_case == "lam_bar==lam"
        row = next(r for r in report.rows if r.gamma == o("w+5"))
        assert row.clause_a == row.clause_b == row.clause_c == "pass"

    def test_vacuous_when_samples_miss_window(self, canon):
        report = window_report(canon, o("w*2"), o("w^2"), [Ordinal(1)])
        assert report.vacuous and report.ok

    def test_empty_window_rejected(self, canon):
        # walk w^2 -> 5 has lambda_bar = 4, so (4, 5) holds no ordinal
        with pytest.raises(ValidationError, match="empty window"):
            window_report(canon, Ordinal(5), o("w^2"), [Ordinal(2)])

    def test_corrupted_table_fails_named(self):
        # non-closed, non-cofinal C_{w*2} = {n} + {w+5}: the validator
        # rejects it, and with validation off the additivity clause breaks
        spec = TableSpec(o("w*2"), prefix=(o("w+5"),), tails=((ZERO, ONE),))
        with pytest.raises(ValidationError):
            table_provider([spec], THETA)
        p = table_provider([spec], THETA, fallback=True, validate=False)
        report = window_report(p, w, o("w*2"), [Ordinal(i) for i in range(1, 10)])
        assert not report.ok
        bad = report.failures()
        assert bad and all(r.clause_c == "fail" for r in bad)
        assert bad[0].gamma == Ordinal(1)


class TestEndpoint:
    def test_endpoint_recorded_without_assertion(self, canon):
        row = endpoint_row(canon, o("w*2"), o("w^2"))
        assert row.gamma == w
        assert row.clause_b in ("pass", "fail")


GRID = [o(s) for s in ("1", "2", "3", "w", "w+1", "w+2", "w*2", "w*2+1",
                       "w^2", "w^2+w", "w^2+w+3", "w^2*2")]


def test_grid_shape_and_splitting(canon):
    for i, alpha in enumerate(GRID):
        for beta in GRID[i:]:
            wt = walk_trace(canon, alpha, beta)
            assert wt.trace[-1] == alpha
            assert all(wt.trace[k + 1] < wt.trace[k]
                       for k in range(len(wt.trace) - 1))
            assert wt.steps == len(wt.code)
            for pos in range(1, len(wt.trace) - 1):
                mid = wt.trace[pos]
                assert wt.code == (walk_trace(canon, alpha, mid).code
                                   + walk_trace(canon, mid, beta).code)
                assert pos == rho2(canon, mid, beta)


def test_avoidance_forces_lambda_agreement():
    # a provider whose limit clubs dodge S pins lambda_bar to lambda on S
    s = [o("w+1"), o("w*2+3")]
    specs = [
        TableSpec(o("w*2"), prefix=(Ordinal(5),), tails=((o("w+2"), ONE),)),
        TableSpec(o("w*3"), prefix=(), tails=((o("w*2+4"), ONE),)),
    ]
    p = table_provider(specs, THETA, fallback=True)
    limits = [g for g in GRID if classify(g)[0] == "limit"]
    assert avoid_check(p, s, limits).clean
    for alpha in s:
        for beta in GRID:
            if ord_cmp(alpha, beta) >= 0:
                continue
            wt = walk_trace(p, alpha, beta)
            assert wt.lam == wt.lam_bar


@settings(max_examples=150, deadline=None)
@given(ordinals(), ordinals())
def test_walk_shape_property(a, b):
    p = canonical_provider(THETA)
    if a.is_zero() or ord_cmp(a, b) > 0 or ord_cmp(b, THETA) >= 0:
        return
    wt = walk_trace(p, a, b)
    assert wt.trace[0] == b and wt.trace[-1] == a
    assert wt.steps == len(wt.code)
    assert wt.lam <= a
    assert wt.lam_bar < a or (a == b and wt.lam_bar == ZERO)
