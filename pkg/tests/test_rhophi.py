import pytest

from walkslab.cseq import TableSpec, canonical_provider, table_provider
from walkslab.errors import InfiniteWindowError, ValidationError, WalkslabError
from walkslab.ordinal import OMEGA, ONE, ZERO, Ordinal, ord_cmp, parse_ordinal
from walkslab.rhophi import PhiFamily, capital_lambda, phi_eval, rho_phi
from walkslab.walks import walk_trace

w = OMEGA
o = parse_ordinal
THETA = o("w^3")
W2 = o("w*2")


@pytest.fixture(scope="module")
def graded():
    """theta = w, one declared point w*2 with ladder s(n) = w+n, and the
    full club on w*2; canonical clubs everywhere else."""
    spec = TableSpec(W2, tails=((ZERO, ONE), (w, ONE)), order_type=W2)
    provider = table_provider([spec], THETA, fallback=True)
    family = PhiFamily(w, {W2: (w, ONE)})
    return provider, family


class TestPhiEval:
    def test_constant_zero_off_the_points(self, graded):
        _, fam = graded
        assert phi_eval(fam, o("w^2"), o("w+9")) == ZERO

    def test_least_index(self, graded):
        _, fam = graded
        assert phi_eval(fam, W2, o("w+2")) == Ordinal(2)

    def test_below_ladder_base(self, graded):
        _, fam = graded
        assert phi_eval(fam, W2, Ordinal(7)) == ZERO
        assert phi_eval(fam, W2, w) == ZERO

    def test_requires_gamma_below_point(self, graded):
        _, fam = graded
        with pytest.raises(WalkslabError):
            phi_eval(fam, W2, o("w*2"))

    def test_ladder_must_converge_to_point(self):
        with pytest.raises(ValidationError):
            PhiFamily(w, {o("w*3"): (w, ONE)})


class TestCapitalLambda:
    def test_divisible_position(self, graded):
        provider, _ = graded
        assert capital_lambda(provider, w, o("w+3"), W2) == w

    def test_empty_intersection_convention(self):
        spec = TableSpec(W2, tails=((o("w+4"), ONE),), prefix=(o("w+2"),))
        p = table_provider([spec], THETA, fallback=True)
        assert capital_lambda(p, w, o("w+1"), W2) == ZERO

    def test_min_club_always_qualifies(self):
        canon = canonical_provider(THETA)
        # C_{w^2} = {w*n}; only position 0 is divisible below w*2+1
        assert capital_lambda(canon, w, o("w*2"), o("w^2")) == ZERO
        assert canon.member(o("w^2"), ZERO)

    def test_infinite_window_rejected(self, graded):
        provider, _ = graded
        with pytest.raises(InfiniteWindowError):
            capital_lambda(provider, o("w*2"), o("w+3"), W2)


class TestRhoPhi:
    def test_base_case(self, graded):
        provider, fam = graded
        assert rho_phi(provider, fam, w, w) == ZERO

    def test_graded_value(self, graded):
        # independent bottom-up evaluation of the recursion gives 2:
        # the only nonzero term is phi at sup(C_{w*2} intersect (w+3)) = w+2
        provider, fam = graded
        assert rho_phi(provider, fam, o("w+3"), W2) == Ordinal(2)

    def test_successor_off_points_is_zero(self, graded):
        provider, fam = graded
        assert rho_phi(provider, fam, Ordinal(5), Ordinal(6)) == ZERO
        assert rho_phi(provider, fam, w, o("w+1")) == ZERO

    def test_range_is_finite_for_theta_omega(self, graded):
        provider, fam = graded
        memo = {}
        probes = [(Ordinal(2), w), (o("w+1"), W2), (o("w+3"), o("w^2")),
                  (o("w*2"), o("w^2+w")), (o("w^2"), o("w^2*2"))]
        for a, b in probes:
            assert rho_phi(provider, fam, a, b, memo).is_finite()

    def test_memoization_transparent(self, graded):
        provider, fam = graded
        pairs = [(o("w+3"), W2), (o("w+1"), o("w^2")), (Ordinal(2), o("w*2+4"))]
        fresh = [rho_phi(provider, fam, a, b) for a, b in pairs]
        shared = {}
        assert fresh == [rho_phi(provider, fam, a, b, shared) for a, b in pairs]

    def test_monotone_along_walks(self, graded):
        provider, fam = graded
        memo = {}
        grid = [o(s) for s in ("1", "2", "3", "w", "w+1", "w+3", "w*2",
                               "w*2+1", "w^2", "w^2+w", "w^2*2")]
        checked = 0
        for i, alpha in enumerate(grid):
            for beta in grid[i + 1:]:
                wt = walk_trace(provider, alpha, beta)
                for delta in wt.trace[1:-1]:
                    checked += 1
                    assert ord_cmp(rho_phi(provider, fam, alpha, beta, memo),
                                   rho_phi(provider, fam, alpha, delta, memo)) >= 0
        assert checked > 10
