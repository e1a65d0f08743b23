import pytest

from walkslab.errors import ValidationError, WalkslabError
from walkslab.fpsets import FpSet, Part
from walkslab.ordinal import OMEGA, ONE, ZERO, Ordinal, parse_ordinal
from walkslab.twowalks import (
    Partition,
    SetCSeq,
    canonical_set_club,
    color_c,
    find_triples,
    fp_member,
    fp_restrict,
    fp_strict_sup,
    set_cseq_validate,
    step_color,
    triple_min,
    two_walk,
)

w = OMEGA
o = parse_ordinal


def fset(*texts):
    return FpSet([o(t) for t in texts])


@pytest.fixture
def cs():
    return SetCSeq()


class TestFpOps:
    def test_strict_sup_max_plus_one(self):
        assert fp_strict_sup(fset("1", "w")) == o("w+1")

    def test_strict_sup_of_ladder(self):
        assert fp_strict_sup(FpSet([(ZERO, w)])) == o("w^2")

    def test_restrict(self):
        assert fp_restrict(fset("1", "2", "3", "4", "6"), Ordinal(4)) == fset("1", "2", "3")

    def test_member(self):
        assert fp_member(FpSet([(Ordinal(5), ONE)]), Ordinal(11))
        assert not fp_member(FpSet([(Ordinal(5), ONE)]), Ordinal(3))


class TestCanonicalClubs:
    def test_singleton_rule(self):
        assert canonical_set_club(fset("1", "2")) == fset("2")

    def test_tail_of_x_rule(self):
        x = FpSet([o("1"), o("3"), (w, ONE)])
        assert canonical_set_club(x) == FpSet([(w, ONE)])

    def test_missing_presentation_without_derivation(self):
        cs = SetCSeq(derive=False)
        with pytest.raises(WalkslabError, match="missing club"):
            cs.club_for(fset("1", "2"))


class TestValidate:
    def test_singleton_rule_passes(self):
        assert set_cseq_validate(fset("1", "2"), fset("2")).ok

    def test_singleton_rule_enforced(self):
        report = set_cseq_validate(fset("1", "2"), fset("1"))
        assert not report.ok and "maximum" in report.problems[0]

    def test_one_point_per_gap(self):
        x = FpSet([(ZERO, w)])
        assert set_cseq_validate(x, FpSet([(w, w)])).ok

    def test_two_points_in_one_gap_fail_named(self):
        x = FpSet([(ZERO, w)])
        club = FpSet([Part(w, ONE, 2), Part(o("w*2"), w, None)])
        report = set_cseq_validate(x, club)
        assert not report.ok
        assert "gap [w, w*2)" in report.problems[0]

    def test_not_cofinal(self):
        x = FpSet([(ZERO, w)])
        report = set_cseq_validate(x, FpSet([(w, ONE)]))
        assert not report.ok and "cofinal" in " ".join(report.problems)

    def test_fine_step_violation_closed_form(self):
        x = FpSet([(ZERO, w)])
        report = set_cseq_validate(x, FpSet([(ZERO, ONE), (w, w)]))
        assert not report.ok and "finer" in report.problems[0]

    def test_misaligned_coarser_step_sampled(self):
        x = FpSet([(ZERO, w)])             # gaps [w*n, w*(n+1))
        club = FpSet([(ZERO, o("w*2"))])   # every other gap, step not aligned
        report = set_cseq_validate(x, club)
        assert report.ok and report.sampled is True


class TestTwoWalk:
    def test_mixed_walk(self, cs):
        x = fset("1", "w", "w+3")
        wt = two_walk(x, w, cs)
        assert wt.trace == (o("w+4"), o("w+3"), w)
        assert wt.rho2 == 2
        assert wt.pre_steps == (o("w+3"), w)

    def test_walk_to_max(self, cs):
        x = fset("1", "2", "9")
        wt = two_walk(x, Ordinal(9), cs)
        assert wt.trace == (Ordinal(10), Ordinal(9))
        assert wt.rho2 == 1

    def test_target_must_be_inside(self, cs):
        with pytest.raises(WalkslabError, match="target not in set"):
            two_walk(fset("1", "2"), Ordinal(7), cs)

    def test_ladder_walk_with_override(self):
        x = FpSet([(Ordinal(5), ONE)])  # {5+n}
        cs = SetCSeq([(x, FpSet([(Ordinal(8), ONE)]))])
        wt = two_walk(x, Ordinal(7), cs)
        assert wt.trace == (w, Ordinal(8), Ordinal(7))

    def test_code_is_top_down(self, cs):
        z = fset("1", "2", "3", "4", "6")
        wt = two_walk(z, Ordinal(3), cs)
        # ot(C_{z cap beta_i} cap 3) with singleton clubs: 0 except final step
        assert wt.code == (ZERO, ZERO, ZERO)
        wt2 = two_walk(z, ONE, cs)
        assert wt2.code[-1] == ZERO


class TestTripleMin:
    def test_worked_example(self, cs):
        x, y, z = fset("1", "2"), fset("1", "2", "3"), fset("1", "2", "3", "4", "6")
        assert triple_min(x, y, z, cs) == Ordinal(4)

    def test_degenerate_on_broken_chain(self, cs):
        x, y, z = fset("1", "2"), fset("1", "2", "3"), fset("1", "2", "3", "4", "6")
        assert triple_min(y, x, z, cs) == ZERO
        assert triple_min(x, x, z, cs) == ZERO

    def test_invariant_under_re_presentation(self, cs):
        x = FpSet([Part(ONE, ONE, 2)])
        x_alt = fset("1", "2")
        assert x == x_alt
        y, z = fset("1", "2", "3"), fset("1", "2", "3", "4", "6")
        assert triple_min(x, y, z, cs) == triple_min(x_alt, y, z, cs)

    def test_ladder_chain(self):
        a, b = fset("5"), fset("5", "6")
        lad = FpSet([(Ordinal(5), ONE)])
        cs = SetCSeq([(lad, FpSet([(Ordinal(8), ONE)]))])
        assert triple_min(a, b, lad, cs) == Ordinal(7)


class TestColoring:
    def test_color_from_cell(self, cs):
        part = Partition(((Ordinal(7), fset("4")),))
        x, y, z = fset("1", "2"), fset("1", "2", "3"), fset("1", "2", "3", "4", "6")
        assert color_c(x, y, z, part, cs) == Ordinal(7)

    def test_default_zero_off_cells(self, cs):
        part = Partition(((Ordinal(7), fset("9")),))
        x, y, z = fset("1", "2"), fset("1", "2", "3"), fset("1", "2", "3", "4", "6")
        assert color_c(x, y, z, part, cs) == ZERO

    def test_overlapping_cells_rejected(self):
        with pytest.raises(ValidationError, match="overlap"):
            Partition(((ZERO, fset("4")), (ONE, fset("4", "5"))))

    def test_step_color(self, cs):
        z = fset("1", "2", "3", "4", "6")
        part = Partition(((Ordinal(3), fset("4")),))
        assert step_color(Ordinal(3), 2, z, part, cs) == Ordinal(3)
        assert step_color(Ordinal(3), 9, z, part, cs) == ZERO
        assert step_color(Ordinal(3), 0, z, part, cs) == ZERO  # 7 not in cells


class TestFindTriples:
    def test_exhaustive_hits(self, cs):
        roster = [("x", fset("1", "2")), ("y", fset("1", "2", "3")),
                  ("z", fset("1", "2", "3", "4", "6"))]
        assert find_triples(roster, Ordinal(4), cs) == [("x", "y", "z")]

    def test_unachieved_target(self, cs):
        roster = [("x", fset("1", "2")), ("y", fset("1", "2", "3")),
                  ("z", fset("1", "2", "3", "4", "6"))]
        assert find_triples(roster, Ordinal(9), cs) == []

    def test_no_chains(self, cs):
        roster = [("a", fset("1")), ("b", fset("2")), ("c", fset("3"))]
        assert find_triples(roster, ZERO, cs) == []


def test_coherence_concatenation(cs):
    # trace-level form: above the overshoot, the walk to alpha extends the
    # walk to beta through the restriction
    x = fset("1", "2", "3", "4", "6", "9")
    targets = [Ordinal(i) for i in (1, 2, 3, 4, 6, 9)]
    walks = {a: two_walk(x, a, cs) for a in targets}
    checked = 0
    for bi, beta in enumerate(targets):
        for alpha in targets[:bi]:
            if walks[beta].lam >= alpha:
                continue
            tail = two_walk(x.restrict(beta), alpha, cs)
            assert walks[alpha].trace == walks[beta].trace + tail.trace[1:]
            checked += 1
    assert checked
