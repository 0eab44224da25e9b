import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexchain import chains, checks, fixpoint
from lexchain.chains import (
    EMPTY_MAP,
    ExtBool,
    Fin,
    Fix,
    Kind,
    MapElem,
    Omega,
    OmegaStar,
    Ordering,
    Pow,
    StageElem,
    compare,
    last,
    predecessor,
)
from lexchain.errors import CheckFailed, HypothesisFailed, NoTailWitness, NotSolvable, WrongSegment
from lexchain.fixpoint import (
    iso_from,
    iso_to,
    minimal_embed,
    normalize,
    power_solution,
    shift_iso,
    simultaneous,
    solve,
    stage_chain,
    stage_embed,
    tail_witness,
    verify_special,
)
from lexchain.lexpower import Embedding, Iso, lift
from lexchain.sampling import sample_many
from support import elements, f, n, s

EQ1, EQ2, EQ3 = Kind.EQ1, Kind.EQ2, Kind.EQ3
INSTANCES = [
    pytest.param(EQ1, Fin(2), f(1), id="eq1-fin2"),
    pytest.param(EQ1, Fin(3), f(1), id="eq1-fin3"),
    pytest.param(EQ2, OmegaStar(), s(0), id="eq2-star"),
    pytest.param(EQ3, Fin(3), f(2), id="eq3-fin3"),
    pytest.param(EQ3, OmegaStar(), s(2), id="eq3-star"),
]


def m(*pairs):
    return MapElem(tuple(pairs))


class TestStageEmbed:
    def test_top_to_top(self):
        assert stage_embed(EQ1, Fin(2), f(1), 0)(f(1)) == EMPTY_MAP

    def test_lower_element(self):
        assert stage_embed(EQ1, Fin(2), f(1), 0)(f(0)) == m((f(1), f(0)))

    def test_order_on_stage_zero(self):
        e = stage_embed(EQ1, Fin(3), f(2), 0)
        xs = list(chains.enumerate(stage_chain(EQ1, Fin(3), f(2), 0)))
        assert checks.check_order_preserving(e, xs) == 3

    def test_eq3_hypothesis(self):
        with pytest.raises(HypothesisFailed):
            stage_embed(EQ3, Omega(), n(0), 0)


class TestNormalize:
    def test_reduces_embedded(self):
        e0 = stage_embed(EQ1, Fin(2), f(1), 0)
        assert normalize(EQ1, Fin(2), f(1), StageElem(1, e0(f(0)))) == StageElem(0, f(0))

    def test_idempotent_at_zero(self):
        assert normalize(EQ1, Fin(2), f(1), StageElem(0, f(0))) == StageElem(0, f(0))

    def test_stage_two(self):
        e0 = stage_embed(EQ1, Fin(2), f(1), 0)
        e1 = stage_embed(EQ1, Fin(2), f(1), 1)
        x = m((f(0), f(0)))  # support below the top of stage 0: not in the image of e0
        assert e0.inverse(x) is None
        lifted = lift(e0, Fin(2), f(1))
        assert e1(x) == lifted(x)
        assert normalize(EQ1, Fin(2), f(1), StageElem(2, e1(x))) == StageElem(1, x)


class TestIso:
    def test_zero_to_top(self):
        assert iso_to(EQ1, Fin(2), f(1), EMPTY_MAP) == last(Fix(EQ1, Fin(2), f(1)))

    def test_trivial_solution(self):
        sol = solve(EQ1, Fin(2), f(0))
        assert sol.trivial
        assert list(chains.enumerate(sol.gamma)) == [iso_to(EQ1, Fin(2), f(0), EMPTY_MAP)]
        assert iso_from(EQ1, Fin(2), f(0), StageElem(0, f(0))) == EMPTY_MAP

    def test_round_trip_example(self):
        x = m((StageElem(0, f(1)), f(0)))
        g = iso_to(EQ1, Fin(2), f(1), x)
        assert g == StageElem(0, f(0))
        assert iso_from(EQ1, Fin(2), f(1), g) == x

    def test_top_back_to_zero(self):
        assert iso_from(EQ1, Fin(2), f(1), StageElem(0, f(1))) == EMPTY_MAP

    def test_wrong_segment(self):
        with pytest.raises(WrongSegment):
            iso_to(EQ1, Fin(3), f(1), m((StageElem(0, f(1)), f(2))))
        with pytest.raises(WrongSegment):
            iso_to(EQ3, Fin(3), f(2), EMPTY_MAP)


class TestSolve:
    def test_eq2_zero_not_last(self):
        with pytest.raises(NotSolvable, match="zero not last"):
            solve(EQ2, Fin(2), f(0))

    def test_eq3_fin3(self):
        sol = solve(EQ3, Fin(3), f(2))
        assert list(chains.enumerate(stage_chain(EQ3, Fin(3), f(2), 0))) == [f(0), f(1)]
        assert last(sol.gamma) == StageElem(0, f(1))

    def test_eq3_least_zero(self):
        with pytest.raises(NotSolvable, match="no last element below zero"):
            solve(EQ3, Omega(), n(0))


class TestShift:
    gamma = Fix(EQ1, OmegaStar(), s(0))

    def test_top_moves_down(self):
        sh = shift_iso(self.gamma, tail_witness(self.gamma))
        assert sh.to(StageElem(0, s(0))) == StageElem(0, s(1))

    def test_non_tail_fixed(self):
        sh = shift_iso(self.gamma, tail_witness(self.gamma))
        g = StageElem(1, m((StageElem(0, s(3)), s(1))))
        assert sh.to(g) == g and sh.from_(g) == g

    def test_order_across_boundary(self):
        sh = shift_iso(self.gamma, tail_witness(self.gamma))
        xs = sample_many(self.gamma, 200, seed=5)
        assert checks.check_order_preserving(sh.to, xs) > 50

    def test_no_tail(self):
        assert tail_witness(Fin(2)) is None
        with pytest.raises(NoTailWitness):
            shift_iso(Fin(2), None)


class TestSimultaneous:
    def test_omegastar(self):
        sim = simultaneous(OmegaStar(), s(0))
        assert isinstance(sim.iso3, Iso)
        src = sample_many(sim.iso3.to.source, 100, seed=1)
        checks.check_round_trip(sim.iso3, src, sample_many(sim.gamma, 100, seed=2))

    def test_finite_base(self):
        with pytest.raises(HypothesisFailed, match="no ω\\* tail"):
            simultaneous(Fin(2), f(1))

    def test_both_conditions_named(self):
        with pytest.raises(HypothesisFailed, match="zero not last; no ω\\* tail"):
            simultaneous(Fin(2), f(0))

    def test_tail_of_finite_extension(self):
        # omega* with a point below zero still ends in omega*
        sim = simultaneous(Pow(OmegaStar(), s(0), Fin(2)), EMPTY_MAP)
        assert sim.tail(chains.StarIdx(0)) == last(sim.gamma)


class TestMinimal:
    def test_self_is_identity(self):
        sol = solve(EQ2, Fin(2), f(1))
        emb = minimal_embed(Fin(2), f(1), sol)
        for g in sample_many(sol.gamma, 50, seed=7):
            assert emb(g) == g

    def test_stage_zero(self):
        sol = solve(EQ2, OmegaStar(), s(0))
        other = power_solution(sol)
        emb = minimal_embed(OmegaStar(), s(0), other)
        for k in range(4):
            d = chains.StarIdx(k)
            want = other.iso.to(MapElem(((last(other.gamma), d),)) if k else EMPTY_MAP)
            assert emb(StageElem(0, d)) == want

    def test_order_on_pairs(self):
        sol = solve(EQ2, OmegaStar(), s(0))
        emb = minimal_embed(OmegaStar(), s(0), power_solution(sol))
        xs = sample_many(sol.gamma, 100, seed=8)
        checks.check_pairwise(emb, xs, 100, seed=9)

    def test_rejects_other_equation(self):
        with pytest.raises(HypothesisFailed):
            minimal_embed(Fin(2), f(1), solve(EQ1, Fin(2), f(1)))


class TestVerifySpecial:
    def test_stage_zero_rule(self):
        sol = solve(EQ2, Fin(2), f(1))
        emb = verify_special(Fin(2), f(1), sol)
        top = last(sol.gamma)
        assert emb(f(0)) == sol.iso.to(m((top, f(0))))
        assert emb(f(1)) == top

    def test_power_copy(self):
        sol = power_solution(solve(EQ2, OmegaStar(), s(0)))
        emb = verify_special(OmegaStar(), s(0), sol)
        assert emb.final_segment

    def test_broken_solution_reported(self):
        sol = solve(EQ2, Fin(2), f(1))
        top = last(sol.gamma)
        flat = Embedding(sol.iso.to.source, sol.gamma, lambda x: top, lambda g: EMPTY_MAP)
        bad = fixpoint.Solution(EQ2, Fin(2), f(1), sol.gamma, Iso.of(flat))
        with pytest.raises(CheckFailed) as info:
            verify_special(Fin(2), f(1), bad)
        assert info.value.offending


# -- properties ------------------------------------------------------------------


@pytest.mark.parametrize("kind,base,zero", INSTANCES)
@pytest.mark.parametrize("stage", [0, 1, 2])
def test_stage_embed_final_segment(kind, base, zero, stage):
    e = stage_embed(kind, base, zero, stage)
    xs = sample_many(e.source, 60, seed=stage, depth=stage)
    ys = sample_many(e.target, 60, seed=stage + 10, depth=stage + 1)
    checks.check_order_preserving(e, xs)
    checks.check_final_segment(e, xs, ys)


@pytest.mark.parametrize("kind,base,zero", INSTANCES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_normalize_idempotent_and_compare_invariant(kind, base, zero, data):
    gamma = Fix(kind, base, zero)
    a, b = data.draw(elements(gamma)), data.draw(elements(gamma))
    assert normalize(kind, base, zero, a) == a
    t = fixpoint.tower(gamma)
    # raise both to a higher stage without normalizing: same comparison
    k = max(a.n, b.n) + 1
    ra, rb = StageElem(k, t.raise_to(a.inner, a.n, k)), StageElem(k, t.raise_to(b.inner, b.n, k))
    assert normalize(kind, base, zero, ra) == a
    assert t.compare(ra, rb) is compare(gamma, a, b)


@pytest.mark.parametrize("kind,base,zero", INSTANCES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_iso_round_trip_and_order(kind, base, zero, data):
    sol = solve(kind, base, zero)
    src = sol.iso.to.source
    x, y = data.draw(elements(src)), data.draw(elements(src))
    gx, gy = iso_to(kind, base, zero, x), iso_to(kind, base, zero, y)
    assert iso_from(kind, base, zero, gx) == x
    assert compare(src, x, y) is compare(sol.gamma, gx, gy)
    g = data.draw(elements(sol.gamma))
    assert iso_to(kind, base, zero, iso_from(kind, base, zero, g)) == g


@pytest.mark.parametrize("base,zero", [(Fin(2), f(1)), (OmegaStar(), s(0)), (Fin(3), f(2))])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_zero_is_last_in_eq2_power(base, zero, data):
    power = Pow(base, zero, Fix(EQ2, base, zero))
    x = data.draw(elements(power))
    assert compare(power, x, EMPTY_MAP) is not Ordering.GREATER


GRID = [(Fin(k), f(i)) for k in range(1, 5) for i in range(k)]
GRID += [(Omega(), n(i)) for i in range(3)] + [(OmegaStar(), s(i)) for i in range(3)]


@pytest.mark.parametrize("base,zero", GRID)
def test_eq3_decision_matches_predecessor(base, zero):
    has_pred = predecessor(base, zero) is not None
    try:
        solve(EQ3, base, zero)
        solvable = True
    except NotSolvable:
        solvable = False
    assert solvable == has_pred


@pytest.mark.parametrize("base,zero", GRID)
def test_eq2_decision_matches_zero_last(base, zero):
    try:
        solve(EQ2, base, zero)
        solvable = True
    except NotSolvable:
        solvable = False
    assert solvable == (chains.is_last(base, zero) is ExtBool.TRUE)


def test_iso3_is_shift_after_iso2():
    sim = simultaneous(OmegaStar(), s(0))
    for x in sample_many(sim.iso3.to.source, 100, seed=11):
        assert sim.iso3.to(x) == sim.shift.from_(sim.iso2.to(x))


class TestSolutionAs:
    def test_eq1_as_eq2(self):
        sol = fixpoint.solution_as(solve(EQ1, Fin(2), f(1)), EQ2)
        assert sol.kind is EQ2 and sol.iso.to.source == Pow(Fin(2), f(1), sol.gamma)
        xs = sample_many(sol.iso.to.source, 50, seed=4)
        checks.check_round_trip(sol.iso, xs)

    def test_needs_zero_last(self):
        with pytest.raises(HypothesisFailed, match="zero not last"):
            fixpoint.solution_as(solve(EQ1, Fin(3), f(1)), EQ2)

    def test_eq3_not_interchangeable(self):
        with pytest.raises(HypothesisFailed):
            fixpoint.solution_as(solve(EQ1, Fin(2), f(1)), EQ3)
