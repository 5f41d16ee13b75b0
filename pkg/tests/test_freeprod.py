import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgplab.algebra import InvalidParams, UnassignedSymbol, chain_semilattice
from sgplab.eqsys import parse, satisfies
from sgplab.freeprod import (
    CARRIER,
    FREE,
    FreeDependencyViolation,
    FreeProductElement,
    RunProductMismatch,
    ScriptBudget,
    ScriptFormatError,
    SkeletonMismatch,
    WitnessScript,
    canonical_check,
    carrier,
    extract_epsilon_c,
    fp_multiply,
    free_word,
    max_consecutive_variables,
    parse_ws,
    search_scripts,
)

CHAIN2 = chain_semilattice(2)

# the alternating five-quantifier example used throughout: top element is s1,
# bottom element is s2 of the worked script
EPS_TEXT = (
    "forall a1 exists x1 forall a2 exists x2, x3 : "
    "a1 a2 x1 x2 x3 a1 = a1 x2 a1 a2 x3 x1 & a1 x3 a1 = a1 x3 x3 a1"
)
EPS = parse(EPS_TEXT)
WORKED_SCRIPT = WitnessScript.of({
    "x1": FreeProductElement(((CARRIER, 1), (FREE, (1,)))),
    "x2": FreeProductElement(((FREE, (2,)), (CARRIER, 1))),
    "x3": carrier(0),
})


def elements(max_letter=3, max_carrier=2):
    seg_free = st.lists(st.integers(1, max_letter), min_size=1, max_size=3).map(
        lambda w: (FREE, tuple(w))
    )
    seg_car = st.integers(0, max_carrier - 1).map(lambda e: (CARRIER, e))

    @st.composite
    def build(draw):
        length = draw(st.integers(1, 4))
        start_free = draw(st.booleans())
        segs = []
        for i in range(length):
            want_free = (i % 2 == 0) == start_free
            segs.append(draw(seg_free if want_free else seg_car))
        return FreeProductElement(tuple(segs))

    return build()


class TestNormalForm:
    def test_alternation_enforced(self):
        with pytest.raises(InvalidParams):
            FreeProductElement(((FREE, (1,)), (FREE, (2,))))
        with pytest.raises(InvalidParams):
            FreeProductElement(((CARRIER, 0), (CARRIER, 1)))
        with pytest.raises(InvalidParams):
            FreeProductElement(((FREE, ()),))
        with pytest.raises(InvalidParams):
            FreeProductElement(())

    def test_equality_is_segment_identity(self):
        a = FreeProductElement(((FREE, (1, 2)),))
        b = fp_multiply(free_word([1]), free_word([2]), CHAIN2)
        assert a == b


class TestMultiply:
    def test_junction_carrier_merge(self):
        x = FreeProductElement(((FREE, (1,)), (CARRIER, 1)))
        y = FreeProductElement(((CARRIER, 0), (FREE, (2,))))
        out = fp_multiply(x, y, CHAIN2)
        assert out.segments == ((FREE, (1,)), (CARRIER, 0), (FREE, (2,)))

    def test_free_concatenation(self):
        assert fp_multiply(free_word([1]), free_word([2]), CHAIN2).segments == ((FREE, (1, 2)),)

    def test_carrier_product(self):
        assert fp_multiply(carrier(1), carrier(0), CHAIN2).segments == ((CARRIER, 0),)

    def test_carrier_range_checked(self):
        with pytest.raises(InvalidParams):
            fp_multiply(carrier(5), carrier(0), CHAIN2)

    @settings(max_examples=100)
    @given(elements(), elements(), elements())
    def test_associative(self, x, y, z):
        S = chain_semilattice(2)
        left = fp_multiply(fp_multiply(x, y, S), z, S)
        right = fp_multiply(x, fp_multiply(y, z, S), S)
        assert left == right


class TestCanonicalCheck:
    def test_worked_example(self):
        rs = canonical_check(CHAIN2, EPS, WORKED_SCRIPT)
        assert rs.equalities == (((1, 0), (0, 1)), ((0,), (0, 0)))
        assert extract_epsilon_c(rs).to_text() == \
            "exists xs0, xs1 : xs1 xs0 = xs0 xs1 & xs0 = xs0 xs0"

    def test_worked_example_satisfied_in_carrier(self):
        # success of the canonical check entails satisfaction in the carrier
        assert satisfies(CHAIN2, EPS).satisfied

    def test_free_dependency_violation(self):
        script = WitnessScript.of({
            "x1": free_word([2]),
            "x2": free_word([2]),
            "x3": carrier(0),
        })
        with pytest.raises(FreeDependencyViolation) as exc:
            canonical_check(CHAIN2, EPS, script)
        assert (exc.value.variable, exc.value.letter) == ("x1", 2)

    def test_convention_system_for_no_runs(self):
        e = parse("forall a exists x : a x = x a")
        rs = canonical_check(CHAIN2, e, WitnessScript.of({"x": free_word([1])}))
        assert rs.equalities == ()
        assert extract_epsilon_c(rs).to_text() == "exists x : x = x"

    def test_trivial_runs_pruned_to_convention(self):
        e = parse("forall a exists x, y : a x a = a y a")
        rs = canonical_check(CHAIN2, e, WitnessScript.of({"x": carrier(1), "y": carrier(1)}))
        assert rs.equalities == ()
        assert extract_epsilon_c(rs).to_text() == "exists x : x = x"

    def test_skeleton_mismatch(self):
        e = parse("forall a exists x : a = a x a")
        with pytest.raises(SkeletonMismatch) as exc:
            canonical_check(CHAIN2, e, WitnessScript.of({"x": free_word([1])}))
        assert exc.value.equality_index == 0

    def test_run_product_mismatch(self):
        e = parse("forall a exists x, y : a x a = a y a")
        script = WitnessScript.of({"x": carrier(1), "y": carrier(0)})
        with pytest.raises(RunProductMismatch) as exc:
            canonical_check(CHAIN2, e, script)
        assert (exc.value.equality_index, exc.value.run_index) == (0, 0)

    def test_missing_assignment(self):
        with pytest.raises(UnassignedSymbol):
            canonical_check(CHAIN2, EPS, WitnessScript.of({"x1": free_word([1])}))

    def test_success_entails_satisfaction(self, corpus_upto_3):
        # retraction property: a passing script means the carrier satisfies
        # the system; exercised over searched scripts for a cheap sentence
        e = parse("forall a exists x : a x a = a a x")
        for S in corpus_upto_3[:20]:
            found = search_scripts(S, e, ScriptBudget(2, 2))
            if found.script is not None:
                assert satisfies(S, e).satisfied


class TestExtraction:
    def test_epsilon_c_holds_in_carrier(self):
        rs = canonical_check(CHAIN2, EPS, WORKED_SCRIPT)
        assert satisfies(CHAIN2, rs.system).satisfied

    def test_epsilon_c_entails_the_system(self, corpus_upto_3):
        rs = canonical_check(CHAIN2, EPS, WORKED_SCRIPT)
        eps_c = extract_epsilon_c(rs)
        for U in corpus_upto_3:
            if satisfies(U, eps_c).satisfied:
                assert satisfies(U, EPS).satisfied

    def test_run_length_bounded_by_variable_blocks(self):
        bound = max_consecutive_variables(EPS)
        assert bound == 3
        rs = canonical_check(CHAIN2, EPS, WORKED_SCRIPT)
        for lhs, rhs in rs.equalities:
            assert len(lhs) <= bound and len(rhs) <= bound


class TestSearch:
    def test_commuting_witness_found(self, corpus_upto_3):
        e = parse("forall a exists x : a x = x a")
        for S in corpus_upto_3[:10]:
            found = search_scripts(S, e, ScriptBudget(1, 1))
            assert found.script is not None
            assert found.script.mapping["x"] == free_word([1])

    def test_worked_example_has_a_script(self):
        found = search_scripts(CHAIN2, EPS, ScriptBudget(2, 2))
        assert found.script is not None
        rs = canonical_check(CHAIN2, EPS, found.script)
        assert satisfies(CHAIN2, rs.system).satisfied

    def test_regularity_has_no_script(self):
        e = parse("forall a exists x : a = a x a")
        found = search_scripts(CHAIN2, e, ScriptBudget(3, 3))
        assert found.script is None
        assert found.systems == ()

    def test_collected_systems_finite_and_bounded(self):
        e = parse("forall a exists x : a x a = a x x a")
        found = search_scripts(CHAIN2, e, ScriptBudget(2, 2), collect=True)
        assert found.script is not None
        # one idempotency requirement per carrier element, nothing else fits
        keys = {system.equalities for system in found.systems}
        assert keys == {
            ((("xs0",), ("xs0", "xs0")),),
            ((("xs1",), ("xs1", "xs1")),),
        }
        bound = max_consecutive_variables(e)
        assert bound == 2
        for system in found.systems:
            for lhs, rhs in system.equalities:
                assert len(lhs) <= bound and len(rhs) <= bound
        # a larger budget keeps the collection finite and can only grow it
        bigger = search_scripts(CHAIN2, e, ScriptBudget(3, 3), collect=True)
        assert len(bigger.systems) >= len(found.systems)
        assert len(bigger.systems) <= 10


class TestScriptFormat:
    def test_round_trip(self):
        text = WORKED_SCRIPT.render()
        again = parse_ws(text)
        assert again == WORKED_SCRIPT

    def test_parse(self):
        script = parse_ws("# worked witness\nx1 = s1 A1\nx2 = A2 s1\nx3 = s0\n")
        assert script == WORKED_SCRIPT

    @pytest.mark.parametrize("bad", [
        "",
        "x1 = \n",
        "x1 = q3\n",
        "x1 = s0 s1\n",
        "x1 = A0\n",
        "x1 A1\n",
    ])
    def test_errors(self, bad):
        with pytest.raises(ScriptFormatError):
            parse_ws(bad)
