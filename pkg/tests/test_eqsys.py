import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgplab.algebra import (
    a21,
    chain_semilattice,
    cyclic_group,
    evaluate_word,
    inverses_of,
    left_zero,
)
from sgplab.eqsys import (
    CATALOG_TEXTS,
    DuplicateQuantification,
    EmptyWord,
    EquationSyntaxError,
    EquationSystem,
    UnknownId,
    UnquantifiedSymbol,
    catalog,
    catalog_ids,
    parse,
    render,
    satisfies,
)

LZ2 = left_zero(2)
C2 = cyclic_group(2)


def brute_satisfies(S, e, env0=None):
    """Independent oracle: plain recursion, no pruning, equalities checked at
    the leaves only. Optionally start from a preset partial assignment."""
    n = S.order
    syms = e.symbols
    env = dict(env0 or {})

    def ev(word):
        acc = env[word[0]]
        for s in word[1:]:
            acc = S.table[acc][env[s]]
        return acc

    def rec(i):
        if i == len(syms):
            return all(ev(l) == ev(r) for l, r in e.equalities)
        s = syms[i]
        if s in env:
            return rec(i + 1)
        results = []
        for v in range(n):
            env[s] = v
            results.append(rec(i + 1))
            del env[s]
        return all(results) if e.quantifier_of[s] == "forall" else any(results)

    return rec(0)


class TestParse:
    def test_basic_system(self):
        e = parse("forall a exists x : a = a x a & a x = x a")
        assert e.prefix == (("forall", ("a",)), ("exists", ("x",)))
        assert e.equalities == ((("a",), ("a", "x", "a")), (("a", "x"), ("x", "a")))

    def test_exists_forall(self):
        e = parse("exists x forall a : a x = a & x a = a")
        assert e.prefix == (("exists", ("x",)), ("forall", ("a",)))

    def test_unquantified(self):
        with pytest.raises(UnquantifiedSymbol):
            parse("forall a : a = a x a")

    def test_duplicate(self):
        with pytest.raises(DuplicateQuantification):
            parse("forall a exists a : a = a a")

    def test_syntax_error_position(self):
        with pytest.raises(EquationSyntaxError) as exc:
            parse("forall a : a = ")
        assert exc.value.position == len("forall a : a = ")

    def test_bad_token(self):
        with pytest.raises(EquationSyntaxError):
            parse("forall a : a = a Q a")
        with pytest.raises(EquationSyntaxError):
            parse("forall a : a = a + a")

    def test_comments(self):
        e = parse("# heading\nforall a # params\nexists x : a = a x a\n")
        assert e.prefix == (("forall", ("a",)), ("exists", ("x",)))

    def test_merges_adjacent_blocks(self):
        e = parse("forall a forall b exists x : a = a x b")
        assert e.prefix == (("forall", ("a", "b")), ("exists", ("x",)))

    def test_empty_word_direct_construction(self):
        with pytest.raises(EmptyWord):
            EquationSystem((("forall", ("a",)),), ((("a",), ()),))


class TestDesugar:
    def test_in_e(self):
        e = parse("exists x : x in E")
        assert e.equalities == ((("x", "x"), ("x",)),)

    def test_in_v(self):
        e = parse("forall a exists x : x in V(a)")
        assert e.equalities == (
            (("a", "x", "a"), ("a",)),
            (("x", "a", "x"), ("x",)),
        )

    def test_in_g_appends_fresh_existential(self):
        e = parse("forall a exists x : a x in G")
        assert e.prefix == (("forall", ("a",)), ("exists", ("x", "y")))
        w = ("a", "x")
        assert e.equalities == (
            (w + ("y",) + w, w),
            (("y",) + w + ("y",), ("y",)),
            (w + ("y",), ("y",) + w),
        )

    def test_rr_rl(self):
        e = parse("forall a, b exists x : a rR x & x rL b")
        assert e.prefix == (("forall", ("a", "b")), ("exists", ("x", "u", "v", "u2", "v2")))
        assert e.equalities == (
            (("a", "u"), ("x",)),
            (("x", "v"), ("a",)),
            (("u2", "x"), ("b",)),
            (("v2", "b"), ("x",)),
        )

    def test_fresh_names_avoid_collisions(self):
        e = parse("forall y exists x : y x in G")
        fresh = e.prefix[-1][1][-1]
        assert fresh == "y2"


class TestCatalog:
    def test_eq6(self):
        e = catalog("eq6.cs")
        assert e.prefix == (("forall", ("a", "b")), ("exists", ("x",)))
        assert e.equalities == ((("a",), ("a", "b", "x", "b", "a")),)

    def test_eq9_seven_equalities(self):
        e = catalog("eq9.inv")
        assert len(e.equalities) == 7
        assert e.prefix == (("forall", ("a", "b")), ("exists", ("x", "u", "v")))

    def test_unknown(self):
        with pytest.raises(UnknownId):
            catalog("nosuch")

    def test_all_ids_parse(self):
        for i in catalog_ids():
            e = catalog(i)
            assert e.equalities
        assert len(catalog_ids()) == len(CATALOG_TEXTS)


class TestRoundTrip:
    def test_catalog_round_trips(self):
        for i in catalog_ids():
            e = catalog(i)
            again = parse(render(e))
            assert again.prefix == e.prefix
            assert again.equalities == e.equalities

    @settings(max_examples=80)
    @given(st.data())
    def test_random_systems_round_trip(self, data):
        nsyms = data.draw(st.integers(1, 4))
        syms = [f"v{i}" for i in range(nsyms)]
        prefix = tuple(
            (data.draw(st.sampled_from(["forall", "exists"])), (s,)) for s in syms
        )
        words = st.lists(st.sampled_from(syms), min_size=1, max_size=4).map(tuple)
        eqs = tuple(
            (data.draw(words), data.draw(words))
            for _ in range(data.draw(st.integers(1, 3)))
        )
        e = EquationSystem(prefix, eqs)
        again = parse(render(e))
        assert again.prefix == e.prefix
        assert again.equalities == e.equalities


class TestSatisfies:
    def test_groups_satisfy_eq4(self):
        assert satisfies(C2, catalog("eq4.g")).satisfied

    def test_left_zero_left_vs_right(self):
        assert satisfies(LZ2, catalog("eq3.lg")).satisfied
        v = satisfies(LZ2, catalog("eq3.rg"))
        assert not v.satisfied
        assert v.counterexample == {"a": 0, "b": 1}

    def test_a21_not_in_eq15(self):
        assert not satisfies(a21(), catalog("eq15.B")).satisfied

    def test_witness_for_purely_existential(self):
        e = parse("exists x, y : x y = y x & x in E")
        v = satisfies(chain_semilattice(3), e)
        assert v.satisfied
        for lhs, rhs in e.equalities:
            assert evaluate_word(chain_semilattice(3), lhs, v.witness) == \
                evaluate_word(chain_semilattice(3), rhs, v.witness)

    def test_counterexample_pins_the_loss(self):
        e = catalog("eq4.g")
        v = satisfies(LZ2, e)
        assert not v.satisfied
        assert not brute_satisfies(LZ2, e, env0=v.counterexample)

    def test_stats_populated(self):
        v = satisfies(C2, catalog("eq2.reg"))
        assert v.nodes > 0
        assert v.elapsed >= 0

    def test_no_witness_when_alternating(self):
        v = satisfies(C2, catalog("eq2.reg"))
        assert v.witness is None and v.counterexample is None

    def test_matches_brute_force_on_corpus(self, corpus_upto_3):
        small_ids = [i for i in catalog_ids() if len(catalog(i).symbols) <= 4]
        for S in corpus_upto_3:
            for i in small_ids:
                e = catalog(i)
                assert satisfies(S, e).satisfied == brute_satisfies(S, e), (S, i)

    def test_matches_brute_force_all_ids_small_orders(self, corpus_upto_3):
        tiny = [S for S in corpus_upto_3 if S.order <= 2]
        for S in tiny:
            for i in catalog_ids():
                e = catalog(i)
                assert satisfies(S, e).satisfied == brute_satisfies(S, e), (S, i)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_matches_brute_force_on_random_systems(self, data):
        nsyms = data.draw(st.integers(1, 4))
        syms = [f"v{i}" for i in range(nsyms)]
        prefix = tuple(
            (data.draw(st.sampled_from(["forall", "exists"])), (s,)) for s in syms
        )
        words = st.lists(st.sampled_from(syms), min_size=1, max_size=3).map(tuple)
        eqs = tuple(
            (data.draw(words), data.draw(words))
            for _ in range(data.draw(st.integers(1, 2)))
        )
        e = EquationSystem(prefix, eqs)
        for S in (LZ2, C2, chain_semilattice(2)):
            assert satisfies(S, e).satisfied == brute_satisfies(S, e)


class TestCrossModule:
    def test_regularity_verdict_matches_inverses(self, corpus_upto_3):
        e = catalog("eq2.reg")
        for S in corpus_upto_3:
            all_nonempty = all(inverses_of(S, a) for a in S.elements())
            assert satisfies(S, e).satisfied == all_nonempty
