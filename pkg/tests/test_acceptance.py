"""Acceptance sweep: one test per criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines;
the order-5 stretch variants are behind the `slow` marker.
"""

import pytest

from sgplab.algebra import a21, chain_semilattice, parse_sgp
from sgplab.classes import classify, preinverse_profile, preinverse_witnesses
from sgplab.eqsys import catalog, catalog_ids, parse, satisfies
from sgplab.freeprod import (
    FreeProductElement,
    ScriptBudget,
    WitnessScript,
    canonical_check,
    carrier,
    extract_epsilon_c,
    search_scripts,
)
from sgplab.smallsemi import brute_force_canonical_set, get_corpus, verify_battery
from sgplab.wordeq import (
    DOES_NOT_HOLD,
    HOLDS,
    Budgets,
    counterexample_search,
    holds_in_all_semigroups,
    parikh_refute,
    witness_search,
)

ISO_COUNTS = {1: 1, 2: 5, 3: 24, 4: 188}
EQUIV_COUNTS = {1: 1, 2: 4, 3: 18, 4: 126}

CORE_BATTERIES = (
    "prop2.1", "eq7.sg", "prop2.2", "eq14", "lemma2.3", "prop2.6", "prop2.7",
    "cor2.8", "thm2.10", "cor2.11", "lemma2.12", "prop2.13", "bisimple",
)

EPS = parse(
    "forall a1 exists x1 forall a2 exists x2, x3 : "
    "a1 a2 x1 x2 x3 a1 = a1 x2 a1 a2 x3 x1 & a1 x3 a1 = a1 x3 x3 a1"
)
WORKED_SCRIPT = WitnessScript.of({
    "x1": FreeProductElement((("s", 1), ("f", (1,)))),
    "x2": FreeProductElement((("f", (2,)), ("s", 1))),
    "x3": carrier(0),
})


def _verdict(criterion: str, ok: bool) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}")
    assert ok, criterion


def test_criterion_1_enumeration_counts():
    ok = True
    for n, want in ISO_COUNTS.items():
        ok &= len(get_corpus(n, "isomorphism")) == want
    for n, want in EQUIV_COUNTS.items():
        ok &= len(get_corpus(n, "equivalence")) == want
    for mode in ("isomorphism", "equivalence"):
        oracle = brute_force_canonical_set(2, mode)
        mine = {bytes(v for row in S.table for v in row)
                for S in get_corpus(2, mode).entries}
        ok &= mine == oracle
    _verdict("1 enumeration counts (orders 1-4, both modes, order-2 oracle)", ok)


@pytest.mark.parametrize("battery_id", CORE_BATTERIES)
def test_criterion_2_batteries_order_4(battery_id):
    report = verify_battery(battery_id, 4)
    _verdict(f"2 battery {battery_id} zero mismatches at order <= 4",
             report.passed and report.items > 0)


def test_criterion_3_fixture_profile_vs_membership():
    S = a21()
    profile = preinverse_profile(S, S.identity())
    membership = satisfies(S, catalog("eq15.B")).satisfied
    _verdict("3 fixture passes profile yet fails eq15.B",
             profile.all_ok and not membership and not preinverse_witnesses(S))


def test_criterion_4_profile_battery():
    report = verify_battery("prop2.4", 4)
    witnessed = 0
    for n in range(1, 5):
        for S in get_corpus(n).entries:
            witnessed += len(preinverse_witnesses(S))
    _verdict("4 every pre-inverse witness of order <= 4 passes the profile",
             report.passed and witnessed > 0)


@pytest.mark.parametrize("battery_id,max_order", [
    ("closure.P", 3),
    ("closure.H", 4),
    ("closure.exist-up", 4),
])
def test_criterion_5_closure_suites(battery_id, max_order):
    report = verify_battery(battery_id, max_order)
    _verdict(f"5 {battery_id} zero violations at order <= {max_order}", report.passed)


def test_criterion_6_worked_free_product_example():
    S = chain_semilattice(2)  # s1 = top = 1, s2 = bottom = 0
    rs = canonical_check(S, EPS, WORKED_SCRIPT)
    eps_c = extract_epsilon_c(rs)
    ok = rs.equalities == (((1, 0), (0, 1)), ((0,), (0, 0)))
    ok &= eps_c.to_text() == "exists xs0, xs1 : xs1 xs0 = xs0 xs1 & xs0 = xs0 xs0"
    ok &= search_scripts(S, EPS, ScriptBudget(2, 2)).script is not None
    _verdict("6 worked canonical evaluation extracts the displayed system", ok)


def test_criterion_7_extraction_entails_the_system():
    S = chain_semilattice(2)
    eps_c = extract_epsilon_c(canonical_check(S, EPS, WORKED_SCRIPT))
    ok = satisfies(S, eps_c).satisfied
    for n in range(1, 5):
        for U in get_corpus(n).entries:
            if satisfies(U, eps_c).satisfied:
                ok &= satisfies(U, EPS).satisfied
    _verdict("7 every order <= 4 model of the extraction satisfies the system", ok)


def test_criterion_8_harness_determinations():
    ok = True
    v = holds_in_all_semigroups(parse("forall a exists x : a x = x a"))
    ok &= v.outcome == HOLDS

    v = holds_in_all_semigroups(parse("exists x : x x = x"))
    ok &= v.outcome == DOES_NOT_HOLD and v.parikh is not None

    v = holds_in_all_semigroups(parse("forall a exists x : a = a x a"))
    ok &= v.outcome == DOES_NOT_HOLD
    ok &= v.parikh is not None or (
        v.counterexample is not None and v.counterexample.order == 2
    )

    e = parse("forall a, b exists x : a = a x b")
    v = holds_in_all_semigroups(e)
    ce = counterexample_search(e, 2)
    ok &= v.outcome == DOES_NOT_HOLD
    ok &= ce is not None and ce.order == 2
    ok &= not satisfies(parse_sgp(ce.sgp), e).satisfied

    budgets = Budgets(max_len=2, extra_letters=1, max_order=2)
    for i in catalog_ids():
        system = catalog(i)
        witness = witness_search(system, budgets.max_len, budgets.extra_letters)
        if witness is not None:
            ok &= parikh_refute(system) is None
            ok &= counterexample_search(system, budgets.max_order) is None
    _verdict("8 harness determinations and cross-mechanism consistency", ok)


def _independent_green_relations(S):
    n = S.order
    t = S.table
    r = [frozenset({a, *(t[a][s] for s in range(n))}) for a in range(n)]
    l = [frozenset({a, *(t[s][a] for s in range(n))}) for a in range(n)]
    j = [
        frozenset(
            {a}
            | {t[a][s] for s in range(n)}
            | {t[s][a] for s in range(n)}
            | {t[s][t[a][u]] for s in range(n) for u in range(n)}
        )
        for a in range(n)
    ]
    return r, l, j


def test_criterion_9_green_invariants():
    ok = True
    for n in range(1, 5):
        for S in get_corpus(n).entries:
            r, l, j = _independent_green_relations(S)
            size = S.order
            rl = {(a, b) for a in range(size) for b in range(size)
                  if any(r[c] == r[a] and l[c] == l[b] for c in range(size))}
            lr = {(a, b) for a in range(size) for b in range(size)
                  if any(l[c] == l[a] and r[c] == r[b] for c in range(size))}
            jj = {(a, b) for a in range(size) for b in range(size) if j[a] == j[b]}
            hh = {(a, b) for (a, b) in jj if r[a] == r[b] and l[a] == l[b]}
            ok &= rl == lr == jj
            ok &= hh == {(a, b) for a in range(size) for b in range(size)
                         if r[a] == r[b] and l[a] == l[b]}
            if len({j[a] for a in range(size)}) == 1:
                ok &= classify(S).completely_regular
    _verdict("9 green computations satisfy the structural identities", ok)


@pytest.mark.slow
def test_stretch_order_5_counts():
    ok = len(get_corpus(5, "isomorphism")) == 1915
    ok &= len(get_corpus(5, "equivalence")) == 1160
    _verdict("1s order-5 counts (stretch)", ok)


@pytest.mark.slow
@pytest.mark.parametrize("battery_id", CORE_BATTERIES + ("prop2.4",))
def test_stretch_batteries_order_5(battery_id):
    report = verify_battery(battery_id, 5)
    _verdict(f"2s battery {battery_id} zero mismatches at order <= 5 (stretch)",
             report.passed)
