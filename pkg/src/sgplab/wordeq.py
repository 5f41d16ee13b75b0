"""Bounded harness for "does this system hold in every semigroup".

A system holds in all semigroups exactly when the free semigroup on
countably many letters satisfies it under the canonical parameter evaluation
with the free dependency condition. The harness exploits that criterion three
ways, each sound on its own:

  * witness search - exhibit witness words; success proves the system holds
    everywhere;
  * letter-count refutation - the counts and lengths of any witness solve a
    small linear system; rational infeasibility proves no witness exists;
  * finite counterexample - a failing corpus entry settles the question
    negatively.

None of the three is complete, so the combined verdict may be Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np
from scipy.optimize import LinearConstraint, linprog, milp

from .algebra import format_sgp
from .eqsys import EquationSystem, satisfies
from .smallsemi import get_corpus


@dataclass(frozen=True)
class Budgets:
    max_len: int = 3
    extra_letters: int = 2
    max_order: int = 3
    len_cap: int = 8

    def to_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "extra_letters": self.extra_letters,
            "max_order": self.max_order,
            "len_cap": self.len_cap,
        }


@dataclass(frozen=True)
class FiniteCounterexample:
    order: int
    sgp: str
    assignment: Optional[dict[str, int]]

    def to_json(self) -> dict:
        return {"order": self.order, "sgp": self.sgp, "assignment": self.assignment}


@dataclass(frozen=True)
class ParikhCertificate:
    """The infeasible linear system over per-letter occurrence counts.

    unknowns name the counts (variable:letter, with 'other' aggregating all
    non-parameter letters); eq_rows are (coeffs, rhs) equality rows; ub_rows
    are (coeffs, rhs) rows with coeffs . x <= rhs; forbidden lists counts
    pinned to zero by the dependency condition (omitted from the unknowns).
    """

    unknowns: tuple[str, ...]
    eq_rows: tuple[tuple[tuple[int, ...], int], ...]
    ub_rows: tuple[tuple[tuple[int, ...], int], ...]
    forbidden: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "unknowns": list(self.unknowns),
            "eq_rows": [[list(c), r] for c, r in self.eq_rows],
            "ub_rows": [[list(c), r] for c, r in self.ub_rows],
            "forbidden": list(self.forbidden),
        }


@dataclass(frozen=True)
class TriVerdict:
    outcome: str  # "holds" | "does_not_hold" | "unknown"
    witness: Optional[dict[str, tuple[int, ...]]] = None
    counterexample: Optional[FiniteCounterexample] = None
    parikh: Optional[ParikhCertificate] = None
    budgets: Optional[Budgets] = None

    def to_json(self) -> dict:
        out: dict = {"outcome": self.outcome}
        if self.witness is not None:
            out["witness"] = {v: "".join(f"A{l}" for l in w) for v, w in self.witness.items()}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        if self.parikh is not None:
            out["parikh"] = self.parikh.to_json()
        if self.budgets is not None:
            out["budgets"] = self.budgets.to_json()
        return out


HOLDS = "holds"
DOES_NOT_HOLD = "does_not_hold"
UNKNOWN = "unknown"


# -- witness search in the free semigroup ------------------------------------

def witness_search(e: EquationSystem, max_len: int = 3, extra_letters: int = 2
                   ) -> Optional[dict[str, tuple[int, ...]]]:
    """Assign each variable a word over its permitted letters (earlier
    parameters plus a fresh pool) so all equalities become identical strings.

    A hit certifies the system in every semigroup; words are tuples of letter
    numbers with parameter i evaluated as letter i."""
    params = e.parameters
    p = len(params)
    letter_of = {a: i + 1 for i, a in enumerate(params)}
    variables = e.variables
    var_slot = {v: i for i, v in enumerate(variables)}
    allowed: list[list[int]] = []
    for var in variables:
        later = e.after[var]
        letters = [i + 1 for i, a in enumerate(params) if a not in later]
        letters.extend(p + 1 + i for i in range(extra_letters))
        allowed.append(letters)

    assign: list[Optional[tuple[int, ...]]] = [None] * len(variables)

    def substitute(word):
        out: list[int] = []
        for s in word:
            slot = var_slot.get(s)
            if slot is None:
                out.append(letter_of[s])
            else:
                out.extend(assign[slot])
        return tuple(out)

    eqs_at: list[list] = [[] for _ in variables]
    for lhs, rhs in e.equalities:
        slots = [var_slot[s] for s in lhs + rhs if s in var_slot]
        if slots:
            eqs_at[max(slots)].append((lhs, rhs))
        elif substitute(lhs) != substitute(rhs):
            return None

    def rec(i: int) -> bool:
        if i == len(variables):
            return True
        for length in range(1, max_len + 1):
            for w in product(allowed[i], repeat=length):
                assign[i] = w
                if all(substitute(l) == substitute(r) for l, r in eqs_at[i]) and rec(i + 1):
                    return True
        assign[i] = None
        return False

    if rec(0):
        return {v: assign[i] for i, v in enumerate(variables)}
    return None


def render_letters(word: tuple[int, ...], n_params: int) -> str:
    """Display form: parameter letters A1.., fresh letters B1.."""
    return "".join(f"A{l}" if l <= n_params else f"B{l - n_params}" for l in word)


# -- letter-count refutation ---------------------------------------------------

def _parikh_system(e: EquationSystem):
    params = e.parameters
    p = len(params)
    variables = set(e.variables)
    index: dict[tuple, int] = {}
    names: list[str] = []
    forbidden: list[str] = []
    for v in e.variables:
        later = e.after[v]
        for i, a in enumerate(params):
            if a in later:
                forbidden.append(f"{v}:A{i + 1}")
            else:
                index[(v, i + 1)] = len(names)
                names.append(f"{v}:A{i + 1}")
        index[(v, "other")] = len(names)
        names.append(f"{v}:other")
    nu = len(names)

    eq_rows: list[tuple[tuple[int, ...], int]] = []
    for lhs, rhs in e.equalities:
        for key in [*range(1, p + 1), "other"]:
            row = [0] * nu
            const = 0
            for word, sign in ((lhs, 1), (rhs, -1)):
                for s in word:
                    if s in variables:
                        k = index.get((s, key))
                        if k is not None:
                            row[k] += sign
                    elif isinstance(key, int) and s == params[key - 1]:
                        const += sign
            eq_rows.append((tuple(row), -const))
        # total lengths
        row = [0] * nu
        const = 0
        for word, sign in ((lhs, 1), (rhs, -1)):
            for s in word:
                if s in variables:
                    for key in [*range(1, p + 1), "other"]:
                        k = index.get((s, key))
                        if k is not None:
                            row[k] += sign
                else:
                    const += sign
        eq_rows.append((tuple(row), -const))

    ub_rows: list[tuple[tuple[int, ...], int]] = []
    for v in e.variables:
        row = [0] * nu
        for key in [*range(1, p + 1), "other"]:
            k = index.get((v, key))
            if k is not None:
                row[k] = -1
        ub_rows.append((tuple(row), -1))
    return ParikhCertificate(tuple(names), tuple(eq_rows), tuple(ub_rows), tuple(forbidden))


def rational_feasible(system: ParikhCertificate) -> Optional[bool]:
    """Rational feasibility of the count system; None when the solver is
    inconclusive."""
    nu = len(system.unknowns)
    if nu == 0:
        return all(rhs == 0 for _, rhs in system.eq_rows)
    res = linprog(
        c=np.zeros(nu),
        A_ub=np.array([row for row, _ in system.ub_rows], dtype=float),
        b_ub=np.array([rhs for _, rhs in system.ub_rows], dtype=float),
        A_eq=np.array([row for row, _ in system.eq_rows], dtype=float),
        b_eq=np.array([rhs for _, rhs in system.eq_rows], dtype=float),
        bounds=(0, None),
        method="highs",
    )
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    return None


def integer_feasible_point(system: ParikhCertificate, len_cap: int = 8) -> Optional[dict[str, int]]:
    """A nonnegative integer solution with every count bounded by len_cap, or
    None when none exists within the cap (which proves nothing by itself)."""
    nu = len(system.unknowns)
    if nu == 0:
        return {} if all(rhs == 0 for _, rhs in system.eq_rows) else None
    constraints = [
        LinearConstraint(
            np.array([row for row, _ in system.eq_rows], dtype=float),
            np.array([rhs for _, rhs in system.eq_rows], dtype=float),
            np.array([rhs for _, rhs in system.eq_rows], dtype=float),
        ),
        LinearConstraint(
            np.array([row for row, _ in system.ub_rows], dtype=float),
            -np.inf,
            np.array([rhs for _, rhs in system.ub_rows], dtype=float),
        ),
    ]
    res = milp(
        c=np.zeros(nu),
        constraints=constraints,
        integrality=np.ones(nu),
        bounds=(0, len_cap),
    )
    if res.status == 0 and res.x is not None:
        return {name: int(round(v)) for name, v in zip(system.unknowns, res.x)}
    return None


def parikh_refute(e: EquationSystem) -> Optional[ParikhCertificate]:
    """Certificate that no canonical-evaluation witness exists in the free
    semigroup, hence the system fails in some semigroup. None when the count
    system is rationally feasible (or the solver is inconclusive)."""
    system = _parikh_system(e)
    if rational_feasible(system) is False:
        return system
    return None


# -- finite counterexamples ----------------------------------------------------

def counterexample_search(e: EquationSystem, max_order: int = 3, corpus_dir=None
                          ) -> Optional[FiniteCounterexample]:
    """First corpus entry (orders ascending) that fails the system."""
    for order in range(1, max_order + 1):
        for S in get_corpus(order, corpus_dir=corpus_dir).entries:
            v = satisfies(S, e)
            if not v.satisfied:
                return FiniteCounterexample(order, format_sgp(S), v.counterexample)
    return None


# -- combined verdict ----------------------------------------------------------

def holds_in_all_semigroups(e: EquationSystem, budgets: Budgets = Budgets(),
                            corpus_dir=None) -> TriVerdict:
    """Refute by letter counts, then search for a universal witness, then for
    a finite counterexample; Unknown when every budget runs out."""
    cert = parikh_refute(e)
    if cert is not None:
        return TriVerdict(DOES_NOT_HOLD, parikh=cert, budgets=budgets)
    witness = witness_search(e, budgets.max_len, budgets.extra_letters)
    if witness is not None:
        return TriVerdict(HOLDS, witness=witness, budgets=budgets)
    counter = counterexample_search(e, budgets.max_order, corpus_dir)
    if counter is not None:
        return TriVerdict(DOES_NOT_HOLD, counterexample=counter, budgets=budgets)
    return TriVerdict(UNKNOWN, budgets=budgets)
