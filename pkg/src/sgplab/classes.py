"""Structural detectors for the semigroup classes under study.

Every detector works directly on the table and its Green data, never through
the equation evaluator, so that evaluator verdicts can be verified against an
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    FiniteSemigroup,
    GreenData,
    green_data,
    inverses_of,
    principal_factor,
    restrict_to,
    subsemigroup_generated,
)


def _is_regular(S: FiniteSemigroup) -> bool:
    t = S.table
    n = S.order
    return all(any(t[t[a][x]][a] == a for x in range(n)) for a in range(n))


def _left_simple(S: FiniteSemigroup) -> bool:
    t = S.table
    n = S.order
    return all(len({t[s][a] for s in range(n)}) == n for a in range(n))


def _right_simple(S: FiniteSemigroup) -> bool:
    t = S.table
    n = S.order
    return all(len({t[a][s] for s in range(n)}) == n for a in range(n))


def _is_group(S: FiniteSemigroup) -> bool:
    e = S.identity()
    if e is None:
        return False
    t = S.table
    return all(any(t[a][b] == e and t[b][a] == e for b in S.elements()) for a in S.elements())


def _completely_regular(S: FiniteSemigroup, g: GreenData) -> bool:
    t = S.table
    return all(g.h_related(a, t[a][a]) for a in S.elements())


def preinverse_witnesses(S: FiniteSemigroup) -> tuple[int, ...]:
    """All x with a*x*a = a for every a (universal pre-inverses)."""
    t = S.table
    n = S.order
    return tuple(x for x in range(n) if all(t[t[a][x]][a] == a for a in range(n)))


def preinverse_witnesses_right_form(S: FiniteSemigroup, g: Optional[GreenData] = None) -> tuple[int, ...]:
    """All x with a*x an idempotent R-related to a, for every a."""
    g = g or green_data(S)
    t = S.table
    n = S.order
    out = []
    for x in range(n):
        if all(t[t[a][x]][t[a][x]] == t[a][x] and g.r_related(a, t[a][x]) for a in range(n)):
            out.append(x)
    return tuple(out)


def preinverse_witnesses_left_form(S: FiniteSemigroup, g: Optional[GreenData] = None) -> tuple[int, ...]:
    """All x with x*a an idempotent L-related to a, for every a."""
    g = g or green_data(S)
    t = S.table
    n = S.order
    out = []
    for x in range(n):
        if all(t[t[x][a]][t[x][a]] == t[x][a] and g.l_related(a, t[x][a]) for a in range(n)):
            out.append(x)
    return tuple(out)


def intersection_of_all_inverses(S: FiniteSemigroup) -> set[int]:
    """Elements that are an inverse of every element of S."""
    common = set(S.elements())
    for a in S.elements():
        common &= inverses_of(S, a)
        if not common:
            break
    return common


@dataclass(frozen=True)
class ClassReport:
    """Boolean detector map for one semigroup, plus the supporting data."""

    regular: bool
    left_group: bool
    right_group: bool
    group: bool
    completely_regular: bool
    completely_simple: bool
    inverse: bool
    right_inverse: bool
    orthodox: bool
    conventional: bool
    idempotent_solid: bool
    clifford: bool
    monoid: bool
    has_zero: bool
    rectangular_band: bool
    has_universal_preinverse: bool
    has_universal_inverse: bool
    r_classes_subsemigroups: bool
    l_classes_subsemigroups: bool
    bisimple_regular: bool
    idempotents: tuple[int, ...]
    universal_inverses: tuple[int, ...]
    idempotents_commute: bool
    idempotents_central: bool
    green: GreenData

    _BOOL_FIELDS = (
        "regular", "left_group", "right_group", "group", "completely_regular",
        "completely_simple", "inverse", "right_inverse", "orthodox",
        "conventional", "idempotent_solid", "clifford", "monoid", "has_zero",
        "rectangular_band", "has_universal_preinverse", "has_universal_inverse",
        "r_classes_subsemigroups", "l_classes_subsemigroups", "bisimple_regular",
    )

    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in self._BOOL_FIELDS}

    def to_json(self) -> dict:
        out: dict = dict(self.flags())
        out["idempotents"] = list(self.idempotents)
        out["universal_inverses"] = list(self.universal_inverses)
        return out

    def check_entailments(self) -> None:
        """The inclusion chains every report must respect."""
        chain1 = [self.group, self.completely_simple, self.completely_regular, self.regular]
        chain2 = [self.inverse, self.right_inverse, self.orthodox, self.conventional, self.regular]
        for chain in (chain1, chain2):
            for stronger, weaker in zip(chain, chain[1:]):
                assert not stronger or weaker, f"entailment violated in {chain}"
        assert not self.clifford or (self.inverse and self.completely_regular)


def classify(S: FiniteSemigroup, green: Optional[GreenData] = None) -> ClassReport:
    g = green or green_data(S)
    t = S.table
    n = S.order
    E = S.idempotents()
    regular = _is_regular(S)

    idempotents_commute = all(t[e][f] == t[f][e] for e in E for f in E)
    idempotents_central = all(t[e][s] == t[s][e] for e in E for s in range(n))
    ef_in_e = all(t[t[e][f]][t[e][f]] == t[e][f] for e in E for f in E)
    efe_is_fe = all(t[t[e][f]][e] == t[f][e] for e in E for f in E)
    efe_in_e = all(t[t[t[e][f]][e]][t[t[e][f]][e]] == t[t[e][f]][e] for e in E for f in E)

    completely_regular = _completely_regular(S, g)
    j_universal = len(g.j_classes) == 1

    if regular and E:
        core, _ = restrict_to(S, subsemigroup_generated(S, set(E)))
        idempotent_solid = _completely_regular(core, green_data(core))
    else:
        idempotent_solid = False

    preinv = preinverse_witnesses(S)
    universal_inv = tuple(sorted(intersection_of_all_inverses(S)))

    report = ClassReport(
        regular=regular,
        left_group=regular and _left_simple(S),
        right_group=regular and _right_simple(S),
        group=_is_group(S),
        completely_regular=completely_regular,
        completely_simple=j_universal and completely_regular,
        inverse=regular and idempotents_commute,
        right_inverse=regular and efe_is_fe,
        orthodox=regular and ef_in_e,
        conventional=regular and efe_in_e,
        idempotent_solid=idempotent_solid,
        clifford=regular and idempotents_central,
        monoid=S.identity() is not None,
        has_zero=S.zero() is not None,
        rectangular_band=all(t[a][a] == a for a in range(n))
        and all(t[t[a][b]][a] == a for a in range(n) for b in range(n)),
        has_universal_preinverse=bool(preinv),
        has_universal_inverse=any(
            all(t[t[a][x]][a] == a and t[t[x][a]][x] == x for a in range(n)) for x in range(n)
        ),
        r_classes_subsemigroups=all(g.r_related(a, t[a][a]) for a in range(n)),
        l_classes_subsemigroups=all(g.l_related(a, t[a][a]) for a in range(n)),
        bisimple_regular=regular and len(g.d_classes) == 1,
        idempotents=E,
        universal_inverses=universal_inv,
        idempotents_commute=idempotents_commute,
        idempotents_central=idempotents_central,
        green=g,
    )
    report.check_entailments()
    return report


# -- profile of a universal pre-inverse witness -------------------------------

@dataclass(frozen=True)
class PreinverseProfile:
    """Structural consequences checked at a candidate universal pre-inverse x.

    part_i: x idempotent, the identity a^2 = a^3 holds, and every element is
    a product of two idempotents. part_ii: H trivial and D = J. part_iii:
    the J-class of x is maximum, its principal factor again has a universal
    pre-inverse, and everything R- or L-related to x is idempotent.
    """

    x: int
    x_idempotent: bool
    squares_stabilize: bool
    two_idempotent_products: bool
    h_trivial: bool
    d_equals_j: bool
    witness_class_maximum: bool
    principal_factor_preinverse: bool
    witness_row_column_idempotent: bool

    @property
    def part_i(self) -> bool:
        return self.x_idempotent and self.squares_stabilize and self.two_idempotent_products

    @property
    def part_ii(self) -> bool:
        return self.h_trivial and self.d_equals_j

    @property
    def part_iii(self) -> bool:
        return (
            self.witness_class_maximum
            and self.principal_factor_preinverse
            and self.witness_row_column_idempotent
        )

    @property
    def all_ok(self) -> bool:
        return self.part_i and self.part_ii and self.part_iii


def preinverse_profile(S: FiniteSemigroup, x: int, green: Optional[GreenData] = None) -> PreinverseProfile:
    g = green or green_data(S)
    t = S.table
    n = S.order
    E = set(S.idempotents())

    squares = all(t[t[a][a]][a] == t[a][a] for a in range(n))
    products = {t[e][f] for e in E for f in E}
    jx = g.two_sided_ideals[x]
    maximum = all(g.two_sided_ideals[a] <= jx for a in range(n))
    pf = principal_factor(S, x, g)
    rx_lx = {a for a in range(n) if g.r_related(a, x) or g.l_related(a, x)}

    return PreinverseProfile(
        x=x,
        x_idempotent=t[x][x] == x,
        squares_stabilize=squares,
        two_idempotent_products=products == set(range(n)),
        h_trivial=all(len(c) == 1 for c in g.h_classes),
        d_equals_j=g.d_classes == g.j_classes,
        witness_class_maximum=maximum,
        principal_factor_preinverse=bool(preinverse_witnesses(pf)),
        witness_row_column_idempotent=rx_lx <= E,
    )
