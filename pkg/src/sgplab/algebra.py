"""Finite semigroups as Cayley tables.

Everything downstream (equation evaluation, class detectors, enumeration,
free products) works with the plain table representation defined here:
elements are the indices 0..n-1, labels are display-only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np


class IndexOutOfRange(ValueError):
    """A table entry lies outside [0, n)."""


class AssociativityViolation(ValueError):
    """First triple (i, j, k) with (i*j)*k != i*(j*k), in row-major scan order."""

    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"associativity fails at triple ({i}, {j}, {k})")
        self.triple = (i, j, k)


class UnassignedSymbol(KeyError):
    """A word symbol with no value in the assignment."""


class EmptySeed(ValueError):
    """subsemigroup_generated needs a nonempty seed."""


class NotAnIdeal(ValueError):
    """The given element set is empty or not two-sidedly absorbing."""


class OrderBoundExceeded(ValueError):
    """Order too large for an exhaustive operation."""


class InvalidParams(ValueError):
    """Bad parameters for a standard construction."""


class SgpFormatError(ValueError):
    """Malformed .sgp text."""


def _validate_table(table: Sequence[Sequence[int]]) -> None:
    n = len(table)
    if n == 0:
        raise IndexOutOfRange("order must be positive")
    for row in table:
        if len(row) != n:
            raise IndexOutOfRange(f"expected {n} entries per row, got {len(row)}")
        for v in row:
            if not (0 <= v < n):
                raise IndexOutOfRange(f"entry {v} outside [0, {n})")
    for i in range(n):
        ti = table[i]
        for j in range(n):
            tij = table[ti[j]]
            for k in range(n):
                if tij[k] != ti[table[j][k]]:
                    raise AssociativityViolation(i, j, k)


@dataclass(frozen=True)
class FiniteSemigroup:
    """Order-n semigroup given by its n x n multiplication table.

    The table is validated (range and associativity) at construction, so a
    held instance is always a genuine semigroup.
    """

    table: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = None
    name: Optional[str] = None

    def __post_init__(self):
        _validate_table(self.table)
        if self.labels is not None and len(self.labels) != len(self.table):
            raise InvalidParams("labels must have one entry per element")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], labels=None, name=None) -> "FiniteSemigroup":
        table = tuple(tuple(int(v) for v in row) for row in rows)
        lab = tuple(labels) if labels is not None else None
        return cls(table, lab, name)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def elements(self) -> range:
        return range(self.order)

    def idempotents(self) -> tuple[int, ...]:
        return tuple(e for e in self.elements() if self.table[e][e] == e)

    def identity(self) -> Optional[int]:
        t = self.table
        for e in self.elements():
            if all(t[e][a] == a and t[a][e] == a for a in self.elements()):
                return e
        return None

    def zero(self) -> Optional[int]:
        t = self.table
        for z in self.elements():
            if all(t[z][a] == z and t[a][z] == z for a in self.elements()):
                return z
        return None

    def is_commutative(self) -> bool:
        t = self.table
        n = self.order
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def transpose(self) -> "FiniteSemigroup":
        n = self.order
        table = tuple(tuple(self.table[j][i] for j in range(n)) for i in range(n))
        return FiniteSemigroup(table, self.labels, None)

    def __repr__(self):
        tag = self.name or "semigroup"
        return f"FiniteSemigroup({tag}, order={self.order})"


def check_associativity(table: Sequence[Sequence[int]]) -> FiniteSemigroup:
    """Validate a raw table, returning the semigroup or raising the first violation."""
    return FiniteSemigroup.from_rows(table)


def evaluate_word(S: FiniteSemigroup, word: Sequence[str], assignment: Mapping[str, int]) -> int:
    """Left-fold the table over the assigned elements of a nonempty word."""
    if not word:
        raise InvalidParams("empty word")
    t = S.table
    try:
        acc = assignment[word[0]]
        for sym in word[1:]:
            acc = t[acc][assignment[sym]]
    except KeyError as exc:
        raise UnassignedSymbol(*exc.args) from None
    return acc


# -- Green's relations ------------------------------------------------------

@dataclass(frozen=True)
class GreenData:
    """The five Green partitions plus the principal-ideal data behind them.

    Classes are listed in order of their least element; *_class_of maps an
    element to its class index. Ideals are computed in S^1: each principal
    ideal contains the element itself.
    """

    r_classes: tuple[tuple[int, ...], ...]
    l_classes: tuple[tuple[int, ...], ...]
    j_classes: tuple[tuple[int, ...], ...]
    h_classes: tuple[tuple[int, ...], ...]
    d_classes: tuple[tuple[int, ...], ...]
    r_class_of: tuple[int, ...]
    l_class_of: tuple[int, ...]
    j_class_of: tuple[int, ...]
    h_class_of: tuple[int, ...]
    d_class_of: tuple[int, ...]
    right_ideals: tuple[frozenset[int], ...]
    left_ideals: tuple[frozenset[int], ...]
    two_sided_ideals: tuple[frozenset[int], ...]
    group_h_classes: tuple[bool, ...]

    def r_related(self, a: int, b: int) -> bool:
        return self.r_class_of[a] == self.r_class_of[b]

    def l_related(self, a: int, b: int) -> bool:
        return self.l_class_of[a] == self.l_class_of[b]

    def h_related(self, a: int, b: int) -> bool:
        return self.h_class_of[a] == self.h_class_of[b]

    def j_related(self, a: int, b: int) -> bool:
        return self.j_class_of[a] == self.j_class_of[b]

    def d_related(self, a: int, b: int) -> bool:
        return self.d_class_of[a] == self.d_class_of[b]


def _partition_by(keys: Sequence) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    index: dict = {}
    classes: list[list[int]] = []
    for a, key in enumerate(keys):
        idx = index.get(key)
        if idx is None:
            idx = index[key] = len(classes)
            classes.append([])
        classes[idx].append(a)
    class_of = tuple(index[keys[a]] for a in range(len(keys)))
    return tuple(tuple(c) for c in classes), class_of


def green_data(S: FiniteSemigroup) -> GreenData:
    """Compute R, L, J via principal ideals in S^1, then H = R meet L and D = R o L.

    D is computed as the composite relation and checked against L o R and J;
    on a finite semigroup all three coincide, so a failure here would mean a
    bug rather than exotic input.
    """
    n = S.order
    t = S.table
    right = []
    left = []
    twosided = []
    for a in range(n):
        row = {t[a][s] for s in range(n)}
        col = {t[s][a] for s in range(n)}
        sas = {t[s][t[a][u]] for s in range(n) for u in range(n)}
        right.append(frozenset({a} | row))
        left.append(frozenset({a} | col))
        twosided.append(frozenset({a} | row | col | sas))

    r_classes, r_of = _partition_by(right)
    l_classes, l_of = _partition_by(left)
    j_classes, j_of = _partition_by(twosided)
    h_classes, h_of = _partition_by([(right[a], left[a]) for a in range(n)])

    # R o L: which L-classes each R-class meets (and dually for L o R)
    r_meets = [set() for _ in r_classes]
    l_meets = [set() for _ in l_classes]
    for c in range(n):
        r_meets[r_of[c]].add(l_of[c])
        l_meets[l_of[c]].add(r_of[c])
    for a in range(n):
        for b in range(n):
            rl = l_of[b] in r_meets[r_of[a]]
            lr = r_of[b] in l_meets[l_of[a]]
            assert rl == lr, "R o L differs from L o R on a finite semigroup"
            assert rl == (j_of[a] == j_of[b]), "D differs from J on a finite semigroup"
    d_classes, d_of = j_classes, j_of

    group_h = tuple(any(t[e][e] == e for e in cls) for cls in h_classes)
    return GreenData(
        r_classes, l_classes, j_classes, h_classes, d_classes,
        r_of, l_of, j_of, h_of, d_of,
        tuple(right), tuple(left), tuple(twosided), group_h,
    )


def inverses_of(S: FiniteSemigroup, a: int) -> set[int]:
    """All v with a*v*a = a and v*a*v = v."""
    t = S.table
    return {v for v in S.elements() if t[t[a][v]][a] == a and t[t[v][a]][v] == v}


def subsemigroup_generated(S: FiniteSemigroup, seed: Iterable[int]) -> set[int]:
    """Smallest product-closed subset containing the seed."""
    current = set(seed)
    if not current:
        raise EmptySeed("seed must be nonempty")
    t = S.table
    frontier = set(current)
    while frontier:
        new = set()
        for a in current:
            for b in frontier:
                new.add(t[a][b])
                new.add(t[b][a])
        frontier = new - current
        current |= frontier
    return current


def restrict_to(S: FiniteSemigroup, elems: Iterable[int]) -> tuple[FiniteSemigroup, dict[int, int]]:
    """The subsemigroup on a product-closed element set, plus old->new index map."""
    keep = sorted(set(elems))
    pos = {a: i for i, a in enumerate(keep)}
    t = S.table
    table = []
    for a in keep:
        row = []
        for b in keep:
            ab = t[a][b]
            if ab not in pos:
                raise InvalidParams("element set is not product-closed")
            row.append(pos[ab])
        table.append(row)
    labels = tuple(S.label(a) for a in keep) if S.labels else None
    return FiniteSemigroup.from_rows(table, labels), pos


def direct_product(S: FiniteSemigroup, T: FiniteSemigroup) -> FiniteSemigroup:
    """Componentwise product on pairs, indexed i*|T| + j."""
    nt = T.order
    st = S.table
    tt = T.table
    table = []
    for i in range(S.order):
        for j in range(nt):
            table.append([st[i][k] * nt + tt[j][l] for k in range(S.order) for l in range(nt)])
    return FiniteSemigroup.from_rows(table)


def is_ideal(S: FiniteSemigroup, ideal: set[int]) -> bool:
    t = S.table
    return bool(ideal) and all(
        t[s][i] in ideal and t[i][s] in ideal for i in ideal for s in S.elements()
    )


def rees_quotient(S: FiniteSemigroup, ideal: Iterable[int]) -> FiniteSemigroup:
    """Collapse a two-sided ideal to an adjoined zero (the last element).

    Survivors keep their relative order; products landing in the ideal map
    to the zero. Collapsing all of S yields the trivial semigroup.
    """
    ide = set(ideal)
    if not is_ideal(S, ide):
        raise NotAnIdeal("set is empty or not two-sidedly absorbing")
    survivors = [a for a in S.elements() if a not in ide]
    if not survivors:
        return FiniteSemigroup.from_rows([[0]], labels=("0",))
    pos = {a: i for i, a in enumerate(survivors)}
    zero = len(survivors)
    t = S.table
    table = []
    for a in survivors:
        row = [pos.get(t[a][b], zero) for b in survivors]
        row.append(zero)
        table.append(row)
    table.append([zero] * (zero + 1))
    labels = tuple(S.label(a) for a in survivors) + ("0",) if S.labels else None
    return FiniteSemigroup.from_rows(table, labels)


def principal_factor(S: FiniteSemigroup, a: int, green: Optional[GreenData] = None) -> FiniteSemigroup:
    """The J-class of a with products falling below it sent to an adjoined zero.

    When nothing lies strictly below (the J-class is the kernel) the class is
    itself closed and is returned as a subsemigroup, without a zero.
    """
    g = green or green_data(S)
    ja = {b for b in S.elements() if g.j_related(a, b)}
    ideal = g.two_sided_ideals[a]
    below = ideal - ja
    sub, pos = restrict_to(S, ideal)
    if not below:
        return sub
    return rees_quotient(sub, {pos[b] for b in below})


# -- congruences ------------------------------------------------------------

@dataclass(frozen=True)
class Congruence:
    """A partition of the element set compatible with multiplication."""

    blocks: tuple[tuple[int, ...], ...]

    @property
    def class_of(self) -> tuple[int, ...]:
        size = sum(len(b) for b in self.blocks)
        out = [0] * size
        for i, block in enumerate(self.blocks):
            for a in block:
                out[a] = i
        return tuple(out)


def _set_partitions(n: int):
    """All partitions of range(n) by restricted growth strings."""
    rgs = [0] * n
    max_seen = [0] * n

    def rec(i):
        if i == n:
            nblocks = max(rgs[:n]) + 1
            blocks = [[] for _ in range(nblocks)]
            for a, g in enumerate(rgs):
                blocks[g].append(a)
            yield tuple(tuple(b) for b in blocks)
            return
        top = max_seen[i - 1] if i else -1
        for g in range(top + 2):
            rgs[i] = g
            max_seen[i] = max(top, g)
            yield from rec(i + 1)

    yield from rec(0)


def is_congruence(S: FiniteSemigroup, blocks: Sequence[Sequence[int]]) -> bool:
    class_of = [0] * S.order
    for i, block in enumerate(blocks):
        for a in block:
            class_of[a] = i
    t = S.table
    n = S.order
    for block in blocks:
        rep = block[0]
        for a in block[1:]:
            for c in range(n):
                if class_of[t[c][a]] != class_of[t[c][rep]]:
                    return False
                if class_of[t[a][c]] != class_of[t[rep][c]]:
                    return False
    return True


def quotient_by(S: FiniteSemigroup, cong: Congruence) -> FiniteSemigroup:
    class_of = cong.class_of
    reps = [block[0] for block in cong.blocks]
    t = S.table
    table = [[class_of[t[a][b]] for b in reps] for a in reps]
    return FiniteSemigroup.from_rows(table)


def congruences(S: FiniteSemigroup, max_order: int = 6) -> list[tuple[Congruence, FiniteSemigroup]]:
    """All congruences with quotients, by exhaustive partition filtering."""
    if S.order > max_order:
        raise OrderBoundExceeded(f"congruence enumeration bounded at order {max_order}")
    out = []
    for blocks in _set_partitions(S.order):
        if is_congruence(S, blocks):
            cong = Congruence(blocks)
            out.append((cong, quotient_by(S, cong)))
    return out


# -- canonical forms --------------------------------------------------------

_CANON_MAX_ORDER = 7

MODE_ISOMORPHISM = "isomorphism"
MODE_EQUIVALENCE = "equivalence"


@lru_cache(maxsize=None)
def _perm_arrays(n: int):
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    inv = np.empty_like(perms)
    rows = np.arange(len(perms))[:, None]
    inv[rows, perms] = np.arange(n, dtype=np.int64)[None, :]
    return perms, inv


def _min_relabel(table_arr: np.ndarray) -> bytes:
    n = table_arr.shape[0]
    perms, inv = _perm_arrays(n)
    m = len(perms)
    sub = table_arr[inv[:, :, None], inv[:, None, :]]
    rel = perms[np.arange(m)[:, None, None], sub]
    flat = rel.reshape(m, n * n).astype(np.uint8)
    order = np.lexsort(flat.T[::-1])
    return flat[order[0]].tobytes()


def canonical_table_bytes(rows: Sequence[Sequence[int]], mode: str = MODE_ISOMORPHISM) -> bytes:
    """Lexicographically least relabeling of a raw table (no validation)."""
    n = len(rows)
    if n > _CANON_MAX_ORDER:
        raise OrderBoundExceeded(f"canonical form brute-forces n! relabelings, n <= {_CANON_MAX_ORDER}")
    arr = np.array(rows, dtype=np.int64)
    best = _min_relabel(arr)
    if mode == MODE_EQUIVALENCE:
        best = min(best, _min_relabel(arr.T))
    elif mode != MODE_ISOMORPHISM:
        raise InvalidParams(f"unknown canonical mode {mode!r}")
    return best


def canonical_form(S: FiniteSemigroup, mode: str = MODE_ISOMORPHISM) -> bytes:
    """Canonical table bytes; equal bytes iff isomorphic (or iso/anti-iso)."""
    return canonical_table_bytes(S.table, mode)


def table_from_canonical(data: bytes) -> tuple[tuple[int, ...], ...]:
    n = round(len(data) ** 0.5)
    if n * n != len(data):
        raise SgpFormatError("canonical byte string is not a square table")
    return tuple(tuple(data[i * n + j] for j in range(n)) for i in range(n))


# -- standard constructions -------------------------------------------------

def trivial() -> FiniteSemigroup:
    return FiniteSemigroup.from_rows([[0]], name="trivial")


def left_zero(n: int) -> FiniteSemigroup:
    _positive(n)
    return FiniteSemigroup.from_rows([[i] * n for i in range(n)], name=f"left_zero({n})")


def right_zero(n: int) -> FiniteSemigroup:
    _positive(n)
    return FiniteSemigroup.from_rows([list(range(n)) for _ in range(n)], name=f"right_zero({n})")


def rectangular_band(m: int, n: int) -> FiniteSemigroup:
    _positive(m)
    _positive(n)
    table = [
        [i * n + l for _ in range(m) for l in range(n)]
        for i in range(m) for _ in range(n)
    ]
    return FiniteSemigroup.from_rows(table, name=f"rectangular_band({m},{n})")


def cyclic_group(n: int) -> FiniteSemigroup:
    _positive(n)
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteSemigroup.from_rows(table, name=f"cyclic_group({n})")


def chain_semilattice(n: int) -> FiniteSemigroup:
    """The chain 0 < 1 < ... < n-1 under min; 0 is the absorbing bottom."""
    _positive(n)
    table = [[min(i, j) for j in range(n)] for i in range(n)]
    return FiniteSemigroup.from_rows(table, name=f"chain_semilattice({n})")


def null_semigroup(n: int) -> FiniteSemigroup:
    _positive(n)
    return FiniteSemigroup.from_rows([[0] * n for _ in range(n)], name=f"null_semigroup({n})")


def rees_matrix_0(P: Sequence[Sequence[int]]) -> FiniteSemigroup:
    """0-simple Rees matrix semigroup over the trivial group with sandwich matrix P.

    Rows of P are indexed by lambda, columns by i; the nonzero elements are
    pairs (i, lambda) with (i, lambda)(j, mu) = (i, mu) when P[lambda][j] = 1
    and 0 otherwise. The zero is the last element.
    """
    if not P or any(len(row) != len(P[0]) for row in P) or not P[0]:
        raise InvalidParams("P must be a nonempty rectangular matrix")
    if any(v not in (0, 1) for row in P for v in row):
        raise InvalidParams("P entries must be 0 or 1")
    nl = len(P)
    ni = len(P[0])
    zero = ni * nl

    def idx(i, lam):
        return i * nl + lam

    table = [[zero] * (zero + 1) for _ in range(zero + 1)]
    for i in range(ni):
        for lam in range(nl):
            for j in range(ni):
                for mu in range(nl):
                    if P[lam][j]:
                        table[idx(i, lam)][idx(j, mu)] = idx(i, mu)
    labels = tuple(f"({i + 1},{lam + 1})" for i in range(ni) for lam in range(nl)) + ("0",)
    return FiniteSemigroup.from_rows(table, labels, name="rees_matrix_0")


def adjoin_identity(S: FiniteSemigroup) -> FiniteSemigroup:
    n = S.order
    table = [list(row) + [i] for i, row in enumerate(S.table)]
    table.append(list(range(n + 1)))
    labels = (S.labels + ("1",)) if S.labels else None
    return FiniteSemigroup.from_rows(table, labels)


def adjoin_zero(S: FiniteSemigroup) -> FiniteSemigroup:
    n = S.order
    table = [list(row) + [n] for row in S.table]
    table.append([n] * (n + 1))
    labels = (S.labels + ("0",)) if S.labels else None
    return FiniteSemigroup.from_rows(table, labels)


def a21() -> FiniteSemigroup:
    """Order-6 monoid: 2x2 Rees matrix semigroup over the trivial group with a
    single zero sandwich entry, plus an adjoined identity. Its only
    non-idempotent is the pair at the zero entry."""
    base = rees_matrix_0([[1, 1], [1, 0]])
    S = adjoin_identity(base)
    return FiniteSemigroup(S.table, S.labels, name="a21")


_CONSTRUCTIONS = {
    "trivial": (trivial, 0),
    "left_zero": (left_zero, 1),
    "right_zero": (right_zero, 1),
    "rectangular_band": (rectangular_band, 2),
    "cyclic_group": (cyclic_group, 1),
    "chain_semilattice": (chain_semilattice, 1),
    "null_semigroup": (null_semigroup, 1),
    "rees_matrix_0": (rees_matrix_0, 1),
    "adjoin_identity": (adjoin_identity, 1),
    "adjoin_zero": (adjoin_zero, 1),
    "a21": (a21, 0),
}


def standard_construction(kind: str, *params) -> FiniteSemigroup:
    """Dispatch to a named construction; see _CONSTRUCTIONS for the kinds."""
    try:
        fn, arity = _CONSTRUCTIONS[kind]
    except KeyError:
        raise InvalidParams(f"unknown construction {kind!r}") from None
    if len(params) != arity:
        raise InvalidParams(f"{kind} takes {arity} parameter(s), got {len(params)}")
    return fn(*params)


def _positive(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidParams(f"size must be a positive integer, got {n!r}")


# -- .sgp files --------------------------------------------------------------

def parse_sgp(text: str, name: Optional[str] = None) -> FiniteSemigroup:
    """Read the .sgp format: '#' comments, order line, then n rows of n indices."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise SgpFormatError("no data lines")
    try:
        n = int(lines[0])
    except ValueError:
        raise SgpFormatError(f"order line is not an integer: {lines[0]!r}") from None
    if n < 1:
        raise SgpFormatError("order must be positive")
    if len(lines) != n + 1:
        raise SgpFormatError(f"expected {n} table rows, found {len(lines) - 1}")
    rows = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != n:
            raise SgpFormatError(f"expected {n} entries in row: {line!r}")
        try:
            rows.append([int(p) for p in parts])
        except ValueError:
            raise SgpFormatError(f"non-integer entry in row: {line!r}") from None
    try:
        return FiniteSemigroup.from_rows(rows, name=name)
    except (IndexOutOfRange, AssociativityViolation) as exc:
        raise SgpFormatError(f"table is not a semigroup: {exc}") from exc


def format_sgp(S: FiniteSemigroup) -> str:
    out = []
    if S.name:
        out.append(f"# {S.name}")
    out.append(str(S.order))
    for row in S.table:
        out.append(" ".join(str(v) for v in row))
    return "\n".join(out) + "\n"
