"""Exhaustive enumeration of small semigroups and the verification batteries.

Enumeration fills the table cell by cell in row-major order, rejecting a
partial table as soon as some fully determined associativity triple fails,
and deduplicates completed tables by canonical form. Batteries sweep the
resulting corpus, comparing evaluator verdicts against the structural
detectors (or checking closure properties) and reporting every mismatch with
replayable evidence.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from itertools import permutations, product
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, Optional

from .algebra import (
    FiniteSemigroup,
    MODE_EQUIVALENCE,
    MODE_ISOMORPHISM,
    OrderBoundExceeded,
    a21,
    adjoin_identity,
    adjoin_zero,
    canonical_table_bytes,
    congruences,
    direct_product,
    format_sgp,
    green_data,
    parse_sgp,
)
from .classes import (
    classify,
    intersection_of_all_inverses,
    preinverse_profile,
    preinverse_witnesses,
    preinverse_witnesses_left_form,
    preinverse_witnesses_right_form,
)
from .eqsys import catalog, catalog_ids, parse, satisfies

_ENUM_MAX_ORDER = 6


class UnknownBattery(KeyError):
    pass


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Corpus:
    order: int
    mode: str
    entries: tuple[FiniteSemigroup, ...]

    def __len__(self):
        return len(self.entries)


# -- enumeration -------------------------------------------------------------

def _dfs_collect(n: int, mode: str, first_row: Optional[tuple[int, ...]] = None) -> set[bytes]:
    """Canonical forms of all associative n x n tables (optionally with a
    fixed first row)."""
    t = [[-1] * n for _ in range(n)]
    rng = range(n)
    found: set[bytes] = set()

    def ok(i: int, j: int) -> bool:
        v = t[i][j]
        ti = t[i]
        tj = t[j]
        tv = t[v]
        for c in rng:
            q = tj[c]
            if q >= 0:
                l = tv[c]
                if l >= 0:
                    r = ti[q]
                    if r >= 0 and l != r:
                        return False
        for a in rng:
            p = t[a][i]
            if p >= 0:
                l = t[p][j]
                if l >= 0:
                    r = t[a][v]
                    if r >= 0 and l != r:
                        return False
        for a in rng:
            ta = t[a]
            for b in rng:
                if ta[b] == i:
                    q = t[b][j]
                    if q >= 0:
                        r = ta[q]
                        if r >= 0 and r != v:
                            return False
        for b in rng:
            tb = t[b]
            if j in tb:
                p = ti[b]
                if p >= 0:
                    tp = t[p]
                    for c in rng:
                        if tb[c] == j:
                            l = tp[c]
                            if l >= 0 and l != v:
                                return False
        return True

    cells = [(i, j) for i in rng for j in rng]
    start = 0
    if first_row is not None:
        for j, v in enumerate(first_row):
            t[0][j] = v
            if not ok(0, j):
                return found
        start = n

    def rec(idx: int) -> None:
        if idx == n * n:
            found.add(canonical_table_bytes(t, mode))
            return
        i, j = cells[idx]
        row = t[i]
        for v in rng:
            row[j] = v
            if ok(i, j):
                rec(idx + 1)
        row[j] = -1

    rec(start)
    return found


def _enum_worker(args) -> list[bytes]:
    n, mode, first_row = args
    return sorted(_dfs_collect(n, mode, first_row))


def enumerate_semigroups(n: int, mode: str = MODE_ISOMORPHISM, jobs: int = 1) -> Corpus:
    """All semigroups of order n up to isomorphism (or iso + anti-iso)."""
    if not 1 <= n <= _ENUM_MAX_ORDER:
        raise OrderBoundExceeded(f"enumeration supports orders 1..{_ENUM_MAX_ORDER}")
    if mode not in (MODE_ISOMORPHISM, MODE_EQUIVALENCE):
        raise CorpusError(f"unknown mode {mode!r}")
    if jobs > 1 and n >= 3:
        tasks = [(n, mode, row) for row in product(range(n), repeat=n)]
        forms: set[bytes] = set()
        with Pool(jobs) as pool:
            for chunk in pool.imap_unordered(_enum_worker, tasks, chunksize=max(1, len(tasks) // (8 * jobs))):
                forms.update(chunk)
    else:
        forms = _dfs_collect(n, mode)
    entries = []
    for i, data in enumerate(sorted(forms)):
        rows = tuple(tuple(data[r * n + c] for c in range(n)) for r in range(n))
        h = hashlib.sha256(data).hexdigest()[:12]
        entries.append(FiniteSemigroup(rows, name=f"sgp_{n}_{h}"))
    return Corpus(n, mode, tuple(entries))


# -- independent brute-force oracle (pure python, no search tree) ------------

def _assoc_plain(rows) -> bool:
    n = len(rows)
    for i in range(n):
        for j in range(n):
            rij = rows[i][j]
            for k in range(n):
                if rows[rij][k] != rows[i][rows[j][k]]:
                    return False
    return True


def python_canonical(rows, mode: str = MODE_ISOMORPHISM) -> bytes:
    """Minimum relabeling computed without numpy; oracle twin of canonical_form."""
    n = len(rows)
    candidates = [rows]
    if mode == MODE_EQUIVALENCE:
        candidates.append([[rows[j][i] for j in range(n)] for i in range(n)])
    best = None
    for tab in candidates:
        for perm in permutations(range(n)):
            inv = [0] * n
            for i, p in enumerate(perm):
                inv[p] = i
            rel = bytes(perm[tab[inv[x]][inv[y]]] for x in range(n) for y in range(n))
            if best is None or rel < best:
                best = rel
    return best


def brute_force_canonical_set(n: int, mode: str = MODE_ISOMORPHISM) -> set[bytes]:
    """Canonical forms of all n^(n*n) tables that happen to be associative.

    Exhaustive over raw tables, so only sensible for n <= 3; used to verify
    the backtracking enumerator against an independent path.
    """
    out = set()
    for flat in product(range(n), repeat=n * n):
        rows = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
        if _assoc_plain(rows):
            out.add(python_canonical(rows, mode))
    return out


# -- corpus persistence ------------------------------------------------------

_INDEX_NAME = "index.txt"


def _read_index(dirpath: Path) -> dict[tuple[int, str], int]:
    index: dict[tuple[int, str], int] = {}
    path = dirpath / _INDEX_NAME
    if not path.exists():
        return index
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = dict(part.split("=", 1) for part in line.split())
        index[(int(fields["order"]), fields["mode"])] = int(fields["count"])
    return index


def _write_index(dirpath: Path, index: dict[tuple[int, str], int]) -> None:
    lines = [
        f"order={order} mode={mode} count={count}"
        for (order, mode), count in sorted(index.items())
    ]
    (dirpath / _INDEX_NAME).write_text("\n".join(lines) + "\n")


def save_corpus(corpus: Corpus, dirpath) -> None:
    path = Path(dirpath)
    path.mkdir(parents=True, exist_ok=True)
    for S in corpus.entries:
        data = bytes(v for row in S.table for v in row)
        h = hashlib.sha256(data).hexdigest()[:12]
        (path / f"sgp_{corpus.order}_{h}.sgp").write_text(format_sgp(S))
    index = _read_index(path)
    index[(corpus.order, corpus.mode)] = len(corpus.entries)
    _write_index(path, index)


def load_corpus(dirpath, order: int, mode: str = MODE_ISOMORPHISM) -> Optional[Corpus]:
    """Read a persisted corpus back, or None when the index has no entry.

    Both modes share entry files (an equivalence-canonical table is also
    isomorphism-canonical), so membership is decided by re-canonicalizing.
    """
    path = Path(dirpath)
    index = _read_index(path)
    expected = index.get((order, mode))
    if expected is None:
        return None
    entries = []
    for f in sorted(path.glob(f"sgp_{order}_*.sgp")):
        S = parse_sgp(f.read_text(), name=f.stem)
        data = bytes(v for row in S.table for v in row)
        if canonical_table_bytes(S.table, mode) == data:
            entries.append((data, S))
    if len(entries) != expected:
        raise CorpusError(
            f"index promises {expected} entries for order={order} mode={mode}, found {len(entries)}"
        )
    return Corpus(order, mode, tuple(S for _, S in sorted(entries, key=lambda kv: kv[0])))


_CACHE: dict[tuple[int, str], Corpus] = {}


def get_corpus(order: int, mode: str = MODE_ISOMORPHISM, corpus_dir=None, jobs: int = 1) -> Corpus:
    """Cached corpus access: memory, then disk (if a directory is given),
    then fresh enumeration (persisted back when a directory is given)."""
    key = (order, mode)
    corpus = _CACHE.get(key)
    if corpus is None and corpus_dir is not None:
        corpus = load_corpus(corpus_dir, order, mode)
    if corpus is None:
        corpus = enumerate_semigroups(order, mode, jobs=jobs)
    _CACHE[key] = corpus
    if corpus_dir is not None and key not in _read_index(Path(corpus_dir)):
        save_corpus(corpus, corpus_dir)
    return corpus


# -- batteries ---------------------------------------------------------------

@dataclass(frozen=True)
class Mismatch:
    battery_id: str
    detail: str
    sgp: str
    eqs: Optional[str] = None
    assignment: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "battery": self.battery_id,
            "detail": self.detail,
            "sgp": self.sgp,
            "eqs": self.eqs,
            "assignment": self.assignment,
        }


@dataclass(frozen=True)
class Battery:
    id: str
    description: str
    make_tasks: Callable


@dataclass
class BatteryReport:
    battery_id: str
    description: str
    max_order: int
    items: int
    mismatches: list[Mismatch] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _evidence(verdict) -> Optional[dict]:
    return verdict.counterexample or verdict.witness


def _mk(battery_id, S, detail, eqs_id=None, assignment=None) -> Mismatch:
    from .eqsys import CATALOG_TEXTS

    return Mismatch(
        battery_id,
        detail,
        format_sgp(S),
        CATALOG_TEXTS.get(eqs_id, eqs_id) if eqs_id else None,
        assignment,
    )


_PROP21_PAIRS = (
    ("eq2.reg", "regular"),
    ("eq3.lg", "left_group"),
    ("eq3.rg", "right_group"),
    ("eq4.g", "group"),
    ("eq5.cr", "completely_regular"),
    ("eq6.cs", "completely_simple"),
)

_PROP22_PAIRS = (
    ("eq9.inv", "inverse"),
    ("eq10.ri", "right_inverse"),
    ("eq11.o", "orthodox"),
    ("eq12.cn", "conventional"),
    ("eq13.es", "idempotent_solid"),
)


def _check_detector_pairs(battery_id, sgp, pairs):
    S = parse_sgp(sgp)
    report = classify(S)
    out = []
    for eq_id, detector in pairs:
        v = satisfies(S, catalog(eq_id))
        want = report.flags()[detector]
        if v.satisfied != want:
            out.append(_mk(
                battery_id, S,
                f"{eq_id} verdict {v.satisfied} but detector {detector} is {want}",
                eq_id, _evidence(v),
            ))
    return out


def _check_prop21(payload):
    return _check_detector_pairs("prop2.1", payload["sgp"], _PROP21_PAIRS)


def _check_eq7(payload):
    return _check_detector_pairs("eq7.sg", payload["sgp"], (("eq7.sg", "clifford"),))


def _check_prop22(payload):
    return _check_detector_pairs("prop2.2", payload["sgp"], _PROP22_PAIRS)


def _check_eq14(payload):
    return _check_detector_pairs("eq14", payload["sgp"], (("eq14.monoid", "monoid"),))


def _check_bisimple(payload):
    return _check_detector_pairs("bisimple", payload["sgp"], (("bisimple.rxlb", "bisimple_regular"),))


def _check_lemma23(payload):
    S = parse_sgp(payload["sgp"])
    g = green_data(S)
    direct = preinverse_witnesses(S)
    right = preinverse_witnesses_right_form(S, g)
    left = preinverse_witnesses_left_form(S, g)
    if direct == right == left:
        return []
    return [_mk("lemma2.3", S, f"witness sets differ: direct={direct} right={right} left={left}")]


def _check_prop24(payload):
    S = parse_sgp(payload["sgp"])
    g = green_data(S)
    out = []
    for x in preinverse_witnesses(S):
        profile = preinverse_profile(S, x, g)
        if not profile.all_ok:
            out.append(_mk("prop2.4", S, f"profile fails at witness x={x}: {profile}"))
    return out


def _check_remark25(payload):
    S = a21()
    out = []
    profile = preinverse_profile(S, S.identity())
    if not profile.all_ok:
        out.append(_mk("remark2.5", S, "profile at the adjoined identity should pass"))
    if preinverse_witnesses(S):
        out.append(_mk("remark2.5", S, "no universal pre-inverse should exist"))
    v = satisfies(S, catalog("eq15.B"))
    if v.satisfied:
        out.append(_mk("remark2.5", S, "eq15.B should be unsatisfied", "eq15.B", _evidence(v)))
    return out


def _check_prop26(payload):
    S = parse_sgp(payload["sgp"])
    inter = intersection_of_all_inverses(S)
    report = classify(S)
    out = []
    if inter and inter != set(S.elements()):
        out.append(_mk("prop2.6", S, f"common inverse set is neither empty nor S: {sorted(inter)}"))
    if (inter == set(S.elements())) != report.rectangular_band:
        out.append(_mk("prop2.6", S, "common-inverse-set = S must coincide with rectangular band"))
    return out


def _r_classes_closed(S, g) -> bool:
    t = S.table
    for cls in g.r_classes:
        members = set(cls)
        for a in cls:
            for b in cls:
                if t[a][b] not in members:
                    return False
    return True


def _l_classes_closed(S, g) -> bool:
    t = S.table
    for cls in g.l_classes:
        members = set(cls)
        for a in cls:
            for b in cls:
                if t[a][b] not in members:
                    return False
    return True


def _check_prop27(payload):
    S = parse_sgp(payload["sgp"])
    g = green_data(S)
    v = satisfies(S, catalog("eq17.rsub"))
    via_green = all(g.r_related(a, S.table[a][a]) for a in S.elements())
    via_closure = _r_classes_closed(S, g)
    if v.satisfied == via_green == via_closure:
        return []
    return [_mk(
        "prop2.7", S,
        f"eq17.rsub={v.satisfied}, a R a^2 check={via_green}, R-class closure={via_closure}",
        "eq17.rsub", _evidence(v),
    )]


def _check_cor28(payload):
    S = parse_sgp(payload["sgp"])
    report = classify(S)
    v = satisfies(S, catalog("eq19.regrsub"))
    want = report.regular and report.r_classes_subsemigroups
    if v.satisfied == want:
        return []
    return [_mk("cor2.8", S, f"eq19.regrsub={v.satisfied} but regular+R-closed={want}",
                "eq19.regrsub", _evidence(v))]


def _check_thm210(payload):
    S = parse_sgp(payload["sgp"])
    report = classify(S)
    vr = satisfies(S, catalog("def2.9.cr"))
    vl = satisfies(S, catalog("def2.9.cl"))
    if vr.satisfied == vl.satisfied == report.completely_regular:
        return []
    return [_mk(
        "thm2.10", S,
        f"def2.9.cr={vr.satisfied}, def2.9.cl={vl.satisfied}, "
        f"completely_regular={report.completely_regular}",
        "def2.9.cr", _evidence(vr),
    )]


def _check_cor211(payload):
    S = parse_sgp(payload["sgp"])
    report = classify(S)
    if not report.regular:
        return []
    r_sub = report.r_classes_subsemigroups
    l_sub = report.l_classes_subsemigroups
    if r_sub == l_sub == report.completely_regular:
        return []
    return [_mk("cor2.11", S,
                f"regular S: R-closed={r_sub}, L-closed={l_sub}, CR={report.completely_regular}")]


def _check_lemma212(payload):
    S = parse_sgp(payload["sgp"])
    report = classify(S)
    if not report.inverse:
        return []
    if report.r_classes_subsemigroups == report.clifford:
        return []
    return [_mk("lemma2.12", S,
                f"inverse S: a R a^2 = {report.r_classes_subsemigroups} but clifford={report.clifford}")]


def _check_prop213(payload):
    S = parse_sgp(payload["sgp"])
    report = classify(S)
    verdicts = {i: satisfies(S, catalog(i)).satisfied
                for i in ("eq6.cs", "prop2.13.ii", "prop2.13.iii")}
    values = set(verdicts.values()) | {report.completely_simple}
    if len(values) == 1:
        return []
    return [_mk("prop2.13", S, f"verdicts {verdicts} vs completely_simple={report.completely_simple}")]


def _check_closure_p(payload):
    S = parse_sgp(payload["sgp"])
    eq_id = payload["eq"]
    e = catalog(eq_id)
    out = []
    if not satisfies(S, e).satisfied:
        return out
    for other in payload["others"]:
        T = parse_sgp(other)
        v = satisfies(direct_product(S, T), e)
        if not v.satisfied:
            out.append(_mk("closure.P", S,
                           f"{eq_id} holds in both factors but fails in the product "
                           f"with:\n{other}", eq_id, _evidence(v)))
    return out


def _check_closure_h(payload):
    S = parse_sgp(payload["sgp"])
    quotients = None
    out = []
    for eq_id in catalog_ids():
        e = catalog(eq_id)
        if not satisfies(S, e).satisfied:
            continue
        if quotients is None:
            quotients = [q for _, q in congruences(S) if 1 < q.order < S.order]
        for Q in quotients:
            v = satisfies(Q, e)
            if not v.satisfied:
                out.append(_mk("closure.H", S,
                               f"{eq_id} holds but fails in the quotient {format_sgp(Q)}",
                               eq_id, _evidence(v)))
    return out


_EXISTENTIAL_FIXTURES = (
    "exists x : x = x",
    "exists x : x x = x",
    "exists x, y : x y = y x",
    "exists p, q : p q = q p & q = q q",
)


def _existential_texts() -> list[str]:
    from .eqsys import CATALOG_TEXTS

    texts = [text for i, text in CATALOG_TEXTS.items() if catalog(i).is_existential]
    texts.extend(_EXISTENTIAL_FIXTURES)
    return texts


def _check_closure_exist_up(payload):
    S = parse_sgp(payload["sgp"])
    out = []
    for text in payload["systems"]:
        e = parse(text)
        if not satisfies(S, e).satisfied:
            continue
        for tag, bigger in (("adjoined identity", adjoin_identity(S)),
                            ("adjoined zero", adjoin_zero(S))):
            if not satisfies(bigger, e).satisfied:
                out.append(_mk("closure.exist-up", S,
                               f"existential system fails after {tag}", text))
        for other in payload["others"]:
            T = parse_sgp(other)
            if not satisfies(direct_product(S, T), e).satisfied:
                out.append(_mk("closure.exist-up", S,
                               f"existential system fails in product with:\n{other}", text))
    return out


_CHECKS: dict[str, Callable] = {
    "prop2.1": _check_prop21,
    "eq7.sg": _check_eq7,
    "prop2.2": _check_prop22,
    "eq14": _check_eq14,
    "lemma2.3": _check_lemma23,
    "prop2.4": _check_prop24,
    "remark2.5": _check_remark25,
    "prop2.6": _check_prop26,
    "prop2.7": _check_prop27,
    "cor2.8": _check_cor28,
    "thm2.10": _check_thm210,
    "cor2.11": _check_cor211,
    "lemma2.12": _check_lemma212,
    "prop2.13": _check_prop213,
    "bisimple": _check_bisimple,
    "closure.P": _check_closure_p,
    "closure.H": _check_closure_h,
    "closure.exist-up": _check_closure_exist_up,
}


def _per_entry_tasks(corpus_fn, max_order):
    return [
        {"sgp": format_sgp(S)}
        for order in range(1, max_order + 1)
        for S in corpus_fn(order).entries
    ]


def _closure_p_tasks(corpus_fn, max_order):
    bound = min(max_order, 3)
    entries = [S for order in range(1, bound + 1) for S in corpus_fn(order).entries]
    tasks = []
    for eq_id in catalog_ids():
        e = catalog(eq_id)
        satisfying = [format_sgp(S) for S in entries if satisfies(S, e).satisfied]
        tasks.extend(
            {"eq": eq_id, "sgp": sgp, "others": tuple(satisfying)} for sgp in satisfying
        )
    return tasks


def _closure_exist_up_tasks(corpus_fn, max_order):
    others = [
        format_sgp(S) for order in range(1, min(max_order, 3) + 1)
        for S in corpus_fn(order).entries
    ]
    systems = tuple(_existential_texts())
    return [
        {"sgp": format_sgp(S), "systems": systems, "others": tuple(others)}
        for order in range(1, max_order + 1)
        for S in corpus_fn(order).entries
    ]


_BATTERY_DEFS: dict[str, tuple[str, Callable]] = {
    "prop2.1": ("single-equation classes match their structural detectors", _per_entry_tasks),
    "eq7.sg": ("regularity plus the commuting-product equation characterizes clifford", _per_entry_tasks),
    "prop2.2": ("inverse-family equational bases match their detectors", _per_entry_tasks),
    "eq14": ("the exists-forall identity pair characterizes monoids", _per_entry_tasks),
    "lemma2.3": ("three universal pre-inverse formulations have equal witness sets", _per_entry_tasks),
    "prop2.4": ("every universal pre-inverse witness passes the structural profile", _per_entry_tasks),
    "remark2.5": ("the order-6 fixture passes the profile yet has no universal pre-inverse",
                  lambda corpus_fn, max_order: [{}]),
    "prop2.6": ("the common inverse set is empty or everything, the latter iff rectangular band",
                _per_entry_tasks),
    "prop2.7": ("a = a^2 x solvability, a R a^2, and R-class closure coincide", _per_entry_tasks),
    "cor2.8": ("a = a^2 x a solvability means regular with R-classes closed", _per_entry_tasks),
    "thm2.10": ("right-regular and left-regular systems both define complete regularity", _per_entry_tasks),
    "cor2.11": ("in regular semigroups R-closure, L-closure and complete regularity agree", _per_entry_tasks),
    "lemma2.12": ("in inverse semigroups a R a^2 everywhere means clifford", _per_entry_tasks),
    "prop2.13": ("three two-parameter equations all define complete simplicity", _per_entry_tasks),
    "bisimple": ("the regularity + R/L-linkage system characterizes regular bisimple", _per_entry_tasks),
    "closure.P": ("catalog classes are closed under direct products", _closure_p_tasks),
    "closure.H": ("catalog classes are closed under congruence quotients", _per_entry_tasks),
    "closure.exist-up": ("existential systems survive containing semigroups", _closure_exist_up_tasks),
}

BATTERIES: dict[str, Battery] = {
    bid: Battery(bid, desc, maker) for bid, (desc, maker) in _BATTERY_DEFS.items()
}


def battery_ids() -> tuple[str, ...]:
    return tuple(BATTERIES)


def _run_battery_task(args):
    battery_id, payload = args
    return _CHECKS[battery_id](payload)


def verify_battery(battery_id: str, max_order: int, corpus_dir=None, jobs: int = 1) -> BatteryReport:
    """Run one battery over every corpus entry of order <= max_order."""
    if battery_id not in BATTERIES:
        raise UnknownBattery(battery_id)
    battery = BATTERIES[battery_id]
    start = time.perf_counter()

    def corpus_fn(order, mode=MODE_ISOMORPHISM):
        return get_corpus(order, mode, corpus_dir=corpus_dir)

    tasks = battery.make_tasks(corpus_fn, max_order)
    mismatches: list[Mismatch] = []
    if jobs > 1:
        with Pool(jobs) as pool:
            for found in pool.imap_unordered(
                _run_battery_task, [(battery_id, p) for p in tasks], chunksize=4
            ):
                mismatches.extend(found)
    else:
        for payload in tasks:
            mismatches.extend(_CHECKS[battery_id](payload))
    return BatteryReport(
        battery_id, battery.description, max_order, len(tasks), mismatches,
        time.perf_counter() - start,
    )
