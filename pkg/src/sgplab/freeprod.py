"""Free product of a finite semigroup with the free semigroup on letters.

Elements are alternating sequences of free words and carrier elements (the
normal form). The central operation checks a witness script against an
equation system under the canonical parameter evaluation (parameter number i
becomes letter i), extracting the run equalities that the carrier blocks must
satisfy; those equalities form a purely existential system that captures what
the script proves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .algebra import FiniteSemigroup, InvalidParams, UnassignedSymbol
from .eqsys import EXISTS, EquationSystem, parse

FREE = "f"
CARRIER = "s"


class FreeDependencyViolation(ValueError):
    def __init__(self, variable: str, letter: int):
        super().__init__(f"witness for {variable!r} uses the later-bound letter A{letter}")
        self.variable = variable
        self.letter = letter


class SkeletonMismatch(ValueError):
    def __init__(self, equality_index: int):
        super().__init__(f"free-word skeletons differ in equality {equality_index}")
        self.equality_index = equality_index


class RunProductMismatch(ValueError):
    def __init__(self, equality_index: int, run_index: int):
        super().__init__(
            f"carrier run {run_index} of equality {equality_index} has unequal products"
        )
        self.equality_index = equality_index
        self.run_index = run_index


class ScriptFormatError(ValueError):
    pass


@dataclass(frozen=True)
class FreeProductElement:
    """Normal form: alternating ('f', letters) / ('s', element) segments.

    Letters are positive integers; letter i is the canonical value of the
    i-th parameter, larger numbers are fresh letters.
    """

    segments: tuple[tuple, ...]

    def __post_init__(self):
        if not self.segments:
            raise InvalidParams("element needs at least one segment")
        prev = None
        for seg in self.segments:
            kind = seg[0]
            if kind == FREE:
                if not seg[1] or any(not isinstance(l, int) or l < 1 for l in seg[1]):
                    raise InvalidParams(f"bad free segment {seg!r}")
            elif kind == CARRIER:
                if not isinstance(seg[1], int) or seg[1] < 0:
                    raise InvalidParams(f"bad carrier segment {seg!r}")
            else:
                raise InvalidParams(f"unknown segment kind {seg!r}")
            if kind == prev:
                raise InvalidParams("adjacent segments of the same kind")
            prev = kind

    @property
    def letters(self) -> frozenset[int]:
        return frozenset(l for kind, payload in self.segments if kind == FREE for l in payload)

    @property
    def carriers(self) -> tuple[int, ...]:
        return tuple(payload for kind, payload in self.segments if kind == CARRIER)

    def render(self) -> str:
        parts = []
        for kind, payload in self.segments:
            if kind == FREE:
                parts.extend(f"A{l}" for l in payload)
            else:
                parts.append(f"s{payload}")
        return " ".join(parts)


def free_word(letters: Iterable[int]) -> FreeProductElement:
    return FreeProductElement(((FREE, tuple(letters)),))


def carrier(element: int) -> FreeProductElement:
    return FreeProductElement(((CARRIER, element),))


def fp_multiply(x: FreeProductElement, y: FreeProductElement, S: FiniteSemigroup) -> FreeProductElement:
    """Concatenate and restore alternation at the junction."""
    for e in (*x.carriers, *y.carriers):
        if e >= S.order:
            raise InvalidParams(f"carrier {e} outside the semigroup")
    a = list(x.segments)
    b = list(y.segments)
    if a[-1][0] == b[0][0]:
        if a[-1][0] == FREE:
            joint = (FREE, a[-1][1] + b[0][1])
        else:
            joint = (CARRIER, S.table[a[-1][1]][b[0][1]])
        segs = a[:-1] + [joint] + b[1:]
    else:
        segs = a + b
    return FreeProductElement(tuple(segs))


@dataclass(frozen=True)
class WitnessScript:
    """Assignment of every existential variable to a free-product element."""

    assignments: tuple[tuple[str, FreeProductElement], ...]

    @classmethod
    def of(cls, mapping: dict[str, FreeProductElement]) -> "WitnessScript":
        return cls(tuple(mapping.items()))

    @property
    def mapping(self) -> dict[str, FreeProductElement]:
        return dict(self.assignments)

    def render(self) -> str:
        return "\n".join(f"{var} = {elem.render()}" for var, elem in self.assignments) + "\n"


_WS_TOKEN = re.compile(r"A(\d+)|s(\d+)\Z")


def parse_ws(text: str) -> WitnessScript:
    """Read the witness-script format: lines '<var> = <segments>' where a
    segment token is A<k> (letter) or s<j> (carrier element index)."""
    assignments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScriptFormatError(f"line {lineno}: expected '<var> = <segments>'")
        var, rhs = line.split("=", 1)
        var = var.strip()
        segments: list[tuple] = []
        for tok in rhs.split():
            m = _WS_TOKEN.match(tok)
            if not m:
                raise ScriptFormatError(f"line {lineno}: bad segment token {tok!r}")
            if m.group(1) is not None:
                letter = int(m.group(1))
                if letter < 1:
                    raise ScriptFormatError(f"line {lineno}: letters are numbered from 1")
                if segments and segments[-1][0] == FREE:
                    segments[-1] = (FREE, segments[-1][1] + (letter,))
                else:
                    segments.append((FREE, (letter,)))
            else:
                if segments and segments[-1][0] == CARRIER:
                    raise ScriptFormatError(
                        f"line {lineno}: adjacent carrier tokens are not in normal form"
                    )
                segments.append((CARRIER, int(m.group(2))))
        if not segments:
            raise ScriptFormatError(f"line {lineno}: empty witness")
        assignments.append((var, FreeProductElement(tuple(segments))))
    if not assignments:
        raise ScriptFormatError("script has no assignments")
    return WitnessScript(tuple(assignments))


# -- canonical evaluation ----------------------------------------------------

@dataclass(frozen=True)
class RunSystem:
    """Aligned carrier-run equalities (as element words) and their purely
    existential equation system."""

    equalities: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    system: EquationSystem


_CONVENTION_TEXT = "exists x : x = x"


def _epsilon_c_system(equalities) -> EquationSystem:
    if not equalities:
        return parse(_CONVENTION_TEXT)
    elems = sorted({e for pair in equalities for side in pair for e in side})
    sym = {e: f"xs{e}" for e in elems}
    eqs = tuple(
        (tuple(sym[e] for e in lhs), tuple(sym[e] for e in rhs)) for lhs, rhs in equalities
    )
    system = EquationSystem(((EXISTS, tuple(sym[e] for e in elems)),), eqs)
    return EquationSystem(system.prefix, system.equalities, system.to_text())


def _blocks(word, letter_of, mapping):
    """Substitute and group into alternating free words / uncollapsed runs."""
    out: list[tuple] = []

    def push(kind, payload):
        if out and out[-1][0] == kind:
            out[-1] = (kind, out[-1][1] + payload)
        else:
            out.append((kind, payload))

    for sym in word:
        letter = letter_of.get(sym)
        if letter is not None:
            push(FREE, (letter,))
        else:
            for kind, payload in mapping[sym].segments:
                push(kind, (payload,) if kind == CARRIER else payload)
    return out


def _check_impl(S: FiniteSemigroup, e: EquationSystem, script: WitnessScript,
                validate: bool = True):
    """Returns ('ok', RunSystem) or a failure tag; shared by the raising
    entry point and the bulk search."""
    params = e.parameters
    letter_of = {p: i + 1 for i, p in enumerate(params)}
    mapping = script.mapping
    if validate:
        for var in e.variables:
            if var not in mapping:
                raise UnassignedSymbol(var)
        for var, elem in mapping.items():
            for c in elem.carriers:
                if c >= S.order:
                    raise InvalidParams(f"carrier {c} outside the semigroup")
            later = e.after.get(var, frozenset())
            for letter in sorted(elem.letters):
                if letter <= len(params) and params[letter - 1] in later:
                    return ("dependency", (var, letter))

    t = S.table
    collected: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for idx, (lhs, rhs) in enumerate(e.equalities):
        left = _blocks(lhs, letter_of, mapping)
        right = _blocks(rhs, letter_of, mapping)
        if len(left) != len(right):
            return ("skeleton", idx)
        run_idx = 0
        for (lk, lp), (rk, rp) in zip(left, right):
            if lk != rk or (lk == FREE and lp != rp):
                return ("skeleton", idx)
            if lk == CARRIER:
                a = lp[0]
                for s in lp[1:]:
                    a = t[a][s]
                b = rp[0]
                for s in rp[1:]:
                    b = t[b][s]
                if a != b:
                    return ("runprod", (idx, run_idx))
                if lp != rp:
                    collected.append((lp, rp))
                run_idx += 1
    deduped = tuple(dict.fromkeys(collected))
    return ("ok", RunSystem(deduped, _epsilon_c_system(deduped)))


def canonical_check(S: FiniteSemigroup, e: EquationSystem, script: WitnessScript) -> RunSystem:
    """Check the script under canonical parameter evaluation.

    Parameters take the letters A1, A2, ... in quantifier order; each side of
    each equality is substituted without collapsing the carrier runs. Success
    requires identical free-word skeletons and equal run products, and yields
    the system of abstract run equalities (trivial ones pruned)."""
    status, payload = _check_impl(S, e, script)
    if status == "ok":
        return payload
    if status == "dependency":
        raise FreeDependencyViolation(*payload)
    if status == "skeleton":
        raise SkeletonMismatch(payload)
    raise RunProductMismatch(*payload)


def extract_epsilon_c(rs: RunSystem) -> EquationSystem:
    """The purely existential system of run equalities (convention system
    when nothing nontrivial was extracted)."""
    return rs.system


def max_consecutive_variables(e: EquationSystem) -> int:
    """Longest block of adjacent existential symbols in any word; bounds the
    length of any extractable run."""
    best = 0
    for lhs, rhs in e.equalities:
        for word in (lhs, rhs):
            run = 0
            for s in word:
                run = run + 1 if e.quantifier_of[s] == EXISTS else 0
                best = max(best, run)
    return best


# -- bounded script search ---------------------------------------------------

@dataclass(frozen=True)
class ScriptBudget:
    max_segments: int = 2
    max_free_len: int = 2
    fresh_letters: Optional[int] = None

    @property
    def fresh(self) -> int:
        # more fresh letters than free positions cannot help
        if self.fresh_letters is None:
            return self.max_free_len
        return min(self.fresh_letters, self.max_free_len)


@dataclass(frozen=True)
class ScriptSearchResult:
    script: Optional[WitnessScript]
    systems: tuple[EquationSystem, ...]


def _candidate_elements(letters: list[int], n_carriers: int, budget: ScriptBudget):
    out: list[FreeProductElement] = []

    def words(max_len):
        for length in range(1, max_len + 1):
            yield from product(letters, repeat=length)

    def rec(segs: list, free_used: int):
        if segs:
            out.append(FreeProductElement(tuple(segs)))
        if len(segs) == budget.max_segments:
            return
        last = segs[-1][0] if segs else None
        if last != CARRIER:
            for c in range(n_carriers):
                segs.append((CARRIER, c))
                rec(segs, free_used)
                segs.pop()
        if last != FREE and free_used < budget.max_free_len:
            for w in words(budget.max_free_len - free_used):
                segs.append((FREE, w))
                rec(segs, free_used + len(w))
                segs.pop()

    rec([], 0)
    out.sort(key=lambda el: (len(el.segments), sum(len(p) if k == FREE else 1
                                                   for k, p in el.segments), el.segments))
    return out


def search_scripts(S: FiniteSemigroup, e: EquationSystem, budget: ScriptBudget = ScriptBudget(),
                   collect: bool = False) -> ScriptSearchResult:
    """Enumerate witness scripts within the budget; return the first passing
    one (and, with collect=True, every distinct extracted system).

    Exhausting the budget is reported as absence, not an error."""
    params = e.parameters
    variables = e.variables
    pool = [len(params) + 1 + i for i in range(budget.fresh)]
    per_var = []
    for var in variables:
        later = e.after[var]
        letters = [i + 1 for i, p in enumerate(params) if p not in later]
        per_var.append(_candidate_elements(letters + pool, S.order, budget))

    first: Optional[WitnessScript] = None
    systems: dict = {}
    for combo in product(*per_var):
        script = WitnessScript(tuple(zip(variables, combo)))
        status, payload = _check_impl(S, e, script, validate=False)
        if status != "ok":
            continue
        if first is None:
            first = script
        systems.setdefault(payload.equalities, payload.system)
        if not collect:
            break
    return ScriptSearchResult(first, tuple(systems.values()))
