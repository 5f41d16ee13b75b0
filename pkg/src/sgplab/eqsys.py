"""Quantified equation systems over semigroup words.

A system is a prenex prefix of forall/exists blocks followed by a conjunction
of word equalities. The concrete syntax also offers membership shorthands
(w in E, w in G, w1 in V(w2)) and the Green-style relations rR/rL, all of
which desugar to plain equalities, with any fresh variables appended as a
trailing exists block.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Optional

from .algebra import FiniteSemigroup

FORALL = "forall"
EXISTS = "exists"

_SYMBOL_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_KEYWORDS = {"forall", "exists", "in"}
_SET_NAMES = {"E", "G", "V"}
_REL_NAMES = {"rR", "rL"}


class EquationSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnquantifiedSymbol(ValueError):
    def __init__(self, symbol: str):
        super().__init__(f"symbol {symbol!r} occurs in a word but is not quantified")
        self.symbol = symbol


class DuplicateQuantification(ValueError):
    def __init__(self, symbol: str):
        super().__init__(f"symbol {symbol!r} is quantified more than once")
        self.symbol = symbol


class EmptyWord(ValueError):
    pass


class UnknownId(KeyError):
    pass


Word = tuple[str, ...]
Equality = tuple[Word, Word]
Block = tuple[str, tuple[str, ...]]


def _merge_blocks(prefix) -> tuple[Block, ...]:
    merged: list[tuple[str, list[str]]] = []
    for quant, syms in prefix:
        if merged and merged[-1][0] == quant:
            merged[-1][1].extend(syms)
        else:
            merged.append((quant, list(syms)))
    return tuple((q, tuple(s)) for q, s in merged)


@dataclass(frozen=True)
class EquationSystem:
    """Validated prenex system: quantifier blocks plus word equalities."""

    prefix: tuple[Block, ...]
    equalities: tuple[Equality, ...]
    source_text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "prefix", _merge_blocks(self.prefix))
        if not self.prefix or not self.equalities:
            raise EmptyWord("a system needs at least one block and one equality")
        seen = set()
        for quant, syms in self.prefix:
            if quant not in (FORALL, EXISTS) or not syms:
                raise EmptyWord("each block needs a quantifier and at least one symbol")
            for s in syms:
                if not _SYMBOL_RE.match(s) or s in _KEYWORDS:
                    raise EquationSyntaxError(f"bad symbol {s!r}", 0)
                if s in seen:
                    raise DuplicateQuantification(s)
                seen.add(s)
        for lhs, rhs in self.equalities:
            for word in (lhs, rhs):
                if not word:
                    raise EmptyWord("words must be nonempty")
                for s in word:
                    if s not in seen:
                        raise UnquantifiedSymbol(s)

    @cached_property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for _, syms in self.prefix for s in syms)

    @cached_property
    def quantifier_of(self) -> dict[str, str]:
        return {s: q for q, syms in self.prefix for s in syms}

    @cached_property
    def after(self) -> dict[str, frozenset[str]]:
        """For each symbol, the symbols quantified strictly after it."""
        order = self.symbols
        return {s: frozenset(order[i + 1:]) for i, s in enumerate(order)}

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(s for s in self.symbols if self.quantifier_of[s] == FORALL)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(s for s in self.symbols if self.quantifier_of[s] == EXISTS)

    @property
    def is_existential(self) -> bool:
        return all(q == EXISTS for q, _ in self.prefix)

    def to_text(self) -> str:
        parts = [f"{q} {', '.join(syms)}" for q, syms in self.prefix]
        eqs = " & ".join(f"{' '.join(l)} = {' '.join(r)}" for l, r in self.equalities)
        return f"{' '.join(parts)} : {eqs}"

    def __str__(self):
        return self.to_text()


def render(e: EquationSystem) -> str:
    """Concrete syntax for the (desugared) system; parses back to itself."""
    return e.to_text()


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"#[^\n]*|\s+|[:&=,()]|[A-Za-z][A-Za-z0-9_]*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise EquationSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(0)
        if not tok.startswith("#") and not tok.isspace():
            if tok in ":&=,()":
                tokens.append(("punct", tok, pos))
            elif tok in _KEYWORDS:
                tokens.append(("kw", tok, pos))
            elif tok in _REL_NAMES:
                tokens.append(("rel", tok, pos))
            elif tok in _SET_NAMES:
                tokens.append(("set", tok, pos))
            elif _SYMBOL_RE.match(tok):
                tokens.append(("sym", tok, pos))
            else:
                raise EquationSyntaxError(f"bad token {tok!r}", pos)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        k, v, pos = self.next()
        if k != kind or (value is not None and v != value):
            want = value or kind
            raise EquationSyntaxError(f"expected {want!r}, found {v!r}", pos)
        return v

    def parse_symlist(self) -> list[str]:
        syms = [self.expect("sym")]
        while self.peek()[:2] == ("punct", ","):
            self.next()
            syms.append(self.expect("sym"))
        return syms

    def parse_word(self) -> Word:
        k, v, pos = self.peek()
        if k != "sym":
            raise EquationSyntaxError(f"expected a word, found {v!r}", pos)
        word = []
        while self.peek()[0] == "sym":
            word.append(self.next()[1])
        return tuple(word)

    def parse_atom(self):
        lhs = self.parse_word()
        k, v, pos = self.next()
        if (k, v) == ("punct", "="):
            return ("eq", lhs, self.parse_word())
        if (k, v) == ("kw", "in"):
            sk, sv, spos = self.next()
            if sk != "set":
                raise EquationSyntaxError(f"expected E, G or V after 'in', found {sv!r}", spos)
            if sv == "V":
                self.expect("punct", "(")
                arg = self.parse_word()
                self.expect("punct", ")")
                return ("inV", lhs, arg)
            return ("inE" if sv == "E" else "inG", lhs)
        if k == "rel":
            return ("rR" if v == "rR" else "rL", lhs, self.parse_word())
        raise EquationSyntaxError(f"expected '=', 'in', 'rR' or 'rL', found {v!r}", pos)

    def parse_system(self) -> EquationSystem:
        prefix = []
        while self.peek()[0] == "kw" and self.peek()[1] in (FORALL, EXISTS):
            quant = self.next()[1]
            prefix.append((quant, self.parse_symlist()))
        if not prefix:
            raise EquationSyntaxError("system must start with forall/exists", self.peek()[2])
        self.expect("punct", ":")
        atoms = [self.parse_atom()]
        while self.peek()[:2] == ("punct", "&"):
            self.next()
            atoms.append(self.parse_atom())
        k, v, pos = self.peek()
        if k != "eof":
            raise EquationSyntaxError(f"unexpected trailing {v!r}", pos)
        return _desugar(prefix, atoms, self.text)


def _desugar(prefix, atoms, text) -> EquationSystem:
    used = {s for _, syms in prefix for s in syms}
    fresh: list[str] = []

    def gensym(base: str) -> str:
        name = base
        k = 2
        while name in used:
            name = f"{base}{k}"
            k += 1
        used.add(name)
        fresh.append(name)
        return name

    def v_pair(w1: Word, w2: Word) -> list[Equality]:
        # w1 in V(w2): w2 w1 w2 = w2 and w1 w2 w1 = w1
        return [(w2 + w1 + w2, w2), (w1 + w2 + w1, w1)]

    equalities: list[Equality] = []
    for atom in atoms:
        kind = atom[0]
        if kind == "eq":
            equalities.append((atom[1], atom[2]))
        elif kind == "inE":
            w = atom[1]
            equalities.append((w + w, w))
        elif kind == "inV":
            equalities.extend(v_pair(atom[1], atom[2]))
        elif kind == "inG":
            w = atom[1]
            y = (gensym("y"),)
            equalities.extend(v_pair(y, w))
            equalities.append((w + y, y + w))
        elif kind == "rR":
            w1, w2 = atom[1], atom[2]
            u = (gensym("u"),)
            v = (gensym("v"),)
            equalities.append((w1 + u, w2))
            equalities.append((w2 + v, w1))
        elif kind == "rL":
            w1, w2 = atom[1], atom[2]
            u = (gensym("u"),)
            v = (gensym("v"),)
            equalities.append((u + w1, w2))
            equalities.append((v + w2, w1))
    if fresh:
        prefix = list(prefix) + [(EXISTS, fresh)]
    return EquationSystem(tuple((q, tuple(s)) for q, s in prefix), tuple(equalities), text)


def parse(text: str) -> EquationSystem:
    """Parse and desugar the concrete syntax; see the module grammar."""
    return _Parser(text).parse_system()


# -- satisfaction ------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Result of the quantifier game, with re-checkable evidence.

    counterexample: assignment of the outermost universal block, present
    exactly when the system is unsatisfied and starts with forall.
    witness: full assignment, present exactly when the system is satisfied
    and purely existential.
    """

    satisfied: bool
    counterexample: Optional[dict[str, int]] = None
    witness: Optional[dict[str, int]] = None
    nodes: int = 0
    elapsed: float = 0.0


def _compile(e: EquationSystem):
    slot = {s: i for i, s in enumerate(e.symbols)}
    quants = [e.quantifier_of[s] for s in e.symbols]
    eqs_at: list[list[tuple[tuple[int, ...], tuple[int, ...]]]] = [[] for _ in e.symbols]
    for lhs, rhs in e.equalities:
        li = tuple(slot[s] for s in lhs)
        ri = tuple(slot[s] for s in rhs)
        eqs_at[max(li + ri)].append((li, ri))
    return quants, eqs_at


def satisfies(S: FiniteSemigroup, e: EquationSystem) -> Verdict:
    """Play the quantifier game left to right, evaluating each conjunct as
    soon as its symbols are bound and pruning failed branches."""
    start = time.perf_counter()
    n = S.order
    t = S.table
    quants, eqs_at = _compile(e)
    nsyms = len(quants)
    val = [0] * nsyms
    nodes = 0

    def check(eq) -> bool:
        li, ri = eq
        a = val[li[0]]
        for s in li[1:]:
            a = t[a][val[s]]
        b = val[ri[0]]
        for s in ri[1:]:
            b = t[b][val[s]]
        return a == b

    def solve(i: int) -> bool:
        nonlocal nodes
        if i == nsyms:
            return True
        exists = quants[i] == EXISTS
        local = eqs_at[i]
        for v in range(n):
            val[i] = v
            nodes += 1
            ok = all(check(eq) for eq in local) and solve(i + 1)
            if ok == exists:
                return exists
        return not exists

    satisfied = solve(0)
    counterexample = None
    witness = None
    if satisfied and e.is_existential:
        witness = dict(zip(e.symbols, val))
    elif not satisfied and e.prefix[0][0] == FORALL:
        k = len(e.prefix[0][1])
        for combo in product(range(n), repeat=k):
            val[:k] = combo
            nodes += k
            ok = all(check(eq) for i in range(k) for eq in eqs_at[i]) and solve(k)
            if not ok:
                counterexample = dict(zip(e.prefix[0][1], combo))
                break
        assert counterexample is not None
    return Verdict(satisfied, counterexample, witness, nodes, time.perf_counter() - start)


# -- the named catalog -------------------------------------------------------

_REG3 = "forall a, b exists x, u, v : x in V(a) & u in V(a a) & v in V(b b)"

CATALOG_TEXTS: dict[str, str] = {
    "eq1.cr": "forall a exists x : a = a x a & a x = x a",
    "eq2.reg": "forall a exists x : a = a x a",
    "eq3.lg": "forall a, b exists x : a = a x b",
    "eq3.rg": "forall a, b exists x : a = b x a",
    "eq4.g": "forall a, b exists x : a = b x b",
    "eq5.cr": "forall a exists x : a = a a x a a",
    "eq6.cs": "forall a, b exists x : a = a b x b a",
    "eq7.sg": "forall a, b exists x, y : a = a x a & a b = b y a",
    "eq8.reg3": _REG3,
    "eq9.inv": _REG3 + " & a u a b v b = b v b a u a",
    "eq10.ri": _REG3 + " & a u a b v b a u a = b v b a u a",
    "eq11.o": _REG3 + " & a u a b v b in E",
    "eq12.cn": _REG3 + " & a u a b v b a u a in E",
    "eq13.es": _REG3 + " & a u a b v b in G",
    "eq14.monoid": "exists x forall a : a x = a & x a = a",
    "eq15.B": "exists x forall a : a = a x a",
    "eq16.V": "exists x forall a : x in V(a)",
    "eq17.rsub": "forall a exists x : a = a a x",
    "eq19.regrsub": "forall a exists x : a = a a x a",
    "def2.9.cr": "forall a exists x : a = a a x a",
    "def2.9.cl": "forall a exists x : a = a x a a",
    "prop2.13.ii": "forall a, b exists x : a = a b x a",
    "prop2.13.iii": "forall a, b exists x : a = a x b a",
    "eq22.alt": "forall a exists x forall b : a x b = a b x",
    "bisimple.rxlb": "forall a, b exists w, x : a = a w a & a rR x & x rL b",
}


def catalog_ids() -> tuple[str, ...]:
    return tuple(CATALOG_TEXTS)


@lru_cache(maxsize=None)
def catalog(system_id: str) -> EquationSystem:
    """The parsed, desugared system for a catalog id."""
    try:
        text = CATALOG_TEXTS[system_id]
    except KeyError:
        raise UnknownId(system_id) from None
    return parse(text)
