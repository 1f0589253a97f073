"""Regular languages and lasso omega-languages over small alphabets.

Regular languages carry epsilon-free nondeterministic automata and form
an idempotent semiring with star under union, concatenation and Kleene
star.  Omega behaviour is modelled by finite unions of U . V^omega with
epsilon not in V; membership of ultimately periodic words is decided by
a lasso search on a product graph, and omega-language equality is
checked on all short lassos up to a stated bound.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import (
    AlphabetMismatch,
    BudgetExceeded,
    EpsilonInOmegaBase,
    ParseError,
)

MAX_DFA_STATES = 64


@dataclass(frozen=True)
class RegularLang:
    """An epsilon-free NFA; states are 0 .. n-1."""

    alphabet: frozenset
    n: int
    transitions: frozenset  # triples (src, symbol, dst)
    initial: frozenset
    final: frozenset


@dataclass(frozen=True)
class LassoLang:
    """A finite union of U . V^omega components; every V rejects epsilon."""

    pairs: tuple  # tuple of (RegularLang, RegularLang)


@dataclass(frozen=True)
class BoundedVerdict:
    equal: bool
    bound: int
    counterexample: Optional[Tuple[str, str]] = None

    def __str__(self) -> str:
        if self.equal:
            return f"equal up to {self.bound}"
        u, v = self.counterexample
        return f"differ on {u!r}({v!r})^w"


# ----------------------------------------------------------------------
# Construction


def lang_empty(alphabet: Iterable[str]) -> RegularLang:
    return RegularLang(frozenset(alphabet), 1, frozenset(), frozenset([0]), frozenset())


def lang_epsilon(alphabet: Iterable[str]) -> RegularLang:
    return RegularLang(
        frozenset(alphabet), 1, frozenset(), frozenset([0]), frozenset([0])
    )


def lang_symbol(sym: str, alphabet: Iterable[str]) -> RegularLang:
    alphabet = frozenset(alphabet)
    if sym not in alphabet:
        raise AlphabetMismatch(f"symbol {sym!r} outside alphabet {sorted(alphabet)}")
    return RegularLang(
        alphabet, 2, frozenset([(0, sym, 1)]), frozenset([0]), frozenset([1])
    )


def _check_alphabet(a: RegularLang, b: RegularLang) -> frozenset:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(
            f"alphabets {sorted(a.alphabet)} and {sorted(b.alphabet)} differ"
        )
    return a.alphabet


def _shifted(trans: Iterable[tuple], k: int) -> Set[tuple]:
    return {(s + k, a, t + k) for s, a, t in trans}


def accepts_epsilon(lang: RegularLang) -> bool:
    return bool(lang.initial & lang.final)


def lang_union(a: RegularLang, b: RegularLang) -> RegularLang:
    alphabet = _check_alphabet(a, b)
    trans = set(a.transitions) | _shifted(b.transitions, a.n)
    initial = set(a.initial) | {q + a.n for q in b.initial}
    final = set(a.final) | {q + a.n for q in b.final}
    return RegularLang(
        alphabet, a.n + b.n, frozenset(trans), frozenset(initial), frozenset(final)
    )


def lang_concat(a: RegularLang, b: RegularLang) -> RegularLang:
    alphabet = _check_alphabet(a, b)
    trans = set(a.transitions) | _shifted(b.transitions, a.n)
    # each final state of a mimics the initial fan-out of b
    for s, sym, t in b.transitions:
        if s in b.initial:
            for f in a.final:
                trans.add((f, sym, t + a.n))
    initial = set(a.initial)
    if accepts_epsilon(a):
        initial |= {q + a.n for q in b.initial}
    final = {q + a.n for q in b.final}
    if accepts_epsilon(b):
        final |= set(a.final)
    return RegularLang(
        alphabet, a.n + b.n, frozenset(trans), frozenset(initial), frozenset(final)
    )


def lang_star(a: RegularLang) -> RegularLang:
    # fresh state a.n accepts epsilon and restarts after every final
    trans = set(a.transitions)
    entry = [(s, sym, t) for s, sym, t in a.transitions if s in a.initial]
    for s, sym, t in entry:
        trans.add((a.n, sym, t))
        for f in a.final:
            trans.add((f, sym, t))
    return RegularLang(
        a.alphabet,
        a.n + 1,
        frozenset(trans),
        frozenset([a.n]),
        frozenset(a.final | {a.n}),
    )


# ----------------------------------------------------------------------
# Acceptance and equality


def accepts(lang: RegularLang, word: str) -> bool:
    current = set(lang.initial)
    for sym in word:
        current = {t for s, a, t in lang.transitions if s in current and a == sym}
        if not current:
            return False
    return bool(current & lang.final)


@functools.lru_cache(maxsize=4096)
def _dfa(lang: RegularLang) -> Tuple[tuple, Dict[Tuple[int, str], int], FrozenSet[int]]:
    """Subset construction; state 0 is the initial subset.

    Returns (alphabet order, transition map, accepting DFA states).  The
    construction is complete: the empty subset is an ordinary state.
    """
    syms = tuple(sorted(lang.alphabet))
    by_sym: Dict[Tuple[int, str], Set[int]] = {}
    for s, a, t in lang.transitions:
        by_sym.setdefault((s, a), set()).add(t)
    start = frozenset(lang.initial)
    index = {start: 0}
    queue = [start]
    delta: Dict[Tuple[int, str], int] = {}
    accepting: Set[int] = set()
    while queue:
        subset = queue.pop()
        i = index[subset]
        if subset & lang.final:
            accepting.add(i)
        for a in syms:
            nxt = frozenset().union(*(by_sym.get((q, a), set()) for q in subset))
            if nxt not in index:
                if len(index) >= MAX_DFA_STATES:
                    raise BudgetExceeded(
                        f"determinization exceeds {MAX_DFA_STATES} states"
                    )
                index[nxt] = len(index)
                queue.append(nxt)
            delta[(i, a)] = index[nxt]
    return syms, delta, frozenset(accepting)


def lang_equal(a: RegularLang, b: RegularLang) -> bool:
    """Exact equality via emptiness of the symmetric difference."""
    _check_alphabet(a, b)
    syms_a, delta_a, acc_a = _dfa(a)
    _, delta_b, acc_b = _dfa(b)
    seen = {(0, 0)}
    queue = [(0, 0)]
    while queue:
        i, j = queue.pop()
        if (i in acc_a) != (j in acc_b):
            return False
        for sym in syms_a:
            nxt = (delta_a[(i, sym)], delta_b[(j, sym)])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def lang_is_empty(lang: RegularLang) -> bool:
    seen = set(lang.initial)
    queue = list(seen)
    while queue:
        q = queue.pop()
        if q in lang.final:
            return False
        for s, _a, t in lang.transitions:
            if s == q and t not in seen:
                seen.add(t)
                queue.append(t)
    return True


def enumerate_words(lang: RegularLang, maxlen: int) -> List[str]:
    syms = sorted(lang.alphabet)
    out = []
    for length in range(maxlen + 1):
        for tup in product(syms, repeat=length):
            word = "".join(tup)
            if accepts(lang, word):
                out.append(word)
    return out


# ----------------------------------------------------------------------
# Regex literals


def parse_regex(text: str, alphabet: Optional[Iterable[str]] = None) -> RegularLang:
    """Parse letters, '1' (epsilon), '0' (empty), '|', '.', '*', parens.

    Juxtaposition concatenates; '.' is an explicit concatenation dot.
    The alphabet defaults to the letters occurring in the expression.
    """
    if alphabet is None:
        alphabet = {c for c in text if c.isalpha()}
    sigma = frozenset(alphabet)
    pos = 0

    def peek() -> Optional[str]:
        return text[pos] if pos < len(text) else None

    def take() -> str:
        nonlocal pos
        c = text[pos]
        pos += 1
        return c

    def parse_alt() -> RegularLang:
        lang = parse_cat()
        while peek() == "|":
            take()
            lang = lang_union(lang, parse_cat())
        return lang

    def parse_cat() -> RegularLang:
        lang = parse_term()
        while True:
            c = peek()
            if c == ".":
                take()
                lang = lang_concat(lang, parse_term())
            elif c is not None and (c.isalpha() or c in "10("):
                lang = lang_concat(lang, parse_term())
            else:
                return lang

    def parse_term() -> RegularLang:
        lang = parse_atom()
        while peek() == "*":
            take()
            lang = lang_star(lang)
        return lang

    def parse_atom() -> RegularLang:
        c = peek()
        if c is None:
            raise ParseError("unexpected end of regex")
        if c == "(":
            take()
            lang = parse_alt()
            if peek() != ")":
                raise ParseError(f"missing ')' at position {pos}")
            take()
            return lang
        take()
        if c == "1":
            return lang_epsilon(sigma)
        if c == "0":
            return lang_empty(sigma)
        if c.isalpha():
            return lang_symbol(c, sigma)
        raise ParseError(f"unexpected {c!r} at position {pos - 1}")

    lang = parse_alt()
    if pos != len(text):
        raise ParseError(f"trailing input at position {pos}")
    return lang


# ----------------------------------------------------------------------
# Lasso omega-languages


def lasso(pairs: Sequence[Tuple[RegularLang, RegularLang]]) -> LassoLang:
    pairs = tuple(pairs)
    for _u, v in pairs:
        if accepts_epsilon(v):
            raise EpsilonInOmegaBase("omega base must reject the empty word")
    if pairs:
        sigma = pairs[0][0].alphabet
        for u, v in pairs:
            if u.alphabet != sigma or v.alphabet != sigma:
                raise AlphabetMismatch("lasso components must share one alphabet")
    return LassoLang(pairs)


EMPTY_LASSO = LassoLang(())


def omega_power(lang: RegularLang) -> LassoLang:
    if accepts_epsilon(lang):
        raise EpsilonInOmegaBase("omega base must reject the empty word")
    return lasso([(lang_epsilon(lang.alphabet), lang)])


def lasso_action(lang: RegularLang, w: LassoLang) -> LassoLang:
    return lasso([(lang_concat(lang, u), v) for u, v in w.pairs])


def lasso_union(w1: LassoLang, w2: LassoLang) -> LassoLang:
    return lasso(tuple(w1.pairs) + tuple(w2.pairs))


@functools.lru_cache(maxsize=4096)
def _buchi_for_pair(u: RegularLang, v: RegularLang):
    """Buchi automaton for U . V^omega as (transitions, initial, accepting).

    States are ('u', q) inside U and ('v', q, flag) inside V, where flag
    marks that the letter just read completed a V-word and restarted.
    Accepting states are exactly the flagged ones: a run is in the
    language iff infinitely many V-words complete.
    """
    trans: Dict[Tuple[object, str], Set[object]] = {}

    def add(src, sym, dst):
        trans.setdefault((src, sym), set()).add(dst)

    for s, sym, t in u.transitions:
        add(("u", s), sym, ("u", t))
        if t in u.final:
            for i in v.initial:
                add(("u", s), sym, ("v", i, 0))
    for s, sym, t in v.transitions:
        for flag in (0, 1):
            add(("v", s, flag), sym, ("v", t, 0))
            if t in v.final:
                for i in v.initial:
                    add(("v", s, flag), sym, ("v", i, 1))
    initial: Set[object] = {("u", q) for q in u.initial}
    if accepts_epsilon(u):
        initial |= {("v", i, 0) for i in v.initial}
    accepting = {("v", q, 1) for q in v.initial}
    return trans, frozenset(initial), frozenset(accepting)


def _pair_member(u_word: str, v_word: str, pair) -> bool:
    """Does u_word . v_word^omega belong to U . V^omega?

    Runs the pair's Buchi automaton against the ultimately periodic
    word: product nodes are (position class, state) where position
    classes wrap modulo the period after the prefix, and acceptance is a
    reachable flagged node lying on a cycle.
    """
    trans, initial, accepting = _buchi_for_pair(*pair)
    plen, period = len(u_word), len(v_word)

    def letter(cls: int) -> str:
        return u_word[cls] if cls < plen else v_word[cls - plen]

    def successors(node):
        cls, state = node
        nxt_cls = cls + 1
        if nxt_cls >= plen + period:
            nxt_cls = plen
        for dst in trans.get((state, letter(cls)), ()):
            yield (nxt_cls, dst)

    start = {(0, s) for s in initial}
    seen = set(start)
    queue = list(start)
    while queue:
        node = queue.pop()
        for nxt in successors(node):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)

    for node in seen:
        if node[1] not in accepting:
            continue
        # nonempty cycle back to the flagged node
        frontier = set(successors(node))
        visited = set(frontier)
        while frontier:
            cur = frontier.pop()
            if cur == node:
                return True
            for nxt in successors(cur):
                if nxt not in visited:
                    visited.add(nxt)
                    frontier.add(nxt)
    return False


def lasso_member(u_word: str, v_word: str, w: LassoLang) -> bool:
    if not v_word:
        raise ValueError("periodic part must be nonempty")
    return any(_pair_member(u_word, v_word, pair) for pair in w.pairs)


def lasso_equal_bounded(w1: LassoLang, w2: LassoLang, bound: int) -> BoundedVerdict:
    """Compare membership on every lasso word with |u| <= B, 1 <= |v| <= B."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    sigma: Set[str] = set()
    for u, v in tuple(w1.pairs) + tuple(w2.pairs):
        sigma |= u.alphabet
    syms = sorted(sigma) or ["a"]
    for ulen in range(bound + 1):
        for utup in product(syms, repeat=ulen):
            u_word = "".join(utup)
            for vlen in range(1, bound + 1):
                for vtup in product(syms, repeat=vlen):
                    v_word = "".join(vtup)
                    if lasso_member(u_word, v_word, w1) != lasso_member(
                        u_word, v_word, w2
                    ):
                        return BoundedVerdict(False, bound, (u_word, v_word))
    return BoundedVerdict(True, bound)


# ----------------------------------------------------------------------
# Algebra instance


def word_algebra(alphabet: Iterable[str]):
    """The regular-language semiring with lasso omega values."""
    from .matrixkleene import StarAlgebra

    sigma = frozenset(alphabet)
    return StarAlgebra(
        name=f"words[{''.join(sorted(sigma))}]",
        join=lang_union,
        mul=lang_concat,
        zero=lang_empty(sigma),
        one=lang_epsilon(sigma),
        star=lang_star,
        equal=lang_equal,
        act=lasso_action,
        vjoin=lasso_union,
        vzero=EMPTY_LASSO,
        omega=omega_power,
    )
