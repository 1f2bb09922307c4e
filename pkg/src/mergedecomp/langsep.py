"""DFAs, transition semigroups and first-order separability.

Two disjoint languages of nonempty words are FO-separable iff no aperiodic
pointlike pair ``{s1, s2}`` of the recognizing semigroup has ``s1`` accepted
for the first language and ``s2`` for the second.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import FormatError, PreconditionError
from .psat import henckell_pointlikes
from .sgcore.homs import FreeHom
from .sgcore.io import transformation_semigroup
from .sgcore.semigroup import CLOSURE_CAP, Semigroup, SubsetOfS


@dataclass(frozen=True)
class Dfa:
    states: int
    alphabet: tuple[str, ...]
    init: int
    finals: frozenset[int]
    delta: tuple[tuple[int, ...], ...]  # delta[q][letter position]

    def __post_init__(self):
        if self.states < 1:
            raise PreconditionError("a DFA needs at least one state", "langsep")
        if not 0 <= self.init < self.states or any(not 0 <= q < self.states for q in self.finals):
            raise PreconditionError("init and final states must be in range", "langsep")
        if len(self.delta) != self.states or any(len(row) != len(self.alphabet) for row in self.delta):
            raise PreconditionError("transition table is not total", "langsep")

    def step(self, q: int, a: str) -> int:
        return self.delta[q][self.alphabet.index(a)]

    def accepts(self, word: Sequence[str]) -> bool:
        q = self.init
        for a in word:
            q = self.step(q, a)
        return q in self.finals


def parse_dfa(text: str) -> Dfa:
    """Read the line format ``states n`` / ``alphabet a b ...`` / ``init q``
    / ``final q ...`` / ``trans q a q'``. ``#`` starts a comment."""
    n = alphabet = init = finals = None
    trans: dict[tuple[int, str], int] = {}

    def num(tok: str, ln: int) -> int:
        try:
            return int(tok)
        except ValueError:
            raise FormatError(f"expected a state number, got {tok!r}", ln, "langsep") from None

    for ln, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        key, args = toks[0], toks[1:]
        if key == "states":
            if len(args) != 1:
                raise FormatError("usage: states <n>", ln, "langsep")
            n = num(args[0], ln)
        elif key == "alphabet":
            if not args or len(set(args)) != len(args):
                raise FormatError("alphabet needs distinct letters", ln, "langsep")
            alphabet = tuple(args)
        elif key == "init":
            if len(args) != 1:
                raise FormatError("usage: init <q>", ln, "langsep")
            init = num(args[0], ln)
        elif key == "final":
            finals = frozenset(num(a, ln) for a in args)
        elif key == "trans":
            if len(args) != 3:
                raise FormatError("usage: trans <q> <letter> <q'>", ln, "langsep")
            if n is None or alphabet is None:
                raise FormatError("trans before states/alphabet", ln, "langsep")
            q, a, r = num(args[0], ln), args[1], num(args[2], ln)
            if a not in alphabet:
                raise FormatError(f"unknown letter {a!r}", ln, "langsep")
            if not (0 <= q < n and 0 <= r < n):
                raise FormatError("state out of range", ln, "langsep")
            if (q, a) in trans:
                raise FormatError(f"duplicate transition for ({q}, {a})", ln, "langsep")
            trans[(q, a)] = r
        else:
            raise FormatError(f"unknown directive {key!r}", ln, "langsep")
    for what, v in (("states", n), ("alphabet", alphabet), ("init", init), ("final", finals)):
        if v is None:
            raise FormatError(f"missing '{what}' line", None, "langsep")
    if not 0 <= init < n or any(not 0 <= q < n for q in finals):
        raise FormatError("init or final state out of range", None, "langsep")
    delta = []
    for q in range(n):
        row = []
        for a in alphabet:
            if (q, a) not in trans:
                raise FormatError(f"missing transition for ({q}, {a})", None, "langsep")
            row.append(trans[(q, a)])
        delta.append(tuple(row))
    return Dfa(n, alphabet, init, finals, tuple(delta))


def format_dfa(d: Dfa) -> str:
    lines = [f"states {d.states}", "alphabet " + " ".join(d.alphabet), f"init {d.init}", "final " + " ".join(map(str, sorted(d.finals)))]
    for q in range(d.states):
        for i, a in enumerate(d.alphabet):
            lines.append(f"trans {q} {a} {d.delta[q][i]}")
    return "\n".join(lines) + "\n"


def _same_alphabet(d1: Dfa, d2: Dfa) -> None:
    if set(d1.alphabet) != set(d2.alphabet):
        raise PreconditionError("the two DFAs must share an alphabet", "langsep")


def _product_states(d1: Dfa, d2: Dfa) -> tuple[list[tuple[int, int]], dict]:
    """Reachable product states in BFS order and their positions."""
    start = (d1.init, d2.init)
    order, index = [start], {start: 0}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        for a in d1.alphabet:
            nxt = (d1.step(p, a), d2.step(q, a))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
    return order, index


def common_word(d1: Dfa, d2: Dfa) -> tuple[str, ...] | None:
    """A shortest nonempty word accepted by both, or None."""
    _same_alphabet(d1, d2)
    order, index = _product_states(d1, d2)
    # shortest nonempty: BFS from the successors of the start state
    start = 0
    seen = {}
    queue = deque()
    for a in d1.alphabet:
        p, q = order[start]
        nxt = index[(d1.step(p, a), d2.step(q, a))]
        if nxt not in seen:
            seen[nxt] = (a,)
            queue.append(nxt)
    while queue:
        s = queue.popleft()
        p, q = order[s]
        if p in d1.finals and q in d2.finals:
            return seen[s]
        for a in d1.alphabet:
            nxt = index[(d1.step(p, a), d2.step(q, a))]
            if nxt not in seen:
                seen[nxt] = seen[s] + (a,)
                queue.append(nxt)
    return None


@dataclass(frozen=True)
class Recognizer:
    S: Semigroup
    phi: FreeHom
    F1: SubsetOfS
    F2: SubsetOfS
    d1: Dfa
    d2: Dfa

    def accepts(self, i: int, word: Sequence[str]) -> bool:
        F = self.F1 if i == 1 else self.F2
        return self.phi(word) in F


def build_recognizer(d1: Dfa, d2: Dfa, cap: int = CLOSURE_CAP) -> Recognizer:
    """Transition semigroup of the reachable part of the product automaton."""
    _same_alphabet(d1, d2)
    order, index = _product_states(d1, d2)
    letters = d1.alphabet
    maps = [tuple(index[(d1.step(p, a), d2.step(q, a))] for p, q in order) for a in letters]
    c = transformation_semigroup(maps, cap)
    S = c.semigroup.with_labels(["".join(letters[k] for k in c.word(i)) for i in range(c.semigroup.n)])
    phi = FreeHom(letters, S, {a: c.gen_indices[k] for k, a in enumerate(letters)})
    f1 = f2 = 0
    for i, f in enumerate(c.elements):
        p, q = order[f[0]]
        f1 |= (p in d1.finals) << i
        f2 |= (q in d2.finals) << i
    return Recognizer(S, phi, SubsetOfS(S, f1), SubsetOfS(S, f2), d1, d2)


@dataclass(frozen=True)
class Verdict:
    separable: bool
    pair: tuple[int, int] | None = None
    word: tuple[str, ...] | None = None
    recognizer: Recognizer | None = None

    def format(self) -> str:
        if self.separable:
            return "SEPARABLE"
        if self.word is not None:
            return f"INSEPARABLE witness=word:{''.join(self.word)}"
        S = self.recognizer.S
        return f"INSEPARABLE witness={{{S.label(self.pair[0])},{S.label(self.pair[1])}}}"


def decide_fo_separability(d1: Dfa, d2: Dfa, cap: int = CLOSURE_CAP) -> Verdict:
    _same_alphabet(d1, d2)
    for i, d in ((1, d1), (2, d2)):
        if d.init in d.finals:
            raise PreconditionError(f"language {i} contains the empty word; only languages of nonempty words are supported", "langsep")
    w = common_word(d1, d2)
    if w is not None:
        return Verdict(False, word=w)
    rec = build_recognizer(d1, d2, cap)
    fam = henckell_pointlikes(rec.S)
    for s1 in rec.F1.elements():
        for s2 in rec.F2.elements():
            if (1 << s1 | 1 << s2) in fam.members:
                return Verdict(False, pair=(s1, s2), recognizer=rec)
    return Verdict(True, recognizer=rec)


# -- fixtures ---------------------------------------------------------------

FIXTURES = {
    "even_a": "states 3\nalphabet a\ninit 0\nfinal 2\ntrans 0 a 1\ntrans 1 a 2\ntrans 2 a 1\n",
    "odd_a": "states 3\nalphabet a\ninit 0\nfinal 1\ntrans 0 a 1\ntrans 1 a 2\ntrans 2 a 1\n",
    "a_first": "states 3\nalphabet a b\ninit 0\nfinal 1\ntrans 0 a 1\ntrans 0 b 2\ntrans 1 a 1\ntrans 1 b 1\ntrans 2 a 2\ntrans 2 b 2\n",
    "b_first": "states 3\nalphabet a b\ninit 0\nfinal 2\ntrans 0 a 1\ntrans 0 b 2\ntrans 1 a 1\ntrans 1 b 1\ntrans 2 a 2\ntrans 2 b 2\n",
}


def fixture_dfa(name: str) -> Dfa:
    return parse_dfa(FIXTURES[name])


def fixture_recognizers() -> list[tuple[str, Recognizer]]:
    """Recognizers for the separation fixtures: ``(aa)+`` vs ``a(aa)*`` and
    ``a(a+b)*`` vs ``b(a+b)*``."""
    return [
        ("parity", build_recognizer(fixture_dfa("even_a"), fixture_dfa("odd_a"))),
        ("first_letter", build_recognizer(fixture_dfa("a_first"), fixture_dfa("b_first"))),
    ]
