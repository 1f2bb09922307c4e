"""Merge decomposition: combine homomorphisms ``A1+ -> T1`` and ``A2+ -> T2``
along ``chi: (T1 x T2)+ -> T0`` into one homomorphism ``A+ -> T_M`` whose
image is computed inside the triple product ``(T2^flat, S, T1^sharp)``.

Points of each ``Ti^I`` are numbered with the adjoined identity at 0 and
element ``t`` at ``t + 1``. A merge element is a triple
``(right, mid, left)``:

* ``right`` is a map on ``T2^I`` points acting on the left (an element of
  ``T2^flat``),
* ``mid`` is the table of a function ``T1^I x T2^I -> T0^I`` stored row-major,
* ``left`` is a map on ``T1^I`` points acting on the right (``T1^sharp``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .errors import PreconditionError, VerificationError
from .sgcore.constructions import with_identity
from .sgcore.homs import Division, FreeHom, Verdict
from .sgcore.semigroup import CLOSURE_CAP, Closure, Semigroup, closure, generated_mask, restrict, subsemigroup

Element = tuple  # (right, mid, left)


@dataclass(frozen=True)
class MergeInput:
    A1: tuple[Hashable, ...]
    A2: tuple[Hashable, ...]
    psi1: FreeHom
    psi2: FreeHom
    chi: FreeHom

    def __post_init__(self):
        if not self.A1 or not self.A2:
            raise PreconditionError("both subalphabets must be nonempty", "merge")
        if set(self.A1) & set(self.A2):
            raise PreconditionError("subalphabets must be disjoint", "merge")
        if set(self.psi1.alphabet) != set(self.A1) or set(self.psi2.alphabet) != set(self.A2):
            raise PreconditionError("psi_i must be defined on exactly A_i", "merge")
        T1, T2 = self.psi1.cod, self.psi2.cod
        for t1 in range(T1.n):
            for t2 in range(T2.n):
                if (t1, t2) not in self.chi.gen_map:
                    raise PreconditionError(f"chi undefined on pair ({t1},{t2})", "merge")

    @property
    def alphabet(self) -> tuple[Hashable, ...]:
        return self.A1 + self.A2

    @property
    def T0(self) -> Semigroup:
        return self.chi.cod

    @property
    def T1(self) -> Semigroup:
        return self.psi1.cod

    @property
    def T2(self) -> Semigroup:
        return self.psi2.cod


class _Arith:
    """Tables for the triple-product multiplication of one merge input."""

    def __init__(self, inp: MergeInput):
        self.inp = inp
        self.n1, self.n2 = inp.T1.n, inp.T2.n
        self.w = self.n2 + 1  # row width of mid tables
        self.cells = (self.n1 + 1) * self.w
        self.t0i = with_identity(inp.T0).table
        r_of, p_of = [], []
        for p1 in range(self.n1 + 1):
            for p2 in range(self.w):
                r_of.append(p1)
                p_of.append(p2)
        self.cell_p1 = tuple(r_of)
        self.cell_p2 = tuple(p_of)

    def mul(self, a: Element, b: Element) -> Element:
        r, s, l = a
        r2, s2, l2 = b
        w = self.w
        t0i = self.t0i
        p1s, p2s = self.cell_p1, self.cell_p2
        mid = tuple(
            t0i[s[p1 * w + r2[p2]]][s2[l[p1] * w + p2]] for p1, p2 in zip(p1s, p2s)
        )
        return tuple(r[x] for x in r2), mid, tuple(l2[x] for x in l)

    def act_left(self, l: Sequence[int], s: Sequence[int]) -> tuple[int, ...]:
        """``[l s](t1, t2) = s(t1 l, t2)``."""
        w = self.w
        return tuple(s[l[p1] * w + p2] for p1, p2 in zip(self.cell_p1, self.cell_p2))

    def act_right(self, s: Sequence[int], r: Sequence[int]) -> tuple[int, ...]:
        """``[s r](t1, t2) = s(t1, r t2)``."""
        w = self.w
        return tuple(s[p1 * w + r[p2]] for p1, p2 in zip(self.cell_p1, self.cell_p2))


def _word_blocks(w: Sequence[Hashable], A1: set) -> list[tuple[tuple, tuple]]:
    """Split ``w`` in ``(A1+ A2+)+`` into its ``(w1, w2)`` blocks."""
    blocks = []
    i, n = 0, len(w)
    if n == 0:
        raise PreconditionError("empty word is not in (A1+A2+)+", "merge")
    while i < n:
        j = i
        while j < n and w[j] in A1:
            j += 1
        k = j
        while k < n and w[k] not in A1:
            k += 1
        if j == i or k == j:
            raise PreconditionError(f"word {tuple(w)!r} does not factor in (A1+A2+)+", "merge")
        blocks.append((tuple(w[i:j]), tuple(w[j:k])))
        i = k
    return blocks


def mu(w: Sequence[Hashable], inp: MergeInput) -> list[tuple[int, int]]:
    """Image of ``w`` under the block map into ``(T1 x T2)+``."""
    for a in w:
        if a not in inp.A1 and a not in inp.A2:
            raise PreconditionError(f"letter {a!r} not in the alphabet", "merge")
    return [(inp.psi1(w1), inp.psi2(w2)) for w1, w2 in _word_blocks(w, set(inp.A1))]


def psi0(u: Sequence[Hashable], inp: MergeInput) -> int:
    return inp.chi(mu(u, inp))


def tau(w: Sequence[Hashable], inp: MergeInput) -> tuple[int, int, int]:
    """``(psi2(v2), psi0(u), psi1(v1))`` for ``w = v2 u v1``, as ``T^I`` points
    (0 for an empty factor)."""
    A1 = set(inp.A1)
    n = len(w)
    i = 0
    while i < n and w[i] not in A1:
        i += 1
    j = n
    while j > i and w[j - 1] in A1:
        j -= 1
    v2, u, v1 = w[:i], w[i:j], w[j:]
    return (
        inp.psi2(v2) + 1 if v2 else 0,
        psi0(u, inp) + 1 if u else 0,
        inp.psi1(v1) + 1 if v1 else 0,
    )


def s_table(w1: Sequence[Hashable], inp: MergeInput) -> tuple[int, ...]:
    """Mid table with ``s(t1, I2) = I0`` and ``s(t1, t2) = chi(t1 psi1(w1), t2)``."""
    if not w1 or any(a not in inp.A1 for a in w1):
        raise PreconditionError("s_table needs a nonempty word over A1", "merge")
    x = inp.psi1(w1)
    T1 = inp.T1
    out = []
    for p1 in range(T1.n + 1):
        t1 = x if p1 == 0 else T1.table[p1 - 1][x]
        out.append(0)
        for t2 in range(inp.T2.n):
            out.append(inp.chi.gen_map[(t1, t2)] + 1)
    return tuple(out)


def generator_images(inp: MergeInput) -> dict[Hashable, Element]:
    T1, T2 = inp.T1, inp.T2
    n1, n2 = T1.n, T2.n
    ar = _Arith(inp)
    i0 = (0,) * ar.cells
    const_i2 = (0,) * (n2 + 1)
    const_i1 = (0,) * (n1 + 1)
    out: dict[Hashable, Element] = {}
    for a in inp.A1:
        t = inp.psi1.gen_map[a]
        right_mult = (t + 1,) + tuple(T1.table[x][t] + 1 for x in range(n1))
        out[a] = (const_i2, s_table((a,), inp), right_mult)
    for a in inp.A2:
        t = inp.psi2.gen_map[a]
        left_mult = (t + 1,) + tuple(T2.table[t][x] + 1 for x in range(n2))
        out[a] = (left_mult, i0, const_i1)
    return out


def f_map(t: Element) -> tuple[int, int, int]:
    """``(right applied to I2, mid at (I1, I2), I1 under left)``."""
    r, s, l = t
    return r[0], s[0], l[0]


@dataclass(frozen=True)
class MergeDecomposition:
    input: MergeInput
    gen_images: dict = field(hash=False, compare=False)
    generated: Closure = field(hash=False, compare=False)
    psi_M: FreeHom = field(hash=False, compare=False)

    @property
    def semigroup(self) -> Semigroup:
        return self.generated.semigroup

    def element(self, i: int) -> Element:
        return self.generated.elements[i]

    def f(self, i: int) -> tuple[int, int, int]:
        return f_map(self.generated.elements[i])

    def image_of(self, w: Sequence[Hashable]) -> int:
        return self.psi_M(w)


def _check_commutation(ar: _Arith, elems: Sequence[Element], limit: int = 12) -> None:
    lefts = sorted({e[2] for e in elems})[:limit]
    rights = sorted({e[0] for e in elems})[:limit]
    mids = [e[1] for e in elems[:limit]]
    for l in lefts:
        for r in rights:
            for s in mids:
                a = ar.act_right(ar.act_left(l, s), r)
                b = ar.act_left(l, ar.act_right(s, r))
                if a != b:
                    raise VerificationError("left and right actions on the middle do not commute", "merge")


def build_merge(inp: MergeInput, cap: int = CLOSURE_CAP) -> MergeDecomposition:
    ar = _Arith(inp)
    images = generator_images(inp)
    letters = inp.alphabet
    c = closure([images[a] for a in letters], ar.mul, cap)
    _check_commutation(ar, c.elements)
    psi_M = FreeHom(letters, c.semigroup, {a: c.gen_indices[k] for k, a in enumerate(letters)})
    return MergeDecomposition(inp, images, c, psi_M)


# -- verification ---------------------------------------------------------


@dataclass(frozen=True)
class MergeReport:
    image_size: int
    words_checked: int
    counterexamples: tuple[tuple[tuple, tuple, tuple], ...]  # (word, f(psi_M(w)), tau(w))

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def words_upto(alphabet: Sequence[Hashable], L: int):
    for k in range(1, L + 1):
        yield from itertools.product(alphabet, repeat=k)


def verify_merge(inp: MergeInput, L: int = 6, md: MergeDecomposition | None = None, cap: int = CLOSURE_CAP) -> MergeReport:
    """Check ``f(psi_M(w)) == tau(w)`` for every word of length 1..L."""
    if L < 1:
        raise PreconditionError("L must be at least 1", "merge")
    md = md or build_merge(inp, cap)
    letters = inp.alphabet
    gpos = {a: k for k, a in enumerate(letters)}
    right = md.generated.right
    bad = []
    checked = 0
    stack = [((a,), md.psi_M.gen_map[a]) for a in reversed(letters)]
    while stack:
        w, idx = stack.pop()
        checked += 1
        got, want = md.f(idx), tau(w, inp)
        if got != want:
            bad.append((w, got, want))
        if len(w) < L:
            for a in reversed(letters):
                stack.append((w + (a,), right[idx][gpos[a]]))
    return MergeReport(md.semigroup.n, checked, tuple(bad))


# -- corollary: division from a cover ---------------------------------------


@dataclass(frozen=True)
class CoverDivision:
    merge: MergeDecomposition
    division: Division
    T1: tuple[int, ...]  # embeddings into S
    T2: tuple[int, ...]
    T0: tuple[int, ...]


def cover_input(S: Semigroup, T1: Sequence[int], T2: Sequence[int]) -> tuple[MergeInput, tuple, tuple, tuple]:
    """Merge input with ``A_i = T_i x {i}``, ``psi`` the evaluation map and
    ``chi(t1, t2) = t1 t2`` into ``T0 = <T1 T2>``."""
    T1, T2 = sorted(set(T1)), sorted(set(T2))
    if not T1 or not T2:
        raise PreconditionError("T1 and T2 must be nonempty", "merge")
    T1sg, e1 = restrict(S, T1)
    T2sg, e2 = restrict(S, T2)
    if generated_mask(S, T1 + T2) != S.full_mask():
        raise PreconditionError("T1 and T2 together do not generate S", "merge")
    prods = sorted({S.table[a][b] for a in e1 for b in e2})
    T0sg, e0 = subsemigroup(S, prods)
    p0 = {x: i for i, x in enumerate(e0)}
    A1 = tuple((t, 1) for t in e1)
    A2 = tuple((t, 2) for t in e2)
    psi1 = FreeHom(A1, T1sg, {(t, 1): i for i, t in enumerate(e1)})
    psi2 = FreeHom(A2, T2sg, {(t, 2): i for i, t in enumerate(e2)})
    pairs = {(i, j): p0[S.table[e1[i]][e2[j]]] for i in range(len(e1)) for j in range(len(e2))}
    chi = FreeHom(tuple(sorted(pairs)), T0sg, pairs)
    return MergeInput(A1, A2, psi1, psi2, chi), e1, e2, e0


def division_from_cover(S: Semigroup, T1: Sequence[int], T2: Sequence[int], cap: int = CLOSURE_CAP) -> CoverDivision:
    """Witness that ``S`` divides the image of its merge decomposition along
    the cover ``T1 u T2``: element ``t`` maps to ``t2 t0 t1`` where
    ``(t2, t0, t1) = f(t)`` and identities are dropped."""
    inp, e1, e2, e0 = cover_input(S, T1, T2)
    md = build_merge(inp, cap)
    st = S.table
    m = {}
    for i in range(md.semigroup.n):
        p2, p0, p1 = md.f(i)
        factors = [e for e in (e2[p2 - 1] if p2 else None, e0[p0 - 1] if p0 else None, e1[p1 - 1] if p1 else None) if e is not None]
        if not factors:
            raise VerificationError("merge element with all-identity coordinates", "merge")
        acc = factors[0]
        for x in factors[1:]:
            acc = st[acc][x]
        m[i] = acc
    d = Division(S, md.semigroup, tuple(range(md.semigroup.n)), m, "merge")
    v: Verdict = d.check()
    if not v:
        raise VerificationError(f"cover division is not a division: {v}", "merge")
    return CoverDivision(md, d, e1, e2, e0)


# -- randomized inputs --------------------------------------------------------


def random_merge_input(rng: random.Random, max_size: int = 3, max_letters: int = 2) -> MergeInput:
    from .corpus import small_semigroups

    pool = small_semigroups(max_size)
    T1, T2, T0 = (rng.choice(pool) for _ in range(3))
    A1 = tuple(f"a{i}" for i in range(rng.randint(1, max_letters)))
    A2 = tuple(f"b{i}" for i in range(rng.randint(1, max_letters)))
    psi1 = FreeHom(A1, T1, {a: rng.randrange(T1.n) for a in A1})
    psi2 = FreeHom(A2, T2, {a: rng.randrange(T2.n) for a in A2})
    pairs = {(i, j): rng.randrange(T0.n) for i in range(T1.n) for j in range(T2.n)}
    chi = FreeHom(tuple(sorted(pairs)), T0, pairs)
    return MergeInput(A1, A2, psi1, psi2, chi)


def lz2_input() -> MergeInput:
    """``A1 = {a}``, ``A2 = {b}`` over ``T1 = {a}``, ``T2 = {b}``, ``T0 = {a}``
    inside LZ2, with ``chi(a, b) = ab = a``."""
    from .corpus import trivial

    a, b = trivial().with_labels(["a"]), trivial().with_labels(["b"])
    return MergeInput(
        ("a",), ("b",), FreeHom(("a",), a, {"a": 0}), FreeHom(("b",), b, {"b": 0}), FreeHom(((0, 0),), a, {(0, 0): 0})
    )


def u1_input() -> MergeInput:
    from .corpus import u1

    return cover_input(u1(), [0], [1])[0]
