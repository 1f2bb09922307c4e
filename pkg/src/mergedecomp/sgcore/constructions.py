"""Adjoined identities and zeros, augmented semigroups, direct, wreath and
triple products."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import PreconditionError, ResourceError, VerificationError
from .homs import Division, SgHom
from .semigroup import Semigroup, associativity_failure, closure

WREATH_CAP = 5_000
# full O(n^3) associativity check only below this size; sampled above
FULL_ASSOC_LIMIT = 600


class Kind(Enum):
    IDENTITY = "identity"
    ZERO = "zero"


class Side(Enum):
    SHARP = "sharp"
    FLAT = "flat"


def _fresh_label(existing: Sequence[str] | None, want: str) -> str:
    taken = set(existing or ())
    lab = want
    while lab in taken:
        lab += "'"
    return lab


@dataclass(frozen=True)
class PointedSemigroup:
    """``base`` with a new identity or zero at index 0; base element ``i``
    sits at index ``i + 1``."""

    base: Semigroup
    semigroup: Semigroup
    kind: Kind
    identity_index: int = 0

    def lift(self, i: int) -> int:
        return i + 1


def adjoin(S: Semigroup, kind: Kind | str) -> PointedSemigroup:
    kind = Kind(kind)
    n = S.n
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for x in range(n + 1):
        if kind is Kind.IDENTITY:
            table[0][x] = x
            table[x][0] = x
        else:
            table[0][x] = 0
            table[x][0] = 0
    for i in range(n):
        for j in range(n):
            table[i + 1][j + 1] = S.table[i][j] + 1
    labels = None
    if S.labels is not None:
        new = _fresh_label(S.labels, "I" if kind is Kind.IDENTITY else "0")
        labels = (new,) + S.labels
    return PointedSemigroup(S, Semigroup(table, labels, check=False), kind)


def with_identity(S: Semigroup) -> Semigroup:
    return adjoin(S, Kind.IDENTITY).semigroup


def tilde(T: Semigroup) -> Semigroup:
    """``T`` with a zero and then an identity adjoined: index 0 is the
    identity, index 1 the zero, and ``t`` sits at ``t + 2``."""
    return adjoin(adjoin(T, Kind.ZERO).semigroup, Kind.IDENTITY).semigroup


def direct_product(A: Semigroup, B: Semigroup) -> Semigroup:
    """``A x B`` with pair ``(a, b)`` at index ``a * |B| + b``."""
    nb = B.n
    table = [
        [A.table[a][a2] * nb + B.table[b][b2] for a2 in range(A.n) for b2 in range(nb)]
        for a in range(A.n)
        for b in range(nb)
    ]
    labels = None
    if A.labels is not None or B.labels is not None:
        labels = [f"({A.label(a)},{B.label(b)})" for a in range(A.n) for b in range(nb)]
    return Semigroup(table, labels, check=False)


def zero_adjunction_witness(T: Semigroup) -> SgHom:
    """The surjection ``T x U1 -> T^0``: ``(t,1) -> t``, ``(t,0) -> 0``."""
    from ..corpus import u1

    U1 = u1()
    prod = direct_product(T, U1)
    T0 = adjoin(T, Kind.ZERO).semigroup
    one = U1.identity()
    m = []
    for t in range(T.n):
        for u in range(U1.n):
            m.append(t + 1 if u == one else 0)
    return SgHom(prod, T0, tuple(m)).verify(surjective=True)


# -- augmented semigroups ---------------------------------------------------


@dataclass(frozen=True)
class AugmentedSemigroup:
    """Right (sharp) or left (flat) multiplication maps on ``T^I`` together
    with all constant maps, deduplicated as functions.

    Points of ``T^I`` are numbered with ``I`` at 0 and ``t`` at ``t + 1``.
    ``tags[k]`` is ``("mult", t)`` or ``("const", c)`` with ``c`` a point;
    where a multiplication map equals a constant, the multiplication tag wins.
    """

    base: Semigroup
    side: Side
    maps: tuple[tuple[int, ...], ...]
    tags: tuple[tuple[str, int], ...]
    semigroup: Semigroup

    def apply(self, k: int, x: int) -> int:
        return self.maps[k][x]

    def index_of_map(self, fn: Sequence[int]) -> int:
        return self.maps.index(tuple(fn))

    def mult(self, t: int) -> int:
        return self.index_of_map(self._mult_fn(t))

    def const(self, c: int) -> int:
        return self.index_of_map((c,) * (self.base.n + 1))

    def _mult_fn(self, t: int) -> tuple[int, ...]:
        T = self.base
        if self.side is Side.SHARP:
            return (t + 1,) + tuple(T.table[x][t] + 1 for x in range(T.n))
        return (t + 1,) + tuple(T.table[t][x] + 1 for x in range(T.n))


def augment(T: Semigroup, side: Side | str) -> AugmentedSemigroup:
    side = Side(side)
    n = T.n
    maps: list[tuple[int, ...]] = []
    tags: list[tuple[str, int]] = []
    for t in range(n):
        if side is Side.SHARP:
            fn = (t + 1,) + tuple(T.table[x][t] + 1 for x in range(n))
        else:
            fn = (t + 1,) + tuple(T.table[t][x] + 1 for x in range(n))
        if fn not in maps:
            maps.append(fn)
            tags.append(("mult", t))
    for c in range(n + 1):
        fn = (c,) * (n + 1)
        if fn not in maps:
            maps.append(fn)
            tags.append(("const", c))
    pos = {fn: k for k, fn in enumerate(maps)}
    if side is Side.SHARP:
        # x(st) = (xs)t: apply s first
        table = [[pos[tuple(g[f[x]] for x in range(n + 1))] for g in maps] for f in maps]
    else:
        table = [[pos[tuple(f[g[x]] for x in range(n + 1))] for g in maps] for f in maps]
    pt = ["I"] + [T.label(t) for t in range(n)]
    mark = "#" if side is Side.SHARP else "b"
    labels = [T.label(v) if kind == "mult" else f"{pt[v]}{mark}" for kind, v in tags]
    if len(set(labels)) != len(labels):
        labels = None
    return AugmentedSemigroup(T, side, tuple(maps), tuple(tags), Semigroup(table, labels))


# -- wreath products ------------------------------------------------------


class WreathProduct:
    """``M wr T``: pairs ``(f, t)`` with ``f: T -> M`` and multiplication
    ``(f, t)(g, t') = (x -> f(x) g(xt), tt')``.

    Elements are numbered by ``code(f) * |T| + t`` where ``code`` reads ``f``
    as a base-``|M|`` numeral, most significant digit first.
    """

    def __init__(self, M: Semigroup, T: Semigroup):
        if M.identity() is None:
            raise PreconditionError("left factor of a wreath product must be a monoid", "sgcore")
        self.M = M
        self.T = T
        self.size = M.n ** T.n * T.n

    def encode(self, f: Sequence[int], t: int) -> int:
        code = 0
        for v in f:
            code = code * self.M.n + v
        return code * self.T.n + t

    def decode(self, idx: int) -> tuple[tuple[int, ...], int]:
        code, t = divmod(idx, self.T.n)
        f = []
        for _ in range(self.T.n):
            code, v = divmod(code, self.M.n)
            f.append(v)
        return tuple(reversed(f)), t

    def mul(self, a: tuple[tuple[int, ...], int], b: tuple[tuple[int, ...], int]) -> tuple[tuple[int, ...], int]:
        (f, t), (g, t2) = a, b
        Mt, Tt = self.M.table, self.T.table
        return tuple(Mt[f[x]][g[Tt[x][t]]] for x in range(self.T.n)), Tt[t][t2]

    def materialize(self, cap: int = WREATH_CAP, check: bool = True) -> Semigroup:
        N = self.size
        if N > cap:
            raise ResourceError("wreath product size cap", cap, "sgcore")
        nm, nt = self.M.n, self.T.n
        nf = nm**nt
        F = np.array(list(itertools.product(range(nm), repeat=nt)), dtype=np.int64).reshape(nf, nt)
        Ma, Ta = self.M.array, self.T.array
        weights = nm ** np.arange(nt - 1, -1, -1, dtype=np.int64)
        table = np.empty((N, N), dtype=np.int64)
        for fa in range(nf):
            f = F[fa]
            for ta in range(nt):
                shifted = F[:, Ta[:, ta]]  # g(x t) for every g
                h = Ma[f[None, :], shifted]
                codes = h @ weights
                row = (codes[:, None] * nt + Ta[ta][None, :]).reshape(-1)
                table[fa * nt + ta] = row
        S = Semigroup(table.tolist(), check=False)
        if check:
            _check_assoc_scaled(S)
        return S


def _check_assoc_scaled(S: Semigroup) -> None:
    if S.n <= FULL_ASSOC_LIMIT:
        bad = associativity_failure(S.array)
    else:
        rng = random.Random(0)
        t = S.table
        bad = None
        for _ in range(20_000):
            i, j, k = rng.randrange(S.n), rng.randrange(S.n), rng.randrange(S.n)
            if t[t[i][j]][k] != t[i][t[j][k]]:
                bad = (i, j, k)
                break
    if bad is not None:
        raise VerificationError(f"constructed table not associative at {bad}", "sgcore")


def wreath_product(M: Semigroup, T: Semigroup, cap: int = WREATH_CAP) -> Semigroup:
    return WreathProduct(M, T).materialize(cap)


# -- flat embedding -------------------------------------------------------


def formal_flat(T: Semigroup) -> Semigroup:
    """``T^flat`` with left multiplications and constants kept as distinct
    formal symbols: ``l_t`` at index ``t``, constant ``c`` (a point of
    ``T^I``, ``I`` = 0) at ``|T| + c``."""
    n = T.n
    size = 2 * n + 1
    table = [[0] * size for _ in range(size)]
    for s in range(n):
        for t in range(n):
            table[s][t] = T.table[s][t]
        for c in range(n + 1):
            sc = s + 1 if c == 0 else T.table[s][c - 1] + 1
            table[s][n + c] = n + sc
    for c in range(n + 1):
        for y in range(size):
            table[n + c][y] = n + c
    labels = [f"l{T.label(t)}" for t in range(n)] + [f"{p}b" for p in ["I"] + [T.label(t) for t in range(n)]]
    return Semigroup(table, labels)


def flat_embed(T: Semigroup, M: Semigroup, cap: int = WREATH_CAP) -> SgHom:
    """Injective homomorphism from the formal ``T^flat`` into ``M wr T~``.

    ``T~`` is :func:`tilde` of ``T``. Elements of ``T`` go to
    ``(const 1_M, t)``; the constant ``c`` goes to ``(f_c, 0)`` where
    ``f_c(0) = 1_M`` and ``f_c(x) = m_{xc}`` for ``x`` in ``T^I``, with
    ``t -> m_t`` the first ``|T|`` non-identity elements of ``M`` and
    ``m_I = 1_M``.

    The codomain is the full wreath product when it fits under ``cap``;
    otherwise it is the subsemigroup generated by the image, multiplied with
    the wreath product rule.
    """
    one = M.identity()
    if one is None:
        raise PreconditionError("M must be a monoid", "sgcore")
    if M.n <= T.n:
        raise PreconditionError(f"|M|={M.n} must exceed |T|={T.n}", "sgcore")
    n = T.n
    Tt = tilde(T)
    W = WreathProduct(M, Tt)
    m_of = [x for x in range(M.n) if x != one][:n]

    def m_point(p: int) -> int:  # p is a T^I point
        return one if p == 0 else m_of[p - 1]

    def tpoint(x: int) -> int:  # T~ index of a T^I point
        return 0 if x == 0 else x + 1

    ones = (one,) * Tt.n
    image = []
    for t in range(n):
        image.append(W.encode(ones, t + 2))
    for c in range(n + 1):
        f = [0] * Tt.n
        f[1] = one
        for p in range(n + 1):
            if c == 0:
                xc = p
            elif p == 0:
                xc = c
            else:
                xc = T.table[p - 1][c - 1] + 1
            f[tpoint(p)] = m_point(xc)
        image.append(W.encode(f, 1))
    if W.size <= cap:
        return SgHom(formal_flat(T), W.materialize(cap), tuple(image)).verify(injective=True)
    pairs = [W.decode(x) for x in image]
    c = closure(pairs, W.mul, cap)
    return SgHom(formal_flat(T), c.semigroup, tuple(c.index(p) for p in pairs)).verify(injective=True)


def flat_division(T: Semigroup, M: Semigroup, cap: int = WREATH_CAP, h: SgHom | None = None) -> Division:
    """Division of the deduplicated ``augment(T, FLAT)`` into ``M wr T~``,
    obtained from :func:`flat_embed` by composing with the quotient that
    identifies formal symbols denoting the same function."""
    h = h or flat_embed(T, M, cap)
    aug = augment(T, Side.FLAT)
    n = T.n
    quotient = [aug.mult(t) for t in range(n)] + [aug.const(c) for c in range(n + 1)]
    m = {h.map[x]: quotient[x] for x in range(h.dom.n)}
    d = Division(aug.semigroup, h.cod, tuple(sorted(m)), m, "flat_embed")
    v = d.check()
    if not v:
        raise VerificationError(f"flat division failed: {v}", "sgcore")
    return d


# -- triple product -------------------------------------------------------


@dataclass(frozen=True)
class ActionPair:
    """Commuting left action of ``left_actor`` and right action of
    ``right_actor`` on ``carrier``. ``left[l][s]`` is ``l.s``; ``right[s][r]``
    is ``s.r``."""

    left_actor: Semigroup
    right_actor: Semigroup
    carrier: Semigroup
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    def failure(self) -> str | None:
        L, R, S = self.left_actor, self.right_actor, self.carrier
        la, ra = self.left, self.right
        for l in range(L.n):
            for l2 in range(L.n):
                for s in range(S.n):
                    if la[L.table[l][l2]][s] != la[l][la[l2][s]]:
                        return f"left action law fails at (l={l}, l'={l2}, s={s})"
        for s in range(S.n):
            for r in range(R.n):
                for r2 in range(R.n):
                    if ra[s][R.table[r][r2]] != ra[ra[s][r]][r2]:
                        return f"right action law fails at (s={s}, r={r}, r'={r2})"
        for l in range(L.n):
            for s in range(S.n):
                for r in range(R.n):
                    if ra[la[l][s]][r] != la[l][ra[s][r]]:
                        return f"actions do not commute at (l={l}, s={s}, r={r})"
        return None


def triple_product(actions: ActionPair) -> Semigroup:
    """Triples ``(r, s, l)`` with ``(r,s,l)(r',s',l') = (rr', s.r' + l.s', ll')``;
    triple at index ``(r * |S| + s) * |S_L| + l``."""
    bad = actions.failure()
    if bad is not None:
        raise PreconditionError(bad, "sgcore")
    L, R, S = actions.left_actor, actions.right_actor, actions.carrier
    la, ra = actions.left, actions.right
    nl, ns = L.n, S.n
    triples = [(r, s, l) for r in range(R.n) for s in range(ns) for l in range(nl)]

    def idx(r, s, l):
        return (r * ns + s) * nl + l

    table = [
        [idx(R.table[r][r2], S.table[ra[s][r2]][la[l][s2]], L.table[l][l2]) for (r2, s2, l2) in triples]
        for (r, s, l) in triples
    ]
    return Semigroup(table)


def subset_actions(S: Semigroup) -> ActionPair:
    """``S`` acting on both sides of a family of subsets of ``S`` by setwise
    multiplication; the family is the closure of ``{{}, S}`` under union and
    both actions, and the carrier multiplies by union."""
    t = S.table

    def lmul(l: int, X: int) -> int:
        return _mask(t[l][x] for x in range(S.n) if X >> x & 1)

    def rmul(X: int, r: int) -> int:
        return _mask(t[x][r] for x in range(S.n) if X >> x & 1)

    fam = {0, (1 << S.n) - 1}
    todo = list(fam)
    while todo:
        X = todo.pop()
        new = [lmul(a, X) for a in range(S.n)] + [rmul(X, a) for a in range(S.n)] + [X | Y for Y in fam]
        for Y in new:
            if Y not in fam:
                fam.add(Y)
                todo.append(Y)
    members = sorted(fam, key=lambda X: (bin(X).count("1"), X))
    pos = {X: i for i, X in enumerate(members)}
    carrier = Semigroup([[pos[X | Y] for Y in members] for X in members])
    left = tuple(tuple(pos[lmul(a, X)] for X in members) for a in range(S.n))
    right = tuple(tuple(pos[rmul(X, a)] for a in range(S.n)) for X in members)
    return ActionPair(S, S, carrier, left, right)


def _mask(xs) -> int:
    m = 0
    for x in xs:
        m |= 1 << x
    return m
