"""Exhaustive small-group routines: cyclic and normal subgroups, quotients,
composition series and the Kaloujnine-Krasner embedding."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PreconditionError, ResourceError
from .constructions import WREATH_CAP, WreathProduct
from .homs import SgHom
from .semigroup import Semigroup, SubsetOfS, generated_mask, mask_elements, popcount, restrict

GROUP_CAP = 64


def _require_group(G: Semigroup, cap: int = GROUP_CAP) -> int:
    if G.n > cap:
        raise ResourceError("group size cap", cap, "sgcore")
    e = G.identity()
    if e is None or not G.is_group():
        raise PreconditionError("not a group", "sgcore")
    return e


def cyclic_subgroups(G: Semigroup, identity: int | None = None) -> list[SubsetOfS]:
    """All ``<g>``, deduplicated, ordered by size then bitmask."""
    e = _require_group(G)
    if identity is not None and identity != e:
        raise PreconditionError(f"{identity} is not the identity of G", "sgcore")
    seen = {generated_mask(G, [g]) for g in range(G.n)}
    return [SubsetOfS(G, m) for m in sorted(seen, key=lambda m: (popcount(m), m))]


def subgroups(G: Semigroup) -> list[int]:
    """Bitmasks of all subgroups: joins of cyclic subgroups until stable."""
    _require_group(G)
    found = {generated_mask(G, [g]) for g in range(G.n)}
    frontier = set(found)
    while frontier:
        new = set()
        for h in frontier:
            for k in list(found):
                j = generated_mask(G, mask_elements(h | k))
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda m: (popcount(m), m))


def is_normal(G: Semigroup, N: int) -> bool:
    e = _require_group(G)
    t = G.table
    elems = mask_elements(N)
    for g in range(G.n):
        gi = G.inverse(g, e)
        for x in elems:
            if not N >> t[t[g][x]][gi] & 1:
                return False
    return True


def normal_subgroups(G: Semigroup) -> list[int]:
    return [h for h in subgroups(G) if is_normal(G, h)]


def is_simple(G: Semigroup) -> bool:
    """Nontrivial and without proper nontrivial normal subgroups."""
    if G.n == 1:
        return False
    return len(normal_subgroups(G)) == 2


@dataclass(frozen=True)
class Quotient:
    group: Semigroup
    cosets: tuple[int, ...]  # bitmask per quotient element
    reps: tuple[int, ...]  # least element index per coset
    of: tuple[int, ...]  # G element -> quotient element


def quotient(G: Semigroup, N: int) -> Quotient:
    """``G/N``; cosets ordered by their least element."""
    if not is_normal(G, N):
        raise PreconditionError("subgroup is not normal", "sgcore")
    t = G.table
    cosets: list[int] = []
    of = [-1] * G.n
    for g in range(G.n):
        if of[g] != -1:
            continue
        c = 0
        for x in mask_elements(N):
            c |= 1 << t[g][x]
        for y in mask_elements(c):
            of[y] = len(cosets)
        cosets.append(c)
    reps = tuple(mask_elements(c)[0] for c in cosets)
    table = [[of[t[r][s]] for s in reps] for r in reps]
    labels = None
    if G.labels is not None:
        labels = [G.label(r) + "N" for r in reps]
    return Quotient(Semigroup(table, labels, check=False), tuple(cosets), reps, tuple(of))


@dataclass(frozen=True)
class CompositionSeries:
    """``chain[0] = G > chain[1] > ... > {e}`` as bitmasks in ``G``, each
    normal in its predecessor, with simple factor groups."""

    group: Semigroup
    chain: tuple[int, ...]
    factors: tuple[Semigroup, ...]


def maximal_normal_subgroup(G: Semigroup) -> int:
    """A proper normal subgroup of largest order (hence maximal)."""
    full = G.full_mask()
    proper = [h for h in normal_subgroups(G) if h != full]
    best = max(popcount(h) for h in proper)
    return min(h for h in proper if popcount(h) == best)


def composition_factors(G: Semigroup, cap: int = GROUP_CAP) -> CompositionSeries:
    _require_group(G, cap)
    chain = [G.full_mask()]
    factors = []
    current, emb = G, tuple(range(G.n))
    while current.n > 1:
        N = maximal_normal_subgroup(current)
        q = quotient(current, N)
        if not is_simple(q.group):
            raise PreconditionError("factor group is not simple", "sgcore")
        factors.append(q.group)
        elems = mask_elements(N)
        chain.append(sum(1 << emb[x] for x in elems))
        current, sub_emb = restrict(current, elems)
        emb = tuple(emb[x] for x in sub_emb)
    return CompositionSeries(G, tuple(chain), tuple(factors))


@dataclass(frozen=True)
class KKEmbedding:
    hom: SgHom
    wreath: WreathProduct
    normal: Semigroup  # N as a group, with its embedding into G
    normal_embedding: tuple[int, ...]
    quotient: Quotient


def kk_embed(G: Semigroup, N: int, cap: int = WREATH_CAP) -> KKEmbedding:
    """Embed ``G`` into ``N wr G/N`` via ``g -> (x -> r_x g r_{x gN}^-1, gN)``
    with ``r`` the least-index coset transversal."""
    e = _require_group(G)
    q = quotient(G, N)
    Ng, n_emb = restrict(G, mask_elements(N))
    pos = {x: i for i, x in enumerate(n_emb)}
    W = WreathProduct(Ng, q.group)
    host = W.materialize(cap)
    t = G.table
    Q = q.group
    image = []
    for g in range(G.n):
        qg = q.of[g]
        f = []
        for x in range(Q.n):
            rx = q.reps[x]
            r_next = q.reps[Q.table[x][qg]]
            f.append(pos[t[t[rx][g]][G.inverse(r_next, e)]])
        image.append(W.encode(f, qg))
    h = SgHom(G, host, tuple(image)).verify(injective=True)
    return KKEmbedding(h, W, Ng, n_emb, q)
