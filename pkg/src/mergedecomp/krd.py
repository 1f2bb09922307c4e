"""Recursive two-sided Krohn-Rhodes decomposition with per-node division
certificates.

Every node records a :class:`Division` of its target into a semigroup built
from its children's targets: the identity for leaves, a wreath product of the
two children for wreath nodes, the generated part of the merge semigroup for
triple nodes, and the opposite of the child's host for dual nodes.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .errors import PreconditionError, ResourceError, VerificationError
from .merge import build_merge, cover_input, division_from_cover
from .sgcore.constructions import WREATH_CAP, WreathProduct
from .sgcore.groups import GROUP_CAP, composition_factors, is_simple, kk_embed, maximal_normal_subgroup, normal_subgroups, quotient, subgroups
from .sgcore.homs import Division, Verdict, embedding_division, identity_division
from .sgcore.semigroup import (
    CLOSURE_CAP,
    Semigroup,
    closure,
    cyclic_info,
    generated_mask,
    index_period,
    mask_elements,
    maximal_subgroup,
    opposite,
    popcount,
    restrict,
)

MAX_DEPTH = 64
SEARCH_CAP = 10_000

SEMILATTICE, GROUP, WREATH, TRIPLE, DUAL = "semilattice", "group", "wreath", "triple", "dual"


@dataclass(frozen=True)
class DecompTree:
    """``children`` is ``(left, right)`` for wreath nodes (``left wr right``),
    ``(right, mid, left)`` for triple nodes and ``(child,)`` for dual nodes.
    ``embeddings`` holds, for triple nodes, the elements of ``T1``, ``T2``
    and ``T0`` inside the target."""

    kind: str
    target: Semigroup
    witness: Division
    depth: int
    children: tuple["DecompTree", ...] = ()
    embeddings: tuple[tuple[int, ...], ...] = ()
    note: str = ""

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)


def combined_depth(kind: str, children: tuple[DecompTree, ...]) -> int:
    if kind in (SEMILATTICE, GROUP):
        return 1
    if kind == WREATH:
        return children[0].depth + children[1].depth
    if kind == TRIPLE:
        right, mid, left = children
        return mid.depth + max(left.depth, right.depth) + 1
    return children[0].depth


# -- helpers ----------------------------------------------------------------


def minimal_generating_set(S: Semigroup) -> list[int]:
    """Irredundant generating set: scanning from the highest index down, drop
    every element generated by the others still present."""
    gens = list(range(S.n))
    for x in reversed(range(S.n)):
        rest = [g for g in gens if g != x]
        if rest and generated_mask(S, rest) >> x & 1:
            gens = rest
    return gens


def is_right_simple(S: Semigroup) -> bool:
    full = S.full_mask()
    return all(S.right_ideal(s) == full for s in range(S.n))


def threshold_monoid(j: int) -> Semigroup:
    """``{0, ..., j}`` under ``min(a + b, j)``."""
    return Semigroup([[min(a + b, j) for b in range(j + 1)] for a in range(j + 1)], [str(k) for k in range(j + 1)])


def _u1() -> Semigroup:
    from .corpus import u1

    return u1()


def _cyclic_group(r: int) -> Semigroup:
    from .corpus import cyclic_group

    return cyclic_group(r)


def _overflow_map(k: int, j: int, one: int, zero: int) -> tuple[int, ...]:
    """``x -> zero`` iff ``x + k`` overflows a threshold-``j+1`` counter, for
    ``x`` in the threshold-``j`` monoid."""
    return tuple(zero if x + k >= j + 1 else one for x in range(j + 1))


# -- decomposition ----------------------------------------------------------


def _leaf(kind: str, S: Semigroup, note: str = "") -> DecompTree:
    return DecompTree(kind, S, identity_division(S, kind), 1, (), (), note)


def _threshold_tree(j: int) -> DecompTree:
    """``D_j`` embedded in ``U1 wr D_{j-1}`` down to ``D_1 = U1``."""
    D = threshold_monoid(j)
    if j == 1:
        return _leaf(SEMILATTICE, D, "threshold 1")
    U1 = _u1()
    one, zero = U1.identity(), U1.zero()
    child = _threshold_tree(j - 1)
    W = WreathProduct(U1, child.target)
    host = W.materialize()
    m = {}
    for k in range(j + 1):
        m[W.encode(_overflow_map(k, j - 1, one, zero), min(k, j - 1))] = k
    d = Division(D, host, tuple(sorted(m)), m, "threshold counter")
    _require(d.check(), "threshold counter embedding")
    left = _leaf(SEMILATTICE, U1)
    return DecompTree(WREATH, D, d, combined_depth(WREATH, (left, child)), (left, child), (), f"threshold {j}")


def _require(v: Verdict, what: str) -> None:
    if not v:
        raise VerificationError(f"{what}: {v}", "krd")


def decompose_group(G: Semigroup, cap: int = GROUP_CAP) -> DecompTree:
    """Composition series realized as nested Kaloujnine-Krasner embeddings
    ``G -> N wr G/N``."""
    if G.n > cap:
        raise ResourceError("group size cap", cap, "krd")
    if not G.is_group():
        raise PreconditionError("decompose_group needs a group", "krd")
    if G.n == 1:
        return _leaf(SEMILATTICE, G, "trivial group")
    if is_simple(G):
        return _leaf(GROUP, G)
    N = maximal_normal_subgroup(G)
    kk = kk_embed(G, N)
    left = decompose_group(kk.normal, cap)
    right = _leaf(GROUP, kk.quotient.group)
    d = embedding_division(kk.hom, "kk_embed")
    _require(d.check(), "Kaloujnine-Krasner embedding")
    return DecompTree(WREATH, G, d, combined_depth(WREATH, (left, right)), (left, right), (), "group")


def decompose_cyclic(S: Semigroup) -> DecompTree:
    """``<x | x^(m+r) = x^m>`` via ``x^k -> (k mod r, min(k, m))``: into
    ``Z_r wr D_m`` when ``r > 1``, else into ``U1 wr D_{m-1}`` using the
    overflow encoding of the counter."""
    info = cyclic_info(S)
    if info is None:
        raise PreconditionError("semigroup is not cyclic", "krd")
    x, m, r = info
    powers = [x]
    for _ in range(S.n - 1):
        powers.append(S.table[powers[-1]][x])
    if r == 1 and m == 1:
        return _leaf(SEMILATTICE, S, "trivial")
    if r > 1 and m == 1:
        return decompose_group(S)
    if r == 1:
        U1 = _u1()
        one, zero = U1.identity(), U1.zero()
        right = _threshold_tree(m - 1)
        W = WreathProduct(U1, right.target)
        left = _leaf(SEMILATTICE, U1)
        mp = {W.encode(_overflow_map(k, m - 1, one, zero), min(k, m - 1)): powers[k - 1] for k in range(1, m + 1)}
    else:
        Zr = _cyclic_group(r)
        right = _threshold_tree(m)
        W = WreathProduct(Zr, right.target)
        left = decompose_group(Zr)
        mp = {W.encode((k % r,) * (m + 1), min(k, m)): powers[k - 1] for k in range(1, m + r)}
    host = W.materialize()
    d = Division(S, host, tuple(sorted(mp)), mp, "cyclic counter")
    _require(d.check(), "cyclic counter embedding")
    return DecompTree(WREATH, S, d, combined_depth(WREATH, (left, right)), (left, right), (), f"cyclic m={m} r={r}")


def search_cyclic_division(S: Semigroup, host: Semigroup, cap: int = SEARCH_CAP) -> Division | None:
    """Bounded search for ``w`` in ``host`` with ``w^k -> x^k`` a division."""
    info = cyclic_info(S)
    if info is None:
        raise PreconditionError("semigroup is not cyclic", "krd")
    x, m, r = info
    for w in range(min(host.n, cap)):
        mw, rw = index_period(host, w)
        if mw < m or rw % r:
            continue
        mp = {}
        a, b = w, x
        for _ in range(mw + rw - 1):
            mp[a] = b
            a, b = host.table[a][w], S.table[b][x]
        d = Division(S, host, tuple(sorted(mp)), mp, "search")
        if d.check():
            return d
    return None


def kr_decompose(S: Semigroup, cap: int = CLOSURE_CAP, max_depth: int = MAX_DEPTH, _level: int = 0) -> DecompTree:
    if _level > max_depth:
        raise ResourceError("recursion depth cap", max_depth, "krd")
    if S.is_semilattice():
        return _leaf(SEMILATTICE, S)
    if S.is_group():
        return decompose_group(S)
    if cyclic_info(S) is not None:
        return decompose_cyclic(S)
    if is_right_simple(S):
        child = kr_decompose(opposite(S), cap, max_depth, _level + 1)
        w = child.witness.opposite()
        w = Division(S, w.host, w.sub, w.map, w.construction)
        _require(w.check(), "dual witness")
        return DecompTree(DUAL, S, w, child.depth, (child,))
    A = minimal_generating_set(S)
    full = S.full_mask()
    a = next(g for g in A if S.right_ideal(g) != full)
    T1 = mask_elements(generated_mask(S, [a]))
    T2 = mask_elements(generated_mask(S, [g for g in A if g != a]))
    cd = division_from_cover(S, T1, T2, cap)
    inp = cd.merge.input
    T0 = cd.T0
    for name, T in (("T1", inp.T1), ("T2", inp.T2), ("T0", inp.T0)):
        if T.n >= S.n:
            raise VerificationError(f"{name} is not smaller than S ({T.n} >= {S.n})", "krd")
    right = kr_decompose(inp.T2, cap, max_depth, _level + 1)
    mid = kr_decompose(inp.T0, cap, max_depth, _level + 1)
    left = kr_decompose(inp.T1, cap, max_depth, _level + 1)
    kids = (right, mid, left)
    return DecompTree(TRIPLE, S, cd.division, combined_depth(TRIPLE, kids), kids, (cd.T1, cd.T2, T0), f"split a={S.label(a)}")


# -- verification -----------------------------------------------------------


def _is_isomorphic(A: Semigroup, B: Semigroup) -> bool:
    """Try every assignment of the generators of ``A`` into ``B``."""
    if A.n != B.n:
        return False
    gens = minimal_generating_set(A)
    c = closure(gens, A.mul)
    for imgs in itertools.product(range(B.n), repeat=len(gens)):
        m = [0] * A.n
        for i in range(A.n):
            m[c.elements[i]] = B.product(imgs[k] for k in c.word(i))
        if len(set(m)) != B.n:
            continue
        if all(m[A.table[p][q]] == B.table[m[p]][m[q]] for p in range(A.n) for q in range(A.n)):
            return True
    return False


def group_divides(G: Semigroup, S: Semigroup, cap: int = GROUP_CAP) -> bool:
    """Whether the group ``G`` is a quotient of a subgroup of ``S``."""
    for e in S.idempotents():
        H, _ = maximal_subgroup(S, e)
        if H.n < G.n or H.n % G.n or H.n > cap:
            continue
        for K in subgroups(H):
            if popcount(K) % G.n:
                continue
            Ksg, _ = restrict(H, mask_elements(K))
            for N in normal_subgroups(Ksg):
                if Ksg.n // popcount(N) != G.n:
                    continue
                Q = quotient(Ksg, N).group
                if _is_isomorphic(Q, G):
                    return True
    return False


@dataclass
class NodeStatus:
    path: str
    kind: str
    size: int
    depth: int
    status: str  # "ok" or a failure reason


@dataclass
class TreeReport:
    nodes: list[NodeStatus] = field(default_factory=list)
    leaves: Counter = field(default_factory=Counter)
    height: int = 0

    @property
    def ok(self) -> bool:
        return all(n.status == "ok" for n in self.nodes)

    def failures(self) -> list[NodeStatus]:
        return [n for n in self.nodes if n.status != "ok"]


def _check_node(t: DecompTree, root: Semigroup, divisibility_cap: int) -> str:
    v = t.witness.check()
    if not v:
        return str(v.reason)
    if t.witness.target != t.target:
        return "WitnessTargetMismatch"
    if t.depth != combined_depth(t.kind, t.children):
        return "DepthMismatch"
    if t.kind == SEMILATTICE:
        if t.children or not t.target.is_semilattice():
            return "NotSemilattice"
        if t.witness.host != t.target:
            return "HostMismatch"
    elif t.kind == GROUP:
        if t.children or not t.target.is_group() or not is_simple(t.target):
            return "NotSimpleGroup"
        if t.witness.host != t.target:
            return "HostMismatch"
        if root.n <= divisibility_cap and not group_divides(t.target, root):
            return "GroupDoesNotDivide"
    elif t.kind == WREATH:
        left, right = t.children
        try:
            host = WreathProduct(left.target, right.target).materialize(WREATH_CAP, check=False)
        except (ResourceError, PreconditionError) as exc:
            return f"HostUnbuildable({exc})"
        if host.table != t.witness.host.table:
            return "HostMismatch"
    elif t.kind == TRIPLE:
        right, mid, left = t.children
        e1, e2, _ = t.embeddings
        inp = cover_input(t.target, e1, e2)[0]
        if (inp.T1.table, inp.T2.table, inp.T0.table) != (left.target.table, right.target.table, mid.target.table):
            return "ChildMismatch"
        md = build_merge(inp)
        if md.semigroup.table != t.witness.host.table:
            return "HostMismatch"
    elif t.kind == DUAL:
        (child,) = t.children
        if child.target.table != opposite(t.target).table:
            return "ChildMismatch"
        if t.witness.host.table != opposite(child.witness.host).table or dict(t.witness.map) != dict(child.witness.map):
            return "HostMismatch"
    else:
        return "UnknownKind"
    return "ok"


def verify_tree(t: DecompTree, divisibility_cap: int = 12) -> TreeReport:
    """Re-check every node bottom-up, rebuilding hosts from the children."""
    rep = TreeReport(height=t.height())

    def walk(node: DecompTree, path: str) -> None:
        for i, c in enumerate(node.children):
            walk(c, f"{path}.{i}")
        status = _check_node(node, t.target, divisibility_cap)
        rep.nodes.append(NodeStatus(path, node.kind, node.target.n, node.depth, status))
        if not node.children:
            rep.leaves[(node.kind, node.target.n)] += 1

    walk(t, "S")
    return rep


def format_certificate(t: DecompTree, report: TreeReport | None = None) -> str:
    report = report or verify_tree(t)
    status = {n.path: n.status for n in report.nodes}
    lines: list[str] = []

    def walk(node: DecompTree, path: str, indent: int) -> None:
        attrs = [f"target={path}", f"size={node.target.n}", f"depth={node.depth}", f"witness={status.get(path, '?')}"]
        if node.kind != SEMILATTICE and node.kind != GROUP:
            attrs.append(f"host={node.witness.host.n}")
        if node.note:
            attrs.append(f'note="{node.note}"')
        close = ")" if not node.children else ""
        lines.append("  " * indent + f"({node.kind} " + " ".join(attrs) + close)
        for i, c in enumerate(node.children):
            walk(c, f"{path}.{i}", indent + 1)
        if node.children:
            lines[-1] += ")"

    walk(t, "S", 0)
    return "\n".join(lines) + "\n"
