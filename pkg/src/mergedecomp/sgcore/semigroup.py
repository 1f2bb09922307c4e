"""Finite semigroups as Cayley tables, closure under a product oracle, and
basic structure (idempotent powers, minimal ideal, local groups)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from ..errors import PreconditionError, ResourceError

CLOSURE_CAP = 100_000

_ASSOC_CHUNK = 4_000_000


class Semigroup:
    """A finite semigroup on ``range(n)`` given by its Cayley table.

    ``table[i][j]`` is the index of the product of elements ``i`` and ``j``.
    Construction validates index ranges and associativity. When a generating
    set is passed, associativity is checked with Light's test against the
    generators only, which is O(n^2 |gens|) instead of O(n^3).
    """

    __slots__ = ("n", "table", "labels", "_array")

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        labels: Sequence[str] | None = None,
        *,
        generators: Sequence[int] | None = None,
        check: bool = True,
    ):
        rows = tuple(tuple(int(v) for v in row) for row in table)
        n = len(rows)
        if n < 1:
            raise PreconditionError("a semigroup needs at least one element", "sgcore")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise PreconditionError(f"row {i} has length {len(row)}, expected {n}", "sgcore")
            for j, v in enumerate(row):
                if not 0 <= v < n:
                    raise PreconditionError(f"entry ({i},{j})={v} out of range [0,{n})", "sgcore")
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise PreconditionError(f"{len(labels)} labels for {n} elements", "sgcore")
            if len(set(labels)) != n:
                raise PreconditionError("labels must be pairwise distinct", "sgcore")
        self.n = n
        self.table = rows
        self.labels = labels
        self._array = None
        if check:
            bad = associativity_failure(self.array, generators)
            if bad is not None:
                i, j, k = bad
                raise PreconditionError(f"not associative at ({i},{j},{k})", "sgcore")

    @property
    def array(self) -> np.ndarray:
        if self._array is None:
            a = np.array(self.table, dtype=np.int64)
            a.setflags(write=False)
            self._array = a
        return self._array

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def product(self, seq: Iterable[int]) -> int:
        it = iter(seq)
        acc = next(it)
        t = self.table
        for x in it:
            acc = t[acc][x]
        return acc

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def with_labels(self, labels: Sequence[str] | None) -> "Semigroup":
        return Semigroup(self.table, labels, check=False)

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Semigroup):
            return NotImplemented
        return self is other or (self.table == other.table and self.labels == other.labels)

    def __hash__(self) -> int:
        return hash((self.table, self.labels))

    def __repr__(self) -> str:
        return f"Semigroup(n={self.n})"

    # -- simple predicates -------------------------------------------------

    def is_idempotent(self, i: int) -> bool:
        return self.table[i][i] == i

    def idempotents(self) -> list[int]:
        return [i for i in range(self.n) if self.table[i][i] == i]

    def is_commutative(self) -> bool:
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.n) for j in range(i))

    def is_semilattice(self) -> bool:
        return self.is_commutative() and all(self.is_idempotent(i) for i in range(self.n))

    def identity(self) -> int | None:
        t = self.table
        for e in range(self.n):
            if all(t[e][x] == x and t[x][e] == x for x in range(self.n)):
                return e
        return None

    def zero(self) -> int | None:
        t = self.table
        for z in range(self.n):
            if all(t[z][x] == z and t[x][z] == z for x in range(self.n)):
                return z
        return None

    def is_group(self) -> bool:
        e = self.identity()
        if e is None:
            return False
        return all(e in row for row in self.table)

    def inverse(self, g: int, identity: int) -> int:
        for h in range(self.n):
            if self.table[g][h] == identity and self.table[h][g] == identity:
                return h
        raise PreconditionError(f"element {g} has no inverse", "sgcore")

    def right_ideal(self, i: int) -> int:
        """Bitmask of ``i S``."""
        m = 0
        for v in self.table[i]:
            m |= 1 << v
        return m

    def left_ideal(self, i: int) -> int:
        """Bitmask of ``S i``."""
        m = 0
        for row in self.table:
            m |= 1 << row[i]
        return m

    def full_mask(self) -> int:
        return (1 << self.n) - 1


def associativity_failure(a: np.ndarray, generators: Sequence[int] | None = None):
    """First triple ``(i, j, k)`` with ``(ij)k != i(jk)``, or None.

    With ``generators`` only ``k`` ranging over them is tested (Light's test);
    the caller is responsible for them actually generating.
    """
    n = a.shape[0]
    cols = np.arange(n) if generators is None else np.unique(np.asarray(generators, dtype=np.int64))
    right = a[:, cols]
    step = max(1, _ASSOC_CHUNK // max(1, n * len(cols)))
    for lo in range(0, n, step):
        blk = a[lo : lo + step]
        lhs = right[blk]  # (ij)k
        rhs = blk[:, right]  # i(jk)
        if np.array_equal(lhs, rhs):
            continue
        i, j, c = np.argwhere(lhs != rhs)[0]
        return int(lo + i), int(j), int(cols[c])
    return None


@dataclass(frozen=True)
class SubsetOfS:
    """A subset of a semigroup's elements, stored as an int bitmask."""

    host: Semigroup
    bits: int

    @classmethod
    def of(cls, host: Semigroup, elements: Iterable[int]) -> "SubsetOfS":
        m = 0
        for x in elements:
            if not 0 <= x < host.n:
                raise PreconditionError(f"element {x} not in host of size {host.n}", "psat")
            m |= 1 << x
        return cls(host, m)

    def elements(self) -> tuple[int, ...]:
        return mask_elements(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __le__(self, other: "SubsetOfS") -> bool:
        return self.bits & ~other.bits == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubsetOfS):
            return NotImplemented
        return self.bits == other.bits and (self.host is other.host or self.host == other.host)

    def __hash__(self) -> int:
        return hash(self.bits)

    def __repr__(self) -> str:
        return "{" + ",".join(self.host.label(x) for x in self.elements()) + "}"


def mask_elements(bits: int) -> tuple[int, ...]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def popcount(bits: int) -> int:
    return bin(bits).count("1")


# -- closure --------------------------------------------------------------


@dataclass(frozen=True)
class Closure:
    """Result of :func:`closure`.

    ``elements[i]`` is the abstract element at index ``i``; ``parent`` and
    ``last`` give its canonical word: element ``i`` equals
    ``elements[parent[i]] * generators[last[i]]`` (``parent[i] == -1`` for
    generators themselves).
    """

    semigroup: Semigroup
    gen_indices: tuple[int, ...]
    elements: tuple
    parent: tuple[int, ...]
    last: tuple[int, ...]
    right: tuple[tuple[int, ...], ...]

    def index(self, element) -> int:
        return self._lookup()[element]

    def _lookup(self) -> dict:
        d = self.__dict__.get("_lookup_cache")
        if d is None:
            d = {x: i for i, x in enumerate(self.elements)}
            object.__setattr__(self, "_lookup_cache", d)
        return d

    def word(self, i: int) -> tuple[int, ...]:
        """Canonical generator word (generator positions) for element ``i``."""
        w = []
        while i != -1:
            w.append(self.last[i])
            i = self.parent[i]
        return tuple(reversed(w))


def closure(
    generators: Sequence[Hashable],
    product: Callable[[Hashable, Hashable], Hashable],
    cap: int = CLOSURE_CAP,
    labels: Callable[[int, Hashable], str] | None = None,
) -> Closure:
    """Least set containing ``generators`` closed under ``product``.

    Elements are numbered breadth-first by word length; within a length,
    by generator index, then by index of the left factor. Only products
    ``x * g`` for generators ``g`` are evaluated through the oracle; the
    remaining table entries are read off the right Cayley graph.
    """
    if not generators:
        raise PreconditionError("closure needs at least one generator", "sgcore")
    index: dict = {}
    elements: list = []
    parent: list[int] = []
    last: list[int] = []
    gen_indices = []
    for g_pos, g in enumerate(generators):
        if g not in index:
            index[g] = len(elements)
            elements.append(g)
            parent.append(-1)
            last.append(g_pos)
            if len(elements) > cap:
                raise ResourceError("closure size cap", cap, "sgcore")
        gen_indices.append(index[g])
    distinct = sorted(set(gen_indices))
    # canonical generator per distinct generator index
    gen_pos = {gi: gen_indices.index(gi) for gi in distinct}
    gen_elems = [(gen_pos[gi], elements[gi]) for gi in distinct]
    right: list[list[int] | None] = []
    level = list(range(len(elements)))
    while level:
        nxt = []
        for g_pos, g in gen_elems:
            for u in level:
                v = product(elements[u], g)
                j = index.get(v)
                if j is None:
                    j = len(elements)
                    if j >= cap:
                        raise ResourceError("closure size cap", cap, "sgcore")
                    index[v] = j
                    elements.append(v)
                    parent.append(u)
                    last.append(g_pos)
                    nxt.append(j)
                while len(right) <= u:
                    right.append(None)
                if right[u] is None:
                    right[u] = [0] * len(generators)
                right[u][g_pos] = j
        level = nxt
    n = len(elements)
    # fill duplicate generator columns
    for u in range(n):
        row = right[u]
        for p, gi in enumerate(gen_indices):
            row[p] = row[gen_pos[gi]]
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        ti = table[i]
        ri = right[i]
        for j in range(n):
            pj = parent[j]
            if pj == -1:
                ti[j] = ri[last[j]]
            else:
                ti[j] = right[ti[pj]][last[j]]
    lab = [labels(i, x) for i, x in enumerate(elements)] if labels is not None else None
    sg = Semigroup(table, lab, generators=distinct)
    return Closure(
        sg,
        tuple(gen_indices),
        tuple(elements),
        tuple(parent),
        tuple(last),
        tuple(tuple(r) for r in right),
    )


def generated_mask(S: Semigroup, indices: Iterable[int]) -> int:
    """Bitmask of the subsemigroup of ``S`` generated by ``indices``."""
    gens = sorted(set(indices))
    if not gens:
        return 0
    seen = 0
    for g in gens:
        seen |= 1 << g
    frontier = list(gens)
    t = S.table
    while frontier:
        new = []
        for u in frontier:
            for g in gens:
                v = t[u][g]
                if not seen >> v & 1:
                    seen |= 1 << v
                    new.append(v)
        frontier = new
    return seen


def subsemigroup(S: Semigroup, generators: Sequence[int], cap: int = CLOSURE_CAP) -> tuple[Semigroup, tuple[int, ...]]:
    """Subsemigroup generated by ``generators`` in canonical order, with the
    embedding (new index -> index in ``S``)."""
    c = closure(list(generators), S.mul, cap, labels=lambda i, x: S.label(x))
    return c.semigroup, c.elements


def restrict(S: Semigroup, elements: Sequence[int]) -> tuple[Semigroup, tuple[int, ...]]:
    """The subsemigroup on exactly ``elements`` (kept in the given order);
    raises if the set is not closed."""
    elements = tuple(elements)
    pos = {x: i for i, x in enumerate(elements)}
    try:
        table = [[pos[S.table[x][y]] for y in elements] for x in elements]
    except KeyError:
        raise PreconditionError("subset is not closed under the product", "sgcore") from None
    labels = [S.label(x) for x in elements] if S.labels is not None else None
    return Semigroup(table, labels, check=False), elements


# -- powers, aperiodicity, ideals --------------------------------------


def index_period(S: Semigroup, s: int) -> tuple[int, int]:
    """``(m, r)`` with ``s^(m+r) = s^m`` and both minimal."""
    seen = {}
    x, k = s, 1
    t = S.table
    while x not in seen:
        seen[x] = k
        x = t[x][s]
        k += 1
    m = seen[x]
    return m, k - m


def idempotent_power(S: Semigroup, s: int) -> int:
    """The unique idempotent among ``s, s^2, s^3, ...``."""
    m, r = index_period(S, s)
    # s^k is idempotent for the unique k in [m, m+r) divisible by r
    k = m + (-m) % r
    x = s
    t = S.table
    for _ in range(k - 1):
        x = t[x][s]
    return x


def is_aperiodic(S: Semigroup) -> bool:
    t = S.table
    for s in range(S.n):
        e = idempotent_power(S, s)
        if t[e][s] != e:
            return False
    return True


def opposite(S: Semigroup) -> Semigroup:
    n = S.n
    return Semigroup([[S.table[j][i] for j in range(n)] for i in range(n)], S.labels, check=False)


def ideal_mask(S: Semigroup, s: int) -> int:
    """Bitmask of the two-sided ideal ``S^1 s S^1``."""
    t = S.table
    m = (1 << s) | S.right_ideal(s) | S.left_ideal(s)
    for x in range(S.n):
        row = t[x]
        for y in range(S.n):
            m |= 1 << t[row[s]][y]
    return m


def minimal_ideal(S: Semigroup) -> SubsetOfS:
    """The least two-sided ideal of ``S``."""
    best = None
    for s in range(S.n):
        m = ideal_mask(S, s)
        if best is None or popcount(m) < popcount(best):
            best = m
    return SubsetOfS(S, best)


def local_group(S: Semigroup, e: int) -> tuple[Semigroup, tuple[int, ...]]:
    """The subsemigroup ``eSe`` for ``e`` idempotent in the minimal ideal.

    Returns the group and its embedding into ``S``.
    """
    t = S.table
    if t[e][e] != e:
        raise PreconditionError(f"element {e} is not idempotent", "sgcore")
    elems = sorted({t[t[e][x]][e] for x in range(S.n)})
    G, emb = restrict(S, elems)
    if not G.is_group():
        raise PreconditionError(f"eSe for e={e} is not a group; e is outside the minimal ideal", "sgcore")
    return G, emb


def maximal_subgroup(S: Semigroup, e: int) -> tuple[Semigroup, tuple[int, ...]]:
    """The group of units of the monoid ``eSe`` (the maximal subgroup at ``e``)."""
    t = S.table
    if t[e][e] != e:
        raise PreconditionError(f"element {e} is not idempotent", "sgcore")
    ese = sorted({t[t[e][x]][e] for x in range(S.n)})
    units = [x for x in ese if any(t[x][y] == e and t[y][x] == e for y in ese)]
    return restrict(S, units)


def cyclic_info(S: Semigroup) -> tuple[int, int, int] | None:
    """``(generator, index, period)`` if ``S`` is cyclic, else None."""
    for s in range(S.n):
        m, r = index_period(S, s)
        if m + r - 1 == S.n:
            return s, m, r
    return None
