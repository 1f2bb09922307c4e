"""Power-semigroup arithmetic and saturation.

Subsets of a semigroup are handled internally as int bitmasks; the public
functions also accept :class:`SubsetOfS` values. The empty set never enters
a family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import PreconditionError, ResourceError, VerificationError
from .sgcore.semigroup import Semigroup, SubsetOfS, mask_elements, popcount

FAMILY_CAP = 1 << 20


class PowerSemigroup:
    """Cached subset multiplication in ``2^S``."""

    def __init__(self, S: Semigroup):
        self.S = S
        # bits[x][y] = 1 << xy
        self._bits = [tuple(1 << v for v in row) for row in S.table]
        self._cache: dict[tuple[int, int], int] = {}
        self._omega: dict[int, int] = {}
        self._ostar: dict[int, int] = {}

    def mul(self, X: int, Y: int) -> int:
        key = (X, Y)
        r = self._cache.get(key)
        if r is None:
            ys = mask_elements(Y)
            r = 0
            for x in mask_elements(X):
                bx = self._bits[x]
                for y in ys:
                    r |= bx[y]
            self._cache[key] = r
        return r

    def power(self, X: int, k: int) -> int:
        acc = X
        for _ in range(k - 1):
            acc = self.mul(acc, X)
        return acc

    def omega(self, X: int) -> int:
        """The idempotent power of ``X`` in ``2^S``."""
        r = self._omega.get(X)
        if r is None:
            if X == 0:
                raise PreconditionError("empty subset", "psat")
            seen: dict[int, int] = {}
            cur, k = X, 1
            while cur not in seen:
                seen[cur] = k
                cur = self.mul(cur, X)
                k += 1
            m = seen[cur]
            period = k - m
            e = m + (-m) % period
            r = self.power(X, e)
            self._omega[X] = r
        return r

    def omega_star(self, X: int) -> int:
        """Union of ``X^w X^n`` over ``n >= 0``."""
        r = self._ostar.get(X)
        if r is None:
            cur = self.omega(X)
            acc = 0
            seen = set()
            while cur not in seen:
                seen.add(cur)
                acc |= cur
                cur = self.mul(cur, X)
            self._ostar[X] = acc
            r = acc
        return r


_POWERS: dict[int, PowerSemigroup] = {}


def power_semigroup(S: Semigroup) -> PowerSemigroup:
    """Shared per-host cache (keyed by identity of the host object)."""
    ps = _POWERS.get(id(S))
    if ps is None or ps.S is not S:
        if len(_POWERS) > 256:
            _POWERS.clear()
        ps = PowerSemigroup(S)
        _POWERS[id(S)] = ps
    return ps


def _same_host(X: SubsetOfS, Y: SubsetOfS) -> Semigroup:
    if X.host is not Y.host and X.host != Y.host:
        raise PreconditionError("subsets live in different semigroups", "psat")
    return X.host


def subset_product(X: SubsetOfS, Y: SubsetOfS) -> SubsetOfS:
    S = _same_host(X, Y)
    return SubsetOfS(S, power_semigroup(S).mul(X.bits, Y.bits))


def omega_star(X: SubsetOfS) -> SubsetOfS:
    if X.bits == 0:
        raise PreconditionError("omega_star of the empty set", "psat")
    return SubsetOfS(X.host, power_semigroup(X.host).omega_star(X.bits))


def submasks(X: int) -> Iterator[int]:
    """All nonempty subsets of ``X``."""
    sub = X
    while sub:
        yield sub
        sub = (sub - 1) & X


def subset_key(bits: int) -> tuple[int, tuple[int, ...]]:
    """Canonical family order: by size, then lexicographically by elements."""
    return popcount(bits), mask_elements(bits)


@dataclass(frozen=True)
class SubsetFamily:
    host: Semigroup
    members: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, host: Semigroup, subsets: Iterable[SubsetOfS | int | Iterable[int]]) -> "SubsetFamily":
        out = set()
        for X in subsets:
            if isinstance(X, SubsetOfS):
                bits = X.bits
            elif isinstance(X, int):
                bits = X
            else:
                bits = SubsetOfS.of(host, X).bits
            if bits == 0:
                raise PreconditionError("families never contain the empty set", "psat")
            if bits >> host.n:
                raise PreconditionError("subset mentions elements outside the host", "psat")
            out.add(bits)
        return cls(host, frozenset(out))

    @classmethod
    def singletons(cls, S: Semigroup) -> "SubsetFamily":
        return cls(S, frozenset(1 << s for s in range(S.n)))

    @classmethod
    def all_nonempty(cls, S: Semigroup) -> "SubsetFamily":
        return cls(S, frozenset(range(1, 1 << S.n)))

    def __contains__(self, X: SubsetOfS | int) -> bool:
        bits = X.bits if isinstance(X, SubsetOfS) else X
        return bits in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SubsetOfS]:
        return (SubsetOfS(self.host, b) for b in self.ordered())

    def __le__(self, other: "SubsetFamily") -> bool:
        return self.members <= other.members

    def ordered(self) -> list[int]:
        return sorted(self.members, key=subset_key)

    def maximal(self) -> list[int]:
        ms = self.ordered()
        return [X for X in ms if not any(X != Y and X & ~Y == 0 for Y in ms)]

    def format(self) -> str:
        return "".join(format_subset(self.host, b) + "\n" for b in self.ordered())


def format_subset(S: Semigroup, bits: int) -> str:
    return "{" + ",".join(S.label(x) for x in mask_elements(bits)) + "}"


def downward_closure(F: SubsetFamily) -> SubsetFamily:
    out = set()
    for X in F.members:
        out.update(submasks(X))
    return SubsetFamily(F.host, frozenset(out))


def saturation_failure(F: SubsetFamily) -> str | None:
    """Why ``F`` is not saturated, or None."""
    ps = power_semigroup(F.host)
    mem = F.members
    for X in mem:
        for sub in submasks(X):
            if sub not in mem:
                return f"not downward closed: {format_subset(F.host, sub)} under {format_subset(F.host, X)}"
        if ps.omega_star(X) not in mem:
            return f"not closed under omega_star at {format_subset(F.host, X)}"
    ms = list(mem)
    for X in ms:
        for Y in ms:
            if ps.mul(X, Y) not in mem:
                return f"not closed under product at {format_subset(F.host, X)}*{format_subset(F.host, Y)}"
    return None


def is_saturated(F: SubsetFamily) -> bool:
    return saturation_failure(F) is None


@dataclass(frozen=True)
class Saturation:
    """Saturated family plus, per member, the rule that first produced it:
    ``("seed",)``, ``("product", X, Y)``, ``("omega_star", X)`` or
    ``("down", X)``. Members are listed in derivation order."""

    family: SubsetFamily
    derivation: dict = field(hash=False, compare=False)

    def replay(self, seeds: Iterable[int]) -> bool:
        return replay_derivation(self.family.host, self.derivation, seeds)


def replay_derivation(S: Semigroup, derivation: dict, seeds: Iterable[int]) -> bool:
    """Rebuild every member in order using only the three closure rules."""
    ps = power_semigroup(S)
    seeds = set(seeds)
    have: set[int] = set()
    for X, rule in derivation.items():
        kind = rule[0]
        if kind == "seed":
            ok = X in seeds
        elif kind == "product":
            ok = rule[1] in have and rule[2] in have and ps.mul(rule[1], rule[2]) == X
        elif kind == "omega_star":
            ok = rule[1] in have and ps.omega_star(rule[1]) == X
        elif kind == "down":
            ok = rule[1] in have and X & ~rule[1] == 0 and X != 0
        else:
            ok = False
        if not ok:
            return False
        have.add(X)
    return True


def saturate_traced(F: SubsetFamily, cap: int = FAMILY_CAP) -> Saturation:
    """Least saturated family containing ``F``, with its derivation.

    Rounds: products of the new members against everything plus their
    omega_star, then one downward-closure pass over what was added.
    """
    S = F.host
    ps = power_semigroup(S)
    if 0 in F.members:
        raise PreconditionError("families never contain the empty set", "psat")
    deriv: dict[int, tuple] = {}

    def add(X: int, rule: tuple, out: list[int]) -> None:
        if X not in deriv:
            deriv[X] = rule
            out.append(X)
            if len(deriv) > cap:
                raise ResourceError("family size cap", cap, "psat")

    frontier: list[int] = []
    for X in sorted(F.members, key=subset_key):
        add(X, ("seed",), frontier)
    staged = list(frontier)
    frontier = []
    for X in staged:
        for sub in submasks(X):
            add(sub, ("down", X), frontier)
    frontier = staged + frontier
    while frontier:
        new: list[int] = []
        current = list(deriv)
        for X in frontier:
            add(ps.omega_star(X), ("omega_star", X), new)
            for Y in current:
                add(ps.mul(X, Y), ("product", X, Y), new)
                add(ps.mul(Y, X), ("product", Y, X), new)
        down: list[int] = []
        for X in new:
            for sub in submasks(X):
                add(sub, ("down", X), down)
        frontier = new + down
    fam = SubsetFamily(S, frozenset(deriv))
    bad = saturation_failure(fam)
    if bad is not None:
        raise VerificationError(f"saturation fixpoint is not saturated: {bad}", "psat")
    return Saturation(fam, deriv)


def saturate(F: SubsetFamily, cap: int = FAMILY_CAP) -> SubsetFamily:
    return saturate_traced(F, cap).family


def henckell_pointlikes(S: Semigroup, cap: int = FAMILY_CAP) -> SubsetFamily:
    """Saturation of the singletons of ``S``."""
    return saturate(SubsetFamily.singletons(S), cap)


# -- subgroups of the power semigroup --------------------------------------


@dataclass(frozen=True)
class UnionCheck:
    ok: bool
    union: int
    cyclic: tuple[tuple[int, int], ...]  # (generator, union of its cyclic subgroup)
    steps: tuple[str, ...]
    order: int = 0


def _group_identity(ps: PowerSemigroup, G: list[int]) -> int:
    gs = set(G)
    for X in G:
        for Y in G:
            if ps.mul(X, Y) not in gs:
                raise PreconditionError("not closed under subset product", "psat")
    ident = [E for E in G if all(ps.mul(E, X) == X == ps.mul(X, E) for X in G)]
    if not ident:
        raise PreconditionError("no identity under subset product", "psat")
    E = ident[0]
    for X in G:
        if not any(ps.mul(X, Y) == E == ps.mul(Y, X) for Y in G):
            raise PreconditionError("an element has no inverse under subset product", "psat")
    return E


def subgroup_union_check(S: Semigroup, G: Iterable[SubsetOfS | int]) -> UnionCheck:
    """Show that the union of a subgroup ``G`` of ``2^S`` lies in its
    saturation: multiply together the unions of its cyclic subgroups, each
    obtained as ``omega_star`` of a generator."""
    ps = power_semigroup(S)
    G = sorted({X.bits if isinstance(X, SubsetOfS) else X for X in G}, key=subset_key)
    if not G or 0 in G:
        raise PreconditionError("group must be a nonempty set of nonempty subsets", "psat")
    _group_identity(ps, G)
    steps = []
    cyclic: dict[frozenset, int] = {}
    for X in G:
        C = set()
        cur = X
        while cur not in C:
            C.add(cur)
            cur = ps.mul(cur, X)
        key = frozenset(C)
        if key not in cyclic:
            cyclic[key] = X
    pairs = []
    ok = True
    for C, X in sorted(cyclic.items(), key=lambda kv: subset_key(kv[1])):
        u = 0
        for Y in C:
            u |= Y
        os_ = ps.omega_star(X)
        steps.append(f"omega_star({format_subset(S, X)}) = {format_subset(S, os_)} = union of <{format_subset(S, X)}>")
        ok &= os_ == u
        pairs.append((X, os_))
    # G is the setwise product of its cyclic subgroups
    prod: set[int] | None = None
    for C in cyclic:
        prod = set(C) if prod is None else {ps.mul(a, b) for a in prod for b in C}
    ok &= prod == set(G)
    union = 0
    for X in G:
        union |= X
    acc = pairs[0][1]
    for _, u in pairs[1:]:
        acc = ps.mul(acc, u)
    steps.append(f"product of cyclic unions = {format_subset(S, acc)}")
    ok &= acc == union
    ok &= union in saturate(SubsetFamily(S, frozenset(G))).members
    return UnionCheck(bool(ok), union, tuple(pairs), tuple(steps), len(G))
