"""Homomorphisms between finite semigroups, free-semigroup homomorphisms,
and division witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from ..errors import PreconditionError, VerificationError
from .semigroup import Closure, Semigroup, closure


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check; falsy on failure with a short reason code."""

    ok: bool
    reason: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.reason}: {self.detail}" if self.detail else str(self.reason)


OK = Verdict(True)


@dataclass(frozen=True)
class SgHom:
    dom: Semigroup
    cod: Semigroup
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def hom_failure(self) -> tuple[int, int] | None:
        dt, ct, m = self.dom.table, self.cod.table, self.map
        for x in range(self.dom.n):
            mx = m[x]
            row = dt[x]
            crow = ct[mx]
            for y in range(self.dom.n):
                if m[row[y]] != crow[m[y]]:
                    return x, y
        return None

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.n

    def verify(self, injective: bool = False, surjective: bool = False) -> "SgHom":
        if len(self.map) != self.dom.n or any(not 0 <= v < self.cod.n for v in self.map):
            raise VerificationError("map is not a total function into the codomain", "sgcore")
        bad = self.hom_failure()
        if bad is not None:
            raise VerificationError(f"homomorphism law fails at {bad}", "sgcore")
        if injective and not self.is_injective():
            raise VerificationError("map is not injective", "sgcore")
        if surjective and not self.is_surjective():
            raise VerificationError("map is not surjective", "sgcore")
        return self


@dataclass(frozen=True)
class FreeHom:
    """A homomorphism ``A+ -> cod`` determined by its values on letters."""

    alphabet: tuple[Hashable, ...]
    cod: Semigroup
    gen_map: Mapping[Hashable, int] = field(hash=False)

    def __post_init__(self):
        if not self.alphabet:
            raise PreconditionError("alphabet must be nonempty", "sgcore")
        for a in self.alphabet:
            v = self.gen_map.get(a)
            if v is None or not 0 <= v < self.cod.n:
                raise PreconditionError(f"letter {a!r} has no valid image", "sgcore")

    def __call__(self, word: Sequence[Hashable]) -> int:
        if len(word) == 0:
            raise PreconditionError("empty word has no image in a semigroup", "sgcore")
        t = self.cod.table
        g = self.gen_map
        acc = g[word[0]]
        for a in word[1:]:
            acc = t[acc][g[a]]
        return acc

    def image(self) -> int:
        """Bitmask of the image (the subsemigroup generated by letter images)."""
        from .semigroup import generated_mask

        return generated_mask(self.cod, [self.gen_map[a] for a in self.alphabet])

    def is_surjective(self) -> bool:
        return self.image() == self.cod.full_mask()


def free_hom(alphabet: Iterable[Hashable], cod: Semigroup, gen_map: Mapping[Hashable, int]) -> FreeHom:
    alphabet = tuple(alphabet)
    return FreeHom(alphabet, cod, dict(gen_map))


def generated_free_hom(alphabet: Sequence[Hashable], images: Mapping[Hashable, Hashable], product, cap: int) -> tuple[FreeHom, Closure]:
    """Free homomorphism onto the closure of abstract letter images."""
    alphabet = tuple(alphabet)
    c = closure([images[a] for a in alphabet], product, cap)
    gm = {a: c.gen_indices[i] for i, a in enumerate(alphabet)}
    return FreeHom(alphabet, c.semigroup, gm), c


def is_division_witness(S: Semigroup, T: Semigroup, sub: Iterable[int], map: Mapping[int, int] | Sequence[int]) -> Verdict:
    """Check that ``map`` restricted to ``sub`` is a surjective homomorphism
    from a subsemigroup of ``T`` onto ``S``.

    ``map`` is either a mapping on ``sub`` or a sequence indexed by ``T``.
    """
    sub = sorted(set(sub))
    if not sub:
        return Verdict(False, "NotClosed", "empty subset")
    inside = set(sub)
    tt, st = T.table, S.table
    for x in sub:
        for y in sub:
            if tt[x][y] not in inside:
                return Verdict(False, "NotClosed", f"{x}*{y}={tt[x][y]} leaves the subset")
    try:
        m = {x: map[x] for x in sub}
    except (KeyError, IndexError):
        return Verdict(False, "NotHom", "map is not total on the subset")
    for x, v in m.items():
        if v is None or not 0 <= v < S.n:
            return Verdict(False, "NotHom", f"image of {x} is not an element of the target")
    for x in sub:
        mx = m[x]
        for y in sub:
            if m[tt[x][y]] != st[mx][m[y]]:
                return Verdict(False, "NotHom", f"law fails at ({x},{y})")
    if len(set(m.values())) != S.n:
        return Verdict(False, "NotSurjective", f"image has {len(set(m.values()))} of {S.n} elements")
    return OK


@dataclass(frozen=True)
class Division:
    """Witness that ``target`` divides ``host``: ``map`` sends the
    subsemigroup ``sub`` of ``host`` onto ``target``."""

    target: Semigroup
    host: Semigroup
    sub: tuple[int, ...]
    map: Mapping[int, int] = field(hash=False)
    construction: str = ""

    def check(self) -> Verdict:
        return is_division_witness(self.target, self.host, self.sub, self.map)

    def opposite(self) -> "Division":
        from .semigroup import opposite

        return Division(opposite(self.target), opposite(self.host), self.sub, self.map, f"op({self.construction})")


def identity_division(S: Semigroup, construction: str = "identity") -> Division:
    return Division(S, S, tuple(range(S.n)), {i: i for i in range(S.n)}, construction)


def embedding_division(h: SgHom, construction: str = "") -> Division:
    """Division of ``h.dom`` into ``h.cod`` given by an injective hom."""
    inv = {v: x for x, v in enumerate(h.map)}
    return Division(h.dom, h.cod, tuple(sorted(inv)), inv, construction)
