"""Named fixture semigroups used by tests, the self-test and the CLI."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .sgcore.semigroup import Semigroup, closure


def trivial() -> Semigroup:
    return Semigroup([[0]], ["e"])


def u1() -> Semigroup:
    """The two-element semilattice; index 0 is ``1``, index 1 is ``0``."""
    return Semigroup([[0, 1], [1, 1]], ["1", "0"])


def chain(k: int) -> Semigroup:
    """``k``-element chain under min; index 0 is the top."""
    return Semigroup([[max(i, j) for j in range(k)] for i in range(k)], [f"c{i}" for i in range(k)])


def left_zero(k: int = 2) -> Semigroup:
    names = "abcdefgh"
    return Semigroup([[i] * k for i in range(k)], list(names[:k]))


def right_zero(k: int = 2) -> Semigroup:
    names = "abcdefgh"
    return Semigroup([list(range(k)) for _ in range(k)], list(names[:k]))


def cyclic_group(n: int) -> Semigroup:
    labels = ["e", "g"] + [f"g{i}" for i in range(2, n)]
    return Semigroup([[(i + j) % n for j in range(n)] for i in range(n)], labels[:n])


def klein() -> Semigroup:
    return Semigroup([[i ^ j for j in range(4)] for i in range(4)], ["e", "a", "b", "c"])


def cyclic_semigroup(m: int, r: int) -> Semigroup:
    """``<x | x^(m+r) = x^m>``; element ``x^k`` at index ``k - 1``."""
    size = m + r - 1

    def red(k: int) -> int:
        return k if k < m + r else m + (k - m) % r

    labels = ["x"] + [f"x{k}" for k in range(2, size + 1)]
    return Semigroup([[red(i + j) - 1 for j in range(1, size + 1)] for i in range(1, size + 1)], labels)


def full_transformation_monoid(k: int = 2) -> Semigroup:
    maps = list(itertools.product(range(k), repeat=k))
    pos = {f: i for i, f in enumerate(maps)}
    table = [[pos[tuple(g[x] for x in f)] for g in maps] for f in maps]
    return Semigroup(table, ["".join(map(str, f)) for f in maps])


def symmetric_group(k: int = 3) -> Semigroup:
    perms = list(itertools.permutations(range(k)))
    c = closure(perms, lambda f, g: tuple(g[x] for x in f))
    return c.semigroup.with_labels(["".join(map(str, p)) for p in c.elements])


@lru_cache(maxsize=None)
def _base_corpus() -> tuple[tuple[str, Semigroup], ...]:
    return (
        ("trivial", trivial()),
        ("U1", u1()),
        ("chain2", chain(2)),
        ("chain3", chain(3)),
        ("LZ2", left_zero(2)),
        ("RZ2", right_zero(2)),
        ("Z2", cyclic_group(2)),
        ("Z3", cyclic_group(3)),
        ("Z4", cyclic_group(4)),
        ("K4", klein()),
        ("C21", cyclic_semigroup(2, 1)),
        ("C22", cyclic_semigroup(2, 2)),
        ("C32", cyclic_semigroup(3, 2)),
        ("T2", full_transformation_monoid(2)),
        ("S3", symmetric_group(3)),
    )


def corpus(include_languages: bool = True) -> list[tuple[str, Semigroup]]:
    """The fixture corpus, in a fixed order."""
    out = list(_base_corpus())
    if include_languages:
        from .langsep import fixture_recognizers

        for name, rec in fixture_recognizers():
            out.append((name, rec.S))
    return out


def get(name: str) -> Semigroup:
    for n, S in corpus(include_languages=False):
        if n == name:
            return S
    raise KeyError(name)


@lru_cache(maxsize=None)
def _small(max_n: int) -> tuple[Semigroup, ...]:
    out = []
    for n in range(1, max_n + 1):
        cells = [(i, j) for i in range(n) for j in range(n)]
        for values in itertools.product(range(n), repeat=n * n):
            t = [list(values[i * n : (i + 1) * n]) for i in range(n)]
            if all(t[t[i][j]][k] == t[i][t[j][k]] for i, j in cells for k in range(n)):
                out.append(Semigroup(t, check=False))
    return tuple(out)


def small_semigroups(max_n: int = 3) -> list[Semigroup]:
    """Every associative table on at most ``max_n`` elements (not up to
    isomorphism)."""
    return list(_small(max_n))
