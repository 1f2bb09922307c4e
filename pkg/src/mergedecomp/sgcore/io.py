"""Text formats: ``.sg`` Cayley tables and ``.tgen`` transformation generators."""

from __future__ import annotations

from ..errors import FormatError
from .semigroup import CLOSURE_CAP, Closure, Semigroup, closure


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def parse_sg(text: str) -> Semigroup:
    """Parse ``n <count>``, then ``count`` table rows, then an optional
    ``labels ...`` line."""
    it = _lines(text)
    try:
        no, head = next(it)
    except StopIteration:
        raise FormatError("empty input", None, "sgcore") from None
    if len(head) != 2 or head[0] != "n":
        raise FormatError("expected 'n <count>'", no, "sgcore")
    try:
        n = int(head[1])
    except ValueError:
        raise FormatError(f"bad element count {head[1]!r}", no, "sgcore") from None
    if n < 1:
        raise FormatError("element count must be positive", no, "sgcore")
    rows = []
    labels = None
    for no, toks in it:
        if toks[0] == "labels":
            if labels is not None:
                raise FormatError("duplicate labels line", no, "sgcore")
            labels = toks[1:]
            if len(labels) != n:
                raise FormatError(f"expected {n} labels, got {len(labels)}", no, "sgcore")
            continue
        if labels is not None:
            raise FormatError("table row after labels line", no, "sgcore")
        if len(toks) != n:
            raise FormatError(f"expected {n} entries, got {len(toks)}", no, "sgcore")
        row = []
        for tok in toks:
            try:
                v = int(tok)
            except ValueError:
                raise FormatError(f"bad entry {tok!r}", no, "sgcore") from None
            if not 0 <= v < n:
                raise FormatError(f"entry {v} out of range [0,{n})", no, "sgcore")
            row.append(v)
        rows.append(row)
    if len(rows) != n:
        raise FormatError(f"expected {n} rows, got {len(rows)}", None, "sgcore")
    return Semigroup(rows, labels)


def format_sg(S: Semigroup) -> str:
    out = [f"n {S.n}"]
    out.extend(" ".join(str(v) for v in row) for row in S.table)
    if S.labels is not None:
        out.append("labels " + " ".join(S.labels))
    return "\n".join(out) + "\n"


def parse_tgen(text: str) -> list[tuple[int, ...]]:
    maps = []
    degree = None
    for no, toks in _lines(text):
        try:
            fn = tuple(int(t) for t in toks)
        except ValueError:
            raise FormatError("map entries must be integers", no, "sgcore") from None
        if degree is None:
            degree = len(fn)
        elif len(fn) != degree:
            raise FormatError(f"map has {len(fn)} points, expected {degree}", no, "sgcore")
        if any(not 0 <= v < degree for v in fn):
            raise FormatError(f"image out of range [0,{degree})", no, "sgcore")
        maps.append(fn)
    if not maps:
        raise FormatError("no generators", None, "sgcore")
    return maps


def letter_name(k: int) -> str:
    return chr(ord("a") + k) if k < 26 else f"g{k}"


def compose_right(f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    """``x -> g(f(x))``: maps act on the right, ``f`` first."""
    return tuple(g[x] for x in f)


def transformation_semigroup(maps: list[tuple[int, ...]], cap: int = CLOSURE_CAP) -> Closure:
    """Closure of right-acting transformations; elements are labelled by
    their canonical generator words."""
    c = closure(maps, compose_right, cap)
    labels = ["".join(letter_name(k) for k in c.word(i)) for i in range(c.semigroup.n)]
    return Closure(
        c.semigroup.with_labels(labels), c.gen_indices, c.elements, c.parent, c.last, c.right
    )
