"""Aperiodic witnesses for homomorphisms ``phi: A+ -> 2^S - {}``.

:func:`construct_witness` builds a finite aperiodic ``T``, a surjective
``psi: A+ -> T`` and the map ``P(t) = U phi(psi^-1 t)``, and checks that every
``P(t)`` lies in the saturation of the image ``U_phi``. Taking ``phi(a) =
{a}`` over a generating set yields a relational morphism certifying that the
aperiodic pointlikes of ``S`` are its Henckell saturation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Hashable, Mapping, Sequence

from .errors import PreconditionError, VerificationError
from .krd import minimal_generating_set
from .merge import MergeInput, build_merge
from .psat import (
    FAMILY_CAP,
    Saturation,
    SubsetFamily,
    UnionCheck,
    downward_closure,
    format_subset,
    henckell_pointlikes,
    power_semigroup,
    saturate_traced,
    subgroup_union_check,
)
from .sgcore.homs import FreeHom
from .sgcore.semigroup import (
    CLOSURE_CAP,
    Closure,
    Semigroup,
    closure,
    is_aperiodic,
    local_group,
    mask_elements,
    maximal_subgroup,
    minimal_ideal,
    opposite,
    popcount,
)

WORD_CAP = 100_000


@dataclass(frozen=True)
class PhiHom:
    """``phi: A+ -> 2^S`` given by nonempty subset masks on letters."""

    alphabet: tuple[Hashable, ...]
    host: Semigroup
    images: Mapping[Hashable, int] = field(hash=False)

    def __post_init__(self):
        if not self.alphabet:
            raise PreconditionError("alphabet must be nonempty", "witness")
        full = self.host.full_mask()
        for a in self.alphabet:
            X = self.images.get(a, 0)
            if X == 0 or X & ~full:
                raise PreconditionError(f"image of {a!r} must be a nonempty subset", "witness")

    def __call__(self, word: Sequence[Hashable]) -> int:
        ps = power_semigroup(self.host)
        acc = self.images[word[0]]
        for a in word[1:]:
            acc = ps.mul(acc, self.images[a])
        return acc

    def restrict(self, letters: Sequence[Hashable]) -> "PhiHom":
        return PhiHom(tuple(letters), self.host, {a: self.images[a] for a in letters})

    def opposite(self) -> "PhiHom":
        return PhiHom(self.alphabet, opposite(self.host), dict(self.images))

    @property
    def U(self) -> Closure:
        """``U_phi`` as a closure whose elements are subset masks."""
        c = self.__dict__.get("_U")
        if c is None:
            ps = power_semigroup(self.host)
            c = closure([self.images[a] for a in self.alphabet], ps.mul, CLOSURE_CAP)
            object.__setattr__(self, "_U", c)
        return c

    @property
    def S_phi(self) -> int:
        u = 0
        for X in self.U.elements:
            u |= X
        return u

    @property
    def image_count(self) -> int:
        return len({self.images[a] for a in self.alphabet})

    def measure(self) -> tuple[int, int]:
        return popcount(self.S_phi), self.image_count


def k_value(image_count: int, s_size: int) -> int:
    return (image_count - 1) * 2 ** comb(s_size, 2) + 2**s_size - 1


def k_bound(phi: PhiHom) -> int:
    """The induction bound ``(|phi(A)|-1) 2^C(|S_phi|,2) + 2^|S_phi| - 1``."""
    return k_value(phi.image_count, popcount(phi.S_phi))


def k_statement(n_letters: int, s_size: int) -> int:
    """The variant with ``2^|A|`` in the last term."""
    return (n_letters - 1) * 2 ** comb(s_size, 2) + 2**n_letters - 1


def preimage_union_map(psi: FreeHom, phi: PhiHom, cap: int = CLOSURE_CAP) -> tuple[int, ...]:
    """``P(t) = U phi(psi^-1 t)`` from the closure of ``{(psi(a), phi(a))}``
    in ``T x 2^S``."""
    if tuple(psi.alphabet) != tuple(phi.alphabet) and set(psi.alphabet) != set(phi.alphabet):
        raise PreconditionError("psi and phi must share the alphabet", "witness")
    T = psi.cod
    ps = power_semigroup(phi.host)
    tt = T.table

    def prod(x, y):
        return tt[x[0]][y[0]], ps.mul(x[1], y[1])

    c = closure([(psi.gen_map[a], phi.images[a]) for a in phi.alphabet], prod, cap)
    P = [0] * T.n
    for t, X in c.elements:
        P[t] |= X
    return tuple(P)


# -- results ------------------------------------------------------------------


@dataclass(frozen=True)
class LocalGroupCheck:
    """Case 1 evidence: ``e`` idempotent in the minimal ideal of ``U_phi``
    and the union of the local group ``eU_phie`` equals ``S_phi``."""

    e: int
    word: tuple
    group: tuple[int, ...]
    check: UnionCheck

    @property
    def ok(self) -> bool:
        u = 0
        for X in self.group:
            u |= X
        return self.check.ok and u == self.check.union


@dataclass(frozen=True)
class WitnessResult:
    phi: PhiHom
    T: Semigroup
    psi: FreeHom
    depth: int
    P: tuple[int, ...]
    case: str  # "case1", "case2", "case3", "dual"
    children: tuple["WitnessResult", ...] = ()  # case3: (psi1, psi2, chi); dual: (child,)
    split: tuple = ()  # case3: (a0, A1, A2)
    phi0: PhiHom | None = None
    bound_ok: bool | None = None
    local_group: LocalGroupCheck | None = None
    union_checks: tuple[UnionCheck, ...] = ()
    words_checked: int = 0

    @property
    def k(self) -> int:
        return k_bound(self.phi)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class RelMorphism:
    """Relational morphism ``S -|-> T`` given by its fibers ``rho^-1(t)``."""

    S: Semigroup
    T: Semigroup
    fibers: tuple[int, ...]

    def failure(self) -> str | None:
        cover = 0
        for F in self.fibers:
            cover |= F
        if cover != self.S.full_mask():
            return "not full: some element lies in no fiber"
        ps = power_semigroup(self.S)
        tt = self.T.table
        for t in range(self.T.n):
            for u in range(self.T.n):
                if ps.mul(self.fibers[t], self.fibers[u]) & ~self.fibers[tt[t][u]]:
                    return f"not multiplicative at ({t},{u})"
        return None

    @property
    def ok(self) -> bool:
        return self.failure() is None


# -- case analysis ------------------------------------------------------------


def case_split(phi: PhiHom) -> tuple:
    """``("case1",)``, ``("case2",)`` or ``("case3", a0, side)``."""
    ps = power_semigroup(phi.host)
    Sp = phi.S_phi
    left = [a for a in phi.alphabet if ps.mul(phi.images[a], Sp) != Sp]
    right = [a for a in phi.alphabet if ps.mul(Sp, phi.images[a]) != Sp]
    if not left and not right:
        return ("case1",)
    if phi.image_count == 1:
        return ("case2",)
    if left:
        return ("case3", left[0], "left")
    return ("case3", right[0], "right")


def _sat(phi: PhiHom) -> Saturation:
    return saturate_traced(SubsetFamily(phi.host, frozenset(phi.U.elements)), FAMILY_CAP)


def _union_checks(phi: PhiHom) -> tuple[UnionCheck, ...]:
    """Run the subgroup-union check on every maximal subgroup of ``U_phi``."""
    U = phi.U
    out = []
    for E in U.semigroup.idempotents():
        _, emb = maximal_subgroup(U.semigroup, E)
        out.append(subgroup_union_check(phi.host, [U.elements[i] for i in emb]))
    return tuple(out)


def _local_group_check(phi: PhiHom) -> LocalGroupCheck:
    U = phi.U
    Us = U.semigroup
    ideal = minimal_ideal(Us)
    e = next(i for i in ideal.elements() if Us.is_idempotent(i))
    _, emb = local_group(Us, e)
    group = tuple(U.elements[i] for i in emb)
    word = tuple(phi.alphabet[p] for p in U.word(e))
    return LocalGroupCheck(U.elements[e], word, group, subgroup_union_check(phi.host, group))


def _trivial() -> Semigroup:
    return Semigroup([[0]], ["1"])


def aperiodic_cyclic(m: int) -> Semigroup:
    """``<x | x^m = x^(m+1)>``; index ``i`` holds ``x^(i+1)``."""
    return Semigroup([[min(i + j + 1, m - 1) for j in range(m)] for i in range(m)], ["x" if i == 0 else f"x{i + 1}" for i in range(m)])


def bound_check_phi0(phi: PhiHom, phi0: PhiHom, phi1: PhiHom | None = None, phi2: PhiHom | None = None) -> bool:
    """``k(phi0) <= 2^C(m,2) - 1`` for ``m = |S_phi|`` and
    ``k(phi0) + max(k(phi1), k(phi2)) + 1 <= k(phi)``."""
    if phi1 is None or phi2 is None:
        tag = case_split(phi)
        if tag[0] != "case3":
            raise PreconditionError("phi is not in case 3", "witness")
        A1, A2 = _split(phi, tag[1])
        phi1, phi2 = phi.restrict(A1), phi.restrict(A2)
    m = popcount(phi.S_phi)
    k0 = k_bound(phi0)
    return k0 <= 2 ** comb(m, 2) - 1 and k0 + max(k_bound(phi1), k_bound(phi2)) + 1 <= k_bound(phi)


def _split(phi: PhiHom, a0) -> tuple[tuple, tuple]:
    X = phi.images[a0]
    A1 = tuple(a for a in phi.alphabet if phi.images[a] == X)
    A2 = tuple(a for a in phi.alphabet if phi.images[a] != X)
    return A1, A2


def construct_witness(phi: PhiHom, L: int = 6, cap: int = CLOSURE_CAP, _parent: tuple[int, int] | None = None) -> WitnessResult:
    measure = phi.measure()
    if _parent is not None and not measure < _parent:
        raise VerificationError(f"recursion measure did not decrease: {measure} !< {_parent}", "witness")
    tag = case_split(phi)
    checks = _union_checks(phi)
    if tag[0] == "case1":
        T = _trivial()
        psi = FreeHom(phi.alphabet, T, {a: 0 for a in phi.alphabet})
        lg = _local_group_check(phi)
        if not lg.ok:
            raise VerificationError("local group union differs from S_phi", "witness")
        res = WitnessResult(phi, T, psi, 1, (phi.S_phi,), "case1", local_group=lg, union_checks=checks)
    elif tag[0] == "case2":
        ps = power_semigroup(phi.host)
        X = phi.images[phi.alphabet[0]]
        m, cur = 1, X
        while ps.mul(cur, cur) != cur:
            m += 1
            cur = ps.mul(cur, X)
        T = aperiodic_cyclic(m)
        psi = FreeHom(phi.alphabet, T, {a: 0 for a in phi.alphabet})
        P = preimage_union_map(psi, phi, cap)
        want = tuple(ps.power(X, i + 1) for i in range(m - 1)) + (ps.omega_star(X),)
        if P != want:
            raise VerificationError("cyclic fibers differ from the powers of the image", "witness")
        res = WitnessResult(phi, T, psi, m, P, "case2", union_checks=checks)
    elif tag[2] == "right":
        child = construct_witness(phi.opposite(), L, cap, _parent)
        T = opposite(child.T)
        psi = FreeHom(phi.alphabet, T, dict(child.psi.gen_map))
        res = WitnessResult(phi, T, psi, child.depth, child.P, "dual", (child,), union_checks=checks)
    else:
        a0 = tag[1]
        A1, A2 = _split(phi, a0)
        phi1, phi2 = phi.restrict(A1), phi.restrict(A2)
        r1 = construct_witness(phi1, L, cap, measure)
        r2 = construct_witness(phi2, L, cap, measure)
        ps = power_semigroup(phi.host)
        pairs = tuple((i, j) for i in range(r1.T.n) for j in range(r2.T.n))
        phi0 = PhiHom(pairs, phi.host, {(i, j): ps.mul(r1.P[i], r2.P[j]) for i, j in pairs})
        if phi0.S_phi & ~ps.mul(phi.images[a0], phi.S_phi):
            raise VerificationError("S_phi0 is not inside phi(a0) S_phi", "witness")
        r0 = construct_witness(phi0, L, cap, measure)
        md = build_merge(MergeInput(A1, A2, r1.psi, r2.psi, r0.psi), cap)
        T = md.semigroup
        psi = FreeHom(phi.alphabet, T, dict(md.psi_M.gen_map))
        depth = r0.depth + max(r1.depth, r2.depth) + 1
        P = preimage_union_map(psi, phi, cap)
        res = WitnessResult(
            phi, T, psi, depth, P, "case3", (r1, r2, r0), (a0, A1, A2), phi0,
            bound_check_phi0(phi, phi0, phi1, phi2), union_checks=checks,
        )
    problems, n = witness_failures(res, L)
    if problems:
        raise VerificationError(f"{res.case} witness invalid: {'; '.join(problems)}", "witness")
    return WitnessResult(**{**res.__dict__, "words_checked": n})


def _word_limit(k: int, L: int, cap: int) -> int:
    total, out = 0, 0
    for n in range(1, L + 1):
        total += k**n
        if total > cap:
            break
        out = n
    return max(out, 1)


def witness_failures(res: WitnessResult, L: int = 6, word_cap: int = WORD_CAP) -> tuple[list[str], int]:
    """Independent re-check of a witness. Words are enumerated exhaustively
    up to length ``L``, shortened if the count would exceed ``word_cap``."""
    phi, T, psi = res.phi, res.T, res.psi
    out = []
    if not is_aperiodic(T):
        out.append("T is not aperiodic")
    if res.depth > k_bound(phi):
        out.append(f"depth {res.depth} exceeds k = {k_bound(phi)}")
    if not psi.is_surjective():
        out.append("psi is not surjective")
    if len(res.P) != T.n or any(X == 0 for X in res.P):
        out.append("P is not a map to nonempty subsets")
    sat = _sat(phi)
    if not sat.replay(phi.U.elements):
        out.append("saturation derivation does not replay")
    for t, X in enumerate(res.P):
        if X not in sat.family.members:
            out.append(f"P({T.label(t)}) = {format_subset(phi.host, X)} is not in Sat(U_phi)")
    if res.P != preimage_union_map(psi, phi):
        out.append("P differs from the preimage union")
    ps = power_semigroup(phi.host)
    letters = phi.alphabet
    Lw = _word_limit(len(letters), L, word_cap)
    tt = T.table
    stack = [(1, psi.gen_map[a], phi.images[a]) for a in letters]
    n = 0
    while stack:
        ln, t, X = stack.pop()
        n += 1
        if X & ~res.P[t]:
            out.append(f"P(psi(w)) misses phi(w) for a word of length {ln}")
            break
        if ln < Lw:
            for a in letters:
                stack.append((ln + 1, tt[t][psi.gen_map[a]], ps.mul(X, phi.images[a])))
    if res.case == "case3" and not res.bound_ok:
        out.append("k(phi0) bound chain fails")
    for c in res.union_checks:
        if not c.ok:
            out.append("subgroup union check fails")
    return out, n


# -- pointlikes -----------------------------------------------------------------


@dataclass(frozen=True)
class PointlikeCertificate:
    family: SubsetFamily
    rho: RelMorphism
    witness: WitnessResult
    checks: dict = field(hash=False)
    k: int = 0
    k_statement: int = 0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def generator_phi(S: Semigroup) -> PhiHom:
    A = minimal_generating_set(S)
    return PhiHom(tuple(A), S, {a: 1 << a for a in A})


def pointlikes_with_certificate(S: Semigroup, L: int = 6, cap: int = CLOSURE_CAP) -> PointlikeCertificate:
    phi = generator_phi(S)
    res = construct_witness(phi, L, cap)
    rho = RelMorphism(S, res.T, res.P)
    sat = henckell_pointlikes(S)
    fibers = SubsetFamily(S, frozenset(res.P))
    certified = downward_closure(fibers)
    k = k_bound(phi)
    checks = {
        "relational morphism": rho.ok,
        "fibers pointlike": all(F in sat.members for F in res.P),
        "maximal sets covered": all(any(X & ~F == 0 for F in res.P) for X in sat.maximal()),
        "depth bound": res.depth <= k,
        "families agree": certified.members == sat.members,
    }
    return PointlikeCertificate(sat, rho, res, checks, k, k_statement(len(phi.alphabet), S.n))


def format_witness(res: WitnessResult, indent: int = 0) -> str:
    """One line per recursion node."""
    pad = "  " * indent
    phi = res.phi
    head = f"{pad}({res.case} |T|={res.T.n} depth={res.depth} k={res.k} |S_phi|={popcount(phi.S_phi)} |phi(A)|={phi.image_count}"
    if res.case == "case3":
        head += f" a0={res.split[0]!r} bound={'ok' if res.bound_ok else 'FAIL'}"
    if res.local_group is not None:
        head += f" local_group={'ok' if res.local_group.ok else 'FAIL'}"
    lines = [head + (")" if not res.children else "")]
    for c in res.children:
        lines.append(format_witness(c, indent + 1).rstrip("\n"))
    if res.children:
        lines[-1] += ")"
    return "\n".join(lines) + "\n"
