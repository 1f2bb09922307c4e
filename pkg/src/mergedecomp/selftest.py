"""The fixture-corpus acceptance suite.

Each criterion returns a pass flag and a short deterministic summary. Time
limits count toward the pass flag but elapsed times are never printed, so
two runs produce identical reports.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import corpus as _corpus
from .errors import MergeDecompError
from .krd import GROUP, kr_decompose, verify_tree
from .langsep import decide_fo_separability, fixture_dfa
from .merge import division_from_cover, lz2_input, random_merge_input, u1_input, verify_merge
from .psat import SubsetFamily, henckell_pointlikes
from .sgcore.constructions import flat_division, flat_embed, subset_actions, triple_product, zero_adjunction_witness
from .sgcore.homs import SgHom
from .sgcore.semigroup import Semigroup, generated_mask, is_aperiodic, mask_elements
from .witness import PhiHom, k_bound, k_value, pointlikes_with_certificate

RANDOM_MERGE_INPUTS = 50
RANDOM_SEED = 0


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number}. {self.title}: {self.detail}"


def _within(limit: float, t0: float) -> bool:
    return time.perf_counter() - t0 < limit


def proper_subsemigroups(S: Semigroup) -> list[int]:
    """Masks of the proper subsemigroups, by increasing mask."""
    full = S.full_mask()
    out = []
    for m in range(1, full):
        els = [x for x in range(S.n) if m >> x & 1]
        if all(m >> S.table[a][b] & 1 for a in els for b in els):
            out.append(m)
    return out


def cover_pairs(S: Semigroup) -> list[tuple[int, int]]:
    """Ordered pairs of proper subsemigroups whose union generates ``S``."""
    subs = proper_subsemigroups(S)
    full = S.full_mask()
    return [(a, b) for a in subs for b in subs if generated_mask(S, mask_elements(a | b)) == full]


class Suite:
    def __init__(self):
        self.corpus = _corpus.corpus()
        self._pl: dict[str, object] = {}

    def pointlikes(self, name: str, S: Semigroup):
        if name not in self._pl:
            self._pl[name] = pointlikes_with_certificate(S)
        return self._pl[name]

    # 1
    def merge_words(self) -> tuple[bool, str]:
        t0 = time.perf_counter()
        rng = random.Random(RANDOM_SEED)
        randoms = [random_merge_input(rng, 3, 2) for _ in range(RANDOM_MERGE_INPUTS)]
        if any(max(inp.T1.n, inp.T2.n, inp.T0.n) > 3 for inp in randoms):
            return False, "a random input exceeds size 3"
        inputs = [lz2_input(), u1_input()] + randoms
        words = bad = 0
        for inp in inputs:
            rep = verify_merge(inp, 6)
            words += rep.words_checked
            bad += len(rep.counterexamples)
        return bad == 0 and _within(30, t0), f"{len(inputs)} inputs, {words} words, {bad} counterexamples"

    # 2
    def cover_divisions(self) -> tuple[bool, str]:
        t0 = time.perf_counter()
        pairs = fails = 0
        for name, S in self.corpus:
            if S.n > 4:
                continue
            for a, b in cover_pairs(S):
                pairs += 1
                d = division_from_cover(S, mask_elements(a), mask_elements(b))
                if not d.division.check():
                    fails += 1
        return fails == 0 and _within(60, t0), f"{pairs} covers, {fails} failures"

    # 3
    def decompositions(self) -> tuple[bool, str]:
        t0 = time.perf_counter()
        ok = True
        nodes = 0
        z4 = None
        for name, S in self.corpus:
            t = kr_decompose(S)
            rep = verify_tree(t)
            nodes += len(rep.nodes)
            ok &= rep.ok
            groups = [leaf for leaf in t.leaves() if leaf.kind == GROUP]
            if is_aperiodic(S):
                ok &= not groups
            if name == "Z4":
                z4 = sorted(g.target.n for g in groups)
        ok &= z4 == [2, 2]
        return ok and _within(60, t0), f"{len(self.corpus)} semigroups, {nodes} nodes verified, Z4 group leaves {z4}"

    # 4
    def pointlike_equality(self) -> tuple[bool, str]:
        t0 = time.perf_counter()
        ok = True
        sizes = []
        for name, S in self.corpus:
            c = self.pointlikes(name, S)
            ok &= c.ok and c.family.members == henckell_pointlikes(S).members
            if is_aperiodic(S):
                ok &= c.family.members == SubsetFamily.singletons(S).members
            if S.is_group():
                ok &= c.family.members == SubsetFamily.all_nonempty(S).members
            sizes.append(f"{name}={len(c.family)}")
        return ok and _within(120, t0), "families " + " ".join(sizes)

    # 5
    def depth_bounds(self) -> tuple[bool, str]:
        ok = True
        nodes = case3 = 0
        for name, S in self.corpus:
            for r in self.pointlikes(name, S).witness.walk():
                nodes += 1
                ok &= r.depth <= k_bound(r.phi)
                if r.case == "case3":
                    case3 += 1
                    ok &= bool(r.bound_ok)
        Z3 = _corpus.get("Z3")
        phi = PhiHom(("a", "b"), Z3, {"a": 1 << 0, "b": 1 << 1})
        k = k_bound(phi)
        ok &= k == 15 == k_value(2, 3)
        return ok, f"{nodes} witness nodes within k, {case3} case-3 bound checks, k(|A|=2,|S|=3)={k}"

    # 6
    def subgroup_unions(self) -> tuple[bool, str]:
        ok = True
        checks = 0
        nontrivial: dict[str, int] = {}
        for name, S in self.corpus:
            for r in self.pointlikes(name, S).witness.walk():
                for c in r.union_checks:
                    checks += 1
                    ok &= c.ok
                    if c.order > 1:
                        nontrivial[name] = nontrivial.get(name, 0) + 1
                if r.local_group is not None:
                    ok &= r.local_group.ok
        for need in ("Z2", "Z3", "Z4"):
            ok &= nontrivial.get(need, 0) > 0
        found = " ".join(f"{k}={v}" for k, v in nontrivial.items())
        return ok, f"{checks} subgroups checked; nontrivial: {found}"

    # 7
    def small_facts(self) -> tuple[bool, str]:
        ok = True
        count = 0
        for name, S in self.corpus:
            z = zero_adjunction_witness(S)
            ok &= z.hom_failure() is None and z.is_surjective()
            M = _corpus.chain(S.n + 1)
            h = flat_embed(S, M)
            ok &= h.hom_failure() is None and h.is_injective()
            ok &= bool(flat_division(S, M, h=h).check())
            acts = subset_actions(S)
            T = triple_product(acts)
            nc, nl = acts.carrier.n, S.n
            right = SgHom(T, S, tuple(i // (nc * nl) for i in range(T.n)))
            left = SgHom(T, S, tuple(i % nl for i in range(T.n)))
            ok &= T.n == S.n * nc * S.n
            ok &= right.hom_failure() is None and left.hom_failure() is None
            count += 1
        return ok, f"{count} semigroups: zero adjunction, flat embedding, triple product"

    # 8
    def separation(self) -> tuple[bool, str]:
        out = []
        ok = True
        for a, b, want in (("even_a", "odd_a", False), ("a_first", "b_first", True)):
            t0 = time.perf_counter()
            v = decide_fo_separability(fixture_dfa(a), fixture_dfa(b))
            ok &= v.separable == want and _within(5, t0)
            if not want:
                ok &= v.pair is not None and v.pair[0] != v.pair[1]
            out.append(f"{a}/{b} {v.format()}")
        return ok, "; ".join(out)


CRITERIA: tuple[tuple[int, str, str], ...] = (
    (1, "merge words", "merge_words"),
    (2, "cover divisions", "cover_divisions"),
    (3, "decomposition", "decompositions"),
    (4, "pointlike equality", "pointlike_equality"),
    (5, "depth bound", "depth_bounds"),
    (6, "subgroup unions", "subgroup_unions"),
    (7, "small constructions", "small_facts"),
    (8, "separation", "separation"),
)


def run_selftest(only: set[int] | None = None, progress: Callable[[CriterionResult], None] | None = None) -> list[CriterionResult]:
    suite = Suite()
    results = []
    for number, title, method in CRITERIA:
        if only is not None and number not in only:
            continue
        try:
            ok, detail = getattr(suite, method)()
        except MergeDecompError as exc:
            ok, detail = False, f"error {exc}"
        res = CriterionResult(number, title, bool(ok), detail)
        results.append(res)
        if progress is not None:
            progress(res)
    return results


def format_report(results: list[CriterionResult]) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
