"""Filling candidates, their numerical invariants, and classification fixtures.

Each homology representation of the dual graph is a candidate filling.  Its
Euler characteristic and signature bound follow from counting handles:

    chi = M - m + 1,    |sigma| <= M - m + b_1(Y),

with ``M`` the blow-up count, ``m + 1`` the dual vertex count and ``b_1(Y)``
the free rank of H_1 of the boundary.

The family fixtures below recompute the expected candidate counts directly
from the statements of the known classification theorems.  They never call
the enumerator, so they serve as independent oracles.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable

from .dualgraph import DualGraph, NotDuallyPositive, build_dual
from .homology import (
    HomRep,
    IntersectionConfiguration,
    Uniqueness,
    configuration_of,
    enumerate_reps,
    uniqueness_guarantee,
)
from .plumbing import (
    SeifertData,
    StarGraph,
    homology_of_boundary,
    is_dually_positive,
    seifert_from_graph,
)

PLUMBING_CHI = "matches original plumbing χ"
BALL_CHI = "rational-homology-ball χ"


@dataclass(frozen=True)
class FillingCandidate:
    rep: HomRep
    M: int
    m_plus_1: int
    euler: int
    sigma_abs_bound: int
    b1_bound: int
    N: int
    configuration: IntersectionConfiguration
    uniqueness: Uniqueness
    annotation: str | None


def candidate_metrics(
    g: StarGraph, dg: DualGraph, rep: HomRep, b1: int | None = None
) -> FillingCandidate:
    if b1 is None:
        b1 = homology_of_boundary(g).free_rank
    M = rep.basis_size
    m_plus_1 = dg.vertex_count
    euler = M - m_plus_1 + 2
    sigma = M - (m_plus_1 - 1) + b1
    annotation = None
    if euler == 1 + g.vertex_count:
        annotation = PLUMBING_CHI
    elif euler == 1:
        annotation = BALL_CHI
    return FillingCandidate(
        rep=rep,
        M=M,
        m_plus_1=m_plus_1,
        euler=euler,
        sigma_abs_bound=sigma,
        b1_bound=b1,
        N=dg.basis_bound(),
        configuration=configuration_of(rep),
        uniqueness=uniqueness_guarantee(g, rep),
        annotation=annotation,
    )


@dataclass(frozen=True)
class FamilyVerdict:
    family: str
    expected_count: int
    expected_chi: tuple[int, ...]
    got_count: int
    got_chi: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.expected_count == self.got_count and self.expected_chi == self.got_chi


@dataclass
class CensusReport:
    graph: StarGraph
    seifert: SeifertData
    dual: DualGraph
    candidates: list[FillingCandidate]
    quotient: bool = True
    verdicts: list[FamilyVerdict] = field(default_factory=list)
    elapsed: float = 0.0

    def chi_values(self) -> tuple[int, ...]:
        return tuple(sorted((c.euler for c in self.candidates), reverse=True))


def build_census(g: StarGraph, quotient: bool = True, fixtures: bool = False) -> CensusReport:
    if not is_dually_positive(g):
        raise NotDuallyPositive(f"{g} is not dually positive")
    start = time.perf_counter()
    dg = build_dual(g)
    b1 = homology_of_boundary(g).free_rank
    reps = enumerate_reps(dg, quotient_by_graph_symmetry=quotient)
    cands = [candidate_metrics(g, dg, rep, b1) for rep in reps]
    cands.sort(key=lambda c: (-c.euler, c.rep.classes))
    report = CensusReport(g, seifert_from_graph(g), dg, cands, quotient)
    if fixtures:
        report.verdicts = match_known_family(g, report)
    report.elapsed = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# classification-derived expectations


def _all_minus_two(g: StarGraph) -> bool:
    return all(w == -2 for arm in g.arms for w in arm)


def _orbit_count(labeled: Iterable, arm_lengths: tuple, act) -> int:
    """Number of orbits of ``labeled`` objects under arm permutations preserving ``arm_lengths``."""
    k = len(arm_lengths)
    perms = [p for p in permutations(range(k)) if all(arm_lengths[p[i]] == arm_lengths[i] for i in range(k))]
    seen, orbits = set(), 0
    for obj in labeled:
        if obj in seen:
            continue
        orbits += 1
        for p in perms:
            seen.add(act(obj, p))
    return orbits


def _orbit_representatives(labeled: list, arms: tuple, act) -> list:
    k = len(arms)
    perms = [p for p in permutations(range(k)) if all(arms[p[i]] == arms[i] for i in range(k))]
    seen, reps = set(), []
    for obj in labeled:
        if obj in seen:
            continue
        reps.append(obj)
        for p in perms:
            seen.add(act(obj, p))
    return reps


def expected_two_fillings(g: StarGraph) -> tuple[int, tuple[int, ...]]:
    """Central -4 with three arms: the plumbing and the blow-down of the central sphere."""
    top = 1 + g.vertex_count
    return 2, (top, top - 1)


def expected_deep_center(g: StarGraph) -> tuple[int, tuple[int, ...]]:
    """e0 <= -k-3 with all-(-2) arms.

    Besides the plumbing, one may blow down the central sphere together with
    ``-e0-4`` spheres of square -2 in one arm; that needs an arm with at least
    that many vertices.  Arms of equal length give the same filling.
    """
    e0 = g.central_weight
    need = -e0 - 4
    top = 1 + g.vertex_count
    lengths = sorted({len(arm) for arm in g.arms if len(arm) >= need})
    chis = [top] + [top - (need + 1)] * len(lengths)
    return 1 + len(lengths), tuple(sorted(chis, reverse=True))


# configuration catalog for e0 = -k-1 with length-one dual arms: each entry is
# (multipoints, Euler-characteristic offset from sum(n), minimum n per line)
def _catalog_k4() -> list[tuple[frozenset, int, dict[int, int]]]:
    lines = range(4)
    out = [(frozenset(), -5, {j: 2 for j in lines})]
    for triple in combinations(lines, 3):
        (rest,) = set(lines) - set(triple)
        out.append((frozenset({frozenset(triple)}), -4, {rest: 2}))
    out.append((frozenset({frozenset(lines)}), -2, {}))
    return out


def _catalog_k5() -> list[tuple[frozenset, int, dict[int, int]]]:
    lines = range(5)
    out = [(frozenset(), -9, {j: 3 for j in lines})]
    for triple in combinations(lines, 3):
        need = {j: 2 for j in triple}
        need.update({j: 3 for j in set(lines) - set(triple)})
        out.append((frozenset({frozenset(triple)}), -8, need))
    for quad in combinations(lines, 4):
        (rest,) = set(lines) - set(quad)
        out.append((frozenset({frozenset(quad)}), -6, {rest: 3}))
    for shared in lines:
        others = [j for j in lines if j != shared]
        first = others[0]
        for mate in others[1:]:
            t1 = frozenset({shared, first, mate})
            t2 = frozenset({shared} | (set(others) - {first, mate}))
            out.append((frozenset({t1, t2}), -7, {j: 2 for j in others}))
    out.append((frozenset({frozenset(lines)}), -3, {}))
    return out


def line_catalog(n: tuple[int, ...]) -> list[tuple[frozenset, int]]:
    """Labeled multipoint patterns allowed for line degrees ``n`` (lines numbered from 1)."""
    k = len(n)
    catalog = {4: _catalog_k4, 5: _catalog_k5}[k]()
    out = []
    for points, offset, need in catalog:
        if all(n[j] >= lo for j, lo in need.items()):
            relabeled = frozenset(frozenset(j + 1 for j in pt) for pt in points)
            out.append((relabeled, sum(n) + offset))
    return out


def expected_line_family(n: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    labeled = line_catalog(n)

    def act(obj, perm):
        points, chi = obj
        return frozenset(frozenset(perm[j - 1] + 1 for j in pt) for pt in points), chi

    reps = _orbit_representatives(labeled, n, act)
    return len(reps), tuple(sorted((chi for _, chi in reps), reverse=True))


def w_parameters(g: StarGraph) -> tuple[int, int, int, tuple[int, ...]] | None:
    """Recognize W(p,q,r): central -4, arms [(-2)^q, -(p+3)], [(-2)^p, -(r+3)], [(-2)^r, -(q+3)].

    Returns (p, q, r, order) with ``order[i]`` the input arm playing role i.
    """
    if g.central_weight != -4 or g.k != 3:
        return None
    shapes = []
    for arm in g.arms:
        *twos, last = arm
        if any(w != -2 for w in twos) or last > -3:
            return None
        shapes.append((len(twos), -last - 3))
    for order in permutations(range(3)):
        (x1, y1), (x2, y2), (x3, y3) = (shapes[i] for i in order)
        p, q, r = y1, y3, y2
        if (x1, x2, x3) == (q, p, r):
            return p, q, r, order
    return None


def w_family_items(p: int, q: int, r: int) -> list[tuple[str, frozenset, int]]:
    """Labeled items of the W(p,q,r) classification: (kind, blown arms, spheres removed).

    Arm roles 0,1,2 carry the chains [-(p+3), (-2)^(p-1)], [-(r+3), (-2)^(r-1)],
    [-(q+3), (-2)^(q-1)] read from the outer end; chain i is available alone
    when its length is positive and fits in its arm (p-1 <= q, r-1 <= p,
    q-1 <= r), and together with the central sphere under the stronger
    p <= q, r <= p, q <= r.
    """
    chain = (p, r, q)
    room = (q, p, r)
    alone = [i for i in range(3) if chain[i] >= 1 and chain[i] - 1 <= room[i]]
    with_center = [i for i in range(3) if chain[i] >= 1 and chain[i] <= room[i]]
    items = []
    for size in range(4):
        for subset in combinations(alone, size):
            items.append(("arms", frozenset(subset), sum(chain[i] for i in subset)))
        for subset in combinations(with_center, size):
            items.append(("center+arms", frozenset(subset), 1 + sum(chain[i] for i in subset)))
    items.append(("entire", frozenset({0, 1, 2}), None))
    return items


def expected_w_family(g: StarGraph) -> tuple[int, tuple[int, ...]] | None:
    found = w_parameters(g)
    if found is None:
        return None
    p, q, r, order = found
    top = 1 + g.vertex_count
    arms_by_role = tuple(g.arms[i] for i in order)
    items = w_family_items(p, q, r)

    def act(item, perm):
        kind, subset, removed = item
        return kind, frozenset(perm[i] for i in subset), removed

    reps = _orbit_representatives(items, arms_by_role, act)
    chis = [1 if kind == "entire" else top - removed for kind, _, removed in reps]
    return len(reps), tuple(sorted(chis, reverse=True))


def match_known_family(g: StarGraph, report: CensusReport) -> list[FamilyVerdict]:
    """Compare a census against every classification theorem whose hypotheses ``g`` meets."""
    got_count = len(report.candidates)
    got_chi = report.chi_values()
    expectations: list[tuple[str, tuple[int, tuple[int, ...]]]] = []
    e0, k = g.central_weight, g.k
    if e0 == -4 and k == 3 and _all_minus_two(g):
        expectations.append(("central -4, three (-2)-chains", expected_two_fillings(g)))
    if e0 == -4 and k == 3 and all(len(arm) == 1 and arm[0] < -4 for arm in g.arms):
        expectations.append(("central -4, three single arms below -4", expected_two_fillings(g)))
    if e0 <= -k - 3 and _all_minus_two(g):
        expectations.append(("central <= -k-3, (-2)-chains", expected_deep_center(g)))
    if e0 == -4 and g.arms == ((-3,), (-3,), (-3,)):
        expectations.append(("(-4; [-3], [-3], [-3])", (3, (5, 4, 1))))
    if e0 == -k - 1 and k in (4, 5) and _all_minus_two(g) and report.quotient:
        n = tuple(len(arm) + 1 for arm in g.arms)
        expectations.append((f"central -k-1, (-2)-chains, k={k}", expected_line_family(n)))
    w = expected_w_family(g)
    if w is not None:
        p, q, r, _ = w_parameters(g)
        expectations.append((f"W({p},{q},{r})", w))
    return [
        FamilyVerdict(name, count, tuple(chi), got_count, got_chi)
        for name, (count, chi) in expectations
    ]
