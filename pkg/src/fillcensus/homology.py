"""Homology representations of dual-graph spheres in a blown-up projective plane.

A representation assigns each dual vertex a class ``a0*l + sum a_i e_i`` with
``l.l = 1``, ``e_i.e_i = -1``.  The center is ``l``.  The adjunction formula
pins the coefficient shapes:

* a vertex of weight ``-n`` adjacent to the center is ``l`` minus ``n+1``
  distinct ``e_i``;
* a deeper vertex of weight ``-n`` is ``e_a`` minus ``n-1`` other ``e_i``.

Pairwise products must reproduce the graph's adjacency.  Enumeration is a
depth-first search that creates basis columns on demand and branches only on
how many columns to take from each class of currently identical columns,
which removes most relabeling symmetry before the final canonical dedupe.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dualgraph import DualGraph
from .plumbing import StarGraph


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class HomRep:
    """``classes[v]`` is the coefficient vector (l, e_1, ..., e_M) of dual vertex ``v``."""

    basis_size: int
    classes: tuple[tuple[int, ...], ...]

    def dot(self, u: int, v: int) -> int:
        return pair(self.classes[u], self.classes[v])

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[c] for row in self.classes) for c in range(1, self.basis_size + 1)]


def pair(a: Sequence[int], b: Sequence[int]) -> int:
    """Intersection pairing on H_2 of CP^2 # M (-CP^2)."""
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


@dataclass(frozen=True)
class RepCheck:
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def vertex_shape(dg: DualGraph, v: int) -> tuple[int, int, int]:
    """(l-coefficient, number of -1 entries, number of +1 entries) forced on vertex ``v``."""
    if v == 0:
        return 1, 0, 0
    n = -dg.weights()[v]
    if v in dg.center_adjacent():
        return 1, n + 1, 0
    return 0, n - 1, 1


def check_rep(dg: DualGraph, rep: HomRep) -> RepCheck:
    nv = dg.vertex_count
    if len(rep.classes) != nv:
        raise DimensionMismatch(f"{len(rep.classes)} classes for {nv} vertices")
    if any(len(row) != rep.basis_size + 1 for row in rep.classes):
        raise DimensionMismatch("class vectors must have length basis_size + 1")
    bad: list[str] = []
    weights = dg.weights()
    adj = dg.adjacency()
    for v, row in enumerate(rep.classes):
        a0, minus, plus = vertex_shape(dg, v)
        es = row[1:]
        if row[0] != a0:
            bad.append(f"vertex {v}: l-coefficient {row[0]}, expected {a0}")
        if sum(1 for x in es if x == -1) != minus or sum(1 for x in es if x == 1) != plus:
            bad.append(f"vertex {v}: coefficient pattern does not match weight {weights[v]}")
        if any(x not in (-1, 0, 1) for x in es):
            bad.append(f"vertex {v}: coefficient outside {{-1, 0, 1}}")
        if pair(row, row) != weights[v]:
            bad.append(f"vertex {v}: square {pair(row, row)} != weight {weights[v]}")
        if 3 * row[0] + sum(es) != weights[v] + 2:
            bad.append(f"vertex {v}: adjunction fails")
    for u in range(nv):
        for v in range(u + 1, nv):
            want = 1 if v in adj[u] else 0
            got = pair(rep.classes[u], rep.classes[v])
            if got != want:
                bad.append(f"vertices {u},{v}: product {got}, expected {want}")
    for c in range(1, rep.basis_size + 1):
        if all(row[c] == 0 for row in rep.classes):
            bad.append(f"basis element e_{c} is unused")
    return RepCheck(not bad, tuple(bad))


def _row_major_key(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in rows)


def canonical_form(rep: HomRep, auts: Iterable[Sequence[int]] = ()) -> HomRep:
    """Lexicographically least row-major matrix over column permutations and ``auts``.

    For a fixed row order the least arrangement is the one with columns sorted
    ascending, so only the vertex relabelings need to be enumerated.
    """
    perms = [tuple(p) for p in auts] or [tuple(range(len(rep.classes)))]
    best = None
    for perm in perms:
        rows: list = [None] * len(rep.classes)
        for v, image in enumerate(perm):
            rows[image] = rep.classes[v]
        cols = sorted(zip(*(row[1:] for row in rows))) if rep.basis_size else []
        es = [tuple(col[r] for col in cols) for r in range(len(rows))]
        cand = tuple((rows[r][0],) + es[r] for r in range(len(rows)))
        if best is None or cand < best:
            best = cand
    return HomRep(rep.basis_size, best)


def _vertex_order(dg: DualGraph) -> list[int]:
    ids = dg.arm_vertex_ids()
    order = [arm[0] for arm in ids]
    for arm in ids:
        order.extend(arm[1:])
    return order


def enumerate_reps(dg: DualGraph, quotient_by_graph_symmetry: bool = False) -> list[HomRep]:
    """Every representation of ``dg`` up to relabeling (and automorphisms if asked), sorted."""
    if dg.central_weight != 1:
        return []
    weights = dg.weights()
    adj = dg.adjacency()
    order = [0] + _vertex_order(dg)
    position = {v: i for i, v in enumerate(order)}
    shapes = [vertex_shape(dg, v) for v in order]
    bound = dg.basis_bound()
    if any(-w < 1 for w in weights[1:]) or any(m < 0 for _, m, _ in shapes):
        return []
    auts = list(dg.automorphisms()) if quotient_by_graph_symmetry else []
    found: set[HomRep] = set()
    nv = len(order)

    def finish(columns: list[tuple[int, ...]]) -> None:
        classes = []
        for v in range(nv):
            p = position[v]
            classes.append((shapes[p][0],) + tuple(col[p] for col in columns))
        found.add(canonical_form(HomRep(len(columns), tuple(classes)), auts))

    def place(idx: int, columns: list[tuple[int, ...]]) -> None:
        if idx == nv:
            finish(columns)
            return
        v = order[idx]
        a0, n_minus, n_plus = shapes[idx]
        # required value of sum_c v_c * col_c[p] for each earlier vertex p
        need = []
        for p in range(1, idx):
            u = order[p]
            target = 1 if u in adj[v] else 0
            need.append(a0 * shapes[p][0] - target)
        groups: dict[tuple[int, ...], list[int]] = {}
        for c, col in enumerate(columns):
            groups.setdefault(col, []).append(c)
        classes = [(vec, members) for vec, members in groups.items()]
        width = idx - 1
        # suffix bounds on class vectors (restricted to positions 1..idx-1)
        hi = [[0] * width for _ in range(len(classes) + 1)]
        lo = [[0] * width for _ in range(len(classes) + 1)]
        for ci in range(len(classes) - 1, -1, -1):
            vec = classes[ci][0]
            for q in range(width):
                x = vec[q + 1]
                hi[ci][q] = max(hi[ci + 1][q], x)
                lo[ci][q] = min(lo[ci + 1][q], x)

        chosen: list[tuple[int, int]] = []

        def choose(ci: int, rem_minus: int, rem_plus: int, acc: list[int]) -> None:
            for q in range(width):
                gap = need[q] - acc[q]
                top = rem_minus * max(0, -lo[ci][q]) + rem_plus * max(0, hi[ci][q])
                bottom = rem_minus * min(0, -hi[ci][q]) + rem_plus * min(0, lo[ci][q])
                if gap > top or gap < bottom:
                    return
            if ci == len(classes):
                if any(need[q] != acc[q] for q in range(width)):
                    return
                fresh = rem_minus + rem_plus
                if len(columns) + fresh > bound:
                    return
                extend(chosen, rem_minus, rem_plus)
                return
            vec, members = classes[ci]
            size = len(members)
            for plus in range(min(rem_plus, size) + 1):
                for minus in range(min(rem_minus, size - plus) + 1):
                    delta = plus - minus
                    nxt = [acc[q] + delta * vec[q + 1] for q in range(width)] if delta else acc
                    chosen.append((minus, plus))
                    choose(ci + 1, rem_minus - minus, rem_plus - plus, nxt)
                    chosen.pop()

        def extend(picks: list[tuple[int, int]], fresh_minus: int, fresh_plus: int) -> None:
            new_cols = list(columns)
            for (vec, members), (minus, plus) in zip(classes, picks):
                for i, c in enumerate(members):
                    if i < plus:
                        coef = 1
                    elif i < plus + minus:
                        coef = -1
                    else:
                        coef = 0
                    new_cols[c] = columns[c] + (coef,)
            zero = (0,) * idx
            new_cols.extend([zero + (1,)] * fresh_plus)
            new_cols.extend([zero + (-1,)] * fresh_minus)
            place(idx + 1, new_cols)

        choose(0, n_minus, n_plus, [0] * width)

    place(1, [])
    return sorted(found, key=lambda r: r.classes)


@dataclass(frozen=True)
class IntersectionConfiguration:
    line_count: int
    multipoints: tuple[tuple[int, ...], ...]
    name: str | None = None


def configuration_of(rep: HomRep) -> IntersectionConfiguration:
    """Multipoints among the lines obtained by blowing the dual graph down.

    Lines are the center-adjacent classes (l-coefficient 1), numbered in vertex
    order; line 0 is the center itself.
    """
    lines = [v for v in range(1, len(rep.classes)) if rep.classes[v][0] == 1]
    d = len(lines)
    points = set()
    for c in range(1, rep.basis_size + 1):
        through = tuple(j + 1 for j, v in enumerate(lines) if rep.classes[v][c] == -1)
        if len(through) >= 3:
            points.add(through)
    multipoints = tuple(sorted(points))
    name = None
    if d >= 3 and multipoints == (tuple(range(1, d + 1)),):
        name = f"I_1^{d}"
    elif d >= 4 and len(multipoints) == 1 and len(multipoints[0]) == d - 1:
        name = f"I_2^{d}"
    return IntersectionConfiguration(d + 1, multipoints, name)


class Uniqueness(str, enum.Enum):
    GUARANTEED = "Guaranteed"
    UPPER_BOUND_ONLY = "UpperBoundOnly"


def uniqueness_guarantee(g: StarGraph, rep: HomRep | None = None) -> Uniqueness:
    """Whether each representation determines at most one filling up to diffeomorphism."""
    if g.k in (3, 4, 5) or g.central_weight <= -g.k - 3:
        return Uniqueness.GUARANTEED
    return Uniqueness.UPPER_BOUND_ONLY
