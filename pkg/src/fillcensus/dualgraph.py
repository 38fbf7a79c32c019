"""Dual graphs of dually positive star plumbings via blow-up bookkeeping.

The ambient starts as the sphere bundle of degree -1 over a sphere with its
zero section (-1), infinity section (+1) and ``d = -e0 - 1`` fibers (0).
Blowing up along fibers splits each fiber into a chain

    zero section - graph arm - cut curve (-1) - dual arm reversed - infinity section

so that the zero side realizes the input graph and the infinity side is the
dual graph.  Every step is logged and can be replayed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Iterator

from .plumbing import StarGraph, is_dually_positive

ZERO_SECTION = "zero_section"
INFINITY_SECTION = "infinity_section"


class NoSuchIntersection(ValueError):
    """The listed curves do not share an available intersection point."""


class NotDuallyPositive(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    id: int
    self_intersection: int
    tag: str


@dataclass(frozen=True)
class CurveConfig:
    """Curves, their intersection points and the log of blow-ups performed.

    Points are stored explicitly as sets of curve ids so a triple point is
    never confused with three double points.
    """

    curves: tuple[Curve, ...]
    points: tuple[frozenset[int], ...]
    blowup_log: tuple[frozenset[int], ...] = ()

    @classmethod
    def initial(cls, d: int) -> "CurveConfig":
        curves = [Curve(0, -1, ZERO_SECTION), Curve(1, 1, INFINITY_SECTION)]
        points = []
        for j in range(1, d + 1):
            curves.append(Curve(1 + j, 0, f"fiber({j})"))
            points.append(frozenset({0, 1 + j}))
            points.append(frozenset({1, 1 + j}))
        return cls(tuple(curves), tuple(points))

    @property
    def incidences(self) -> Counter:
        """Multiset of unordered curve pairs, one entry per geometric intersection."""
        out: Counter = Counter()
        for pt in self.points:
            ids = sorted(pt)
            for i, a in enumerate(ids):
                for b in ids[i + 1:]:
                    out[(a, b)] += 1
        return out

    def curve(self, cid: int) -> Curve:
        return self.curves[cid]

    def weight(self, cid: int) -> int:
        return self.curves[cid].self_intersection

    def with_weight(self, cid: int, weight: int) -> "CurveConfig":
        curves = list(self.curves)
        curves[cid] = Curve(cid, weight, curves[cid].tag)
        return CurveConfig(tuple(curves), self.points, self.blowup_log)


def blowup_step(config: CurveConfig, point: Iterable[int]) -> CurveConfig:
    """Blow up at the common point of the listed curves (or a smooth point of one curve)."""
    ids = frozenset(point)
    if not ids:
        raise NoSuchIntersection("a blow-up needs at least one curve")
    if any(cid < 0 or cid >= len(config.curves) for cid in ids):
        raise NoSuchIntersection(f"unknown curve id in {sorted(ids)}")
    points = list(config.points)
    if len(ids) >= 2:
        try:
            points.remove(ids)
        except ValueError:
            raise NoSuchIntersection(f"curves {sorted(ids)} share no intersection point") from None
    new_id = len(config.curves)
    curves = [
        Curve(c.id, c.self_intersection - 1, c.tag) if c.id in ids else c for c in config.curves
    ]
    curves.append(Curve(new_id, -1, f"exceptional({len(config.blowup_log) + 1})"))
    points.extend(frozenset({new_id, cid}) for cid in sorted(ids))
    return CurveConfig(tuple(curves), tuple(points), config.blowup_log + (ids,))


@dataclass(frozen=True)
class DualOrigin:
    """Where each side of the split configuration lives inside the curve config."""

    config: CurveConfig
    gamma_center: int
    gamma_arms: tuple[tuple[int, ...], ...]
    dual_center: int
    dual_arms: tuple[tuple[int, ...], ...]
    cut_ids: tuple[int, ...]

    @property
    def gamma_ids(self) -> list[int]:
        return [self.gamma_center] + [c for arm in self.gamma_arms for c in arm]

    @property
    def dual_ids(self) -> list[int]:
        return [self.dual_center] + [c for arm in self.dual_arms for c in arm]


@dataclass(frozen=True)
class DualGraph:
    """Dual star graph.  Vertex 0 is the +1 center; arms follow in order, outward."""

    central_weight: int
    arms: tuple[tuple[int, ...], ...]
    origin: DualOrigin | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_arms(cls, arms: Iterable[Iterable[int]], central_weight: int = 1) -> "DualGraph":
        return cls(central_weight, tuple(tuple(arm) for arm in arms))

    @property
    def d(self) -> int:
        return len(self.arms)

    @property
    def vertex_count(self) -> int:
        return 1 + sum(len(arm) for arm in self.arms)

    def weights(self) -> list[int]:
        out = [self.central_weight]
        for arm in self.arms:
            out.extend(arm)
        return out

    def arm_vertex_ids(self) -> list[list[int]]:
        out, idx = [], 1
        for arm in self.arms:
            out.append(list(range(idx, idx + len(arm))))
            idx += len(arm)
        return out

    def center_adjacent(self) -> list[int]:
        return [ids[0] for ids in self.arm_vertex_ids()]

    def edges(self) -> list[tuple[int, int]]:
        edges = []
        for ids in self.arm_vertex_ids():
            edges.append((0, ids[0]))
            edges.extend(zip(ids, ids[1:]))
        return edges

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for a, b in self.edges():
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def basis_bound(self) -> int:
        """N: the sum of n_j + 1 over the non-central vertices of weight -n_j."""
        return sum(-w + 1 for arm in self.arms for w in arm)

    def automorphisms(self) -> Iterator[tuple[int, ...]]:
        """Vertex permutations induced by permuting arms with identical weight lists.

        The center is the only vertex of positive weight, so every weighted
        automorphism of the star fixes it.
        """
        ids = self.arm_vertex_ids()
        blocks: dict[tuple[int, ...], list[int]] = {}
        for j, arm in enumerate(self.arms):
            blocks.setdefault(arm, []).append(j)
        groups = list(blocks.values())
        for choice in product(*(permutations(grp) for grp in groups)):
            perm = list(range(self.vertex_count))
            for grp, image in zip(groups, choice):
                for src, dst in zip(grp, image):
                    for a, b in zip(ids[src], ids[dst]):
                        perm[a] = b
            yield tuple(perm)

    def __str__(self) -> str:
        arms = ", ".join("[" + ",".join(str(w) for w in arm) + "]" for arm in self.arms)
        return f"(+{self.central_weight}; {arms})" if self.central_weight > 0 else f"({self.central_weight}; {arms})"


def build_dual(g: StarGraph) -> DualGraph:
    """Run the deterministic blow-up schedule realizing ``g`` and read off its dual."""
    if not is_dually_positive(g):
        raise NotDuallyPositive(f"{g} is not dually positive")
    d = -g.central_weight - 1
    config = CurveConfig.initial(d)
    zero, infinity = 0, 1

    def blow(cfg: CurveConfig, pt: set[int]) -> tuple[CurveConfig, int]:
        assert infinity not in pt, "the infinity section is never blown up"
        cfg = blowup_step(cfg, pt)
        return cfg, len(cfg.curves) - 1

    gamma_arms, dual_arms, cuts = [], [], []
    for j in range(1, d + 1):
        fiber = 1 + j
        config, cut = blow(config, {zero, fiber})
        gamma: list[int] = []
        dual: list[int] = [fiber]
        if j <= g.k:
            for target in g.arms[j - 1]:
                # the cut curve joins the graph side as the next arm vertex
                config, new = blow(config, {cut, dual[-1]})
                gamma.append(cut)
                cut = new
                while config.weight(gamma[-1]) > target:
                    # push the current cut curve onto the dual side
                    config, new = blow(config, {cut, gamma[-1]})
                    dual.append(cut)
                    cut = new
            gamma_arms.append(tuple(gamma))
        dual_arms.append(tuple(dual))
        cuts.append(cut)

    origin = DualOrigin(config, zero, tuple(gamma_arms), infinity, tuple(dual_arms), tuple(cuts))
    arms = tuple(tuple(config.weight(c) for c in arm) for arm in dual_arms)
    return DualGraph(config.weight(infinity), arms, origin)


@dataclass(frozen=True)
class DualityCheck:
    ok: bool
    diagnostics: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_duality(dg: DualGraph, g: StarGraph) -> DualityCheck:
    """Replay-free consistency checks of a dual graph against its source graph."""
    problems: list[str] = []
    origin = dg.origin
    if origin is None:
        return DualityCheck(False, ("dual graph carries no blow-up record",))
    cfg = origin.config
    if cfg.weight(origin.gamma_center) != g.central_weight:
        problems.append(
            f"center weight {cfg.weight(origin.gamma_center)} != {g.central_weight}"
        )
    got_arms = tuple(tuple(cfg.weight(c) for c in arm) for arm in origin.gamma_arms)
    if got_arms != g.arms:
        problems.append(f"graph-side arms {got_arms} != {g.arms}")
    steps = len(cfg.blowup_log)
    total = len(origin.gamma_ids) + len(origin.dual_ids)
    if total != steps + 2:
        problems.append(f"|V(G)| + |V(G')| = {total} but steps + 2 = {steps + 2}")
    for cid in origin.cut_ids:
        if cfg.weight(cid) != -1:
            problems.append(f"cut curve {cid} has self-intersection {cfg.weight(cid)}")
    if len(origin.cut_ids) != -g.central_weight - 1:
        problems.append("cut curve count differs from -e0-1")
    if any(origin.dual_center in step for step in cfg.blowup_log):
        problems.append("infinity section was blown up")
    if cfg.weight(origin.dual_center) != dg.central_weight:
        problems.append("dual center weight disagrees with the record")
    dual_arms = tuple(tuple(cfg.weight(c) for c in arm) for arm in origin.dual_arms)
    if dual_arms != dg.arms:
        problems.append(f"dual arms {dg.arms} disagree with the record {dual_arms}")
    return DualityCheck(not problems, tuple(problems))


_COLORS = {"gamma": "blue", "dual": "red", "cut": "darkgreen"}


def dual_to_dot(dg: DualGraph) -> str:
    """DOT rendering of the split configuration, colored by side."""
    lines = ["graph blowup {", "  node [shape=circle];"]
    origin = dg.origin
    if origin is None:
        for v, w in enumerate(dg.weights()):
            lines.append(f'  v{v} [label="w={w}", color={_COLORS["dual"]}];')
        for a, b in dg.edges():
            lines.append(f"  v{a} -- v{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    side = {}
    for cid in origin.gamma_ids:
        side[cid] = "gamma"
    for cid in origin.dual_ids:
        side[cid] = "dual"
    for cid in origin.cut_ids:
        side[cid] = "cut"
    cfg = origin.config
    for curve in cfg.curves:
        color = _COLORS.get(side.get(curve.id, ""), "black")
        lines.append(
            f'  c{curve.id} [label="w={curve.self_intersection}", color={color}, tooltip="{curve.tag}"];'
        )
    for (a, b), mult in sorted(cfg.incidences.items()):
        for _ in range(mult):
            lines.append(f"  c{a} -- c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
