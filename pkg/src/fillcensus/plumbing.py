"""Star-shaped plumbing graphs, Seifert invariants and their integral invariants.

A star-shaped plumbing is a central sphere of weight ``e0`` with ``k`` linear
arms.  Arms are listed from the vertex adjacent to the center outward.  The
boundary is the Seifert fibered space ``Y(e0; r_1, ..., r_k)`` where each
``r_i`` is the negative continued fraction of the corresponding arm.

Everything here is exact: rationals are :class:`fractions.Fraction`, matrices
are tuples of Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence


class PlumbingError(ValueError):
    """Base class for invalid plumbing data."""


class EmptyArm(PlumbingError):
    pass


class WeightTooLarge(PlumbingError):
    pass


class OutOfRange(PlumbingError):
    pass


@dataclass(frozen=True)
class StarGraph:
    central_weight: int
    arms: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        arms = tuple(tuple(int(w) for w in arm) for arm in self.arms)
        object.__setattr__(self, "arms", arms)
        object.__setattr__(self, "central_weight", int(self.central_weight))
        if not arms:
            raise EmptyArm("a star graph needs at least one arm")
        if any(len(arm) == 0 for arm in arms):
            raise EmptyArm("every arm must contain at least one vertex")

    @property
    def k(self) -> int:
        return len(self.arms)

    @property
    def vertex_count(self) -> int:
        return 1 + sum(len(arm) for arm in self.arms)

    def weights(self) -> list[int]:
        """Vertex weights in the global order: center, then arms outward."""
        out = [self.central_weight]
        for arm in self.arms:
            out.extend(arm)
        return out

    def edges(self) -> list[tuple[int, int]]:
        edges = []
        idx = 1
        for arm in self.arms:
            edges.append((0, idx))
            for step in range(1, len(arm)):
                edges.append((idx + step - 1, idx + step))
            idx += len(arm)
        return edges

    def __str__(self) -> str:
        arms = ", ".join("[" + ",".join(str(w) for w in arm) + "]" for arm in self.arms)
        return f"({self.central_weight}; {arms})"


@dataclass(frozen=True)
class SeifertData:
    e0: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        for c in coeffs:
            if c >= -1:
                raise OutOfRange(f"Seifert coefficient {c} must be < -1")

    def __str__(self) -> str:
        return f"Y({self.e0}; " + ", ".join(str(c) for c in self.coefficients) + ")"


@dataclass(frozen=True)
class IntegerSymmetricMatrix:
    dimension: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.dimension
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValueError("matrix shape does not match dimension")
        for i in range(n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("matrix is not symmetric")


@dataclass(frozen=True)
class AbelianGroupInvariants:
    free_rank: int
    torsion_factors: tuple[int, ...]

    @property
    def torsion_order(self) -> int:
        order = 1
        for t in self.torsion_factors:
            order *= t
        return order

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion_factors]
        return " + ".join(parts) if parts else "0"


def arm_to_rational(arm: Sequence[int]) -> Fraction:
    """Evaluate ``b_1 - 1/(b_2 - 1/(... - 1/b_n))`` exactly."""
    if len(arm) == 0:
        raise EmptyArm("cannot evaluate an empty arm")
    for b in arm:
        if b > -2:
            raise WeightTooLarge(f"arm weight {b} exceeds -2")
    value = Fraction(arm[-1])
    for b in reversed(arm[:-1]):
        value = b - 1 / value
    return value


def rational_to_arm(r: Fraction | int | str) -> tuple[int, ...]:
    """Unique expansion of ``r < -1`` as a negative continued fraction with entries <= -2."""
    r = Fraction(r)
    if r >= -1:
        raise OutOfRange(f"{r} is not < -1")
    out = []
    while True:
        # b is the integer with b <= r < b + 1; the tail -1/x lies in [0, 1)
        b = r.numerator // r.denominator
        out.append(b)
        rest = r - b
        if rest == 0:
            return tuple(out)
        r = -1 / rest


def graph_from_seifert(data: SeifertData) -> StarGraph:
    return StarGraph(data.e0, tuple(rational_to_arm(c) for c in data.coefficients))


def seifert_from_graph(g: StarGraph) -> SeifertData:
    return SeifertData(g.central_weight, tuple(arm_to_rational(arm) for arm in g.arms))


def is_dually_positive(g: StarGraph) -> bool:
    if g.central_weight > -g.k - 1:
        return False
    return all(b <= -2 for arm in g.arms for b in arm)


def intersection_matrix(g: StarGraph) -> IntegerSymmetricMatrix:
    weights = g.weights()
    n = len(weights)
    rows = [[0] * n for _ in range(n)]
    for i, w in enumerate(weights):
        rows[i][i] = w
    for a, b in g.edges():
        rows[a][b] = rows[b][a] = 1
    return IntegerSymmetricMatrix(n, tuple(tuple(row) for row in rows))


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors of an integer matrix, zeros last, in divisibility order.

    Row and column reduction to a diagonal, then pairwise gcd/lcm
    normalization, which preserves the cokernel.
    """
    a = [list(row) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    for t in range(min(rows, cols)):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        a[t], a[pivot[0]] = a[pivot[0]], a[t]
        for row in a:
            row[t], row[pivot[1]] = row[pivot[1]], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                break
            # a remainder survived: move the smallest entry of row/column t to the pivot
            best = (t, t)
            for i in range(t + 1, rows):
                if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t + 1, cols):
                if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                    best = (t, j)
            if best[1] == t:
                a[t], a[best[0]] = a[best[0]], a[t]
            else:
                for row in a:
                    row[t], row[best[1]] = row[best[1]], row[t]
        diag.append(abs(a[t][t]))
    diag.extend([0] * (min(rows, cols) - len(diag)))
    nonzero = [d for d in diag if d]
    for i in range(len(nonzero)):
        for j in range(i + 1, len(nonzero)):
            g = gcd(nonzero[i], nonzero[j])
            nonzero[i], nonzero[j] = g, nonzero[i] * nonzero[j] // g
    return nonzero + [0] * (len(diag) - len(nonzero))


def cokernel(matrix: Sequence[Sequence[int]]) -> AbelianGroupInvariants:
    """Cokernel of a square integer matrix viewed as a map Z^n -> Z^n."""
    diag = smith_diagonal(matrix)
    n = len(matrix)
    free = n - sum(1 for d in diag if d)
    return AbelianGroupInvariants(free, tuple(d for d in diag if d > 1))


def homology_of_boundary(g: StarGraph) -> AbelianGroupInvariants:
    """H_1 of the plumbing boundary, taken as the cokernel of the intersection form."""
    return cokernel(intersection_matrix(g).entries)
