"""Dehn-twist words on a disk with ``k`` holes and a rewriting prover.

Holes sit at the vertices of a regular k-gon, numbered counterclockwise.  A
generator ``D{S}`` is the twist about the convex curve enclosing exactly the
holes in ``S``.  Two such curves are disjoint when one subset contains the
other, or when the subsets are disjoint and do not interleave around the
polygon.

Words store run-length merged letters; moves address *units*, the letters of
the fully expanded word where every exponent is +1 or -1.

The lantern relation ``D_A D_B D_C D_{ABC} = D_{AB} D_{BC} D_{AC}`` is applied
only when ``A``, ``B``, ``C`` occupy three consecutive arcs of the polygon in
that counterclockwise order; all uses in the literature this models have that
shape, and it fixes the orientation of the right-hand side.
"""

from __future__ import annotations

import heapq
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .homology import HomRep
from .plumbing import StarGraph

Unit = tuple["TwistGen", int]


class MonodromyError(ValueError):
    pass


class NotDisjoint(MonodromyError):
    pass


class PatternMismatch(MonodromyError):
    pass


class UnsupportedShape(MonodromyError):
    pass


class WordSyntaxError(MonodromyError):
    pass


class BadVertex(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TwistGen:
    holes: tuple[int, ...]

    def __post_init__(self) -> None:
        holes = tuple(sorted(set(int(h) for h in self.holes)))
        if not holes:
            raise MonodromyError("a twist generator needs at least one hole")
        if holes[0] < 1:
            raise MonodromyError("holes are numbered from 1")
        object.__setattr__(self, "holes", holes)
        object.__setattr__(self, "_hash", hash(holes))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def of(cls, *holes: int) -> "TwistGen":
        return cls(tuple(holes))

    @cached_property
    def hole_set(self) -> frozenset[int]:
        return frozenset(self.holes)

    def __str__(self) -> str:
        return "D{" + ",".join(str(h) for h in self.holes) + "}"


@dataclass(frozen=True)
class TwistWord:
    page_holes: int
    letters: tuple[tuple[TwistGen, int], ...]

    def __post_init__(self) -> None:
        merged: list[list] = []
        for gen, exp in self.letters:
            if not isinstance(gen, TwistGen):
                gen = TwistGen(tuple(gen))
            exp = int(exp)
            if exp == 0:
                continue
            if gen.holes[-1] > self.page_holes:
                raise MonodromyError(f"{gen} uses a hole beyond {self.page_holes}")
            if merged and merged[-1][0] == gen and (merged[-1][1] > 0) == (exp > 0):
                merged[-1][1] += exp
            else:
                merged.append([gen, exp])
        object.__setattr__(self, "letters", tuple((g, e) for g, e in merged))

    @classmethod
    def from_units(cls, k: int, units: Iterable[Unit]) -> "TwistWord":
        return cls(k, tuple(units))

    def units(self) -> tuple[Unit, ...]:
        out = []
        for gen, exp in self.letters:
            sign = 1 if exp > 0 else -1
            out.extend([(gen, sign)] * abs(exp))
        return tuple(out)

    @property
    def exponent_sum(self) -> int:
        return sum(exp for _, exp in self.letters)

    @property
    def unit_length(self) -> int:
        return sum(abs(exp) for _, exp in self.letters)

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        if other.page_holes != self.page_holes:
            raise MonodromyError("words live on different pages")
        return TwistWord(self.page_holes, self.letters + other.letters)

    def __str__(self) -> str:
        return format_word(self)


def D(*holes: int) -> TwistGen:
    return TwistGen(tuple(holes))


# ---------------------------------------------------------------------------
# syntax

_LETTER = re.compile(r"D\{([0-9,\s]*)\}(?:\^(-?\d+))?")


def parse_word(text: str, k: int | None = None) -> TwistWord:
    """Parse ``D{1,2,3}^2 D{1}^3 ...``; the page size defaults to the largest hole."""
    letters = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _LETTER.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected input at column {pos + 1}: {text[pos:pos + 12]!r}")
        body = [s.strip() for s in m.group(1).split(",")]
        if not all(body):
            raise WordSyntaxError(f"empty hole in letter at column {pos + 1}")
        holes = [int(s) for s in body]
        if len(set(holes)) != len(holes):
            raise WordSyntaxError(f"repeated hole in letter at column {pos + 1}")
        letters.append((holes, int(m.group(2)) if m.group(2) is not None else 1))
        pos = m.end()
    top = max((h for holes, _ in letters for h in holes), default=0)
    if k is None:
        k = top
    elif top > k:
        raise WordSyntaxError(f"hole {top} exceeds page size {k}")
    try:
        return TwistWord(k, tuple((TwistGen(tuple(h)), e) for h, e in letters))
    except MonodromyError as exc:
        raise WordSyntaxError(str(exc)) from None


def format_word(w: TwistWord) -> str:
    parts = []
    for gen, exp in w.letters:
        parts.append(str(gen) if exp == 1 else f"{gen}^{exp}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# words from the literature


def canonical_word(k: int, n: Sequence[int]) -> TwistWord:
    """Outer-boundary twist followed by ``n_j`` twists about each hole."""
    if k < 3:
        raise MonodromyError("the canonical word needs at least three holes")
    if len(n) != k:
        raise MonodromyError(f"expected {k} multiplicities, got {len(n)}")
    letters = [(TwistGen(tuple(range(1, k + 1))), 1)]
    letters += [(TwistGen((j,)), n[j - 1]) for j in range(1, k + 1)]
    return TwistWord(k, tuple(letters))


def _letter_order(holes: tuple[int, ...]) -> tuple:
    if len(holes) == 1:
        return (-1, holes[0])
    # larger subsets first; among equal sizes, compare descending-sorted tuples in reverse
    desc = tuple(sorted(holes, reverse=True))
    return (-len(holes), tuple(-h for h in desc))


def rep_to_word(rep: HomRep, dg=None) -> TwistWord:
    """Vanishing-cycle word of a representation of ``(+1; [-n_1], ..., [-n_k])``.

    Basis element ``e`` contributes ``D_S`` with ``S`` the lines whose class
    contains ``-e``.
    """
    if dg is not None and any(len(arm) != 1 for arm in dg.arms):
        raise UnsupportedShape("vanishing-cycle words are only defined for length-one dual arms")
    k = len(rep.classes) - 1
    if any(row[0] != 1 for row in rep.classes[1:]):
        raise UnsupportedShape("some dual vertex is not a line; dual arms are longer than one")
    counts: Counter = Counter()
    for c in range(1, rep.basis_size + 1):
        subset = tuple(j for j in range(1, k + 1) if rep.classes[j][c] == -1)
        if subset:
            counts[subset] += 1
    ordered = sorted(counts, key=_letter_order)
    return TwistWord(k, tuple((TwistGen(s), counts[s]) for s in ordered))


def named_words(k: int, n: Sequence[int]) -> dict[str, TwistWord]:
    """The named factorizations for k = 3, 4, 5, keeping those with nonnegative exponents."""
    n = tuple(n)
    if len(n) != k:
        raise MonodromyError(f"expected {k} multiplicities, got {len(n)}")

    def build(pairs: list[tuple[Sequence[int], int]]) -> TwistWord | None:
        if any(e < 0 for _, e in pairs):
            return None
        return TwistWord(k, tuple((TwistGen(tuple(h)), e) for h, e in pairs))

    def privates(offsets: Sequence[int]) -> list[tuple[tuple[int], int]]:
        return [((j + 1,), n[j] - offsets[j]) for j in range(k)]

    table: dict[str, list] = {}
    if k == 3:
        table["M3A"] = [((1, 2, 3), 1)] + privates((0, 0, 0))
        table["M3B"] = [((2, 3), 1), ((1, 3), 1), ((1, 2), 1)] + privates((1, 1, 1))
    elif k == 4:
        pairs4 = [(3, 4), (2, 4), (1, 4), (2, 3), (1, 3), (1, 2)]
        table["M4a"] = [(p, 1) for p in pairs4] + privates((2, 2, 2, 2))
        table["M4b"] = [((3, 4), 1), ((2, 4), 1), ((1, 4), 1), ((1, 2, 3), 1)] + privates((1, 1, 1, 2))
        table["M4c"] = [((1, 2, 3, 4), 1)] + privates((0, 0, 0, 0))
    elif k == 5:
        pairs5 = [(4, 5), (3, 5), (3, 4), (2, 5), (1, 5), (2, 4), (1, 4), (2, 3), (1, 3), (1, 2)]
        table["M5a"] = [(p, 1) for p in pairs5] + privates((3, 3, 3, 3, 3))
        table["M5b"] = [(p, 1) for p in pairs5[:7]] + [((1, 2, 3), 1)] + privates((2, 2, 2, 3, 3))
        table["M5c"] = [((4, 5), 1), ((3, 5), 1), ((2, 5), 1), ((1, 5), 1), ((1, 2, 3, 4), 1)] + privates(
            (1, 1, 1, 1, 3)
        )
        table["M5d"] = [((3, 4, 5), 1), ((2, 5), 1), ((1, 5), 1), ((2, 4), 1), ((1, 4), 1), ((1, 2, 3), 1)] + privates(
            (2, 2, 1, 2, 2)
        )
        table["M5e"] = [((1, 2, 3, 4, 5), 1)] + privates((0, 0, 0, 0, 0))
    else:
        raise MonodromyError("named factorizations exist for k = 3, 4, 5 only")
    out = {}
    for name, pairs in table.items():
        w = build(pairs)
        if w is not None:
            out[name] = w
    return out


# ---------------------------------------------------------------------------
# invariants


def hole_degree(w: TwistWord) -> tuple[int, ...]:
    deg = [0] * w.page_holes
    for gen, exp in w.letters:
        for h in gen.holes:
            deg[h - 1] += exp
    return tuple(deg)


def pair_degree(w: TwistWord) -> tuple[tuple[int, ...], ...]:
    """Entry (i, j): exponent sum over letters containing both holes; also preserved by every move."""
    k = w.page_holes
    table = [[0] * k for _ in range(k)]
    for gen, exp in w.letters:
        for a in gen.holes:
            for b in gen.holes:
                table[a - 1][b - 1] += exp
    return tuple(tuple(row) for row in table)


def _interleaved(a: frozenset[int], b: frozenset[int]) -> bool:
    labels = [h in a for h in sorted(a | b)]
    changes = sum(1 for i in range(len(labels)) if labels[i] != labels[i - 1])
    return changes > 2


def disjoint(a: TwistGen, b: TwistGen) -> bool:
    return _disjoint_holes(a.holes, b.holes)


@lru_cache(maxsize=None)
def _disjoint_holes(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    sa, sb = frozenset(a), frozenset(b)
    if sa <= sb or sb <= sa:
        return True
    return not (sa & sb) and not _interleaved(sa, sb)


def lantern_triple_ok(A: Iterable[int], B: Iterable[int], C: Iterable[int]) -> bool:
    """A, B, C nonempty, pairwise disjoint, and consecutive arcs in counterclockwise order."""
    return _lantern_ok(frozenset(A), frozenset(B), frozenset(C))


@lru_cache(maxsize=None)
def _lantern_ok(*sets: frozenset[int]) -> bool:
    if any(not s for s in sets):
        return False
    if sets[0] & sets[1] or sets[1] & sets[2] or sets[0] & sets[2]:
        return False
    union = sorted(sets[0] | sets[1] | sets[2])
    labels = [next(i for i in range(3) if h in sets[i]) for h in union]
    runs = [lab for i, lab in enumerate(labels) if i == 0 or labels[i - 1] != lab]
    if len(runs) > 1 and runs[0] == runs[-1]:
        runs.pop()
    if len(runs) != 3:
        return False
    start = runs.index(0)
    return runs[start:] + runs[:start] == [0, 1, 2]


# ---------------------------------------------------------------------------
# moves


@dataclass(frozen=True)
class Move:
    """One rewriting step.  ``position`` indexes units of the word it acts on."""

    name: str
    position: int
    params: tuple = ()

    def to_json(self) -> dict:
        return {"move": self.name, "position": self.position, "params": [list(p) for p in self.params]}


def _gen(holes: Iterable[int]) -> TwistGen:
    return _gen_cached(tuple(sorted(holes)))


@lru_cache(maxsize=None)
def _gen_cached(holes: tuple[int, ...]) -> TwistGen:
    return TwistGen(holes)


def _check_range(units: Sequence[Unit], i: int, width: int) -> None:
    if i < 0 or i + width > len(units):
        raise PatternMismatch(f"block of {width} units at {i} leaves the word")


def apply_commutation(w: TwistWord, i: int) -> TwistWord:
    units = list(w.units())
    _check_range(units, i, 2)
    (a, _), (b, _) = units[i], units[i + 1]
    if not disjoint(a, b):
        raise NotDisjoint(f"{a} and {b} do not commute")
    units[i], units[i + 1] = units[i + 1], units[i]
    return TwistWord.from_units(w.page_holes, units)


def _infer_abc(x: TwistGen, y: TwistGen, z: TwistGen) -> tuple:
    sx, sy, sz = x.hole_set, y.hole_set, z.hole_set
    return tuple(sorted(sx & sz)), tuple(sorted(sx & sy)), tuple(sorted(sy & sz))


def apply_lantern(
    w: TwistWord, i: int, direction: str = "forward", abc: Sequence[Iterable[int]] | None = None
) -> TwistWord:
    """Forward: D_A D_B D_C D_{ABC} -> D_{AB} D_{BC} D_{AC}.  Backward is the reverse."""
    units = list(w.units())
    if direction == "forward":
        _check_range(units, i, 4)
        block = units[i:i + 4]
        if any(sign != 1 for _, sign in block):
            raise PatternMismatch("lantern blocks use positive twists only")
        A, B, C, U = (g.hole_set for g, _ in block)
        if abc is not None and tuple(frozenset(s) for s in abc) != (A, B, C):
            raise PatternMismatch("parameters do not match the block")
        if not lantern_triple_ok(A, B, C) or U != A | B | C:
            raise PatternMismatch(f"no lantern at {i}: {' '.join(str(g) for g, _ in block)}")
        new = [(_gen(A | B), 1), (_gen(B | C), 1), (_gen(A | C), 1)]
        units[i:i + 4] = new
    elif direction == "backward":
        _check_range(units, i, 3)
        block = units[i:i + 3]
        if any(sign != 1 for _, sign in block):
            raise PatternMismatch("lantern blocks use positive twists only")
        x, y, z = (g for g, _ in block)
        if abc is None:
            abc = _infer_abc(x, y, z)
        A, B, C = (frozenset(s) for s in abc)
        if not lantern_triple_ok(A, B, C) or (x.hole_set, y.hole_set, z.hole_set) != (A | B, B | C, A | C):
            raise PatternMismatch(f"no reverse lantern at {i}: {x} {y} {z}")
        units[i:i + 3] = [(_gen(A), 1), (_gen(B), 1), (_gen(C), 1), (_gen(A | B | C), 1)]
    else:
        raise ValueError(f"unknown lantern direction {direction!r}")
    return TwistWord.from_units(w.page_holes, units)


def _lemma_sets(B: Sequence[Iterable[int]]) -> list[frozenset[int]]:
    sets = [frozenset(b) for b in B]
    if len(sets) < 3:
        raise MonodromyError("the chain relation needs B_0, ..., B_m with m >= 2")
    if any(not s for s in sets):
        raise NotDisjoint("chain relation subsets must be nonempty")
    for a, b in combinations(sets, 2):
        if a & b:
            raise NotDisjoint(f"{sorted(a)} and {sorted(b)} overlap")
    return sets


def _lemma_sides(sets: list[frozenset[int]]) -> tuple[list[TwistGen], list[TwistGen], TwistGen]:
    """(D_{B0}^{m-1} D_{B1} ... D_{Bm}, D_{B0B1} ... D_{B0Bm} D_{B1...Bm}, D_{B0...Bm})."""
    b0, rest = sets[0], sets[1:]
    m = len(rest)
    left = [_gen(b0)] * (m - 1) + [_gen(b) for b in rest]
    tail = frozenset().union(*rest)
    right = [_gen(b0 | b) for b in rest] + [_gen(tail)]
    return left, right, _gen(b0 | tail)


def _apply_lemma(w: TwistWord, i: int, B: Sequence[Iterable[int]], forward: bool) -> TwistWord:
    sets = _lemma_sets(B)
    left, right, top = _lemma_sides(sets)
    src = left + [top] if forward else right
    dst = right if forward else left + [top]
    units = list(w.units())
    _check_range(units, i, len(src))
    if [u for u in units[i:i + len(src)]] != [(g, 1) for g in src]:
        raise PatternMismatch(f"chain relation pattern not found at {i}")
    _lemma_trace_moves(sets)  # raises unless every lantern in the chain is legal
    units[i:i + len(src)] = [(g, 1) for g in dst]
    return TwistWord.from_units(w.page_holes, units)


def apply_lemma52(w: TwistWord, i: int, B: Sequence[Iterable[int]], direction: str = "forward") -> TwistWord:
    """Forward: D_{B0}^{m-1} D_{B1}...D_{Bm} D_{B0..Bm} -> D_{B0B1}...D_{B0Bm} D_{B1..Bm}.

    This is the chain relation multiplied on the right by the full-union twist, so that
    both sides are positive words.
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    return _apply_lemma(w, i, B, direction == "forward")


def insert_pair(w: TwistWord, i: int, gen: TwistGen, sign: int = 1) -> TwistWord:
    units = list(w.units())
    if i < 0 or i > len(units):
        raise PatternMismatch(f"insertion point {i} outside the word")
    units[i:i] = [(gen, sign), (gen, -sign)]
    return TwistWord.from_units(w.page_holes, units)


def cancel_pair(w: TwistWord, i: int) -> TwistWord:
    units = list(w.units())
    _check_range(units, i, 2)
    (a, s), (b, t) = units[i], units[i + 1]
    if a != b or s != -t:
        raise PatternMismatch(f"units at {i} are not inverse to each other")
    del units[i:i + 2]
    return TwistWord.from_units(w.page_holes, units)


MOVE_NAMES = (
    "commute",
    "lantern_forward",
    "lantern_backward",
    "lemma52_forward",
    "lemma52_backward",
    "insert_pair",
    "cancel_pair",
)


def apply_move(w: TwistWord, move: Move) -> TwistWord:
    name, i, params = move.name, move.position, move.params
    if name == "commute":
        return apply_commutation(w, i)
    if name == "lantern_forward":
        return apply_lantern(w, i, "forward", params or None)
    if name == "lantern_backward":
        return apply_lantern(w, i, "backward", params or None)
    if name == "lemma52_forward":
        return apply_lemma52(w, i, params, "forward")
    if name == "lemma52_backward":
        return apply_lemma52(w, i, params, "backward")
    if name == "insert_pair":
        holes, (sign,) = params
        return insert_pair(w, i, _gen(holes), sign)
    if name == "cancel_pair":
        if params:
            holes, (sign,) = params
            if w.units()[i:i + 1] != ((_gen(holes), sign),):
                raise PatternMismatch("cancelled letter differs from the recorded one")
        return cancel_pair(w, i)
    raise ValueError(f"unknown move {name!r}")


def inverse_move(before: TwistWord, move: Move) -> Move:
    """The move undoing ``move`` when applied to ``apply_move(before, move)``."""
    name, i, params = move.name, move.position, move.params
    if name == "commute":
        return move
    if name in ("lantern_forward", "lantern_backward"):
        if not params:
            units = before.units()
            if name == "lantern_forward":
                params = tuple(g.holes for g, _ in units[i:i + 3])
            else:
                params = _infer_abc(*(g for g, _ in units[i:i + 3]))
        other = "lantern_backward" if name == "lantern_forward" else "lantern_forward"
        return Move(other, i, tuple(tuple(sorted(p)) for p in params))
    if name == "lemma52_forward":
        return Move("lemma52_backward", i, params)
    if name == "lemma52_backward":
        return Move("lemma52_forward", i, params)
    if name == "insert_pair":
        return Move("cancel_pair", i, params)
    if name == "cancel_pair":
        gen, sign = before.units()[i]
        return Move("insert_pair", i, (gen.holes, (sign,)))
    raise ValueError(f"unknown move {name!r}")


@dataclass(frozen=True)
class ProofTrace:
    source: TwistWord
    target: TwistWord
    moves: tuple[Move, ...] = ()

    def replay(self) -> TwistWord:
        w = self.source
        for mv in self.moves:
            w = apply_move(w, mv)
        return w

    def verify(self) -> bool:
        try:
            return self.replay() == self.target
        except MonodromyError:
            return False

    def intermediate_words(self) -> list[TwistWord]:
        out = [self.source]
        for mv in self.moves:
            out.append(apply_move(out[-1], mv))
        return out

    def inverse(self) -> "ProofTrace":
        words = self.intermediate_words()
        moves = tuple(inverse_move(words[t], self.moves[t]) for t in range(len(self.moves) - 1, -1, -1))
        return ProofTrace(self.target, self.source, moves)

    def then(self, other: "ProofTrace") -> "ProofTrace":
        if other.source != self.target:
            raise MonodromyError("traces do not compose")
        return ProofTrace(self.source, other.target, self.moves + other.moves)

    def counts(self) -> Counter:
        return Counter(mv.name for mv in self.moves)


# ---------------------------------------------------------------------------
# commutation bookkeeping


def commutation_moves(src: Sequence[Unit], dst: Sequence[Unit], offset: int = 0) -> list[Move] | None:
    """Adjacent commutations turning ``src`` into ``dst``, or None if that is impossible."""
    if Counter(src) != Counter(dst):
        return None
    pools: dict[Unit, deque] = {}
    for idx, u in enumerate(src):
        pools.setdefault(u, deque()).append(idx)
    # rank[i] = final position of src[i]; identical units keep their relative order
    rank = [0] * len(src)
    for pos, u in enumerate(dst):
        rank[pools[u].popleft()] = pos
    cur = list(src)
    moves = []
    for _ in range(len(cur)):
        swapped = False
        for i in range(len(cur) - 1):
            if rank[i] > rank[i + 1]:
                if not disjoint(cur[i][0], cur[i + 1][0]):
                    return None
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                rank[i], rank[i + 1] = rank[i + 1], rank[i]
                moves.append(Move("commute", offset + i))
                swapped = True
        if not swapped:
            break
    return moves


def _commutes(u: Unit, v: Unit) -> bool:
    return _disjoint_holes(u[0].holes, v[0].holes)


def _precedence(units: Sequence[Unit]) -> list[set[int]]:
    """reach[i]: indices that must stay after unit ``i`` under any commutation."""
    L = len(units)
    reach: list[set[int]] = [set() for _ in range(L)]
    for i in range(L - 1, -1, -1):
        for j in range(i + 1, L):
            if j not in reach[i] and not _commutes(units[i], units[j]):
                reach[i].add(j)
                reach[i] |= reach[j]
    return reach


def _arrangement(
    units: Sequence[Unit], pattern: Sequence[Unit], reach: list[set[int]] | None = None
) -> tuple[list[int], int] | None:
    """A reordering equal modulo commutation in which ``pattern`` is contiguous."""
    L, r = len(units), len(pattern)
    if r == 0 or r > L:
        return None
    if reach is None:
        reach = _precedence(units)
    slots: dict[Unit, list[int]] = {}
    for idx, u in enumerate(units):
        slots.setdefault(u, []).append(idx)
    if any(len(slots.get(u, ())) < c for u, c in Counter(pattern).items()):
        return None

    def choices(t: int, used: list[int]):
        if t == r:
            yield list(used)
            return
        last_same = max((used[s] for s in range(t) if pattern[s] == pattern[t]), default=-1)
        for idx in slots[pattern[t]]:
            if idx > last_same:
                used.append(idx)
                yield from choices(t + 1, used)
                used.pop()

    for chosen in choices(0, []):
        block = set(chosen)
        # the block must respect forced order among its own letters
        if any(chosen[b] in reach[chosen[a]] for a in range(r) for b in range(a)):
            continue
        after: set[int] = set()
        for c in chosen:
            after |= reach[c]
        after -= block
        if any(reach[x] & block for x in after):
            continue
        order = [x for x in range(L) if x not in block and x not in after] + chosen + sorted(after)
        return order, L - r - len(after)
    return None


def gather(units: Sequence[Unit], pattern: Sequence[Unit]) -> tuple[list[Move], int] | None:
    """Commute letters of ``units`` until ``pattern`` occurs contiguously.

    Returns the commutations and the start of the block, or None when no
    choice of occurrences can be lined up.
    """
    found = _arrangement(units, pattern)
    if found is None:
        return None
    order, start = found
    moves = commutation_moves(units, [units[i] for i in order])
    assert moves is not None
    return moves, start


def _unit_key(u: Unit) -> tuple:
    return (u[0].holes, u[1])


def normal_form(units: Sequence[Unit]) -> tuple[Unit, ...]:
    """Least word, in the order on units, among those equal modulo commutation."""
    L = len(units)
    waiting = [0] * L
    later: list[list[int]] = [[] for _ in range(L)]
    for i in range(L):
        for j in range(i + 1, L):
            if not _commutes(units[i], units[j]):
                waiting[j] += 1
                later[i].append(j)
    heap = [(_unit_key(units[i]), i) for i in range(L) if waiting[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, i = heapq.heappop(heap)
        out.append(units[i])
        for j in later[i]:
            waiting[j] -= 1
            if waiting[j] == 0:
                heapq.heappush(heap, (_unit_key(units[j]), j))
    return tuple(out)


def _reduce(units: list[Unit], record: bool = True) -> tuple[list[Unit], list[Move]]:
    """Cancel inverse pairs that commutation can make adjacent."""
    moves: list[Move] = []
    while any(sign < 0 for _, sign in units):
        for i in range(len(units)):
            hit = None
            for j in range(i + 1, len(units)):
                if units[j][0] == units[i][0] and units[j][1] == -units[i][1]:
                    if all(_commutes(units[i], units[x]) for x in range(i + 1, j)):
                        hit = j
                    break
            if hit is not None:
                if record:
                    moves.extend(Move("commute", x - 1) for x in range(hit, i + 1, -1))
                    gen, sign = units[i]
                    moves.append(Move("cancel_pair", i, (gen.holes, (sign,))))
                del units[hit]
                del units[i]
                break
        else:
            break
    return units, moves


# ---------------------------------------------------------------------------
# the chain relation as explicit lantern steps


def _lemma_trace_moves(sets: list[frozenset[int]]) -> list[Move]:
    b0, rest = sets[0], sets[1:]
    m = len(rest)
    prefix = [frozenset().union(*rest[:j]) for j in range(m + 1)]  # prefix[j] = B1 u ... u Bj
    for j in range(1, m):
        if not lantern_triple_ok(prefix[j], b0, rest[j]):
            raise PatternMismatch(
                f"lantern with A={sorted(prefix[j])}, B={sorted(b0)}, C={sorted(rest[j])} is not legal"
            )
    left, _, top = _lemma_sides(sets)
    src = [(g, 1) for g in left] + [(top, 1)]
    arranged = [(_gen(rest[0]), 1)]
    for j in range(1, m):
        arranged += [(_gen(b0), 1), (_gen(rest[j]), 1)]
    arranged.append((top, 1))
    moves = commutation_moves(src, arranged)
    if moves is None:
        raise PatternMismatch("the lemma's letters cannot be interleaved by commutation")

    def key(s: frozenset[int]) -> tuple[int, ...]:
        return tuple(sorted(s))

    def v(j: int) -> frozenset[int]:
        return prefix[j] | b0

    if m > 2:
        moves.append(Move("insert_pair", 3, (key(v(2)), (1,))))
    moves.append(Move("lantern_forward", 0, (key(rest[0]), key(b0), key(rest[1]))))
    for j in range(2, m):
        moves.append(Move("commute", j))
        if j + 1 < m:
            moves.append(Move("insert_pair", j + 4, (key(v(j + 1)), (1,))))
        moves.append(Move("lantern_forward", j + 1, (key(prefix[j]), key(b0), key(rest[j]))))
        moves.append(Move("cancel_pair", j, (key(v(j)), (-1,))))
    return moves


def lemma52_expand(B: Sequence[Iterable[int]], k: int | None = None) -> tuple[TwistWord, TwistWord, ProofTrace]:
    """Both sides of the chain relation and a lantern chain proving it.

    The trace turns ``left * D_{B0..Bm}`` into ``right * D_{B0..Bm}`` with the
    inverse already cancelled, using m-1 forward lanterns.
    """
    sets = _lemma_sets(B)
    if k is None:
        k = max(max(s) for s in sets)
    left, right, top = _lemma_sides(sets)
    left_w = TwistWord(k, tuple((g, 1) for g in left))
    right_w = TwistWord(k, tuple((g, 1) for g in right) + ((top, -1),))
    source = TwistWord(k, tuple((g, 1) for g in left) + ((top, 1),))
    target = TwistWord(k, tuple((g, 1) for g in right))
    trace = ProofTrace(source, target, tuple(_lemma_trace_moves(sets)))
    return left_w, right_w, trace


# ---------------------------------------------------------------------------
# scripted proofs


@dataclass(frozen=True)
class Hint:
    """A macro step: ``lantern_backward`` with (A, B, C) or ``lemma52_backward`` with B_0..B_m."""

    name: str
    params: tuple


SCRIPTS: dict[int, list[tuple[str, str, tuple[Hint, ...]]]] = {
    3: [("M3B", "M3A", (Hint("lantern_backward", ((2,), (3,), (1,))),))],
    4: [
        ("M4a", "M4b", (Hint("lantern_backward", ((2,), (3,), (1,))),)),
        ("M4b", "M4c", (Hint("lemma52_backward", ((4,), (3,), (2,), (1,))),)),
    ],
    5: [
        ("M5a", "M5b", (Hint("lantern_backward", ((2,), (3,), (1,))),)),
        (
            "M5a",
            "M5d",
            (
                Hint("lantern_backward", ((2,), (3,), (1,))),
                Hint("lantern_backward", ((4,), (5,), (3,))),
            ),
        ),
        ("M5b", "M5c", (Hint("lemma52_backward", ((4,), (3,), (2,), (1,))),)),
        ("M5c", "M5e", (Hint("lemma52_backward", ((5,), (4,), (3,), (2,), (1,))),)),
    ],
}


def _hint_pattern(h: Hint) -> list[Unit]:
    if h.name == "lantern_backward":
        A, B, C = (frozenset(s) for s in h.params)
        return [(_gen(A | B), 1), (_gen(B | C), 1), (_gen(A | C), 1)]
    if h.name == "lemma52_backward":
        _, right, _ = _lemma_sides(_lemma_sets(h.params))
        return [(g, 1) for g in right]
    if h.name == "lantern_forward":
        A, B, C = (frozenset(s) for s in h.params)
        return [(_gen(A), 1), (_gen(B), 1), (_gen(C), 1), (_gen(A | B | C), 1)]
    if h.name == "lemma52_forward":
        left, _, top = _lemma_sides(_lemma_sets(h.params))
        return [(g, 1) for g in left + [top]]
    raise ValueError(f"unknown hint {h.name!r}")


def realize_hints(source: TwistWord, target: TwistWord, hints: Sequence[Hint]) -> ProofTrace | None:
    """Apply each hint where commutation lets its block line up, then commute onto ``target``."""
    w = source
    moves: list[Move] = []
    for h in hints:
        found = gather(w.units(), _hint_pattern(h))
        if found is None:
            return None
        pre, start = found
        for mv in pre:
            w = apply_move(w, mv)
        mv = Move(h.name, start, tuple(tuple(s) for s in h.params))
        w = apply_move(w, mv)
        moves += pre + [mv]
    tail = commutation_moves(w.units(), target.units())
    if tail is None:
        return None
    trace = ProofTrace(source, target, tuple(moves + tail))
    return trace if trace.verify() else None


def _script_path(k: int, a: str, b: str) -> list[tuple[str, str, bool]] | None:
    edges = SCRIPTS.get(k, [])
    adj: dict[str, list[tuple[str, str, bool]]] = {}
    for src, dst, _ in edges:
        adj.setdefault(src, []).append((dst, f"{src}>{dst}", True))
        adj.setdefault(dst, []).append((src, f"{src}>{dst}", False))
    prev: dict[str, tuple[str, str, bool] | None] = {a: None}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        for nxt, label, fwd in adj.get(cur, []):
            if nxt not in prev:
                prev[nxt] = (cur, label, fwd)
                queue.append(nxt)
    if b not in prev:
        return None
    path = []
    cur = b
    while prev[cur] is not None:
        p, label, fwd = prev[cur]
        path.append((label, p, fwd))
        cur = p
    return path[::-1]


def scripted_chain(k: int, n: Sequence[int], a: str, b: str) -> ProofTrace | None:
    """Trace from named word ``a`` to ``b`` built from the published proof steps."""
    words = named_words(k, n)
    if a not in words or b not in words:
        return None
    if a == b:
        return ProofTrace(words[a], words[a], ())
    path = _script_path(k, a, b)
    if path is None:
        return None
    hints = {f"{s}>{d}": h for s, d, h in SCRIPTS[k]}
    trace = ProofTrace(words[a], words[a], ())
    for label, _, fwd in path:
        src, dst = label.split(">")
        if src not in words or dst not in words:
            return None
        step = realize_hints(words[src], words[dst], hints[label])
        if step is None:
            return None
        trace = trace.then(step if fwd else step.inverse())
    return trace


# ---------------------------------------------------------------------------
# equivalence prover


@dataclass(frozen=True)
class Proven:
    trace: ProofTrace
    method: str = "search"
    status: str = field(default="Proven", init=False)


@dataclass(frozen=True)
class Disproven:
    invariant: str
    left: tuple
    right: tuple
    status: str = field(default="Disproven", init=False)


@dataclass(frozen=True)
class Unknown:
    explored: int
    status: str = field(default="Unknown", init=False)


DEFAULT_BUDGET = 100_000
MAX_INVERSES = 1


def _commute_to(source: TwistWord, target: TwistWord) -> ProofTrace | None:
    moves = commutation_moves(source.units(), target.units())
    if moves is None:
        return None
    return ProofTrace(source, target, tuple(moves))


def _normalize(units: Sequence[Unit], record: bool = True) -> tuple[tuple[Unit, ...], list[Move]]:
    """Reduce, then commute to normal form; returns the normal form and the moves used."""
    reduced, moves = _reduce(list(units), record)
    nf = normal_form(reduced)
    if not record:
        return nf, []
    tail = commutation_moves(reduced, nf)
    assert tail is not None
    return nf, moves + tail


# An edge of the search graph is (pattern, core move, inserted top twist or None).
Edge = tuple[tuple[Unit, ...], Move, "TwistGen | None"]


def _edges(units: tuple[Unit, ...]) -> Iterable[Edge]:
    positives = sorted({u[0] for u in units if u[1] == 1})
    present = set(positives)
    inverses = sum(1 for u in units if u[1] == -1)
    # forward lanterns
    for top in positives:
        hs = top.holes
        if len(hs) < 3:
            continue
        for cuts in combinations(range(len(hs)), 3):
            arcs = []
            for t in range(3):
                a, b = cuts[t], cuts[(t + 1) % 3]
                arcs.append(tuple(hs[a:b]) if a < b else tuple(hs[a:] + hs[:b]))
            for rot in range(3):
                A, B, C = arcs[rot], arcs[(rot + 1) % 3], arcs[(rot + 2) % 3]
                if all(_gen(s) in present for s in (A, B, C)) and lantern_triple_ok(A, B, C):
                    pat = ((_gen(A), 1), (_gen(B), 1), (_gen(C), 1), (top, 1))
                    yield pat, Move("lantern_forward", 0, (A, B, C)), None
    # backward lanterns
    for x in positives:
        for y in positives:
            if x == y:
                continue
            Bs = x.hole_set & y.hole_set
            if not Bs:
                continue
            A, C = x.hole_set - Bs, y.hole_set - Bs
            if A and C and _gen(A | C) in present and lantern_triple_ok(A, Bs, C):
                params = (tuple(sorted(A)), tuple(sorted(Bs)), tuple(sorted(C)))
                yield ((x, 1), (y, 1), (_gen(A | C), 1)), Move("lantern_backward", 0, params), None
    # a lantern whose top twist is borrowed as an inserted inverse pair
    if inverses < MAX_INVERSES:
        for a in positives:
            for b in positives:
                if a == b or a.hole_set & b.hole_set:
                    continue
                for c in positives:
                    if c in (a, b) or not lantern_triple_ok(a.holes, b.holes, c.holes):
                        continue
                    top = _gen(a.hole_set | b.hole_set | c.hole_set)
                    yield ((a, 1), (b, 1), (c, 1)), Move("lantern_forward", 0, (a.holes, b.holes, c.holes)), top


def _rewrite(units: Sequence[Unit], edge: Edge, order: list[int], start: int) -> list[Unit]:
    pattern, core, top = edge
    arranged = [units[i] for i in order]
    block = list(pattern)
    if top is not None:
        block = block + [(top, 1)]
        tail = [(top, -1)]
    else:
        tail = []
    w = apply_move(TwistWord.from_units(1 + max(h for u in block for h in u[0].holes), block), core)
    return arranged[:start] + list(w.units()) + tail + arranged[start + len(pattern):]


def _successors(units: tuple[Unit, ...]) -> Iterable[tuple[tuple[Unit, ...], Edge]]:
    reach = _precedence(units)
    for edge in _edges(units):
        found = _arrangement(units, edge[0], reach)
        if found is None:
            continue
        nxt = _rewrite(units, edge, *found)
        yield _normalize(nxt, record=False)[0], edge


def _edge_moves(k: int, units: tuple[Unit, ...], edge: Edge) -> tuple[tuple[Unit, ...], list[Move]]:
    """Replayable moves realizing ``edge`` from normal form ``units`` to the next normal form."""
    pattern, core, top = edge
    order, start = _arrangement(units, pattern)
    moves = commutation_moves(units, [units[i] for i in order])
    w = TwistWord.from_units(k, units)
    for mv in moves:
        w = apply_move(w, mv)
    if top is not None:
        mv = Move("insert_pair", start + len(pattern), (top.holes, (1,)))
        w = apply_move(w, mv)
        moves.append(mv)
    mv = Move(core.name, start, core.params)
    w = apply_move(w, mv)
    moves.append(mv)
    nf, tail = _normalize(w.units())
    return nf, moves + tail


def _blind_search(w1: TwistWord, w2: TwistWord, budget: int) -> ProofTrace | int:
    k = w1.page_holes
    s_nf, s_moves = _normalize(w1.units())
    t_nf, t_moves = _normalize(w2.units())
    # parent maps: state -> (previous state, edge) or None at the roots
    sides: list[dict] = [{s_nf: None}, {t_nf: None}]
    frontiers = [deque([s_nf]), deque([t_nf])]
    explored = 1 if s_nf == t_nf else 2
    meet = s_nf if s_nf == t_nf else None
    while meet is None and (frontiers[0] or frontiers[1]):
        if not frontiers[1] or (frontiers[0] and len(frontiers[0]) <= len(frontiers[1])):
            side = 0
        else:
            side = 1
        frontier, seen, other = frontiers[side], sides[side], sides[1 - side]
        for _ in range(len(frontier)):
            state = frontier.popleft()
            for nxt, edge in _successors(state):
                if nxt in seen:
                    continue
                seen[nxt] = (state, edge)
                explored += 1
                if nxt in other:
                    meet = nxt
                    break
                if explored >= budget:
                    return explored
                frontier.append(nxt)
            if meet is not None:
                break
    if meet is None:
        return explored

    def walk(parents: dict, start: TwistWord, start_moves: list[Move], root: tuple) -> ProofTrace:
        steps = []
        cur = meet
        while parents[cur] is not None:
            prev, edge = parents[cur]
            steps.append((prev, edge))
            cur = prev
        moves = list(start_moves)
        state = root
        for prev, edge in reversed(steps):
            state, extra = _edge_moves(k, prev, edge)
            moves += extra
        return ProofTrace(start, TwistWord.from_units(k, state), tuple(moves))

    forward = walk(sides[0], w1, s_moves, s_nf)
    backward = walk(sides[1], w2, t_moves, t_nf)
    return forward.then(backward.inverse())


def _named(w: TwistWord) -> tuple[list[int], str, ProofTrace] | None:
    k = w.page_holes
    if k not in SCRIPTS:
        return None
    n = [d - 1 for d in hole_degree(w)]
    if any(x < 0 for x in n):
        return None
    for name, ref in named_words(k, n).items():
        path = _commute_to(w, ref)
        if path is not None:
            return n, name, path
    return None


def prove_equivalent(
    w1: TwistWord, w2: TwistWord, budget: int = DEFAULT_BUDGET, use_scripts: bool = True
) -> Proven | Disproven | Unknown:
    """Semi-decision procedure: invariant separation, scripted proofs, then bidirectional search."""
    if w1.page_holes != w2.page_holes:
        raise MonodromyError("words live on different pages")
    if w1 == w2:
        return Proven(ProofTrace(w1, w2, ()), "identity")
    for name, inv in (("hole_degree", hole_degree), ("pair_degree", pair_degree)):
        a, b = inv(w1), inv(w2)
        if a != b:
            return Disproven(name, a, b)
    direct = _commute_to(w1, w2)
    if direct is not None:
        return Proven(direct, "commutation")
    if use_scripts:
        na, nb = _named(w1), _named(w2)
        if na and nb and na[0] == nb[0]:
            middle = scripted_chain(w1.page_holes, na[0], na[1], nb[1])
            if middle is not None:
                trace = na[2].then(middle).then(nb[2].inverse())
                if trace.verify():
                    return Proven(trace, "script")
    # search from the smaller word so the outcome does not depend on argument order
    swap = (str(w2), w2.letters) < (str(w1), w1.letters)
    a, b = (w2, w1) if swap else (w1, w2)
    found = _blind_search(a, b, budget)
    if isinstance(found, int):
        return Unknown(found)
    trace = found.inverse() if swap else found
    if not trace.verify():
        raise AssertionError("search produced a trace that does not replay")
    return Proven(trace, "search")


# ---------------------------------------------------------------------------
# planar pages of plumbings


@dataclass(frozen=True)
class PageSummary:
    s_values: tuple[int, ...]
    neck_curves: int
    genus: int
    boundary_components: int


def page_summary(weights: Sequence[int], edges: Sequence[tuple[int, int]]) -> PageSummary:
    valence = [0] * len(weights)
    for a, b in edges:
        valence[a] += 1
        valence[b] += 1
    s = tuple(w + v for w, v in zip(weights, valence))
    bad = [i for i, x in enumerate(s) if x > 0]
    if bad:
        raise BadVertex(f"vertices {bad} have weight + valence > 0")
    holes = sum(-x for x in s)
    return PageSummary(s, len(edges) + holes, 0, holes)


def gay_mark_page(g: StarGraph) -> PageSummary:
    """Planar page data: one disk per vertex, a neck per edge, |s_j| extra boundary disks per vertex."""
    return page_summary(g.weights(), g.edges())
