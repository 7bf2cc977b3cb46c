"""Metric graphs as length spaces.

Edge lengths are exact rationals and every comparison is exact: jump
detection downstream is equality-sensitive, so no floats enter any length
computation.

Closed geodesics of the geometric realization are exactly the cyclically
reduced edge loops, and free homotopy classes of loops correspond to such
loops up to rotation and inversion.  A loop is encoded as a sequence of
darts: dart 2*e traverses edge e forward, dart 2*e+1 backward.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graphs import ColoredGraph

DEFAULT_CLASS_CAP = 200_000


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' (or a bare integer) into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}: {exc}") from exc


def format_rational(q: Fraction) -> str:
    """Serialize with an explicit denominator, e.g. '1/1', '5/2'."""
    return f"{q.numerator}/{q.denominator}"


def dart_reverse(d: int) -> int:
    return d ^ 1


def dart_edge(d: int) -> int:
    return d // 2


def reduce_dart_path(path: Sequence[int], cyclic: bool = False) -> list[int]:
    """Remove backtracking pairs; with cyclic=True also across the wraparound."""
    out: list[int] = []
    for d in path:
        if out and out[-1] == dart_reverse(d):
            out.pop()
        else:
            out.append(d)
    if cyclic:
        while len(out) >= 2 and out[0] == dart_reverse(out[-1]):
            out = out[1:-1]
    return out


class CyclicWord:
    """A cyclically reduced loop, canonical up to rotation and inversion.

    The canonical form is the lexicographically least dart tuple over all
    rotations of the word and of its inverse; darts order by (edge id,
    direction), forward before backward.
    """

    __slots__ = ("darts",)

    def __init__(self, darts: Sequence[int]):
        darts = tuple(darts)
        if not darts:
            raise ValueError("the trivial class has no cyclic word")
        for i, d in enumerate(darts):
            if darts[(i + 1) % len(darts)] == dart_reverse(d):
                raise ValueError("word is not cyclically reduced")
        self.darts = _least_rotation(darts)

    @classmethod
    def from_path(cls, path: Sequence[int]) -> "CyclicWord":
        """Cyclically reduce an arbitrary closed dart path first."""
        reduced = reduce_dart_path(path, cyclic=True)
        if not reduced:
            raise ValueError("path is null-homotopic")
        return cls(reduced)

    def __len__(self) -> int:
        return len(self.darts)

    @property
    def letters(self) -> tuple[tuple[int, int], ...]:
        """(edge id, +1/-1) pairs."""
        return tuple((dart_edge(d), 1 if d % 2 == 0 else -1) for d in self.darts)

    def inverse(self) -> "CyclicWord":
        return CyclicWord([dart_reverse(d) for d in reversed(self.darts)])

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self.darts == other.darts

    def __lt__(self, other: "CyclicWord") -> bool:
        return self.darts < other.darts

    def __hash__(self) -> int:
        return hash(self.darts)

    def __repr__(self) -> str:
        return f"CyclicWord({list(self.darts)})"


def _least_rotation(darts: tuple[int, ...]) -> tuple[int, ...]:
    inv = tuple(dart_reverse(d) for d in reversed(darts))
    candidates = [darts[i:] + darts[:i] for i in range(len(darts))]
    candidates += [inv[i:] + inv[:i] for i in range(len(inv))]
    return min(candidates)


@dataclass(frozen=True, order=True)
class MarkedClass:
    """A free homotopy class with its minimum marked length."""

    length: Fraction
    word: CyclicWord


class MetricGraph:
    """A connected colored graph with positive rational edge lengths.

    The spanning tree is breadth-first from a root (vertex 0 unless
    overridden), visiting edges in id order, so the induced free basis of
    the fundamental group is deterministic.
    """

    def __init__(
        self,
        graph: ColoredGraph,
        lengths: dict[str, Fraction] | Sequence[Fraction],
        root: int = 0,
    ):
        self.graph = graph
        if isinstance(lengths, dict):
            missing = [c for c in graph.colors if c not in lengths]
            if missing:
                raise ValueError(f"no length for colors {missing}")
            per_edge = [Fraction(lengths[e.color]) for e in graph.edges]
            self.color_lengths: dict[str, Fraction] | None = {
                c: Fraction(q) for c, q in lengths.items()
            }
        else:
            per_edge = [Fraction(q) for q in lengths]
            if len(per_edge) != graph.edge_count:
                raise ValueError("per-edge length list has wrong size")
            self.color_lengths = None
        if any(q <= 0 for q in per_edge):
            raise ValueError("edge lengths must be positive")
        if not graph.is_connected():
            raise ValueError("graph must be connected")
        self.edge_lengths = per_edge
        self.root = root

        n = graph.vertex_count
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n)}
        for e in graph.edges:
            adj[e.origin].append((e.id, e.target))
            adj[e.target].append((e.id, e.origin))
        for v in adj:
            adj[v].sort()
        tree: set[int] = set()
        parent: dict[int, tuple[int, int] | None] = {root: None}
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for eid, w in adj[v]:
                    if w not in parent:
                        parent[w] = (eid, v)
                        tree.add(eid)
                        nxt.append(w)
            frontier = nxt
        assert len(parent) == n
        self.spanning_tree = frozenset(tree)
        self._parent = parent
        self.free_generators = [e.id for e in graph.edges if e.id not in tree]
        self._gen_index = {e: k for k, e in enumerate(self.free_generators)}

        self._dart_origin: list[int] = [0] * (2 * graph.edge_count)
        self._dart_target: list[int] = [0] * (2 * graph.edge_count)
        for e in graph.edges:
            self._dart_origin[2 * e.id] = e.origin
            self._dart_target[2 * e.id] = e.target
            self._dart_origin[2 * e.id + 1] = e.target
            self._dart_target[2 * e.id + 1] = e.origin
        self._out_darts: list[list[int]] = [[] for _ in range(n)]
        for d in range(2 * graph.edge_count):
            self._out_darts[self._dart_origin[d]].append(d)

    @property
    def rank(self) -> int:
        return self.graph.edge_count - self.graph.vertex_count + 1

    def dart_origin(self, d: int) -> int:
        return self._dart_origin[d]

    def dart_target(self, d: int) -> int:
        return self._dart_target[d]

    def dart_length(self, d: int) -> Fraction:
        return self.edge_lengths[dart_edge(d)]

    def out_darts(self, v: int) -> list[int]:
        return self._out_darts[v]

    def tree_path_to_root(self, v: int) -> list[int]:
        """Darts walking from v up to the root inside the spanning tree."""
        out = []
        while self._parent[v] is not None:
            eid, p = self._parent[v]
            if self._dart_origin[2 * eid] == v:
                out.append(2 * eid)
            else:
                out.append(2 * eid + 1)
            v = p
        return out

    def generator_loop(self, gen: int) -> list[int]:
        """Fundamental loop of a free generator, based at the root, unreduced."""
        eid = self.free_generators[gen]
        up = self.tree_path_to_root(self._dart_origin[2 * eid])
        down = self.tree_path_to_root(self._dart_target[2 * eid])
        return [dart_reverse(d) for d in reversed(up)] + [2 * eid] + down

    def generator_class_lengths(self) -> list[Fraction]:
        """Marked length of each free generator's conjugacy class."""
        out = []
        for k in range(self.rank):
            loop = reduce_dart_path(self.generator_loop(k), cyclic=True)
            out.append(sum((self.dart_length(d) for d in loop), Fraction(0)))
        return out

    def word_length(self, word: CyclicWord) -> Fraction:
        return sum((self.dart_length(d) for d in word.darts), Fraction(0))


def metric_graph(
    graph: ColoredGraph,
    lengths: dict[str, Fraction] | Sequence[Fraction],
    root: int = 0,
) -> MetricGraph:
    return MetricGraph(graph, lengths, root=root)


def check_closed_loop(X: MetricGraph, darts: Sequence[int]) -> None:
    """Raise unless consecutive darts chain and the path closes up."""
    for i, d in enumerate(darts):
        nxt = darts[(i + 1) % len(darts)]
        if X.dart_target(d) != X.dart_origin(nxt):
            raise ValueError("darts do not form a closed loop in this graph")


def marked_length(X: MetricGraph, word: CyclicWord) -> Fraction:
    """Length of the geodesic representative, i.e. the sum of its edge lengths."""
    check_closed_loop(X, word.darts)
    return X.word_length(word)


def enumerate_classes(
    X: MetricGraph,
    budget: Fraction,
    strict: bool = True,
    cap: int = DEFAULT_CLASS_CAP,
) -> list[MarkedClass]:
    """All free homotopy classes with marked length below the budget.

    Depth-first search over darts from every root vertex, no immediate
    backtracking, pruned by remaining length; loops are deduplicated by
    canonical cyclic form, which also merges a class with its inverse.
    Sorted by (length, canonical word).
    """
    budget = Fraction(budget)
    if budget <= 0:
        raise ValueError("budget must be positive")
    found: dict[CyclicWord, Fraction] = {}

    def within(total: Fraction) -> bool:
        return total < budget if strict else total <= budget

    for v0 in range(X.graph.vertex_count):
        work = [((d,), X.dart_length(d)) for d in X.out_darts(v0) if within(X.dart_length(d))]
        while work:
            path, length = work.pop()
            last = path[-1]
            v = X.dart_target(last)
            if v == v0 and path[0] != dart_reverse(last):
                word = CyclicWord(path)
                if word not in found:
                    found[word] = length
                    if len(found) > cap:
                        raise RuntimeError(f"class count exceeds cap {cap}")
            for d in X.out_darts(v):
                if d == dart_reverse(last):
                    continue
                total = length + X.dart_length(d)
                if within(total):
                    work.append((path + (d,), total))
    classes = [MarkedClass(length, word) for word, length in found.items()]
    classes.sort()
    return classes


def loop_to_free_word(X: MetricGraph, path: Sequence[int] | CyclicWord) -> tuple[int, ...]:
    """Rewrite a closed edge loop as a cyclically reduced word in the free basis.

    Tree darts vanish; non-tree dart 2e maps to its generator letter.
    Letters are signed 1-based generator indices.  Two loops are freely
    homotopic iff their outputs agree up to rotation and inversion.
    """
    if isinstance(path, CyclicWord):
        darts: Sequence[int] = path.darts
    else:
        darts = list(path)
    if darts:
        check_closed_loop(X, darts)
    word: list[int] = []
    for d in darts:
        e = dart_edge(d)
        g = X._gen_index.get(e)
        if g is not None:
            word.append(g + 1 if d % 2 == 0 else -(g + 1))
    from .words import cyclic_reduce  # deferred: words type-checks against this module

    return cyclic_reduce(tuple(word))


# ---------------------------------------------------------------------------
# Human-readable loop notation: "A[110]*B[011]^-1" walks the A-edge leaving
# vertex 110, then the B-edge leaving 011 backwards.

_STEP_RE = re.compile(r"^([^\[\]]+)\[([^\[\]]+)\](\^-1)?$")


def render_loop(X: MetricGraph, word: CyclicWord) -> str:
    parts = []
    for d in word.darts:
        e = X.graph.edges[dart_edge(d)]
        origin = X.graph.vertices[e.origin]
        suffix = "" if d % 2 == 0 else "^-1"
        parts.append(f"{e.color}[{origin}]{suffix}")
    return "*".join(parts)


def parse_loop(X: MetricGraph, text: str) -> CyclicWord:
    """Inverse of render_loop; raises if the steps do not chain into a loop."""
    darts = []
    for step in text.split("*"):
        m = _STEP_RE.match(step.strip())
        if not m:
            raise ValueError(f"bad loop step {step!r}")
        color, label, inv = m.groups()
        v = X.graph.vertex_index(label)
        edge = X.graph.out_edge(v, color)
        darts.append(2 * edge.id + (1 if inv else 0))
    for i, d in enumerate(darts):
        nxt = darts[(i + 1) % len(darts)]
        if X.dart_target(d) != X.dart_origin(nxt):
            raise ValueError(f"steps {i} and {(i + 1) % len(darts)} do not chain")
    return CyclicWord.from_path(darts)
