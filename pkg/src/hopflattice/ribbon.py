"""Ciliated ribbon graphs, their faces, regularization, the thickening and
the distinguished paths in the thickening.

Conventions
-----------
* The slots at a vertex are numbered 0..n-1 counterclockwise, starting
  directly after the cilium.  Corner ``(v, k)`` is the sector just before
  slot ``k``; the cilium sits in corner ``(v, 0)``.
* An edge runs from ``(v, s)`` to ``(w, t)``: it leaves ``v`` at slot ``s``
  and arrives at ``w`` at slot ``t``.
* Faces turn maximally right: arriving through slot ``x``, a face leaves
  through slot ``x + 1``.  The face leaving through slot ``k`` occupies
  corner ``(v, k)``.
* Path words are tuples of letters ``(edge, exponent)`` written
  ``x1 o ... o xn``; the last letter is traversed first.
* In the thickening, edge ``e`` yields four edges with ids ``4e + k`` for
  ``k = 0, 1, 2, 3`` standing for ``r(e), l(e), r(ebar), l(ebar)``.  Its
  vertices are the corners of the graph.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

R, L, RB, LB = 0, 1, 2, 3
KIND_NAMES = {R: "r", L: "l", RB: "rbar", LB: "lbar"}
_REVERSED_KIND = {R: L, L: R, RB: LB, LB: RB}


class GraphFormatError(ValueError):
    pass


class NotRegular(ValueError):
    pass


# --------------------------------------------------------------------------
# graph type

@dataclass(frozen=True)
class CiliatedRibbonGraph:
    """Vertices with cilium-ordered half-edge lists and edges between slots.

    ``rotation[v][k] = (edge, end)`` with ``end`` 0 for the start of the edge
    and 1 for its end.  ``edges[e] = ((v, s), (w, t))``.
    """

    rotation: tuple
    edges: tuple
    label: str = "graph"

    def __post_init__(self):
        seen = set()
        for v, slots in enumerate(self.rotation):
            for k, (e, end) in enumerate(slots):
                if not 0 <= e < len(self.edges) or end not in (0, 1):
                    raise GraphFormatError(f"bad half-edge {(e, end)} at vertex {v}")
                if (e, end) in seen:
                    raise GraphFormatError(f"half-edge {(e, end)} appears twice")
                seen.add((e, end))
                if tuple(self.edges[e][end]) != (v, k):
                    raise GraphFormatError(
                        f"edge {e} end {end} recorded at {self.edges[e][end]}, found at {(v, k)}")
        if len(seen) != 2 * len(self.edges):
            raise GraphFormatError("some edge ends are not attached to a vertex")

    @staticmethod
    def from_rotation(rotation: Sequence[Sequence[tuple[int, int]]], label: str = "graph") -> "CiliatedRibbonGraph":
        n_edges = 1 + max((e for slots in rotation for e, _ in slots), default=-1)
        ends: list[list] = [[None, None] for _ in range(n_edges)]
        for v, slots in enumerate(rotation):
            for k, (e, end) in enumerate(slots):
                if ends[e][end] is not None:
                    raise GraphFormatError(f"half-edge {(e, end)} appears twice")
                ends[e][end] = (v, k)
        if any(x is None for pair in ends for x in pair):
            raise GraphFormatError("some edge ends are not attached to a vertex")
        return CiliatedRibbonGraph(
            tuple(tuple(tuple(h) for h in slots) for slots in rotation),
            tuple((tuple(a), tuple(b)) for a, b in ends),
            label,
        )

    @staticmethod
    def from_neighbours(order: Sequence[Sequence[int]], edge_list: Sequence[tuple[int, int]],
                        label: str = "graph") -> "CiliatedRibbonGraph":
        """Build from ccw neighbour lists (cilium before the first entry) of a simple graph."""
        index = {}
        for e, (a, b) in enumerate(edge_list):
            index[(a, b)] = (e, 0)
            index[(b, a)] = (e, 1)
        rotation = []
        for v, nbrs in enumerate(order):
            slots = []
            for w in nbrs:
                e, end = index[(v, w)]
                slots.append((e, end))
            rotation.append(slots)
        return CiliatedRibbonGraph.from_rotation(rotation, label)

    # --- basic data
    @property
    def n_vertices(self) -> int:
        return len(self.rotation)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def valence(self, v: int) -> int:
        return len(self.rotation[v])

    def source(self, e: int) -> int:
        return self.edges[e][0][0]

    def target(self, e: int) -> int:
        return self.edges[e][1][0]

    def incident(self, v: int) -> list[tuple[int, int]]:
        """Edges at ``v`` in slot order as ``(edge, eps)``; ``eps=+1`` if incoming."""
        return [(e, 1 if end == 1 else -1) for e, end in self.rotation[v]]

    def slot_of(self, e: int, v: int) -> int:
        (a, s), (b, t) = self.edges[e]
        if a == v:
            return s
        if b == v:
            return t
        raise ValueError(f"edge {e} is not incident at vertex {v}")

    def corner_index(self) -> dict[tuple[int, int], int]:
        out = {}
        for v, slots in enumerate(self.rotation):
            for k in range(len(slots)):
                out[(v, k)] = len(out)
        return out

    def rotate_cilium(self, v: int, shift: int) -> "CiliatedRibbonGraph":
        """Move the cilium at ``v`` forward by ``shift`` slots."""
        rot = [list(s) for s in self.rotation]
        n = len(rot[v])
        if n:
            shift %= n
            rot[v] = rot[v][shift:] + rot[v][:shift]
        return CiliatedRibbonGraph.from_rotation(rot, self.label)

    def with_label(self, label: str) -> "CiliatedRibbonGraph":
        return CiliatedRibbonGraph(self.rotation, self.edges, label)

    # --- JSON
    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "vertices": [{"halfedges": [2 * e + end for e, end in slots]} for slots in self.rotation],
            "edges": [{"from": list(a), "to": list(b)} for a, b in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def graph_from_json_dict(data: Mapping) -> CiliatedRibbonGraph:
    try:
        edges = [(tuple(int(x) for x in d["from"]), tuple(int(x) for x in d["to"])) for d in data["edges"]]
        rotation = []
        for vd in data["vertices"]:
            slots = []
            for h in vd["halfedges"]:
                e, end = divmod(int(h), 2)
                slots.append((e, end))
            rotation.append(tuple(slots))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"malformed graph JSON: {exc}") from exc
    if any(len(p) != 2 for a, b in edges for p in (a, b)):
        raise GraphFormatError("edge ends must be [vertex, slot] pairs")
    return CiliatedRibbonGraph(tuple(rotation), tuple(edges), str(data.get("label", "graph")))


def graph_from_json(text: str) -> CiliatedRibbonGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from exc
    return graph_from_json_dict(data)


# --------------------------------------------------------------------------
# faces

@dataclass(frozen=True)
class Face:
    """A face as a word ``e1^eps1 o ... o en^epsn`` (``en`` traversed first).

    ``corners[i]`` is the corner occupied just before traversing the i-th
    step in traversal order; ``cilium_anchor`` is set when the word starts
    and ends at a cilium.
    """

    word: tuple
    corners: tuple
    cilium_anchor: int | None = None

    @property
    def steps(self) -> tuple:
        """Signed edges in traversal order."""
        return tuple(reversed(self.word))

    def cilia(self) -> list[int]:
        return [v for v, k in self.corners if k == 0]


def _step(graph: CiliatedRibbonGraph, v: int, k: int) -> tuple[int, int, int, int]:
    """Leave ``v`` through slot ``k``; return (edge, eps, next vertex, arrival slot)."""
    e, end = graph.rotation[v][k]
    if end == 0:
        w, t = graph.edges[e][1]
        return e, 1, w, t
    w, t = graph.edges[e][0]
    return e, -1, w, t


def faces(graph: CiliatedRibbonGraph) -> list[Face]:
    """All faces, each rotated to start at its first cilium when it has one."""
    done = set()
    out = []
    for v in range(graph.n_vertices):
        for k in range(graph.valence(v)):
            if (v, k) in done:
                continue
            corners, steps = [], []
            cv, ck = v, k
            while (cv, ck) not in done:
                done.add((cv, ck))
                corners.append((cv, ck))
                e, eps, w, t = _step(graph, cv, ck)
                steps.append((e, eps))
                cv, ck = w, (t + 1) % graph.valence(w)
            anchor = None
            for i, (cv, ck) in enumerate(corners):
                if ck == 0:
                    corners = corners[i:] + corners[:i]
                    steps = steps[i:] + steps[:i]
                    anchor = cv
                    break
            out.append(Face(tuple(reversed(steps)), tuple(corners), anchor))
    return out


def ciliated_face(graph: CiliatedRibbonGraph, v: int) -> Face:
    """The face starting and ending at the cilium of ``v``."""
    if graph.valence(v) == 0:
        raise ValueError(f"vertex {v} has no incident edges")
    for f in faces(graph):
        for i, c in enumerate(f.corners):
            if c == (v, 0):
                corners = f.corners[i:] + f.corners[:i]
                steps = f.steps[i:] + f.steps[:i]
                return Face(tuple(reversed(steps)), corners, v)
    raise AssertionError("corner not covered by faces")


def euler_characteristic(graph: CiliatedRibbonGraph) -> int:
    return graph.n_vertices - graph.n_edges + len(faces(graph))


def connected_components(graph: CiliatedRibbonGraph) -> int:
    parent = list(range(graph.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, _), (b, _) in graph.edges:
        parent[find(a)] = find(b)
    return len({find(v) for v in range(graph.n_vertices)})


def genus(graph: CiliatedRibbonGraph) -> int:
    chi = euler_characteristic(graph)
    return (2 * connected_components(graph) - chi) // 2


# --------------------------------------------------------------------------
# regularity

@dataclass
class RegularityReport:
    regular: bool
    failures: list = field(default_factory=list)

    @property
    def failed_conditions(self) -> list[int]:
        return sorted({f["condition"] for f in self.failures})

    def to_json_dict(self) -> dict:
        return {"regular": self.regular, "failures": self.failures}


def _multi_edge_pairs(graph: CiliatedRibbonGraph) -> list[tuple[int, int]]:
    first: dict = {}
    pairs = []
    for e in range(graph.n_edges):
        a, b = graph.source(e), graph.target(e)
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key in first:
            pairs.append((first[key], e))
        else:
            first[key] = e
    return pairs


def check_regular(graph: CiliatedRibbonGraph) -> RegularityReport:
    failures = []
    for e in range(graph.n_edges):
        if graph.source(e) == graph.target(e):
            failures.append({"condition": 1, "kind": "loop", "edge": e})
    for e, f in _multi_edge_pairs(graph):
        failures.append({"condition": 1, "kind": "multiple edge", "edges": [e, f]})
    for i, face in enumerate(faces(graph)):
        counts: dict = {}
        for e, _ in face.word:
            counts[e] = counts.get(e, 0) + 1
        twice = sorted(e for e, c in counts.items() if c > 1)
        if twice:
            failures.append({"condition": 2, "kind": "edge traversed twice", "face": i, "edges": twice})
        ncil = len(face.cilia())
        if ncil != 1:
            failures.append({"condition": 3, "kind": f"{ncil} cilia in face", "face": i,
                             "cilia": face.cilia()})
    for v in range(graph.n_vertices):
        if graph.valence(v) == 0:
            failures.append({"condition": 3, "kind": "isolated vertex", "vertex": v})
    return RegularityReport(not failures, failures)


def is_regular(graph: CiliatedRibbonGraph) -> bool:
    return check_regular(graph).regular


# --------------------------------------------------------------------------
# local moves

def _insert_slot(rot: list[list], v: int, pos: int, half: tuple[int, int]) -> None:
    rot[v].insert(pos, half)


def _locate(rot: list[list], e: int, end: int) -> tuple[int, int]:
    for v, slots in enumerate(rot):
        for k, h in enumerate(slots):
            if h == (e, end):
                return v, k
    raise KeyError((e, end))


def subdivide_edge(graph: CiliatedRibbonGraph, e: int, cilium_forward: bool,
                   origin: list | None = None) -> tuple[CiliatedRibbonGraph, list]:
    """Insert a bivalent vertex on ``e``.

    The old edge keeps its start and becomes the first half; a new edge
    carries the second half.  The new cilium lies in the face traversing
    ``e`` forwards when ``cilium_forward`` is true.
    """
    origin = list(range(graph.n_edges)) if origin is None else list(origin)
    rot = [list(s) for s in graph.rotation]
    new_e = graph.n_edges
    u = len(rot)
    w, t = graph.edges[e][1]
    rot[w][t] = (new_e, 1)
    first_half, second_half = (e, 1), (new_e, 0)
    # the forward face arrives through e and leaves through the next slot
    rot.append([second_half, first_half] if cilium_forward else [first_half, second_half])
    origin.append(origin[e])
    return CiliatedRibbonGraph.from_rotation(rot, graph.label), origin


def double_edge(graph: CiliatedRibbonGraph, e: int,
                origin: list | None = None) -> tuple[CiliatedRibbonGraph, list, int]:
    """Add a parallel copy of ``e`` bounding a new two-sided face with ``e``."""
    origin = list(range(graph.n_edges)) if origin is None else list(origin)
    rot = [list(s) for s in graph.rotation]
    new_e = graph.n_edges
    (v, s), (w, t) = graph.edges[e]
    rot[v].insert(s + 1, (new_e, 0))
    if w == v and t > s:
        t += 1
    rot[w].insert(t, (new_e, 1))
    origin.append(None)
    return CiliatedRibbonGraph.from_rotation(rot, graph.label), origin, new_e


def _face_side(face: Face, e: int) -> int:
    for f, eps in face.word:
        if f == e:
            return eps
    raise KeyError(e)


def _cilium_count_by_side(graph: CiliatedRibbonGraph, e: int) -> dict[int, int]:
    out = {1: 0, -1: 0}
    for face in faces(graph):
        for f, eps in face.word:
            if f == e:
                out[eps] = max(out[eps], len(face.cilia()))
    return out


def star_subdivide_face(graph: CiliatedRibbonGraph, face: Face,
                        origin: list | None = None) -> tuple[CiliatedRibbonGraph, list]:
    """Add a vertex inside ``face`` joined to one corner of each vertex of the face.

    Cilium corners are always chosen, so every cilium of the face ends up in a
    different sub-face; the new cilium goes to a sub-face without one when
    possible.
    """
    origin = list(range(graph.n_edges)) if origin is None else list(origin)
    chosen = []
    seen = set()
    cil = {v for v, k in face.corners if k == 0}
    for v, k in face.corners:
        if v in seen:
            continue
        if v in cil and k != 0:
            continue
        seen.add(v)
        chosen.append((v, k))
    rot = [list(s) for s in graph.rotation]
    u = len(rot)
    spokes = []
    # insert from the highest slot down so earlier positions stay valid
    by_vertex = sorted(chosen, key=lambda c: (c[0], -c[1]))
    new_ids = {}
    for v, k in by_vertex:
        new_e = graph.n_edges + len(new_ids)
        new_ids[(v, k)] = new_e
        rot[v].insert(k, (new_e, 0))
        origin.append(None)
    # spokes around u are met clockwise when walking the face, so reverse
    for c in reversed(chosen):
        spokes.append((new_ids[c], 1))
    rot.append(spokes)
    g = CiliatedRibbonGraph.from_rotation(rot, graph.label)
    # pick the rotation at u whose corner 0 lies in a sub-face without cilia
    best = g
    for shift in range(len(spokes)):
        cand = g.rotate_cilium(u, shift)
        f = ciliated_face(cand, u)
        if len(f.cilia()) == 1:
            best = cand
            break
    return best, origin


@dataclass
class RegularizationResult:
    graph: CiliatedRibbonGraph
    origin: list
    log: list

    def to_json_dict(self) -> dict:
        return {"graph": self.graph.to_json_dict(), "origin": self.origin, "log": self.log}


def regularize(graph: CiliatedRibbonGraph, max_rounds: int = 64) -> RegularizationResult:
    """Apply loop subdivision, edge doubling, multi-edge subdivision, face
    subdivision and ciliated-vertex insertion until the graph is regular.

    ``origin[e]`` is the edge of the input graph that new edge ``e`` lies on,
    or None for edges added inside faces.
    """
    g = graph
    origin = list(range(graph.n_edges))
    log: list = []
    for _ in range(max_rounds):
        if is_regular(g):
            return RegularizationResult(g, origin, log)
        changed = False
        # (a) loops
        for e in range(g.n_edges):
            (v, s), (w, t) = g.edges[e]
            if v != w:
                continue
            n = g.valence(v)
            forward_inside = (t + 1) % n == s
            g, origin = subdivide_edge(g, e, cilium_forward=forward_inside or (s + 1) % n != t, origin=origin)
            log.append({"step": "a", "edge": e})
            changed = True
        if changed:
            continue
        # (b) edges traversed twice by one face
        for face in faces(g):
            counts: dict = {}
            for e, _ in face.word:
                counts[e] = counts.get(e, 0) + 1
            twice = sorted(e for e, c in counts.items() if c > 1)
            if twice:
                e = twice[0]
                g, origin, new_e = double_edge(g, e, origin)
                g, origin = subdivide_edge(g, new_e, cilium_forward=True, origin=origin)
                log.append({"step": "b", "edge": e})
                changed = True
                break
        if changed:
            continue
        # (c) multiple edges: subdivide the lower-numbered edge of the first pair
        pairs = _multi_edge_pairs(g)
        if pairs:
            e, f = pairs[0]
            sides = _cilium_count_by_side(g, e)
            g, origin = subdivide_edge(g, e, cilium_forward=sides[1] <= sides[-1], origin=origin)
            log.append({"step": "c", "edges": [e, f], "subdivided": e})
            continue
        # (d) faces with several cilia
        for i, face in enumerate(faces(g)):
            if len(face.cilia()) > 1:
                g, origin = star_subdivide_face(g, face, origin)
                log.append({"step": "d", "face": i, "cilia": face.cilia()})
                changed = True
                break
        if changed:
            continue
        # (e) faces without cilia
        for i, face in enumerate(faces(g)):
            if not face.cilia():
                e, eps = face.word[-1]
                g, origin = subdivide_edge(g, e, cilium_forward=eps == 1, origin=origin)
                log.append({"step": "e", "face": i, "edge": e})
                changed = True
                break
        if not changed:
            break
    if not is_regular(g):
        raise RuntimeError("regularization did not converge")
    return RegularizationResult(g, origin, log)


# --------------------------------------------------------------------------
# global edge order

def reverse_edge(graph: CiliatedRibbonGraph, e: int) -> CiliatedRibbonGraph:
    """The same ribbon graph with the orientation of edge ``e`` reversed."""
    rot = [[(f, 1 - end) if f == e else (f, end) for f, end in slots] for slots in graph.rotation]
    return CiliatedRibbonGraph.from_rotation(rot, graph.label)


def edge_order(graph: CiliatedRibbonGraph) -> list[int] | None:
    """A linear order on edges with e before f whenever both meet at a vertex
    where e has the lower slot; None when no such order exists."""
    succ: list[set] = [set() for _ in range(graph.n_edges)]
    indeg = [0] * graph.n_edges
    for slots in graph.rotation:
        for a in range(len(slots)):
            for b in range(a + 1, len(slots)):
                e, f = slots[a][0], slots[b][0]
                if e != f and f not in succ[e]:
                    succ[e].add(f)
                    indeg[f] += 1
    heap = [e for e in range(graph.n_edges) if indeg[e] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        e = heapq.heappop(heap)
        out.append(e)
        for f in sorted(succ[e]):
            indeg[f] -= 1
            if indeg[f] == 0:
                heapq.heappush(heap, f)
    return out if len(out) == graph.n_edges else None


# --------------------------------------------------------------------------
# paths

def inverse_word(word: Sequence[tuple[int, int]]) -> tuple:
    return tuple((e, -x) for e, x in reversed(word))


def reduce_word(word: Iterable[tuple[int, int]]) -> tuple:
    out: list = []
    for e, x in word:
        if out and out[-1] == (e, -x):
            out.pop()
        else:
            out.append((e, x))
    return tuple(out)


def compose(*words: Sequence[tuple[int, int]]) -> tuple:
    """Concatenate ``w1 o w2 o ...`` (the last word is traversed first)."""
    out: list = []
    for w in words:
        out.extend(w)
    return tuple(out)


@dataclass(frozen=True)
class PathWord:
    word: tuple
    graph: CiliatedRibbonGraph | None = None

    def __len__(self) -> int:
        return len(self.word)

    def inverse(self) -> "PathWord":
        return PathWord(inverse_word(self.word), self.graph)

    def reduced(self) -> "PathWord":
        return PathWord(reduce_word(self.word), self.graph)

    def __matmul__(self, other: "PathWord") -> "PathWord":
        return PathWord(compose(self.word, other.word), self.graph or other.graph)

    def endpoints(self):
        if self.graph is None:
            raise ValueError("path has no graph")
        return word_endpoints(self.graph, self.word)

    def composable(self) -> bool:
        if self.graph is None:
            raise ValueError("path has no graph")
        return is_composable(self.graph, self.word)


def _letter_ends(graph: CiliatedRibbonGraph, letter: tuple[int, int]) -> tuple[int, int]:
    e, x = letter
    a, b = graph.source(e), graph.target(e)
    return (a, b) if x == 1 else (b, a)


def is_composable(graph: CiliatedRibbonGraph, word: Sequence[tuple[int, int]]) -> bool:
    for left, right in zip(word, word[1:]):
        if _letter_ends(graph, right)[1] != _letter_ends(graph, left)[0]:
            return False
    return True


def word_endpoints(graph: CiliatedRibbonGraph, word: Sequence[tuple[int, int]]):
    """(start, end) vertices of a composable word."""
    if not word:
        return None
    return _letter_ends(graph, word[-1])[0], _letter_ends(graph, word[0])[1]


def thick_letter(kind: int, e: int, eps: int = 1) -> tuple[int, int]:
    """Letter for ``kind(e^eps)`` using r(e^-1) = l(e)^-1 and r(ebar^-1) = l(ebar)^-1."""
    if eps == 1:
        return (4 * e + kind, 1)
    return (4 * e + _REVERSED_KIND[kind], -1)


def letter_name(letter: tuple[int, int]) -> str:
    t, x = letter
    e, k = divmod(t, 4)
    s = f"{KIND_NAMES[k]}({e})"
    return s if x == 1 else s + "^-1"


def word_name(word: Sequence[tuple[int, int]]) -> str:
    return " o ".join(letter_name(x) for x in word) if word else "1"


# --------------------------------------------------------------------------
# thickening

@dataclass(frozen=True)
class ThickenedGraph:
    base: CiliatedRibbonGraph
    graph: CiliatedRibbonGraph
    corner_ids: dict

    def st(self, t: int) -> int:
        return self.graph.source(t)

    def ta(self, t: int) -> int:
        return self.graph.target(t)

    def classify_faces(self) -> list[tuple[str, int]]:
        """Each face of the thickening as ('edge', e), ('vertex', v) or ('face', i)."""
        base_faces = faces(self.base)
        corner_face = {}
        for i, f in enumerate(base_faces):
            for c in f.corners:
                corner_face[c] = i
        inv_corner = {i: c for c, i in self.corner_ids.items()}
        out = []
        for f in faces(self.graph):
            kinds = {t % 4 for t, _ in f.word}
            edges = {t // 4 for t, _ in f.word}
            if len(edges) == 1 and kinds == {R, L, RB, LB}:
                out.append(("edge", next(iter(edges))))
            elif kinds <= {RB, LB}:
                verts = {inv_corner[c][0] for c, _ in f.corners}
                out.append(("vertex", verts.pop()) if len(verts) == 1 else ("unknown", -1))
            elif kinds <= {R, L}:
                fs = {corner_face[inv_corner[c]] for c, _ in f.corners}
                out.append(("face", fs.pop()) if len(fs) == 1 else ("unknown", -1))
            else:
                out.append(("unknown", -1))
        return out


def thicken(graph: CiliatedRibbonGraph, require_regular: bool = True) -> ThickenedGraph:
    if require_regular:
        rep = check_regular(graph)
        if not rep.regular:
            raise NotRegular(f"graph is not regular: conditions {rep.failed_conditions} fail")
    cid = graph.corner_index()
    ends: dict = {}
    for e, ((v, s), (w, t)) in enumerate(graph.edges):
        nv, nw = graph.valence(v), graph.valence(w)
        ends[4 * e + R] = (cid[(v, s)], cid[(w, (t + 1) % nw)])
        ends[4 * e + L] = (cid[(v, (s + 1) % nv)], cid[(w, t)])
        ends[4 * e + RB] = (cid[(w, (t + 1) % nw)], cid[(w, t)])
        ends[4 * e + LB] = (cid[(v, s)], cid[(v, (s + 1) % nv)])
    # slot order at corner (v, k): along the edge at slot k-1, along the edge
    # at slot k, polygon edge towards corner k+1, polygon edge towards k-1
    rotation = []
    for v, slots in enumerate(graph.rotation):
        n = len(slots)
        for k in range(n):
            g, gend = slots[(k - 1) % n]
            h, hend = slots[k]
            along_g = (4 * g + L, 0) if gend == 0 else (4 * g + R, 1)
            along_h = (4 * h + R, 0) if hend == 0 else (4 * h + L, 1)
            poly_next = (4 * h + LB, 0) if hend == 0 else (4 * h + RB, 1)
            poly_prev = (4 * g + LB, 1) if gend == 0 else (4 * g + RB, 0)
            rotation.append([along_g, along_h, poly_next, poly_prev])
    tg = CiliatedRibbonGraph.from_rotation(rotation, f"thick({graph.label})")
    for t, (a, b) in ends.items():
        if (tg.source(t), tg.target(t)) != (a, b):
            raise AssertionError(f"thickened edge {t} has inconsistent ends")
    return ThickenedGraph(graph, tg, cid)


def incidence_identities(th: ThickenedGraph) -> bool:
    """st(rbar)=ta(r), ta(rbar)=ta(l), st(lbar)=st(r), ta(lbar)=st(l) for every edge."""
    for e in range(th.base.n_edges):
        r, l, rb, lb = (4 * e + k for k in range(4))
        if not (th.st(rb) == th.ta(r) and th.ta(rb) == th.ta(l)
                and th.st(lb) == th.st(r) and th.ta(lb) == th.st(l)):
            return False
    return True


# --------------------------------------------------------------------------
# distinguished paths

def _lower_polygon(graph: CiliatedRibbonGraph, v: int, count: int) -> tuple:
    """r(ebar_1^eps_1) o ... o r(ebar_count^eps_count) at ``v``; runs corner count -> 0."""
    return tuple(thick_letter(RB, e, eps) for e, eps in graph.incident(v)[:count])


def vertex_loop(graph: CiliatedRibbonGraph, v: int) -> tuple:
    return _lower_polygon(graph, v, graph.valence(v))


def face_loop(graph: CiliatedRibbonGraph, face: Face | int) -> tuple:
    """p_f for a ciliated face (or for the ciliated face at vertex ``face``)."""
    if isinstance(face, int):
        face = ciliated_face(graph, face)
    if face.cilium_anchor is None or face.corners[0][1] != 0:
        raise ValueError("face is not anchored at a cilium")
    return tuple(thick_letter(R, e, eps) for e, eps in face.word)


def edge_paths(graph: CiliatedRibbonGraph, e: int, eps: int = 1) -> tuple[tuple, tuple]:
    """(p_{e,+}, p_{e,-}) for the edge ``e^eps``."""
    (v, s), (w, t) = graph.edges[e]
    if eps == -1:
        (v, s), (w, t) = (w, t), (v, s)
    p_t = _lower_polygon(graph, w, t)
    p_s = _lower_polygon(graph, v, s)
    plus = compose(p_t, (thick_letter(RB, e, eps), thick_letter(R, e, eps)), inverse_word(p_s))
    minus = compose(p_t, (thick_letter(L, e, eps), thick_letter(LB, e, eps)), inverse_word(p_s))
    return plus, minus


def nb_path(graph: CiliatedRibbonGraph, v: int, i: int, sigma: int) -> tuple:
    """Vertex-neighbourhood path p_{e_i, sigma} for the i-th edge (1-based) at ``v``."""
    inc = graph.incident(v)
    if not 1 <= i <= len(inc):
        raise IndexError(f"edge index {i} out of range for a vertex of valence {len(inc)}")
    if sigma not in (0, 1):
        raise ValueError("sigma must be 0 or 1")
    prefix = _lower_polygon(graph, v, i - 1)
    e, eps = inc[i - 1]
    if sigma == 0:
        return compose(prefix, (thick_letter(RB, e, eps), thick_letter(R, e, eps)))
    return compose(prefix, (thick_letter(L, e, eps),))


def is_ribbon_path(word: Sequence[tuple[int, int]]) -> bool:
    """Each thickened edge at most once, and per base edge either {r, l} or {rbar, lbar}."""
    seen = set()
    family: dict = {}
    for t, _ in word:
        if t in seen:
            return False
        seen.add(t)
        e, k = divmod(t, 4)
        fam = k >= 2
        if family.setdefault(e, fam) != fam:
            return False
    return True


# --------------------------------------------------------------------------
# catalog

def _search_cilia(graph: CiliatedRibbonGraph) -> CiliatedRibbonGraph:
    """Rotate cilia (first hit in lexicographic order) so the graph is regular
    and admits a global edge order."""
    n = graph.n_vertices
    shifts = [0] * n

    def rec(v, g):
        if v == n:
            return g if is_regular(g) and edge_order(g) is not None else None
        for s in range(g.valence(v)):
            res = rec(v + 1, g.rotate_cilium(v, s) if s else g)
            if res is not None:
                return res
        return None

    found = rec(0, graph)
    if found is None:
        raise NotRegular("no cilium assignment makes this graph regular")
    return found


def tetrahedron() -> CiliatedRibbonGraph:
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3)]
    order = [[1, 2, 3], [2, 0, 3], [3, 0, 1], [1, 0, 2]]
    return _search_cilia(CiliatedRibbonGraph.from_neighbours(order, edges, "tetrahedron"))


def pyramid() -> CiliatedRibbonGraph:
    edges = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (1, 4)]
    order = [[1, 2, 3, 4]]
    for k in range(1, 5):
        nxt = k % 4 + 1
        prv = (k - 2) % 4 + 1
        order.append([nxt, 0, prv])
    return _search_cilia(CiliatedRibbonGraph.from_neighbours(order, edges, "pyramid"))


def torus(n: int, m: int) -> CiliatedRibbonGraph:
    """n x m square lattice on the torus; the cilium at each vertex points into
    the square having that vertex as its lower-left corner."""
    if n < 3 or m < 3:
        raise NotRegular(f"torus-{n}-{m} has multiple edges; need n, m >= 3")

    def vid(i, j):
        return (i % n) * m + (j % m)

    edges = []
    hor, ver = {}, {}
    for i in range(n):
        for j in range(m):
            hor[(i, j)] = len(edges)
            edges.append((vid(i, j), vid(i + 1, j)))
            ver[(i, j)] = len(edges)
            edges.append((vid(i, j), vid(i, j + 1)))
    rotation = [None] * (n * m)
    for i in range(n):
        for j in range(m):
            # counterclockwise N, W, S, E so the cilium sits between E and N
            rotation[vid(i, j)] = [
                (ver[(i, j)], 0),
                (hor[((i - 1) % n, j)], 1),
                (ver[(i, (j - 1) % m)], 1),
                (hor[(i, j)], 0),
            ]
    return CiliatedRibbonGraph.from_rotation(rotation, f"torus-{n}-{m}")


def star(n: int, outgoing: Sequence[int] = ()) -> CiliatedRibbonGraph:
    """Central vertex 0 with ``n`` leaves; edge i-1 joins leaf i to the centre
    and is incoming at the centre unless i-1 is listed in ``outgoing``."""
    if n < 1:
        raise ValueError("a star needs at least one edge")
    edges = []
    for i in range(1, n + 1):
        edges.append((0, i) if (i - 1) in set(outgoing) else (i, 0))
    order = [list(range(1, n + 1))] + [[0] for _ in range(n)]
    return CiliatedRibbonGraph.from_neighbours(order, edges, f"star-{n}")


def builtin_graph(name: str) -> CiliatedRibbonGraph:
    if name == "tetrahedron":
        return tetrahedron()
    if name == "pyramid":
        return pyramid()
    if name.startswith("torus-"):
        parts = name.split("-")
        if len(parts) != 3:
            raise KeyError(name)
        return torus(int(parts[1]), int(parts[2]))
    if name.startswith("star-"):
        return star(int(name.split("-")[1]))
    raise KeyError(name)


BUILTIN_GRAPHS = ("tetrahedron", "pyramid", "torus-n-m", "star-n")
