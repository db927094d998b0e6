"""Bonded-diagram data model: a planar rotation system with typed edges.

A diagram is a combinatorial map.  Edges are ``link`` or ``bond`` arcs; each
edge has two half-edges (darts) ``(edge_id, 0)`` and ``(edge_id, 1)``.  Darts
sit in vertex slots:

- ``Crossing`` holds four darts in counterclockwise rotation with an over
  pair ({0,2} or {1,3} by slot index),
- ``Node`` is the trivalent endpoint of a bond (two link darts + one bond
  dart, cyclic rotation as stored),
- ``FreeLoop`` marks a crossing-free circle carrying no darts at all.

Faces are the orbits of "rotate after flipping to the other end", and every
connected component must satisfy V - E + F = 2 (diagrams live on spheres).

Bonds may be cut into several bond edges by crossings; a maximal run of bond
edges through crossings is a *bond chain* and must terminate at two distinct
nodes.  A diagram is *standard* when no crossing involves two bond strands
and *tight* when no crossing involves a bond strand at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

__all__ = [
    "Dart",
    "EdgeRecord",
    "Crossing",
    "Node",
    "FreeLoop",
    "BondedDiagram",
    "validate",
    "faces",
    "underlying_link",
    "writhe",
    "gen_example",
    "parse_bpd",
    "to_bpd",
    "LINK",
    "BOND",
]

Dart = tuple[int, int]

LINK = "link"
BOND = "bond"

PLAIN = "plain"
ATTRACTING = "attracting"
REPELLING = "repelling"

_SIGN_TEXT = {ATTRACTING: "+", REPELLING: "-"}
_TEXT_SIGN = {"+": ATTRACTING, "-": REPELLING}


@dataclass(frozen=True)
class EdgeRecord:
    kind: str
    sign: str = PLAIN


@dataclass(frozen=True)
class Crossing:
    darts: tuple[Dart, Dart, Dart, Dart]  # counterclockwise rotation
    over: frozenset  # frozenset({0, 2}) or frozenset({1, 3})

    def is_over_slot(self, slot: int) -> bool:
        return slot in self.over


@dataclass(frozen=True)
class Node:
    rotation: tuple[Dart, Dart, Dart]  # cyclic order as embedded


@dataclass(frozen=True)
class FreeLoop:
    component: int


Vertex = Crossing | Node | FreeLoop

OVER_02 = frozenset({0, 2})
OVER_13 = frozenset({1, 3})


class BondedDiagram:
    """Immutable-by-convention bonded diagram.

    ``edges``       edge id -> EdgeRecord
    ``vertices``    vertex id -> Crossing | Node | FreeLoop
    ``orientation`` link component id -> tuple of darts (edge, tail_end)
                    listed in traversal order; the edge is directed from its
                    tail end to the other end.  FreeLoop components map to ().
    """

    __slots__ = ("edges", "vertices", "orientation", "_pos")

    def __init__(self, edges, vertices, orientation=None):
        self.edges: dict[int, EdgeRecord] = dict(edges)
        self.vertices: dict[int, Vertex] = dict(vertices)
        self.orientation: dict[int, tuple[Dart, ...]] = {
            c: tuple(ds) for c, ds in (orientation or {}).items()
        }
        self._pos: Optional[dict[Dart, tuple[int, int]]] = None

    # -- basic structure ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BondedDiagram)
            and self.edges == other.edges
            and self.vertices == other.vertices
            and self.orientation == other.orientation
        )

    def __repr__(self) -> str:
        return (
            f"<BondedDiagram {len(self.edges)} edges, "
            f"{len(self.vertices)} vertices, {self.bond_count()} bonds>"
        )

    def dart_positions(self) -> dict[Dart, tuple[int, int]]:
        """Map dart -> (vertex id, slot index)."""
        if self._pos is None:
            pos: dict[Dart, tuple[int, int]] = {}
            for vid, v in self.vertices.items():
                for slot, d in enumerate(_vertex_darts(v)):
                    pos[d] = (vid, slot)
            self._pos = pos
        return self._pos

    def rotation_next(self, dart: Dart) -> Dart:
        vid, slot = self.dart_positions()[dart]
        darts = _vertex_darts(self.vertices[vid])
        return darts[(slot + 1) % len(darts)]

    def crossing_ids(self) -> list[int]:
        return [vid for vid, v in self.vertices.items() if isinstance(v, Crossing)]

    def node_ids(self) -> list[int]:
        return [vid for vid, v in self.vertices.items() if isinstance(v, Node)]

    def node_bond_dart(self, vid: int) -> Dart:
        node = self.vertices[vid]
        for d in node.rotation:
            if self.edges[d[0]].kind == BOND:
                return d
        raise ValueError(f"node {vid} has no bond dart")

    def node_link_darts(self, vid: int) -> tuple[Dart, Dart]:
        node = self.vertices[vid]
        ds = [d for d in node.rotation if self.edges[d[0]].kind == LINK]
        return (ds[0], ds[1])

    # -- strands and bonds -------------------------------------------------

    def through(self, dart: Dart) -> Optional[Dart]:
        """Continuation dart of the strand entering a vertex at ``dart``.

        At a crossing the strand exits at the opposite slot; at a node a link
        strand continues through the two link slots; bond darts at nodes and
        anything else terminate (None).
        """
        vid, slot = self.dart_positions()[dart]
        v = self.vertices[vid]
        if isinstance(v, Crossing):
            return v.darts[(slot + 2) % 4]
        if isinstance(v, Node):
            if self.edges[dart[0]].kind == BOND:
                return None
            a, b = self.node_link_darts(vid)
            return b if dart == a else a
        return None

    def bond_chains(self) -> list[tuple[tuple[int, ...], int, int]]:
        """Maximal runs of bond edges through crossings.

        Returns (edge ids along the chain, node id at start, node id at end).
        """
        chains = []
        seen: set[int] = set()
        pos = self.dart_positions()
        for vid in self.node_ids():
            d = self.node_bond_dart(vid)
            if d[0] in seen:
                continue
            edge_ids = []
            cur = (d[0], 1 - d[1])  # walk away from this node
            edge_ids.append(d[0])
            while True:
                seen.add(cur[0])
                nxt = self.through(cur)
                if nxt is None:
                    break
                cur = (nxt[0], 1 - nxt[1])
                edge_ids.append(nxt[0])
            end_vid = pos[cur][0]
            chains.append((tuple(edge_ids), vid, end_vid))
        # deduplicate: each chain found from both ends
        uniq = {}
        for ch in chains:
            key = tuple(sorted(ch[0]))
            if key not in uniq:
                uniq[key] = ch
        return sorted(uniq.values())

    def bond_count(self) -> int:
        return len(self.bond_chains())

    def crossing_kinds(self, vid: int) -> tuple[str, str]:
        """Edge kinds of the two strands (slots 0/2 and 1/3) at a crossing."""
        v = self.vertices[vid]
        return (self.edges[v.darts[0][0]].kind, self.edges[v.darts[1][0]].kind)

    def is_standard(self) -> bool:
        for vid in self.crossing_ids():
            kinds = self.crossing_kinds(vid)
            if kinds == (BOND, BOND):
                return False
        return True

    def is_tight(self) -> bool:
        for vid in self.crossing_ids():
            if BOND in self.crossing_kinds(vid):
                return False
        return True

    def is_classical(self) -> bool:
        return not any(rec.kind == BOND for rec in self.edges.values())

    # -- orientation helpers -----------------------------------------------

    def edge_tail(self) -> dict[int, int]:
        """Edge id -> tail end for every oriented (link) edge."""
        tails = {}
        for darts in self.orientation.values():
            for e, t in darts:
                tails[e] = t
        return tails

    def dart_is_incoming(self, dart: Dart) -> Optional[bool]:
        """True if the edge is directed into the vertex holding ``dart``."""
        tails = self.edge_tail()
        e, end = dart
        if e not in tails:
            return None
        return end != tails[e]

    def link_components(self) -> list[list[Dart]]:
        """Link strands as dart cycles (each dart = (edge, tail end))."""
        out = []
        visited: set[int] = set()
        for e, rec in sorted(self.edges.items()):
            if rec.kind != LINK or e in visited:
                continue
            cycle = []
            dart = (e, 0)
            while True:
                visited.add(dart[0])
                cycle.append(dart)
                head = (dart[0], 1 - dart[1])
                nxt = self.through(head)
                if nxt is None:
                    raise ValueError("open link strand")
                dart = nxt
                if dart[0] == e and dart == (e, 0):
                    break
            out.append(cycle)
        return out

    def with_orientation(self, orientation) -> "BondedDiagram":
        return BondedDiagram(self.edges, self.vertices, orientation)

    def orient_arbitrarily(self) -> "BondedDiagram":
        """Complete the orientation with deterministic arbitrary choices.

        Components are renumbered 0.. (link strands first, then free loops,
        whose stored component ids are rewritten to match).
        """
        orient: dict[int, tuple[Dart, ...]] = {}
        comp = 0
        for cycle in self.link_components():
            orient[comp] = tuple(cycle)
            comp += 1
        vertices = dict(self.vertices)
        for vid in sorted(vertices):
            if isinstance(vertices[vid], FreeLoop):
                vertices[vid] = FreeLoop(comp)
                orient[comp] = ()
                comp += 1
        return BondedDiagram(self.edges, vertices, orient)

    def free_loop_count(self) -> int:
        return sum(1 for v in self.vertices.values() if isinstance(v, FreeLoop))

    def component_count(self) -> int:
        return len(self.link_components()) + self.free_loop_count()


def _vertex_darts(v: Vertex) -> tuple[Dart, ...]:
    if isinstance(v, Crossing):
        return v.darts
    if isinstance(v, Node):
        return v.rotation
    return ()


# -- faces and planarity ---------------------------------------------------


def faces(d: BondedDiagram) -> list[tuple[Dart, ...]]:
    """Faces of the rotation system, each a cyclic dart walk.

    FreeLoop circles carry no darts and contribute two implicit faces on
    their own sphere; they are not listed here.
    """
    pos = d.dart_positions()
    seen: set[Dart] = set()
    out = []
    for start in sorted(pos):
        if start in seen:
            continue
        walk = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            walk.append(cur)
            cur = d.rotation_next((cur[0], 1 - cur[1]))
        out.append(tuple(walk))
    return out


def _connected_components(d: BondedDiagram) -> list[set[int]]:
    """Connected components of the vertex/edge incidence graph (vertex ids)."""
    pos = d.dart_positions()
    adj: dict[int, set[int]] = {vid: set() for vid in d.vertices}
    for e in d.edges:
        (v0, _), (v1, _) = pos[(e, 0)], pos[(e, 1)]
        adj[v0].add(v1)
        adj[v1].add(v0)
    comps = []
    left = set(adj)
    while left:
        start = left.pop()
        comp = {start}
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        left -= comp
        comps.append(comp)
    return comps


def validate(d: BondedDiagram) -> list[str]:
    """All invariant violations (empty list == ok)."""
    violations: list[str] = []
    # dart bookkeeping: every edge has exactly its two darts placed once
    placed: dict[Dart, int] = {}
    for vid, v in d.vertices.items():
        for dart in _vertex_darts(v):
            placed[dart] = placed.get(dart, 0) + 1
            if dart[0] not in d.edges:
                violations.append(f"dart {dart} references unknown edge")
    for e in d.edges:
        for end in (0, 1):
            n = placed.pop((e, end), 0)
            if n != 1:
                violations.append(f"edge {e} end {end} placed {n} times")
    for dart in placed:
        violations.append(f"dart {dart} of unknown edge placed")
    if violations:
        return violations

    # edge kinds at vertices
    for vid, v in d.vertices.items():
        if isinstance(v, Crossing):
            k0, k2 = d.edges[v.darts[0][0]].kind, d.edges[v.darts[2][0]].kind
            k1, k3 = d.edges[v.darts[1][0]].kind, d.edges[v.darts[3][0]].kind
            if k0 != k2 or k1 != k3:
                violations.append(f"bond endpoint not at Node (crossing {vid})")
            if v.over not in (OVER_02, OVER_13):
                violations.append(f"crossing {vid} has bad over pair")
        elif isinstance(v, Node):
            kinds = sorted(d.edges[dd[0]].kind for dd in v.rotation)
            if kinds != [BOND, LINK, LINK]:
                violations.append(f"node {vid} is not link/link/bond")

    # bond chains terminate at distinct nodes with a uniform sign
    try:
        chains = d.bond_chains()
    except (ValueError, KeyError):
        chains = None
        violations.append("bond connectivity broken")
    if chains is not None:
        chained: set[int] = set()
        for edge_ids, n1, n2 in chains:
            chained.update(edge_ids)
            if n1 == n2:
                violations.append(f"bond chain {edge_ids} has coincident nodes")
            signs = {d.edges[e].sign for e in edge_ids}
            if len(signs) != 1:
                violations.append(f"bond chain {edge_ids} mixes signs")
        for e, rec in d.edges.items():
            if rec.kind == BOND and e not in chained:
                violations.append(f"bond edge {e} not attached to any node")

    # orientation
    tails = d.edge_tail()
    link_edges = {e for e, rec in d.edges.items() if rec.kind == LINK}
    if d.orientation:
        oriented = set(tails)
        if oriented != link_edges:
            missing = sorted(link_edges - oriented)
            extra = sorted(oriented - link_edges)
            if missing:
                violations.append(f"unoriented link edges {missing}")
            if extra:
                violations.append(f"orientation on non-link edges {extra}")
        pos = d.dart_positions()
        for comp, darts in d.orientation.items():
            for i, (e, t) in enumerate(darts):
                head = (e, 1 - t)
                nxt = d.through(head)
                want = darts[(i + 1) % len(darts)]
                if nxt != want:
                    violations.append(
                        f"component {comp} breaks at edge {e}"
                    )
                    break
        for vid in d.node_ids():
            a, b = d.node_link_darts(vid)
            inc_a, inc_b = d.dart_is_incoming(a), d.dart_is_incoming(b)
            if inc_a is not None and inc_b is not None and inc_a == inc_b:
                violations.append(f"node {vid} link edges not in->out")

    # planarity: Euler formula per connected component
    if not violations:
        face_list = faces(d)
        pos = d.dart_positions()
        for comp in _connected_components(d):
            vs = [vid for vid in comp if not isinstance(d.vertices[vid], FreeLoop)]
            if not vs:
                continue  # isolated FreeLoop: V=0, E=0, F=2 trivially
            es = {e for e in d.edges if pos[(e, 0)][0] in comp}
            fs = [f for f in face_list if pos[(f[0][0], f[0][1])][0] in comp]
            euler = len(vs) - len(es) + len(fs)
            if euler != 2:
                violations.append(
                    f"component with vertices {sorted(vs)} has Euler number {euler}"
                )
    return violations


# -- derived diagrams ------------------------------------------------------


def _fuse_pairs(
    d: BondedDiagram,
    keep_vertices: dict[int, Vertex],
    fusions: list[tuple[Dart, Dart]],
    drop_edges: set[int],
) -> BondedDiagram:
    """Rebuild a diagram after deleting edges and fusing dart pairs.

    ``fusions`` lists pairs of darts whose edges become one strand (the two
    darts are the ends that used to meet at a removed vertex).  Chains of
    fusions collapse to single edges; closed chains become FreeLoops.
    """
    mate: dict[Dart, Dart] = {}
    for e, rec in d.edges.items():
        if e in drop_edges:
            continue
        mate[(e, 0)] = (e, 1)
        mate[(e, 1)] = (e, 0)
    link: dict[Dart, Dart] = {}  # fusion partner of each dart
    for a, b in fusions:
        link[a] = b
        link[b] = a

    new_edges: dict[int, EdgeRecord] = {}
    dart_map: dict[Dart, Dart] = {}
    free_loops = 0
    used: set[Dart] = set()
    next_eid = 0
    for e in sorted(d.edges):
        if e in drop_edges:
            continue
        for end in (0, 1):
            start = (e, end)
            if start in used or start in link:
                continue
            # walk: start is a free terminus of a fused chain
            cur = start
            chain = [cur]
            while mate[cur] in link:
                cur = link[mate[cur]]
                chain.append(cur)
            terminus = mate[cur]
            eid = next_eid
            next_eid += 1
            new_edges[eid] = d.edges[e]
            dart_map[start] = (eid, 0)
            dart_map[terminus] = (eid, 1)
            used.update(chain)
            used.add(terminus)
            for c in chain:
                used.add(mate[c])
    # closed chains (every dart fused) -> free loops
    for e in sorted(d.edges):
        if e in drop_edges:
            continue
        for end in (0, 1):
            start = (e, end)
            if start in used:
                continue
            cur = start
            while True:
                used.add(cur)
                used.add(mate[cur])
                nxt = link[mate[cur]]
                cur = nxt
                if cur == start:
                    break
            free_loops += 1

    out_vertices: dict[int, Vertex] = {}
    for vid, v in keep_vertices.items():
        if isinstance(v, Crossing):
            out_vertices[vid] = Crossing(
                tuple(dart_map[dd] for dd in v.darts), v.over
            )
        elif isinstance(v, Node):
            out_vertices[vid] = Node(tuple(dart_map[dd] for dd in v.rotation))
        else:
            out_vertices[vid] = v
    base = max(out_vertices, default=-1) + 1
    comp_base = 10_000
    for i in range(free_loops):
        out_vertices[base + i] = FreeLoop(comp_base + i)
    result = BondedDiagram(new_edges, out_vertices)
    return result.orient_arbitrarily()


def underlying_link(d: BondedDiagram) -> BondedDiagram:
    """Remove all bonds; fuse the link strands at every node."""
    drop: set[int] = {e for e, rec in d.edges.items() if rec.kind == BOND}
    fusions: list[tuple[Dart, Dart]] = []
    keep: dict[int, Vertex] = {}
    for vid, v in d.vertices.items():
        if isinstance(v, Node):
            a, b = d.node_link_darts(vid)
            fusions.append((a, b))
        elif isinstance(v, Crossing):
            kinds = d.crossing_kinds(vid)
            if kinds == (LINK, LINK):
                keep[vid] = v
            elif BOND in kinds:
                # a bond strand crosses here; the transverse link strand (if
                # any) is re-fused straight through
                for s in (0, 1):
                    if kinds[s] == LINK:
                        fusions.append((v.darts[s], v.darts[s + 2]))
        else:
            keep[vid] = v
    return _fuse_pairs(d, keep, fusions, drop)


def writhe(d: BondedDiagram) -> int:
    """Sum of crossing signs over oriented link-link crossings."""
    total = 0
    for vid in d.crossing_ids():
        total += crossing_sign(d, vid) or 0
    return total


def crossing_sign(d: BondedDiagram, vid: int) -> Optional[int]:
    """Sign of a link-link crossing, or None if a bond strand is involved
    or a strand is unoriented."""
    v = d.vertices[vid]
    if BOND in d.crossing_kinds(vid):
        return None
    outgoing = []
    for slot, dart in enumerate(v.darts):
        inc = d.dart_is_incoming(dart)
        if inc is None:
            return None
        if not inc:
            outgoing.append(slot)
    over_out = next(s for s in outgoing if s in v.over)
    under_out = next(s for s in outgoing if s not in v.over)
    return 1 if (over_out - under_out) % 4 == 1 else -1


# -- example generators ----------------------------------------------------


def gen_example(family: str, n: int, sign: str = PLAIN) -> BondedDiagram:
    """The two bracket example families.

    ``U``: a crossingless circle with ``n`` tight bonds chording it as
    ladder rungs.  ``K``: two crossingless circles joined by ``n`` parallel
    tight bonds.  ``n = 0`` gives the plain unknot / 2-component unlink.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if family == "U":
        return _gen_u(n, sign)
    if family == "K":
        return _gen_k(n, sign)
    raise ValueError(f"unknown family {family!r}")


def _gen_u(n: int, sign: str) -> BondedDiagram:
    if n == 0:
        return BondedDiagram({}, {0: FreeLoop(0)}, {0: ()})
    edges: dict[int, EdgeRecord] = {}
    vertices: dict[int, Vertex] = {}
    # link edges 0..2n-1 around the circle; bonds 2n..3n-1
    for e in range(2 * n):
        edges[e] = EdgeRecord(LINK)
    for i in range(n):
        edges[2 * n + i] = EdgeRecord(BOND, sign)
    # cycle order: t_1..t_n (top, west->east), u_n..u_1 (bottom, east->west)
    # link edge i runs from vertex i to vertex i+1 (mod 2n) as dart (i,0)->(i,1)
    for i in range(n):  # top nodes t_{i+1}: in from west, out east, bond south
        d_in = (i - 1, 1) if i > 0 else (2 * n - 1, 1)
        d_out = (i, 0)
        d_bond = (2 * n + i, 0)
        # CCW rotation: east(out), west(in), south(bond)
        vertices[i] = Node((d_out, d_in, d_bond))
    for i in range(n):
        # bottom node u_{i+1}: link in from east, out to west, bond north.
        # cycle index: positions n..2n-1 hold u_n..u_1, so u_{i+1} sits at
        # cycle position 2n-1-i with incoming edge (2n-2-i) and outgoing
        # (2n-1-i).
        vid = n + i
        d_in = (2 * n - 2 - i, 1)
        d_out = (2 * n - 1 - i, 0)
        d_bond = (2 * n + i, 1)
        # CCW rotation: east(in), north(bond), west(out)
        vertices[vid] = Node((d_in, d_bond, d_out))
    orientation = {0: tuple((e, 0) for e in range(2 * n))}
    return BondedDiagram(edges, vertices, orientation)


def _gen_k(n: int, sign: str) -> BondedDiagram:
    if n == 0:
        return BondedDiagram(
            {}, {0: FreeLoop(0), 1: FreeLoop(1)}, {0: (), 1: ()}
        )
    edges: dict[int, EdgeRecord] = {}
    vertices: dict[int, Vertex] = {}
    for e in range(2 * n):
        edges[e] = EdgeRecord(LINK)
    for i in range(n):
        edges[2 * n + i] = EdgeRecord(BOND, sign)
    # top circle: edges 0..n-1, nodes 0..n-1 along its south side, west->east;
    # edge i runs node i -> node i+1 (edge n-1 closes over the top).
    for i in range(n):
        d_in = (i - 1 if i > 0 else n - 1, 1)
        d_out = (i, 0)
        d_bond = (2 * n + i, 0)
        vertices[i] = Node((d_out, d_in, d_bond))  # east, west, south
    # bottom circle: edges n..2n-1, nodes n..2n-1 along its north side,
    # east->west so the two circles are oriented as mirror images; edge n+i
    # runs node n+i -> node n+i+1 with node ids laid west->east but
    # traversal east->west.
    for i in range(n):
        vid = n + i
        # bottom nodes walked east->west: node n+i has incoming edge n+i
        # (from the east) and outgoing n+i-1 (to the west), wrapping at 0.
        d_in = (n + i, 1)
        d_out = (n + i - 1, 0) if i > 0 else (2 * n - 1, 0)
        d_bond = (2 * n + i, 1)
        vertices[vid] = Node((d_in, d_bond, d_out))  # east, north, west
    orientation = {
        0: tuple((e, 0) for e in range(n)),
        1: tuple((n + i, 0) for i in range(n - 1, -1, -1)),
    }
    return BondedDiagram(edges, vertices, orientation)


# -- canonical labeling ----------------------------------------------------


def canonical_key(d: BondedDiagram):
    """A labeling-independent structural key (orientation ignored).

    Encodes each connected component by a BFS dart labeling from every
    possible start, keeping the minimum; component encodings are sorted.
    Quadratic per component, fine for the small diagrams used here.
    """
    pos = d.dart_positions()
    comps: list[set[Dart]] = []
    left = set(pos)
    while left:
        comp = _component_darts(d, min(left))
        left -= comp
        comps.append(comp)
    encs = [
        min(_encode_from(d, start) for start in sorted(comp)) for comp in comps
    ]
    return (tuple(sorted(encs)), d.free_loop_count())


def _encode_from(d: BondedDiagram, start: Dart):
    edge_label: dict[int, int] = {}
    first_end: dict[int, int] = {}  # edge ends are labels; normalize them
    out = []
    queue = [start]
    seen_darts: set[Dart] = set()
    pos = d.dart_positions()
    while queue:
        dart = queue.pop(0)
        if dart in seen_darts:
            continue
        seen_darts.add(dart)
        vid, slot = pos[dart]
        v = d.vertices[vid]
        darts = _vertex_darts(v)
        rec = []
        for i in range(len(darts)):
            dd = darts[(slot + i) % len(darts)]
            e = dd[0]
            if e not in edge_label:
                edge_label[e] = len(edge_label)
                first_end[e] = dd[1]
            rec.append(
                (
                    edge_label[e],
                    dd[1] ^ first_end[e],
                    d.edges[e].kind,
                    d.edges[e].sign,
                )
            )
            other = (dd[0], 1 - dd[1])
            if other not in seen_darts:
                queue.append(other)
        if isinstance(v, Crossing):
            over = 0 if slot in v.over else 1
            rec.append(("X", over))
        else:
            rec.append(("V",))
        out.append(tuple(rec))
    return tuple(out)


def _component_darts(d: BondedDiagram, start: Dart) -> set[Dart]:
    pos = d.dart_positions()
    seen = {start}
    stack = [start]
    while stack:
        dart = stack.pop()
        vid, _ = pos[dart]
        for dd in _vertex_darts(d.vertices[vid]):
            for cand in (dd, (dd[0], 1 - dd[1])):
                if cand not in seen:
                    seen.add(cand)
                    stack.append(cand)
    return seen


# -- serialization ---------------------------------------------------------


def _dart_text(dart: Dart) -> str:
    return f"{dart[0]}.{dart[1]}"


def _parse_dart(text: str) -> Dart:
    e, end = text.split(".")
    return (int(e), int(end))


def to_bpd(d: BondedDiagram) -> str:
    """Serialize to the .bpd text format."""
    lines = []
    for e in sorted(d.edges):
        rec = d.edges[e]
        if rec.kind == BOND and rec.sign != PLAIN:
            lines.append(f"E {e} bond {_SIGN_TEXT[rec.sign]}")
        else:
            lines.append(f"E {e} {rec.kind}")
    for vid in sorted(d.vertices):
        v = d.vertices[vid]
        if isinstance(v, Crossing):
            over = "02" if v.over == OVER_02 else "13"
            lines.append(
                "X " + " ".join(_dart_text(dd) for dd in v.darts) + f" over={over}"
            )
        elif isinstance(v, Node):
            # rotate so the bond dart is listed last
            rot = list(v.rotation)
            while d.edges[rot[2][0]].kind != BOND:
                rot = rot[1:] + rot[:1]
            lines.append("V " + " ".join(_dart_text(dd) for dd in rot))
        else:
            lines.append(f"O {v.component}")
    for comp in sorted(d.orientation):
        darts = d.orientation[comp]
        if darts:
            lines.append(
                f"orient {comp} " + ",".join(_dart_text(dd) for dd in darts)
            )
    return "\n".join(lines) + "\n"


def parse_bpd(text: str) -> BondedDiagram:
    """Parse the .bpd text format (inverse of :func:`to_bpd`)."""
    edges: dict[int, EdgeRecord] = {}
    vertices: dict[int, Vertex] = {}
    orientation: dict[int, tuple[Dart, ...]] = {}
    vid = 0
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "E":
            eid = int(parts[1])
            kind = parts[2]
            if kind not in (LINK, BOND):
                raise ValueError(f"bad edge kind {kind!r}")
            sign = PLAIN
            if len(parts) > 3:
                sign = _TEXT_SIGN[parts[3]]
            edges[eid] = EdgeRecord(kind, sign)
        elif parts[0] == "X":
            darts = tuple(_parse_dart(p) for p in parts[1:5])
            over_txt = parts[5].split("=")[1]
            over = OVER_02 if over_txt == "02" else OVER_13
            vertices[vid] = Crossing(darts, over)
            vid += 1
        elif parts[0] == "V":
            rot = tuple(_parse_dart(p) for p in parts[1:4])
            vertices[vid] = Node(rot)
            vid += 1
        elif parts[0] == "O":
            comp = int(parts[1])
            vertices[vid] = FreeLoop(comp)
            vid += 1
            orientation.setdefault(comp, ())
        elif parts[0] == "orient":
            comp = int(parts[1])
            orientation[comp] = tuple(_parse_dart(p) for p in parts[2].split(","))
        else:
            raise ValueError(f"bad record {parts[0]!r}")
    return BondedDiagram(edges, vertices, orientation)
