"""Unplugging invariants: resolve every trivalent node by detaching one edge.

At each node one incident edge is detached (it gains a free end) and the
remaining two fuse into a strand.  Components with free ends are unknotted
open arcs: they are counted and discarded, and any crossing they were part
of is smoothed away.  What remains is a classical link diagram.

Enumerating all per-node choices gives the *full* unplugging (3 choices per
node); restricting to the two link edges gives the *strict* unplugging; the
*bonded* unplugging always detaches the bond and equals the underlying
link.  The set (and multiset) of resulting classical-link fingerprints is
invariant under topological vertex isotopy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .diagram import (
    BOND,
    LINK,
    BondedDiagram,
    Crossing,
    EdgeRecord,
    FreeLoop,
    Node,
    _fuse_pairs,
    crossing_sign,
    underlying_link,
)
from .bracket import kauffman_bracket, NEG_A3
from .polyring import LaurentPoly

__all__ = [
    "Fingerprint",
    "fingerprint",
    "unplug",
    "unplug_full_set",
    "unplug_bonded",
    "unplug_strict_set",
    "DEFAULT_NODE_BOUND",
]

DEFAULT_NODE_BOUND = 10


@dataclass(frozen=True)
class Fingerprint:
    """Classical-link fingerprint: equality on (component_count, jones) only."""

    component_count: int
    jones: LaurentPoly
    crossing_count_after_resolution: int = field(default=0, compare=False)

    def sort_key(self):
        return (self.component_count, self.jones.to_text())

    def __repr__(self) -> str:
        return f"Fingerprint({self.component_count}, {self.jones.to_text()!r})"


def _canonical_jones(d: BondedDiagram) -> LaurentPoly:
    """Orientation-free Jones value of a classical diagram.

    The bracket is orientation-blind; only the writhe normalization moves
    with component directions.  We take the minimum (by serialized text)
    of (-A^3)^(-w) * bracket over all component orientation assignments.
    """
    bracket = kauffman_bracket(d)
    comps = list(d.orientation)
    comp_of_edge = {}
    for comp, darts in d.orientation.items():
        for e, _ in darts:
            comp_of_edge[e] = comp
    base_signs = []
    for vid in d.crossing_ids():
        s = crossing_sign(d, vid)
        v = d.vertices[vid]
        ca = comp_of_edge[v.darts[0][0]]
        cb = comp_of_edge[v.darts[1][0]]
        base_signs.append((s, ca, cb))
    best = None
    for flips in product((False, True), repeat=len(comps)):
        flip = dict(zip(comps, flips))
        w = 0
        for s, ca, cb in base_signs:
            w += -s if flip[ca] != flip[cb] else s
        value = NEG_A3 ** (-w) * bracket
        text = value.to_text()
        if best is None or text < best[0]:
            best = (text, value)
    return best[1] if best else bracket


def fingerprint(d: BondedDiagram) -> Fingerprint:
    """Fingerprint of a classical diagram (no bonds, no nodes)."""
    if any(rec.kind == BOND for rec in d.edges.values()):
        raise ValueError("not classical")
    return Fingerprint(
        d.component_count(), _canonical_jones(d), len(d.crossing_ids())
    )


EMPTY_FINGERPRINT = Fingerprint(0, LaurentPoly({(0, 0, 0): 1}))


def unplug(
    d: BondedDiagram, choice: dict, strict: bool = False
) -> tuple[BondedDiagram, int]:
    """Resolve every node per ``choice`` (node id -> incident edge id).

    Returns the classical diagram of the surviving closed components and
    the number of discarded open arcs.
    """
    open_terminals: list = []  # darts that became free ends
    node_fusions: list = []  # (dart, dart) pairs fused at nodes
    for vid in d.node_ids():
        node = d.vertices[vid]
        e = choice[vid]
        if strict and d.edges[e].kind == BOND:
            raise ValueError("strict forbids bond unplug")
        detached = [dd for dd in node.rotation if dd[0] == e]
        if not detached:
            raise ValueError(f"edge {e} not incident to node {vid}")
        dd = detached[0]
        rest = [x for x in node.rotation if x != dd]
        open_terminals.append(dd)
        node_fusions.append((rest[0], rest[1]))

    # component structure on edges: adjacency through crossings (same
    # strand) and through node fusions
    adj: dict = {e: set() for e in d.edges}
    for vid in d.crossing_ids():
        v = d.vertices[vid]
        for s in (0, 1):
            adj[v.darts[s][0]].add(v.darts[s + 2][0])
            adj[v.darts[s + 2][0]].add(v.darts[s][0])
    for a, b in node_fusions:
        adj[a[0]].add(b[0])
        adj[b[0]].add(a[0])
    open_edges: set = set()
    stack = [dd[0] for dd in open_terminals]
    while stack:
        e = stack.pop()
        if e in open_edges:
            continue
        open_edges.add(e)
        stack.extend(adj[e])
    arc_count = 0
    seen: set = set()
    for e in sorted(open_edges):
        if e in seen:
            continue
        comp = {e}
        frontier = [e]
        while frontier:
            for nb in adj[frontier.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    frontier.append(nb)
        seen |= comp
        arc_count += 1

    keep: dict = {}
    fusions = [(a, b) for a, b in node_fusions if a[0] not in open_edges]
    for vid, v in d.vertices.items():
        if isinstance(v, Crossing):
            strands = (v.darts[0][0] in open_edges, v.darts[1][0] in open_edges)
            if strands == (False, False):
                keep[vid] = v
            else:
                for s in (0, 1):
                    if not strands[s]:
                        fusions.append((v.darts[s], v.darts[s + 2]))
        elif isinstance(v, FreeLoop):
            keep[vid] = v
    result = _fuse_pairs(d, keep, fusions, open_edges)
    # surviving bond arcs are ordinary strands now; re-orient so the former
    # bond edges (unoriented before) join the component structure
    edges = {e: EdgeRecord(LINK) for e in result.edges}
    classical = BondedDiagram(edges, result.vertices, {}).orient_arbitrarily()
    return classical, arc_count


def _choice_sets(d: BondedDiagram, strict: bool) -> list[tuple[int, list[int]]]:
    out = []
    for vid in d.node_ids():
        node = d.vertices[vid]
        options = []
        for dd in node.rotation:
            if strict and d.edges[dd[0]].kind == BOND:
                continue
            options.append(dd[0])
        out.append((vid, options))
    return out


def _unplug_set(
    d: BondedDiagram, strict: bool, node_bound: int
) -> tuple[Fingerprint, ...]:
    nodes = d.node_ids()
    if len(nodes) > node_bound:
        raise ValueError(
            f"node count {len(nodes)} exceeds bound {node_bound}; raise node_bound"
        )
    slots = _choice_sets(d, strict)
    results = []
    for combo in product(*(opts for _, opts in slots)):
        choice = {vid: e for (vid, _), e in zip(slots, combo)}
        resolved, _ = unplug(d, choice, strict=strict)
        results.append(fingerprint(resolved))
    return tuple(sorted(results, key=Fingerprint.sort_key))


def unplug_full_set(
    d: BondedDiagram, node_bound: int = DEFAULT_NODE_BOUND
) -> tuple[Fingerprint, ...]:
    """Sorted multiset of fingerprints over all 3^k per-node choices."""
    return _unplug_set(d, strict=False, node_bound=node_bound)


def unplug_strict_set(
    d: BondedDiagram, node_bound: int = DEFAULT_NODE_BOUND
) -> tuple[Fingerprint, ...]:
    """Sorted multiset over the 2^k link-edge-only choices."""
    return _unplug_set(d, strict=True, node_bound=node_bound)


def unplug_bonded(d: BondedDiagram) -> Fingerprint:
    """Fingerprint of the underlying link (every bond detached)."""
    return fingerprint(underlying_link(d))
