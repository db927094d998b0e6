"""Tangle-insertion invariants for standard bonded diagrams.

Each bond, together with its two trivalent nodes, spans an H-shaped
neighborhood: two transversal strand segments joined by the bond arc.
Replacing that neighborhood by a classical 2-tangle (a disc fragment with
four boundary legs NW, NE, SW, SE) yields a classical link diagram.  The
NW/SW legs attach to the strand through the smaller-id node, the NE/SE
legs to the strand through the other node.

When the bond arc crosses link strands (standard but not tight), the bond
is first thickened into a band: both parallel band edges inherit each such
crossing with the same over/under, and the tangle is inserted at the
smaller-id end of the band.

The identity tangle deletes the bond, so the all-identity assignment
recovers the underlying link; the multiset of fingerprints over a tangle
family is a rigid-vertex isotopy invariant (it is *not* preserved by
topological vertex twists).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .diagram import (
    BOND,
    LINK,
    BondedDiagram,
    Crossing,
    Dart,
    EdgeRecord,
    Node,
    OVER_02,
    OVER_13,
    _fuse_pairs,
)
from .unplug import Fingerprint, fingerprint

__all__ = [
    "TwoTangle",
    "builtin_tangle",
    "insert_tangles",
    "tangle_invariant_set",
    "DEFAULT_ASSIGNMENT_BOUND",
]

CORNERS = ("NW", "NE", "SW", "SE")

DEFAULT_ASSIGNMENT_BOUND = 729


@dataclass(frozen=True)
class TwoTangle:
    """A classical disc fragment with four boundary legs.

    ``edges`` are local edge ids (all classical strands); ``crossings``
    pairs local vertex ids with Crossing records over those edges; the
    ``boundary`` assigns each corner a loose edge end.
    """

    name: str
    edges: tuple[int, ...]
    crossings: tuple[tuple[int, Crossing], ...]
    boundary: tuple[tuple[str, Dart], ...]

    def __post_init__(self):
        corners = [c for c, _ in self.boundary]
        if sorted(corners) != sorted(CORNERS):
            raise ValueError("boundary must label exactly NW, NE, SW, SE")
        darts = [d for _, d in self.boundary]
        if len(set(darts)) != 4:
            raise ValueError("boundary darts must be distinct")
        used = set()
        for _, v in self.crossings:
            for d in v.darts:
                if d in used:
                    raise ValueError(f"dart {d} used twice")
                used.add(d)
        for d in darts:
            if d in used:
                raise ValueError(f"boundary dart {d} attached to a crossing")
            used.add(d)
        for e in self.edges:
            for end in (0, 1):
                if (e, end) not in used:
                    raise ValueError(f"dangling dart {(e, end)}")
        for d in used:
            if d[0] not in self.edges:
                raise ValueError(f"dart {d} references unknown edge")

    def corner(self, name: str) -> Dart:
        for c, d in self.boundary:
            if c == name:
                return d
        raise KeyError(name)


def _identity() -> TwoTangle:
    return TwoTangle(
        "identity",
        (0, 1),
        (),
        (("NW", (0, 0)), ("SW", (0, 1)), ("NE", (1, 0)), ("SE", (1, 1))),
    )


def _twist(k: int) -> TwoTangle:
    if k == 0:
        return _identity()
    c = abs(k)
    over = OVER_13 if k > 0 else OVER_02
    crossings = []
    for m in range(c):
        tl = (2 * m, 1)
        tr = (2 * m + 1, 1)
        bl = (2 * m + 2, 0)
        br = (2 * m + 3, 0)
        crossings.append((m, Crossing((tl, bl, br, tr), over)))
    name = {1: "crossing+", -1: "crossing-"}.get(k, f"twist({k})")
    return TwoTangle(
        name,
        tuple(range(2 * c + 2)),
        tuple(crossings),
        (
            ("NW", (0, 0)),
            ("NE", (1, 0)),
            ("SW", (2 * c, 1)),
            ("SE", (2 * c + 1, 1)),
        ),
    )


def builtin_tangle(name: str) -> TwoTangle:
    """identity | crossing+ | crossing- | twist(<k>)."""
    if name == "identity":
        return _identity()
    if name == "crossing+":
        return _twist(1)
    if name == "crossing-":
        return _twist(-1)
    if name.startswith("twist(") and name.endswith(")"):
        return _twist(int(name[6:-1]))
    raise ValueError(f"unknown tangle {name!r}")


# -- insertion ---------------------------------------------------------------


def _bond_site(d: BondedDiagram, v1: int):
    """Walk a bond chain from node ``v1``: crossings passed and the far node.

    Returns (path, v2) where path lists (crossing id, entry slot) in order.
    """
    pos = d.dart_positions()
    cur = d.node_bond_dart(v1)
    path = []
    while True:
        cur = (cur[0], 1 - cur[1])
        vid, slot = pos[cur]
        v = d.vertices[vid]
        if isinstance(v, Node):
            return path, vid
        path.append((vid, slot))
        cur = v.darts[(slot + 2) % 4]


def bond_sites(d: BondedDiagram) -> dict:
    """Bond key (smaller node id) -> (path, far node id), sorted keys."""
    sites = {}
    claimed = set()
    for v1 in sorted(d.node_ids()):
        if v1 in claimed:
            continue
        path, v2 = _bond_site(d, v1)
        claimed.update((v1, v2))
        sites[v1] = (path, v2)
    return sites


def _node_darts_after_bond(d: BondedDiagram, vid: int) -> tuple[Dart, Dart]:
    rot = list(d.vertices[vid].rotation)
    while d.edges[rot[0][0]].kind != BOND:
        rot = rot[1:] + rot[:1]
    return rot[1], rot[2]


def insert_tangles(d: BondedDiagram, asg: dict) -> BondedDiagram:
    """Replace every bond neighborhood by its assigned tangle.

    ``asg`` maps each bond key (the smaller of its two node ids) to a
    TwoTangle; the result is a classical diagram.
    """
    if not d.is_standard():
        raise ValueError("standardize first")
    sites = bond_sites(d)
    if set(asg) != set(sites):
        raise ValueError(
            f"assignment keys {sorted(asg)} != bond keys {sorted(sites)}"
        )

    edges = dict(d.edges)
    vertices = dict(d.vertices)
    fusions: list[tuple[Dart, Dart]] = []
    drop_edges: set[int] = set()
    next_eid = max(edges, default=-1) + 1
    next_vid = max(vertices, default=-1) + 1

    def fresh_edge() -> int:
        nonlocal next_eid
        eid = next_eid
        next_eid += 1
        edges[eid] = EdgeRecord(LINK)
        return eid

    def add_vertex(v) -> int:
        nonlocal next_vid
        vid = next_vid
        next_vid += 1
        vertices[vid] = v
        return vid

    for key in sorted(sites):
        path, v2 = sites[key]
        tangle = asg[key]
        # bring in the fragment with fresh ids
        emap = {e: fresh_edge() for e in tangle.edges}
        remap = lambda dart: (emap[dart[0]], dart[1])
        for _, cr in tangle.crossings:
            add_vertex(
                Crossing(tuple(remap(dd) for dd in cr.darts), cr.over)
            )
        corner = {c: remap(dd) for c, dd in tangle.boundary}

        x, y = _node_darts_after_bond(d, key)  # north, south at the near node
        u, w = _node_darts_after_bond(d, v2)  # south, north at the far node
        fusions.append((corner["NW"], x))
        fusions.append((corner["SW"], y))

        # band legs toward the far node, duplicating each bond-strand
        # crossing onto both parallel edges
        cur = d.node_bond_dart(key)
        drop_edges.add(cur[0])
        north_end = corner["NE"]
        south_end = corner["SE"]
        for vid, slot in path:
            old = d.vertices[vid]
            drop_edges.add(old.darts[(slot + 2) % 4][0])
            del vertices[vid]
            ts = old.darts[(slot + 1) % 4]  # transversal, south side
            tn = old.darts[(slot + 3) % 4]  # transversal, north side
            band_over = old.is_over_slot(slot)
            mid = fresh_edge()
            sw, se = fresh_edge(), fresh_edge()
            nw, ne = fresh_edge(), fresh_edge()
            over = OVER_02 if band_over else OVER_13
            add_vertex(Crossing(((sw, 1), ts, (se, 0), (mid, 0)), over))
            add_vertex(Crossing(((nw, 1), (mid, 1), (ne, 0), tn), over))
            fusions.append((south_end, (sw, 0)))
            fusions.append((north_end, (nw, 0)))
            south_end = (se, 1)
            north_end = (ne, 1)
        fusions.append((south_end, u))
        fusions.append((north_end, w))
        del vertices[key]
        del vertices[v2]

    interim = BondedDiagram(edges, vertices, {})
    result = _fuse_pairs(interim, vertices, fusions, drop_edges)
    classical_edges = {e: EdgeRecord(LINK) for e in result.edges}
    return BondedDiagram(classical_edges, result.vertices, {}).orient_arbitrarily()


# -- enumeration -------------------------------------------------------------


def tangle_invariant_set(
    d: BondedDiagram,
    family: list,
    bound: int = DEFAULT_ASSIGNMENT_BOUND,
) -> dict:
    """Fingerprint of every insertion, keyed by the tangle-name tuple.

    Keys follow the bond order (sorted by smaller node id); the multiset of
    values is a rigid-vertex isotopy invariant for the fixed family.
    """
    keys = sorted(bond_sites(d))
    total = len(family) ** len(keys)
    if total > bound:
        raise ValueError(f"{total} assignments exceed bound {bound}")
    out = {}
    for combo in product(family, repeat=len(keys)):
        asg = dict(zip(keys, combo))
        out[tuple(t.name for t in combo)] = fingerprint(insert_tangles(d, asg))
    return out
