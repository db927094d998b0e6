"""Local rewrite moves on bonded diagrams.

Each move is a face- or vertex-pattern rewrite on the rotation system:

- ``R1`` / ``bondR1``: add or remove a curl on a strand;
- ``R2`` / ``bondR2`` / ``mixedR2``: push one strand across another through a
  shared face, or cancel an empty bigon;
- ``R3`` / ``bondR3`` / ``mixedR3``: slide a strand past a crossing across a
  triangular face;
- ``VS``: slide a node past an adjacent crossing on one of its legs (the
  crossing trades places with the other two legs);
- ``TVT``: twist a bond end around its attaching strand (topological
  calculus only);
- ``RVT``: twist a node rigidly so its two link legs cross (rigid calculus
  only);
- ``nodeSlide``: slide a node along its strand past nothing - a combinatorial
  no-op kept for completeness;
- ``enhancedCancel``: delete (or insert) a parallel pair of opposite-sign
  bonds bounding an empty rectangle.

Faces are taken from the rotation-system traversal; the face of a dart lies
to the right when travelling from the dart's vertex along its edge.  Moves
that forbid dragging a bond endpoint through a crossing are simply absent
from the table.

Every apply returns a new diagram with a freshly derived orientation, so all
downstream invariants must be (and are) orientation-canonical.
"""
from __future__ import annotations

import random as _random
from dataclasses import dataclass

from .diagram import (
    BOND,
    LINK,
    OVER_02,
    OVER_13,
    ATTRACTING,
    REPELLING,
    BondedDiagram,
    Crossing,
    Dart,
    EdgeRecord,
    Node,
    _fuse_pairs,
    faces,
)

__all__ = [
    "MoveKind",
    "MoveSite",
    "TOPOLOGICAL",
    "RIGID",
    "find_moves",
    "apply_move",
    "random_walk",
    "walk_kinds",
    "standardize",
    "tighten",
]

TOPOLOGICAL = "topological"
RIGID = "rigid"

ALL_TAGS = (
    "R1",
    "R2",
    "R3",
    "bondR1",
    "bondR2",
    "bondR3",
    "mixedR2",
    "mixedR3",
    "VS",
    "TVT",
    "RVT",
    "nodeSlide",
    "enhancedCancel",
)

_CALCULUS_TAGS = {
    TOPOLOGICAL: frozenset(t for t in ALL_TAGS if t != "RVT"),
    RIGID: frozenset(t for t in ALL_TAGS if t != "TVT"),
}


@dataclass(frozen=True)
class MoveKind:
    """A move family: tag, direction, and chirality where applicable.

    ``sense`` is "do" for the expanding/creating direction (add a curl, push
    strands together, slide a node onto a crossing, twist, insert bonds) and
    "undo" for its inverse.  ``chirality`` picks over/under or sign order for
    the senses that create crossings or bonds; it is ignored elsewhere.
    """

    tag: str
    sense: str = "do"
    chirality: int = 1

    def __post_init__(self):
        if self.tag not in ALL_TAGS:
            raise ValueError(f"unknown move tag {self.tag!r}")
        if self.sense not in ("do", "undo"):
            raise ValueError(f"bad move sense {self.sense!r}")


@dataclass(frozen=True)
class MoveSite:
    """Where a move applies: the matched face walk plus pattern anchors."""

    face: tuple
    data: tuple


def _mate(dart: Dart) -> Dart:
    return (dart[0], 1 - dart[1])


def _slot_over(v: Crossing, slot: int) -> bool:
    return (slot % 4) in v.over


def _over_pair(over: bool, slots: tuple[int, int]) -> frozenset:
    """Over set putting ``slots`` over iff ``over``."""
    own = OVER_02 if slots[0] % 2 == 0 else OVER_13
    other = OVER_13 if own == OVER_02 else OVER_02
    return own if over else other


def _fresh_eids(d: BondedDiagram, n: int) -> list[int]:
    base = max(d.edges, default=-1) + 1
    return list(range(base, base + n))


def _fresh_vids(d: BondedDiagram, n: int) -> list[int]:
    base = max(d.vertices, default=-1) + 1
    return list(range(base, base + n))


def _map_vertex(v, subs):
    if isinstance(v, Crossing):
        return Crossing(tuple(subs.get(dd, dd) for dd in v.darts), v.over)
    if isinstance(v, Node):
        return Node(tuple(subs.get(dd, dd) for dd in v.rotation))
    return v


def _rebuild(d, *, drop_vids=(), drop_edges=(), new_edges=None, new_vertices=None, subs=None):
    """New diagram from edits: darts in ``subs`` are renamed in place in all
    untouched vertices; new records are added verbatim."""
    edges = {e: rec for e, rec in d.edges.items() if e not in drop_edges}
    edges.update(new_edges or {})
    new_vertices = new_vertices or {}
    subs = subs or {}
    vertices = {}
    for vid, v in d.vertices.items():
        if vid in drop_vids or vid in new_vertices:
            continue
        vertices[vid] = _map_vertex(v, subs)
    vertices.update(new_vertices)
    return BondedDiagram(edges, vertices).orient_arbitrarily()


def _smooth_away(d, vids, extra_vertices=None, drop_edges=frozenset()):
    """Remove crossings, fusing the two strands straight through each."""
    fusions = []
    keep = {}
    override = extra_vertices or {}
    for vid, v in d.vertices.items():
        if vid in vids:
            fusions.append((v.darts[0], v.darts[2]))
            fusions.append((v.darts[1], v.darts[3]))
        else:
            keep[vid] = override.get(vid, v)
    return _fuse_pairs(d, keep, fusions, set(drop_edges))


def _kind(d, e):
    return d.edges[e].kind


def _r1_tag(kind: str) -> str:
    return "R1" if kind == LINK else "bondR1"


def _r2_tag(ka: str, kb: str) -> str:
    if ka == kb == LINK:
        return "R2"
    if ka == kb == BOND:
        return "bondR2"
    return "mixedR2"


def _r3_tag(kinds) -> str:
    if all(k == LINK for k in kinds):
        return "R3"
    if all(k == BOND for k in kinds):
        return "bondR3"
    return "mixedR3"


def _node_rotation_from_bond(d, vid) -> tuple[Dart, Dart, Dart]:
    """Node rotation rotated to start at the bond dart."""
    rot = list(d.vertices[vid].rotation)
    while d.edges[rot[0][0]].kind != BOND:
        rot = rot[1:] + rot[:1]
    return tuple(rot)


# -- site enumeration -------------------------------------------------------


def find_moves(d: BondedDiagram, kind: MoveKind) -> list[MoveSite]:
    """All sites where ``kind``'s local pattern currently matches."""
    tag, sense = kind.tag, kind.sense
    if tag in ("R1", "bondR1"):
        return _find_r1_do(d, tag) if sense == "do" else _find_r1_undo(d, tag)
    if tag in ("R2", "bondR2", "mixedR2"):
        return _find_r2_do(d, tag) if sense == "do" else _find_r2_undo(d, tag)
    if tag in ("R3", "bondR3", "mixedR3"):
        return _find_r3(d, tag)
    if tag == "VS":
        return _find_vs_do(d) if sense == "do" else _find_vs_undo(d)
    if tag == "TVT":
        return _find_tvt_do(d) if sense == "do" else _find_tvt_undo(d)
    if tag == "RVT":
        return _find_rvt_do(d) if sense == "do" else _find_rvt_undo(d)
    if tag == "nodeSlide":
        return [
            MoveSite((), ("nslide", vid)) for vid in sorted(d.node_ids())
        ]
    if tag == "enhancedCancel":
        return _find_ec_do(d) if sense == "do" else _find_ec_undo(d)
    raise ValueError(f"unknown move tag {tag!r}")


def _find_r1_do(d, tag):
    out = []
    for face in faces(d):
        for u in face:
            if _r1_tag(_kind(d, u[0])) == tag:
                out.append(MoveSite(face, ("curl", u)))
    return out


def _find_r1_undo(d, tag):
    out = []
    for vid in sorted(d.crossing_ids()):
        v = d.vertices[vid]
        for s in range(4):
            if v.darts[s][0] != v.darts[(s + 1) % 4][0]:
                continue
            if _r1_tag(_kind(d, v.darts[s][0])) == tag:
                out.append(MoveSite((), ("uncurl", vid, s)))
    return out


def _find_r2_do(d, tag):
    out = []
    for face in faces(d):
        for i, u in enumerate(face):
            for j, v in enumerate(face):
                if i == j or u[0] == v[0]:
                    continue
                if _r2_tag(_kind(d, u[0]), _kind(d, v[0])) == tag:
                    out.append(MoveSite(face, ("push", u, v)))
    return out


def _find_r2_undo(d, tag):
    pos = d.dart_positions()
    out = []
    for face in faces(d):
        if len(face) != 2:
            continue
        p, q = face
        vp, sp = pos[p]
        vq, sq = pos[q]
        if vp == vq or p[0] == q[0]:
            continue
        cp, cq = d.vertices[vp], d.vertices[vq]
        if not (isinstance(cp, Crossing) and isinstance(cq, Crossing)):
            continue
        if _r2_tag(_kind(d, p[0]), _kind(d, q[0])) != tag:
            continue
        # one strand must be over at both crossings
        vpm, spm = pos[_mate(p)]
        if _slot_over(cp, sp) != _slot_over(d.vertices[vpm], spm):
            continue
        out.append(MoveSite(face, ("bigon", p, q)))
    return out


def _find_r3(d, tag):
    pos = d.dart_positions()
    out = []
    for face in faces(d):
        if len(face) != 3:
            continue
        vids = [pos[dd][0] for dd in face]
        if len(set(vids)) != 3:
            continue
        if not all(isinstance(d.vertices[v], Crossing) for v in vids):
            continue
        if _r3_tag([_kind(d, dd[0]) for dd in face]) != tag:
            continue
        for r in range(3):
            d0, d1, d2 = face[r:] + face[:r]
            x, y = pos[_mate(d2)][0], pos[_mate(d0)][0]
            t_x, t_y = pos[_mate(d2)][1], pos[_mate(d0)][1]
            # the strand of the d0-side must be over (or under) both of its
            # triangle crossings for the slide to be possible
            if _slot_over(d.vertices[y], t_y) == _slot_over(
                d.vertices[x], (t_x + 1) % 4
            ):
                out.append(MoveSite(face, ("tri", d0, d1, d2)))
    return out


def _find_vs_do(d):
    pos = d.dart_positions()
    out = []
    for vid in sorted(d.node_ids()):
        rot = d.vertices[vid].rotation
        for i, dd in enumerate(rot):
            far_vid, _ = pos[_mate(dd)]
            if isinstance(d.vertices[far_vid], Crossing):
                out.append(MoveSite((), ("slide", vid, i)))
    return out


def _find_vs_undo(d):
    pos = d.dart_positions()
    out = []
    for vid in sorted(d.node_ids()):
        rot = d.vertices[vid].rotation
        for i in range(3):
            d0, d1, d2 = rot[i:] + rot[:i]
            p1, p2 = pos.get(_mate(d1)), pos.get(_mate(d2))
            x1, a1 = p1
            x2, a2 = p2
            if x1 == x2 or x1 == vid or x2 == vid:
                continue
            c1, c2 = d.vertices[x1], d.vertices[x2]
            if not (isinstance(c1, Crossing) and isinstance(c2, Crossing)):
                continue
            m1 = c1.darts[(a1 + 3) % 4]
            m2 = c2.darts[(a2 + 1) % 4]
            if m1 != _mate(m2):
                continue
            if _slot_over(c1, a1 + 1) != _slot_over(c2, a2 + 3):
                continue
            out.append(MoveSite((), ("unslide", vid, i)))
    return out


def _find_tvt_do(d):
    out = []
    for vid in sorted(d.node_ids()):
        rot = d.vertices[vid].rotation
        for i, dd in enumerate(rot):
            if _kind(d, dd[0]) == LINK:
                out.append(MoveSite((), ("twist", vid, i)))
    return out


def _find_tvt_undo(d):
    pos = d.dart_positions()
    out = []
    for vid in sorted(d.node_ids()):
        rot = d.vertices[vid].rotation
        bond = next(dd for dd in rot if _kind(d, dd[0]) == BOND)
        bvid, _ = pos[_mate(bond)]
        if not isinstance(d.vertices[bvid], Crossing):
            continue
        for i, dd in enumerate(rot):
            if _kind(d, dd[0]) != LINK:
                continue
            if pos[_mate(dd)][0] == bvid:
                out.append(MoveSite((), ("untwist", vid, i)))
    return out


def _find_rvt_do(d):
    return [MoveSite((), ("rtwist", vid)) for vid in sorted(d.node_ids())]


def _find_rvt_undo(d):
    pos = d.dart_positions()
    out = []
    for vid in sorted(d.node_ids()):
        rot = d.vertices[vid].rotation
        links = [dd for dd in rot if _kind(d, dd[0]) == LINK]
        (xa, sa), (xb, sb) = pos[_mate(links[0])], pos[_mate(links[1])]
        if xa != xb or not isinstance(d.vertices[xa], Crossing):
            continue
        if (sa - sb) % 4 not in (1, 3):
            continue  # opposite slots: the legs are one strand, not a twist
        out.append(MoveSite((), ("unrtwist", vid)))
    return out


def _find_ec_do(d):
    pos = d.dart_positions()
    out = []
    for face in faces(d):
        if len(face) != 4:
            continue
        for r in range(4):
            w = face[r:] + face[:r]
            kinds = [_kind(d, dd[0]) for dd in w]
            if kinds != [BOND, LINK, BOND, LINK]:
                continue
            r1, r2 = w[0][0], w[2][0]
            if r1 == r2:
                continue
            if {d.edges[r1].sign, d.edges[r2].sign} != {ATTRACTING, REPELLING}:
                continue
            corners = [pos[dd][0] for dd in w]
            if len(set(corners)) != 4:
                continue
            if not all(isinstance(d.vertices[c], Node) for c in corners):
                continue
            out.append(MoveSite(face, ("cancel", w)))
            break
    return out


def _find_ec_undo(d):
    out = []
    for face in faces(d):
        for i, u in enumerate(face):
            for j, v in enumerate(face):
                if i == j or u[0] == v[0]:
                    continue
                if _kind(d, u[0]) == _kind(d, v[0]) == LINK:
                    out.append(MoveSite(face, ("insert", u, v)))
    return out


# -- application ------------------------------------------------------------


def apply_move(d, kind: MoveKind, site: MoveSite, calculus=None) -> BondedDiagram:
    """Apply ``kind`` at ``site``; the site must match the current diagram."""
    if calculus is not None:
        if calculus not in _CALCULUS_TAGS:
            raise ValueError(f"unknown calculus {calculus!r}")
        if kind.tag not in _CALCULUS_TAGS[calculus]:
            raise ValueError("move not in calculus")
    if site not in find_moves(d, kind):
        raise ValueError("site mismatch")
    op = site.data[0]
    fn = _APPLY[op]
    return fn(d, kind, site)


def _apply_curl(d, kind, site):
    (_, u) = site.data
    e, t = u
    n, loop = _fresh_eids(d, 2)
    (xvid,) = _fresh_vids(d, 1)
    rec = d.edges[e]
    over = OVER_02 if kind.chirality > 0 else OVER_13
    cross = Crossing(((n, t), (e, 1 - t), (loop, 1), (loop, 0)), over)
    return _rebuild(
        d,
        new_edges={n: rec, loop: rec},
        new_vertices={xvid: cross},
        subs={(e, 1 - t): (n, 1 - t)},
    )


def _apply_uncurl(d, kind, site):
    (_, vid, _s) = site.data
    return _smooth_away(d, {vid})


def _apply_push(d, kind, site):
    (_, u, v) = site.data
    eu, tu = u
    ev, tv = v
    na, nb, m, w = _fresh_eids(d, 4)
    x1, x2 = _fresh_vids(d, 2)
    ru, rv = d.edges[eu], d.edges[ev]
    over = OVER_13 if kind.chirality > 0 else OVER_02
    c1 = Crossing(((w, 1), (eu, 1 - tu), (nb, tv), (m, 0)), over)
    c2 = Crossing(((ev, 1 - tv), (na, tu), (w, 0), (m, 1)), over)
    return _rebuild(
        d,
        new_edges={na: ru, m: ru, nb: rv, w: rv},
        new_vertices={x1: c1, x2: c2},
        subs={(eu, 1 - tu): (na, 1 - tu), (ev, 1 - tv): (nb, 1 - tv)},
    )


def _apply_bigon(d, kind, site):
    (_, p, q) = site.data
    pos = d.dart_positions()
    return _smooth_away(d, {pos[p][0], pos[q][0]})


def _apply_tri(d, kind, site):
    (_, d0, d1, d2) = site.data
    pos = d.dart_positions()
    x, t_x = pos[_mate(d2)]
    y, t_y = pos[_mate(d0)]
    z, t_z = pos[_mate(d1)]
    cx, cy, cz = d.vertices[x], d.vertices[y], d.vertices[z]
    a1, b1 = cy.darts[(t_y + 2) % 4], cy.darts[(t_y + 3) % 4]
    b3, c3 = cz.darts[(t_z + 2) % 4], cz.darts[(t_z + 3) % 4]
    c2, a2 = cx.darts[(t_x + 2) % 4], cx.darts[(t_x + 3) % 4]
    a_over_c = _slot_over(cx, t_x + 1)
    a_over_b = _slot_over(cy, t_y)
    b_over_c = _slot_over(cz, t_z)
    new_vertices = {
        x: Crossing((d0, c3, a1, _mate(d2)), _over_pair(a_over_c, (0, 2))),
        y: Crossing((a2, b3, _mate(d0), d1), _over_pair(a_over_b, (0, 2))),
        z: Crossing((_mate(d1), d2, b1, c2), _over_pair(b_over_c, (0, 2))),
    }
    return _rebuild(d, new_vertices=new_vertices)


def _apply_slide(d, kind, site):
    (_, vid, i) = site.data
    rot = d.vertices[vid].rotation
    d0, d1, d2 = rot[i:] + rot[:i]
    el, tl = d0
    pos = d.dart_positions()
    xvid, sx = pos[_mate(d0)]
    cx = d.vertices[xvid]
    g = cx.darts[(sx + 2) % 4]
    s_s = cx.darts[(sx + 1) % 4]
    s_n = cx.darts[(sx + 3) % 4]
    s_over = _slot_over(cx, sx + 1)
    e1, t1 = d1
    e2, t2 = d2
    i1, i2, m = _fresh_eids(d, 3)
    x1, x2 = _fresh_vids(d, 2)
    c1 = Crossing((s_n, (e1, t1), (m, 0), (i1, 1)), _over_pair(s_over, (0, 2)))
    c2 = Crossing(((i2, 1), (m, 1), (e2, t2), s_s), _over_pair(s_over, (1, 3)))
    repl = {d0: g, d1: (i1, 0), d2: (i2, 0)}
    node = Node(tuple(repl.get(dd, dd) for dd in rot))
    return _rebuild(
        d,
        drop_vids={xvid},
        drop_edges={el},
        new_edges={i1: d.edges[e1], i2: d.edges[e2], m: d.edges[s_n[0]]},
        new_vertices={vid: node, x1: c1, x2: c2},
    )


def _apply_unslide(d, kind, site):
    (_, vid, i) = site.data
    rot = d.vertices[vid].rotation
    d0, d1, d2 = rot[i:] + rot[:i]
    pos = d.dart_positions()
    x1, a1 = pos[_mate(d1)]
    x2, a2 = pos[_mate(d2)]
    c1, c2 = d.vertices[x1], d.vertices[x2]
    em = c1.darts[(a1 + 3) % 4][0]
    s_n = c1.darts[(a1 + 1) % 4]
    s_s = c2.darts[(a2 + 3) % 4]
    outer1 = c1.darts[(a1 + 2) % 4]
    outer2 = c2.darts[(a2 + 2) % 4]
    s_over = _slot_over(c1, a1 + 1)
    (ell,) = _fresh_eids(d, 1)
    (xvid,) = _fresh_vids(d, 1)
    cross = Crossing(((ell, 1), s_s, d0, s_n), _over_pair(s_over, (1, 3)))
    repl = {d0: (ell, 0), d1: outer1, d2: outer2}
    node = Node(tuple(repl.get(dd, dd) for dd in rot))
    return _rebuild(
        d,
        drop_vids={x1, x2},
        drop_edges={d1[0], d2[0], em},
        new_edges={ell: d.edges[d0[0]]},
        new_vertices={vid: node, xvid: cross},
    )


def _apply_twist(d, kind, site):
    (_, vid, i) = site.data
    rot = d.vertices[vid].rotation
    dg = rot[i]
    dr, da, db = _node_rotation_from_bond(d, vid)
    eg, tg = dg
    er, tr = dr
    ig, ir = _fresh_eids(d, 2)
    (xvid,) = _fresh_vids(d, 1)
    over = _over_pair(kind.chirality > 0, (1, 3))
    if dg == da:
        cross = Crossing(((eg, tg), (ir, 1), (ig, 1), (er, tr)), over)
    else:
        cross = Crossing(((ig, 1), (ir, 1), (eg, tg), (er, tr)), over)
    repl = {dg: (ig, 0), dr: (ir, 0)}
    flipped = (rot[0], rot[2], rot[1])
    node = Node(tuple(repl.get(dd, dd) for dd in flipped))
    return _rebuild(
        d,
        new_edges={ig: d.edges[eg], ir: d.edges[er]},
        new_vertices={vid: node, xvid: cross},
    )


def _apply_untwist(d, kind, site):
    (_, vid, i) = site.data
    rot = d.vertices[vid].rotation
    pos = d.dart_positions()
    bond = next(dd for dd in rot if _kind(d, dd[0]) == BOND)
    xvid = pos[_mate(bond)][0]
    flipped = Node((rot[0], rot[2], rot[1]))
    return _smooth_away(d, {xvid}, extra_vertices={vid: flipped})


def _apply_rtwist(d, kind, site):
    (_, vid) = site.data
    rot = d.vertices[vid].rotation
    dr, da, db = _node_rotation_from_bond(d, vid)
    ea, ta = da
    eb, tb = db
    ia, ib = _fresh_eids(d, 2)
    (xvid,) = _fresh_vids(d, 1)
    over = _over_pair(kind.chirality > 0, (0, 2))
    cross = Crossing(((ea, ta), (eb, tb), (ia, 1), (ib, 1)), over)
    repl = {da: (ia, 0), db: (ib, 0)}
    flipped = (rot[0], rot[2], rot[1])
    node = Node(tuple(repl.get(dd, dd) for dd in flipped))
    return _rebuild(
        d,
        new_edges={ia: d.edges[ea], ib: d.edges[eb]},
        new_vertices={vid: node, xvid: cross},
    )


def _apply_unrtwist(d, kind, site):
    (_, vid) = site.data
    rot = d.vertices[vid].rotation
    pos = d.dart_positions()
    links = [dd for dd in rot if _kind(d, dd[0]) == LINK]
    xvid = pos[_mate(links[0])][0]
    flipped = Node((rot[0], rot[2], rot[1]))
    return _smooth_away(d, {xvid}, extra_vertices={vid: flipped})


def _apply_cancel(d, kind, site):
    (_, w) = site.data
    pos = d.dart_positions()
    corners = {pos[dd][0] for dd in w}
    bonds = {w[0][0], w[2][0]}
    fusions = []
    keep = {}
    for vid, v in d.vertices.items():
        if vid in corners:
            fusions.append(d.node_link_darts(vid))
        else:
            keep[vid] = v
    return _fuse_pairs(d, keep, fusions, bonds)


def _apply_insert(d, kind, site):
    (_, u, v) = site.data
    eu, tu = u
    ev, tv = v
    mu, a2, mv, b2, r1, r2 = _fresh_eids(d, 6)
    nu_w, nu_e, nv_e, nv_w = _fresh_vids(d, 4)
    s1 = ATTRACTING if kind.chirality > 0 else REPELLING
    s2 = REPELLING if kind.chirality > 0 else ATTRACTING
    new_edges = {
        mu: d.edges[eu],
        a2: d.edges[eu],
        mv: d.edges[ev],
        b2: d.edges[ev],
        r1: EdgeRecord(BOND, s1),
        r2: EdgeRecord(BOND, s2),
    }
    new_vertices = {
        nu_w: Node(((mu, 0), (eu, 1 - tu), (r1, 0))),
        nu_e: Node(((a2, 0), (mu, 1), (r2, 0))),
        nv_e: Node(((ev, 1 - tv), (r2, 1), (mv, 0))),
        nv_w: Node(((mv, 1), (r1, 1), (b2, 0))),
    }
    return _rebuild(
        d,
        new_edges=new_edges,
        new_vertices=new_vertices,
        subs={(eu, 1 - tu): (a2, 1), (ev, 1 - tv): (b2, 1)},
    )


def _apply_nslide(d, kind, site):
    return BondedDiagram(d.edges, d.vertices, d.orientation)


_APPLY = {
    "curl": _apply_curl,
    "uncurl": _apply_uncurl,
    "push": _apply_push,
    "bigon": _apply_bigon,
    "tri": _apply_tri,
    "slide": _apply_slide,
    "unslide": _apply_unslide,
    "twist": _apply_twist,
    "untwist": _apply_untwist,
    "rtwist": _apply_rtwist,
    "unrtwist": _apply_unrtwist,
    "cancel": _apply_cancel,
    "insert": _apply_insert,
    "nslide": _apply_nslide,
}


# -- random walks -----------------------------------------------------------

_GROWING = {"curl", "push", "slide", "twist", "rtwist", "insert"}


def walk_kinds(calculus: str) -> list[MoveKind]:
    """The default walk pool: every move of the calculus except the no-op
    node slide and the sign-sensitive bond cancellation (so walks preserve
    bond and node counts)."""
    kinds = []
    for tag in ("R1", "bondR1", "R2", "bondR2", "mixedR2"):
        kinds += [
            MoveKind(tag, "do", 1),
            MoveKind(tag, "do", -1),
            MoveKind(tag, "undo"),
        ]
    for tag in ("R3", "bondR3", "mixedR3"):
        kinds.append(MoveKind(tag))
    kinds += [MoveKind("VS", "do"), MoveKind("VS", "undo")]
    twist = "TVT" if calculus == TOPOLOGICAL else "RVT"
    kinds += [
        MoveKind(twist, "do", 1),
        MoveKind(twist, "do", -1),
        MoveKind(twist, "undo"),
    ]
    return kinds


def random_walk(
    d: BondedDiagram,
    calculus: str,
    steps: int,
    seed: int,
    kinds=None,
    max_extra_crossings: int = 8,
):
    """Apply ``steps`` uniformly-chosen applicable moves; deterministic.

    Returns (diagram, log of (kind, site)).  Once the crossing count exceeds
    its starting value by ``max_extra_crossings``, crossing-creating moves
    are withheld until the count comes back down.
    """
    if calculus not in _CALCULUS_TAGS:
        raise ValueError(f"unknown calculus {calculus!r}")
    pool = list(kinds) if kinds is not None else walk_kinds(calculus)
    for k in pool:
        if k.tag not in _CALCULUS_TAGS[calculus]:
            raise ValueError("move not in calculus")
    rng = _random.Random(seed)
    cap = len(d.crossing_ids()) + max_extra_crossings
    cur = d
    log = []
    for _ in range(steps):
        crowded = len(cur.crossing_ids()) >= cap
        candidates = []
        for k in pool:
            if crowded and k.sense == "do" and k.tag != "nodeSlide":
                continue
            for site in find_moves(cur, k):
                candidates.append((k, site))
        if not candidates:
            break
        k, site = candidates[rng.randrange(len(candidates))]
        cur = apply_move(cur, k, site)
        log.append((k, site))
    return cur, log


# -- standardize / tighten --------------------------------------------------


def _slide_bond_leg_once(d: BondedDiagram):
    """Slide the lowest-id node past the crossing adjacent on its bond leg.

    Returns the new diagram, or None when no bond leg touches a crossing.
    """
    pos = d.dart_positions()
    for vid in sorted(d.node_ids()):
        dr = d.node_bond_dart(vid)
        far_vid, _ = pos[_mate(dr)]
        if not isinstance(d.vertices[far_vid], Crossing):
            continue
        i = d.vertices[vid].rotation.index(dr)
        site = MoveSite((), ("slide", vid, i))
        return apply_move(d, MoveKind("VS", "do"), site)
    return None


def standardize(d: BondedDiagram) -> BondedDiagram:
    """Slide nodes until no crossing involves two bond strands.

    Each slide converts the crossing adjacent to a node's bond leg into two
    crossings on the node's other legs, so the (bond-bond, bond-link)
    crossing-count pair decreases lexicographically until standard.
    """
    while not d.is_standard():
        nxt = _slide_bond_leg_once(d)
        if nxt is None:  # pragma: no cover - unreachable on valid diagrams
            raise RuntimeError("no slidable bond leg on a non-standard diagram")
        d = nxt
    return d


def tighten(d: BondedDiagram) -> BondedDiagram:
    """Slide nodes until no crossing involves a bond strand at all.

    Standardizes first; every eliminated bond-involved crossing becomes two
    crossings beside the node that absorbed it, preserving over/under.
    """
    d = standardize(d)
    while not d.is_tight():
        nxt = _slide_bond_leg_once(d)
        if nxt is None:  # pragma: no cover - unreachable on valid diagrams
            raise RuntimeError("no slidable bond leg on a non-tight diagram")
        d = nxt
    return d
