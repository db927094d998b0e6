"""Bracket polynomial state sums.

``kauffman_bracket`` evaluates the classical bracket: sum over the 2^c
crossing smoothings of A^(#A - #B) * D_LOOP^(loops - 1), normalized so the
crossingless circle is 1.  The A-smoothing convention is fixed so that a
single positive curl evaluates to -A^3.

``bonded_bracket`` extends it to tight bonded diagrams: each bond is
resolved three ways - deleted (weight a) or replaced by one of the two
crossings of the strands it joins (weight b each) - and the weighted
classical brackets are summed over all 3^k resolutions.

Both have naive full-enumeration twins used as test oracles; the production
paths reduce curls and cache sub-diagrams.
"""
from __future__ import annotations

from itertools import product
from typing import Optional

from .diagram import (
    BOND,
    LINK,
    OVER_02,
    BondedDiagram,
    Crossing,
    Node,
    writhe,
)
from .polyring import A, A_INV, D_LOOP, ONE, ZERO, LaurentPoly, VAR_a, VAR_b

__all__ = [
    "kauffman_bracket",
    "kauffman_bracket_naive",
    "bonded_bracket",
    "bonded_bracket_naive",
    "normalized_jones",
    "state_count",
]

NEG_A3 = -(A ** 3)
NEG_A3_INV = -(A_INV ** 3)

Port = tuple  # (crossing id, slot)


# -- flattening a diagram into crossings + arc pairing ---------------------


def _flatten(d: BondedDiagram, resolution: Optional[dict] = None):
    """Reduce a diagram to (crossings, pairs, free loop count).

    ``crossings`` maps an id to True (over pair {0,2}) or False ({1,3});
    ``pairs`` is the involution pairing crossing ports along arcs.
    ``resolution`` optionally maps a bond edge id to 'a' (delete), '+' or
    '-' (replace the bond by a crossing); required whenever bonds exist.
    """
    resolution = resolution or {}
    crossings: dict = {}
    port_of: dict = {}
    fusion: dict = {}
    for vid, v in d.vertices.items():
        if isinstance(v, Crossing):
            crossings[vid] = v.over == OVER_02
            for slot, dart in enumerate(v.darts):
                port_of[dart] = (vid, slot)
    nodes_of_bond: dict = {}
    for vid in d.node_ids():
        bond_edge = d.node_bond_dart(vid)[0]
        nodes_of_bond.setdefault(bond_edge, []).append(vid)
    for bond_edge, node_ids in sorted(nodes_of_bond.items()):
        choice = resolution[bond_edge]
        if choice == "a":
            for vid in node_ids:
                x, y = d.node_link_darts(vid)
                fusion[x] = y
                fusion[y] = x
        else:
            # contract the bond into a crossing: merged rotation is N1's two
            # non-bond darts (after the bond) followed by N2's
            rots = []
            for vid in node_ids:
                rot = list(d.vertices[vid].rotation)
                while d.edges[rot[0][0]].kind != BOND:
                    rot = rot[1:] + rot[:1]
                rots.append(rot[1:])
            darts4 = tuple(rots[0] + rots[1])
            cid = ("bond", bond_edge)
            crossings[cid] = choice == "+"
            for slot, dart in enumerate(darts4):
                port_of[dart] = (cid, slot)

    def mate(dart):
        return (dart[0], 1 - dart[1])

    pairs: dict = {}
    visited: set = set()
    for dart, port in port_of.items():
        if dart in visited:
            continue
        cur = mate(dart)
        visited.add(dart)
        while cur not in port_of:
            visited.add(cur)
            nxt = fusion[cur]
            visited.add(nxt)
            cur = mate(nxt)
        visited.add(cur)
        pairs[port] = port_of[cur]
        pairs[port_of[cur]] = port
    loops = d.free_loop_count()
    for e, rec in d.edges.items():
        if rec.kind != LINK:
            continue
        for end in (0, 1):
            start = (e, end)
            if start in visited:
                continue
            cur = start
            while True:
                visited.add(cur)
                nxt = fusion[mate(cur)]
                visited.add(mate(cur))
                cur = nxt
                if cur == start:
                    break
            loops += 1
    return crossings, pairs, loops


def _smoothing_joins(over02: bool, which: str):
    if over02:
        return ((0, 1), (2, 3)) if which == "A" else ((0, 3), (1, 2))
    return ((1, 2), (3, 0)) if which == "A" else ((0, 1), (2, 3))


def _smooth(crossings, pairs, cid, which):
    """Remove ``cid`` with the given smoothing; returns loops formed."""
    joins = _smoothing_joins(crossings.pop(cid), which)
    loops = 0
    for s, t in joins:
        u = pairs.pop((cid, s))
        v = pairs.pop((cid, t))
        if u == (cid, t):
            loops += 1
        else:
            pairs[u] = v
            pairs[v] = u
    return loops


# -- naive oracle ----------------------------------------------------------


def kauffman_bracket_naive(d: BondedDiagram) -> LaurentPoly:
    """Full 2^c state enumeration; test oracle for the reduced evaluator."""
    _require_classical(d)
    crossings, pairs, base_loops = _flatten(d)
    cids = sorted(crossings, key=repr)
    if not cids and base_loops == 0:
        return ONE
    total = ZERO
    for states in product("AB", repeat=len(cids)):
        cr = dict(crossings)
        pr = dict(pairs)
        loops = base_loops
        for cid, which in zip(cids, states):
            loops += _smooth(cr, pr, cid, which)
        exp = states.count("A") - states.count("B")
        total = total + (A ** exp if exp >= 0 else A_INV ** (-exp)) * D_LOOP ** (
            loops - 1
        )
    return total


# -- reduced, memoized evaluator -------------------------------------------


def _kink_factor(over02: bool, s: int) -> LaurentPoly:
    """Curl factor when the arc occupies channel (s, s+1) of a crossing."""
    a_channel = (s % 2 == 0) == over02
    return NEG_A3 if a_channel else NEG_A3_INV


def _reduce_kinks(crossings, pairs):
    """Remove curls in place; returns (monomial factor, loops formed)."""
    factor = ONE
    loops = 0
    again = True
    while again:
        again = False
        for cid in list(crossings):
            for s in range(4):
                t = (s + 1) % 4
                if pairs.get((cid, s)) == (cid, t):
                    factor = factor * _kink_factor(crossings[cid], s)
                    crossings.pop(cid)
                    pairs.pop((cid, s))
                    pairs.pop((cid, t))
                    u = pairs.pop((cid, (s + 2) % 4))
                    v = pairs.pop((cid, (s + 3) % 4))
                    if u == (cid, (s + 3) % 4):
                        loops += 1
                    else:
                        pairs[u] = v
                        pairs[v] = u
                    again = True
                    break
            if again:
                break
    return factor, loops


def _state_key(crossings, pairs):
    return (
        frozenset(crossings.items()),
        frozenset(tuple(sorted((k, v), key=repr)) for k, v in pairs.items()),
    )


def _eval(crossings, pairs, memo) -> LaurentPoly:
    """Sum over resolutions of A^(#A-#B) * D_LOOP^(loops formed)."""
    factor, loops = _reduce_kinks(crossings, pairs)
    acc = factor * D_LOOP ** loops
    if not crossings:
        return acc
    key = _state_key(crossings, pairs)
    hit = memo.get(key)
    if hit is None:
        cid = min(crossings, key=repr)
        hit = ZERO
        for which, coeff in (("A", A), ("B", A_INV)):
            cr = dict(crossings)
            pr = dict(pairs)
            formed = _smooth(cr, pr, cid, which)
            hit = hit + coeff * D_LOOP ** formed * _eval(cr, pr, memo)
        memo[key] = hit
    return acc * hit


def _div_loop(p: LaurentPoly) -> LaurentPoly:
    """Exact division by D_LOOP = -A^2 - A^-2."""
    rest = dict(p.terms)
    out: dict = {}
    # long division from the top A-degree within each (ea, eb) class
    while rest:
        (eA, ea, eb) = max(rest, key=lambda k: (k[1], k[2], k[0]))
        c = rest.pop((eA, ea, eb))
        q = (eA - 2, ea, eb)
        out[q] = out.get(q, 0) - c
        low = (eA - 4, ea, eb)
        rest[low] = rest.get(low, 0) - c
        if not rest[low]:
            del rest[low]
    return LaurentPoly(out)


def _require_classical(d: BondedDiagram) -> None:
    if any(rec.kind == BOND for rec in d.edges.values()):
        raise ValueError("not classical")


def kauffman_bracket(d: BondedDiagram, memo: Optional[dict] = None) -> LaurentPoly:
    """Bracket polynomial of a classical diagram (crossingless circle = 1)."""
    _require_classical(d)
    crossings, pairs, base_loops = _flatten(d)
    if not crossings:
        if base_loops == 0:
            return ONE  # empty diagram, by convention
        return D_LOOP ** (base_loops - 1)
    h = _eval(crossings, pairs, {} if memo is None else memo)
    return _div_loop(D_LOOP ** base_loops * h)


def normalized_jones(d: BondedDiagram) -> LaurentPoly:
    """(-A^3)^(-writhe) * bracket; an ambient-isotopy invariant."""
    _require_classical(d)
    link_edges = {e for e, rec in d.edges.items() if rec.kind == LINK}
    if set(d.edge_tail()) != link_edges:
        raise ValueError("diagram has unoriented components")
    w = writhe(d)
    return NEG_A3 ** (-w) * kauffman_bracket(d)


# -- bonded bracket --------------------------------------------------------


def _require_tight(d: BondedDiagram) -> None:
    if not d.is_tight():
        raise ValueError("tighten first")


def _bond_edges(d: BondedDiagram) -> list[int]:
    return sorted(e for e, rec in d.edges.items() if rec.kind == BOND)


def _bonded_sum(d: BondedDiagram, bracket_fn) -> LaurentPoly:
    bonds = _bond_edges(d)
    memo: dict = {}
    total = ZERO
    for choices in product("a+-", repeat=len(bonds)):
        resolution = dict(zip(bonds, choices))
        crossings, pairs, loops = _flatten(d, resolution)
        weight = ONE
        for c in choices:
            weight = weight * (VAR_a if c == "a" else VAR_b)
        total = total + weight * bracket_fn(crossings, pairs, loops, memo)
    return total


def _bracket_reduced(crossings, pairs, loops, memo) -> LaurentPoly:
    if not crossings:
        return ONE if loops == 0 else D_LOOP ** (loops - 1)
    return _div_loop(D_LOOP ** loops * _eval(crossings, pairs, memo))


def _bracket_naive_state(crossings, pairs, loops, memo) -> LaurentPoly:
    cids = sorted(crossings, key=repr)
    if not cids:
        return ONE if loops == 0 else D_LOOP ** (loops - 1)
    total = ZERO
    for states in product("AB", repeat=len(cids)):
        cr = dict(crossings)
        pr = dict(pairs)
        formed = loops
        for cid, which in zip(cids, states):
            formed += _smooth(cr, pr, cid, which)
        exp = states.count("A") - states.count("B")
        total = total + (A ** exp if exp >= 0 else A_INV ** (-exp)) * D_LOOP ** (
            formed - 1
        )
    return total


def bonded_bracket(d: BondedDiagram) -> LaurentPoly:
    """The 3^k bond-resolution state sum over a tight diagram.

    Weights: bond deleted -> a; bond replaced by either crossing of the two
    strands it joined -> b.  Bond signs are ignored.
    """
    _require_tight(d)
    if d.is_classical():
        return kauffman_bracket(d)
    return _bonded_sum(d, _bracket_reduced)


def bonded_bracket_naive(d: BondedDiagram) -> LaurentPoly:
    """Full 3^k x 2^c enumeration; test oracle."""
    _require_tight(d)
    if d.is_classical():
        return kauffman_bracket_naive(d)
    return _bonded_sum(d, _bracket_naive_state)


def state_count(d: BondedDiagram) -> int:
    """3^k * 2^c: the size of the full resolution space."""
    k = d.bond_count()
    c = len(d.crossing_ids())
    return 3 ** k * 2 ** c
