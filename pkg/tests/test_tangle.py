"""Tangle insertion: builtins, band replacement, and the insertion
invariant family."""
import random
from itertools import product

import pytest

from bondforge.braidalg import closure, parse_word
from bondforge.bracket import bonded_bracket, kauffman_bracket
from bondforge.diagram import (
    BondedDiagram,
    Crossing,
    Node,
    canonical_key,
    gen_example,
    underlying_link,
    validate,
)
from bondforge.moves import (
    RIGID,
    TOPOLOGICAL,
    MoveKind,
    apply_move,
    find_moves,
    tighten,
    walk_kinds,
)
from bondforge.polyring import ONE, VAR_a, VAR_b, ZERO
from bondforge.tangle import (
    TwoTangle,
    bond_sites,
    builtin_tangle,
    insert_tangles,
    tangle_invariant_set,
)
from bondforge.unplug import fingerprint

IDENTITY = builtin_tangle("identity")
CROSS_P = builtin_tangle("crossing+")
CROSS_M = builtin_tangle("crossing-")
FAMILY = [IDENTITY, CROSS_P, CROSS_M]

BRACKET_FAMILY = [(IDENTITY, VAR_a), (CROSS_P, VAR_b), (CROSS_M, VAR_b)]


def multiset(d):
    return tuple(
        sorted(fp.sort_key() for fp in tangle_invariant_set(d, FAMILY).values())
    )


def uniform(d, tangle):
    return insert_tangles(d, {k: tangle for k in bond_sites(d)})


def disjoint_union(d1, d2):
    eoff = max(d1.edges, default=-1) + 1
    voff = max(d1.vertices, default=-1) + 1
    edges = dict(d1.edges)
    for e, rec in d2.edges.items():
        edges[e + eoff] = rec

    def shift(dd):
        return (dd[0] + eoff, dd[1])

    vertices = dict(d1.vertices)
    for v, vv in d2.vertices.items():
        if isinstance(vv, Crossing):
            vertices[v + voff] = Crossing(
                tuple(shift(x) for x in vv.darts), vv.over
            )
        elif isinstance(vv, Node):
            vertices[v + voff] = Node(tuple(shift(x) for x in vv.rotation))
        else:
            vertices[v + voff] = vv
    return BondedDiagram(edges, vertices, {}).orient_arbitrarily()


class TestBuiltins:
    def test_identity_connectivity(self):
        t = IDENTITY
        assert t.corner("NW")[0] == t.corner("SW")[0]
        assert t.corner("NE")[0] == t.corner("SE")[0]
        assert not t.crossings

    def test_crossing_is_one_twist(self):
        assert builtin_tangle("crossing+") == builtin_tangle("twist(1)")
        assert builtin_tangle("crossing-") == builtin_tangle("twist(-1)")
        assert builtin_tangle("twist(0)") == IDENTITY

    def test_twist_crossing_count(self):
        assert len(builtin_tangle("twist(3)").crossings) == 3
        assert len(builtin_tangle("twist(-2)").crossings) == 2

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            builtin_tangle("granny")

    def test_fragment_validation(self):
        with pytest.raises(ValueError, match="NW"):
            TwoTangle("bad", (0, 1), (), (("NW", (0, 0)), ("NE", (0, 1))))
        with pytest.raises(ValueError, match="distinct"):
            TwoTangle(
                "bad",
                (0, 1),
                (),
                (
                    ("NW", (0, 0)),
                    ("SW", (0, 0)),
                    ("NE", (1, 0)),
                    ("SE", (1, 1)),
                ),
            )
        with pytest.raises(ValueError, match="dangling"):
            TwoTangle(
                "bad",
                (0, 1, 2),
                (),
                (
                    ("NW", (0, 0)),
                    ("SW", (0, 1)),
                    ("NE", (1, 0)),
                    ("SE", (1, 1)),
                ),
            )


class TestInsertion:
    @pytest.mark.parametrize(
        "d",
        [gen_example("U", 1), gen_example("U", 2), gen_example("K", 1), gen_example("K", 2)],
        ids=["U1", "U2", "K1", "K2"],
    )
    def test_all_identity_is_underlying_link(self, d):
        out = uniform(d, IDENTITY)
        assert validate(out) == []
        assert canonical_key(out) == canonical_key(underlying_link(d))

    def test_curl_calibration(self):
        u1 = gen_example("U", 1)
        assert kauffman_bracket(uniform(u1, CROSS_P)).to_text() == "-A^3"
        assert kauffman_bracket(uniform(u1, CROSS_M)).to_text() == "-A^-3"
        k1 = gen_example("K", 1)
        got = {
            kauffman_bracket(uniform(k1, t)).to_text() for t in (CROSS_P, CROSS_M)
        }
        assert got == {"-A^3", "-A^-3"}

    def test_results_are_classical_and_valid(self):
        for d in (gen_example("U", 2), gen_example("K", 2)):
            for t in FAMILY:
                out = uniform(d, t)
                assert out.is_classical()
                assert validate(out) == []

    def test_partial_assignment_rejected(self):
        d = gen_example("K", 2)
        keys = sorted(bond_sites(d))
        with pytest.raises(ValueError):
            insert_tangles(d, {keys[0]: IDENTITY})

    def test_non_standard_rejected(self):
        d = gen_example("K", 2)
        kind = MoveKind("bondR2", "do", 1)
        site = find_moves(d, kind)[0]
        bad = apply_move(d, kind, site, RIGID)
        assert not bad.is_standard()
        with pytest.raises(ValueError, match="standardize first"):
            uniform(bad, IDENTITY)

    def test_commutes_with_disjoint_union(self):
        u1, k1 = gen_example("U", 1), gen_example("K", 1)
        du = disjoint_union(u1, k1)
        for t in FAMILY:
            a = uniform(du, t)
            b = disjoint_union(uniform(u1, t), uniform(k1, t))
            assert canonical_key(a) == canonical_key(b)


class TestBandReplacement:
    def test_band_duplicates_bond_crossings(self):
        d = closure(parse_word("n=3: B1,3[o]"))
        assert d.is_standard() and not d.is_tight()
        out = uniform(d, IDENTITY)
        assert validate(out) == []
        # one inherited crossing per band edge
        assert len(out.crossing_ids()) == 2
        assert fingerprint(out) == fingerprint(underlying_link(d))

    def test_insertions_match_tightened_diagram(self):
        for text in ("n=3: B1,3[o]", "n=3: B1,3[u]", "n=3: s1 B1,3[o] s2^-1"):
            d = closure(parse_word(text))
            assert tangle_invariant_set(d, FAMILY) == tangle_invariant_set(
                tighten(d), FAMILY
            )


class TestBracketDecomposition:
    @pytest.mark.parametrize(
        "d",
        [
            gen_example("U", 1),
            gen_example("U", 2),
            gen_example("U", 3),
            gen_example("K", 1),
            gen_example("K", 2),
            gen_example("K", 3),
            tighten(closure(parse_word("n=2: s1 b1 s1"))),
            tighten(closure(parse_word("n=3: b1 s2 b2 s1^-1"))),
        ],
        ids=["U1", "U2", "U3", "K1", "K2", "K3", "w1", "w2"],
    )
    def test_weighted_sum_is_bonded_bracket(self, d):
        keys = sorted(bond_sites(d))
        total = ZERO
        for combo in product(BRACKET_FAMILY, repeat=len(keys)):
            weight = ONE
            for _, w in combo:
                weight = weight * w
            asg = {k: t for k, (t, _) in zip(keys, combo)}
            total = total + weight * kauffman_bracket(insert_tangles(d, asg))
        assert total == bonded_bracket(d)


SAFE_TAGS = {"R1", "R2", "R3", "mixedR2", "mixedR3", "VS"}


def safe_rigid_walk(d, steps, seed):
    """Random rigid-calculus walk that keeps the diagram standard and the
    bond's blackboard band framing untwisted."""
    rng = random.Random(seed)
    pool = [k for k in walk_kinds(RIGID) if k.tag in SAFE_TAGS]
    cap = len(d.crossing_ids()) + 8
    for _ in range(steps):
        cands = []
        for k in pool:
            if k.sense == "do" and len(d.crossing_ids()) >= cap:
                continue
            for s in find_moves(d, k):
                cands.append((k, s))
        if not cands:
            break
        k, s = rng.choice(cands)
        out = apply_move(d, k, s, RIGID)
        if out.is_standard():
            d = out
    return d


class TestInvariantSet:
    def test_classical_diagram_single_entry(self):
        d = underlying_link(gen_example("K", 1))
        out = tangle_invariant_set(d, FAMILY)
        assert out == {(): fingerprint(d)}

    def test_bound_exceeded(self):
        d = gen_example("K", 2)
        with pytest.raises(ValueError, match="bound"):
            tangle_invariant_set(d, FAMILY, bound=3)

    def test_keys_follow_bond_order(self):
        d = gen_example("K", 2)
        out = tangle_invariant_set(d, [IDENTITY, CROSS_P])
        assert set(out) == {
            ("identity", "identity"),
            ("identity", "crossing+"),
            ("crossing+", "identity"),
            ("crossing+", "crossing+"),
        }

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_multiset_invariant_under_framed_rigid_walks(self, seed):
        for d in (
            gen_example("U", 1),
            gen_example("K", 2),
            closure(parse_word("n=3: B1,3[o]")),
            closure(parse_word("n=2: s1 b1")),
        ):
            before = multiset(d)
            walked = safe_rigid_walk(d, 50, seed)
            assert multiset(walked) == before

    def test_topological_vertex_twist_changes_multiset(self):
        d = gen_example("U", 1)
        before = multiset(d)
        hits = []
        for ch in (1, -1):
            kind = MoveKind("TVT", "do", ch)
            for s in find_moves(d, kind):
                out = apply_move(d, kind, s, TOPOLOGICAL)
                if out.is_standard() and multiset(out) != before:
                    hits.append((ch, s))
        assert hits, "expected a vertex twist that changes the multiset"

    def test_disc_twist_changes_multiset_for_open_family(self):
        # the family {identity, crossing+, crossing-} is not closed under
        # adding a twist, so a rigid disc twist at a node shifts the
        # insertions out of the family and the multiset moves with them
        d = gen_example("U", 1)
        before = multiset(d)
        kind = MoveKind("RVT", "do", 1)
        sites = find_moves(d, kind)
        assert sites
        out = apply_move(d, kind, sites[0], RIGID)
        assert multiset(out) != before
