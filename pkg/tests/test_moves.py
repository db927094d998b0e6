"""Diagram rewriting: local moves, random walks, standardize/tighten."""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bondforge.bracket import NEG_A3, NEG_A3_INV, bonded_bracket, kauffman_bracket
from bondforge.braidalg import BraidWord, Letter, closure, parse_word
from bondforge.diagram import canonical_key, gen_example, validate
from bondforge.moves import (
    RIGID,
    TOPOLOGICAL,
    MoveKind,
    MoveSite,
    apply_move,
    find_moves,
    random_walk,
    standardize,
    tighten,
    walk_kinds,
)
from bondforge.unplug import fingerprint, underlying_link, unplug_bonded, unplug_full_set

BASE_WORDS = [
    "n=2: s1 b1",
    "n=2: s1 s1 s1 b1",
    "n=3: s1 s2^-1 b1 b2",
    "n=3: b1 s2 s2 b2",
]


def bases():
    return [closure(parse_word(w)) for w in BASE_WORDS]


def all_sites(d, tag, senses=("do",), chirs=(1, -1)):
    out = []
    for sense in senses:
        for chir in chirs:
            k = MoveKind(tag, sense, chir)
            for site in find_moves(d, k):
                out.append((k, site))
    return out


class TestSiteEnumeration:
    def test_tvt_four_sites_per_chirality_on_tight_bond(self):
        d = gen_example("U", 1)  # one bond, two nodes, tight
        for chir in (1, -1):
            assert len(find_moves(d, MoveKind("TVT", "do", chir))) == 4

    def test_cancel_needs_opposite_signs(self):
        paired = closure(parse_word("n=2: b1 b1^-1"))
        same = closure(parse_word("n=2: b1 b1"))
        assert len(all_sites(paired, "enhancedCancel")) == 4
        assert all_sites(same, "enhancedCancel") == []

    def test_node_slide_sites_are_nodes(self):
        d = closure(parse_word("n=2: s1 b1"))
        sites = find_moves(d, MoveKind("nodeSlide"))
        assert sorted(s.data[-1] for s in sites) == sorted(d.node_ids())

    def test_unknown_tag_rejected(self):
        with pytest.raises(ValueError, match="unknown move tag"):
            MoveKind("R4")


class TestValidity:
    @pytest.mark.parametrize(
        "tag", ["R1", "R2", "VS", "TVT", "enhancedCancel", "nodeSlide"]
    )
    def test_every_produced_diagram_validates(self, tag):
        senses = ("do", "undo")
        for d in bases():
            for k, site in all_sites(d, tag, senses):
                out = apply_move(d, k, site)
                assert validate(out) == []

    def test_r3_and_rvt_validate(self):
        for d in bases():
            for k, site in all_sites(d, "R3"):
                assert validate(apply_move(d, k, site)) == []
            for k, site in all_sites(d, "RVT", ("do", "undo")):
                assert validate(apply_move(d, k, site, RIGID)) == []


class TestRoundTrips:
    @pytest.mark.parametrize("tag", ["R1", "R2", "VS", "TVT"])
    def test_do_then_undo_restores_canonical_form(self, tag):
        for d in bases():
            key0 = canonical_key(d)
            for k, site in all_sites(d, tag):
                d2 = apply_move(d, k, site)
                undo = MoveKind(tag, "undo", k.chirality)
                assert any(
                    canonical_key(apply_move(d2, undo, s2)) == key0
                    for s2 in find_moves(d2, undo)
                ), (tag, k.chirality, site)

    def test_rvt_round_trip(self):
        d = gen_example("U", 1)
        key0 = canonical_key(d)
        for k, site in all_sites(d, "RVT"):
            d2 = apply_move(d, k, site, RIGID)
            undo = MoveKind("RVT", "undo", k.chirality)
            assert any(
                canonical_key(apply_move(d2, undo, s2, RIGID)) == key0
                for s2 in find_moves(d2, undo)
            )

    def test_r3_is_an_involution(self):
        for d in bases():
            for k, site in all_sites(d, "R3", chirs=(1,)):
                d2 = apply_move(d, k, site)
                assert any(
                    canonical_key(apply_move(d2, k, s2)) == canonical_key(d)
                    for s2 in find_moves(d2, k)
                )

    def test_cancel_then_insert_restores(self):
        d = closure(parse_word("n=2: s1 s1 b1 b1^-1"))
        key0 = canonical_key(d)
        hits = 0
        for k, site in all_sites(d, "enhancedCancel"):
            d2 = apply_move(d, k, site)
            undo = MoveKind("enhancedCancel", "undo", k.chirality)
            hits += any(
                canonical_key(apply_move(d2, undo, s2)) == key0
                for s2 in find_moves(d2, undo)
            )
        assert hits > 0

    def test_insert_then_cancel_restores(self):
        d = closure(parse_word("n=2: s1 s1 s1"))
        key0 = canonical_key(d)
        for k, site in all_sites(d, "enhancedCancel", ("undo",)):
            d2 = apply_move(d, k, site)
            cancel = MoveKind("enhancedCancel", "do", k.chirality)
            assert any(
                canonical_key(apply_move(d2, cancel, s2)) == key0
                for s2 in find_moves(d2, cancel)
            )

    def test_node_slide_is_identity_on_the_encoding(self):
        d = closure(parse_word("n=2: s1 b1"))
        for k, site in all_sites(d, "nodeSlide", chirs=(1,)):
            assert canonical_key(apply_move(d, k, site)) == canonical_key(d)


class TestErrors:
    def test_stale_site(self):
        d = closure(parse_word("n=2: s1 b1"))
        bogus = MoveSite((), ("slide", 999, 0))
        with pytest.raises(ValueError, match="site mismatch"):
            apply_move(d, MoveKind("VS", "do"), bogus)

    def test_wrong_sense_site(self):
        d = closure(parse_word("n=2: s1 s1 s1"))
        k = MoveKind("R1", "do", 1)
        site = find_moves(d, k)[0]
        with pytest.raises(ValueError, match="site mismatch"):
            apply_move(d, MoveKind("R1", "undo", 1), site)

    def test_calculus_gates_twists(self):
        d = gen_example("U", 1)
        tvt = find_moves(d, MoveKind("TVT", "do", 1))[0]
        with pytest.raises(ValueError, match="move not in calculus"):
            apply_move(d, MoveKind("TVT", "do", 1), tvt, RIGID)
        rvt = find_moves(d, MoveKind("RVT", "do", 1))[0]
        with pytest.raises(ValueError, match="move not in calculus"):
            apply_move(d, MoveKind("RVT", "do", 1), rvt, TOPOLOGICAL)

    def test_unknown_calculus(self):
        d = closure(parse_word("n=2: s1 b1"))
        with pytest.raises(ValueError):
            random_walk(d, "hyperbolic", 1, seed=0)


class TestBracketBehaviour:
    def test_r1_multiplies_bracket_by_a_cubed_unit(self):
        for d in bases():
            b0 = bonded_bracket(d)
            for chir in (1, -1):
                k = MoveKind("R1", "do", chir)
                factor = NEG_A3 if chir > 0 else NEG_A3_INV
                for site in find_moves(d, k):
                    assert bonded_bracket(apply_move(d, k, site)) == factor * b0

    def test_tight_r2_r3_walk_preserves_bonded_bracket(self):
        kinds = [
            MoveKind("R2", "do", 1),
            MoveKind("R2", "do", -1),
            MoveKind("R2", "undo"),
            MoveKind("R3"),
        ]
        for n in (1, 2):
            d = gen_example("U", n)
            b0 = bonded_bracket(d)
            w, log = random_walk(d, RIGID, 40, seed=5 + n, kinds=kinds)
            assert len(log) == 40
            assert bonded_bracket(w) == b0

    def test_classical_walk_preserves_kauffman_bracket_up_to_curls(self):
        d = closure(parse_word("n=2: s1 s1 s1"))
        kinds = [
            MoveKind("R2", "do", 1),
            MoveKind("R2", "do", -1),
            MoveKind("R2", "undo"),
            MoveKind("R3"),
        ]
        w, _ = random_walk(d, TOPOLOGICAL, 40, seed=2, kinds=kinds)
        assert kauffman_bracket(w) == kauffman_bracket(d)


class TestTopologicalInvariance:
    def test_walks_preserve_unplug_invariants(self):
        for seed, word in enumerate(BASE_WORDS[:3]):
            d = closure(parse_word(word))
            w, log = random_walk(d, TOPOLOGICAL, 25, seed=seed)
            assert len(log) == 25
            assert unplug_bonded(w) == unplug_bonded(d)
            assert unplug_full_set(w) == unplug_full_set(d)

    def test_walks_preserve_underlying_link_fingerprint(self):
        d = closure(parse_word("n=2: s1 s1 s1 b1"))
        w, _ = random_walk(d, TOPOLOGICAL, 25, seed=9)
        assert fingerprint(underlying_link(w)) == fingerprint(underlying_link(d))

    def test_tvt_alone_preserves_unplug_sets(self):
        d = gen_example("U", 1)
        for k, site in all_sites(d, "TVT"):
            assert unplug_full_set(apply_move(d, k, site)) == unplug_full_set(d)


class TestRandomWalk:
    def test_deterministic_in_seed(self):
        d = closure(parse_word("n=2: s1 b1"))
        a, la = random_walk(d, TOPOLOGICAL, 30, seed=7)
        b, lb = random_walk(d, TOPOLOGICAL, 30, seed=7)
        c, _ = random_walk(d, TOPOLOGICAL, 30, seed=8)
        assert la == lb
        assert canonical_key(a) == canonical_key(b)
        assert canonical_key(a) != canonical_key(c)

    def test_zero_steps_is_identity(self):
        d = closure(parse_word("n=2: s1 b1"))
        w, log = random_walk(d, TOPOLOGICAL, 0, seed=1)
        assert log == []
        assert canonical_key(w) == canonical_key(d)

    def test_walks_preserve_bond_and_node_counts(self):
        d = closure(parse_word("n=3: b1 s2 b2"))
        nodes, bonds = len(d.node_ids()), len(d.bond_chains())
        for calculus in (TOPOLOGICAL, RIGID):
            w, _ = random_walk(d, calculus, 30, seed=4)
            assert validate(w) == []
            assert len(w.node_ids()) == nodes
            assert len(w.bond_chains()) == bonds

    def test_pool_respects_calculus(self):
        tags = {k.tag for k in walk_kinds(TOPOLOGICAL)}
        assert "TVT" in tags and "RVT" not in tags
        tags = {k.tag for k in walk_kinds(RIGID)}
        assert "RVT" in tags and "TVT" not in tags
        with pytest.raises(ValueError, match="move not in calculus"):
            random_walk(
                closure(parse_word("n=2: s1 b1")),
                RIGID,
                1,
                seed=0,
                kinds=[MoveKind("TVT", "do", 1)],
            )

    def test_crossing_growth_is_capped(self):
        d = closure(parse_word("n=2: s1 b1"))
        cap = len(d.crossing_ids()) + 8
        w, _ = random_walk(d, TOPOLOGICAL, 60, seed=3)
        assert len(w.crossing_ids()) <= cap + 2  # one growing move past the cap


def random_bonded_word(rng, n=3, length=6):
    letters = []
    for _ in range(length):
        r = rng.random()
        if r < 0.55:
            letters.append(Letter("s", rng.randrange(1, n), rng.choice([1, -1])))
        elif r < 0.8:
            letters.append(Letter("b", rng.randrange(1, n)))
        else:
            pattern = "".join(rng.choice("ou"))
            letters.append(Letter("B", 1, 1, 3, pattern))
    return BraidWord(n, tuple(letters))


class TestStandardizeTighten:
    def test_postconditions_on_random_diagrams(self):
        rng = random.Random(0)
        for trial in range(40):
            d = closure(random_bonded_word(rng))
            w, _ = random_walk(d, TOPOLOGICAL, rng.randrange(0, 10), seed=trial)
            s = standardize(w)
            assert validate(s) == []
            assert s.is_standard()
            t = tighten(w)
            assert validate(t) == []
            assert t.is_tight()
            assert unplug_bonded(t) == unplug_bonded(d)

    def test_tighten_replaces_bond_crossing_with_two_link_crossings(self):
        d = closure(parse_word("n=3: B1,3o"))
        assert not d.is_tight()
        t = tighten(d)
        assert t.is_tight()
        assert len(t.crossing_ids()) == len(d.crossing_ids()) + 1

    def test_idempotent(self):
        d = closure(parse_word("n=3: B1,3u b2"))
        t = tighten(d)
        assert canonical_key(tighten(t)) == canonical_key(t)
        s = standardize(d)
        assert canonical_key(standardize(s)) == canonical_key(s)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10 ** 6), steps=st.integers(0, 12))
def test_walks_always_produce_valid_diagrams(seed, steps):
    rng = random.Random(seed)
    d = closure(random_bonded_word(rng, length=4))
    for calculus in (TOPOLOGICAL, RIGID):
        w, _ = random_walk(d, calculus, steps, seed=seed)
        assert validate(w) == []
        assert len(w.node_ids()) == len(d.node_ids())
