"""Unplugging resolutions and their classical-link fingerprints."""
import random
from pathlib import Path

import pytest

from bondforge.braidalg import BraidWord, Letter, closure, parse_word
from bondforge.diagram import gen_example, parse_bpd, validate
from bondforge.polyring import D_LOOP, ONE
from bondforge.unplug import (
    EMPTY_FINGERPRINT,
    Fingerprint,
    fingerprint,
    unplug,
    unplug_bonded,
    unplug_full_set,
    unplug_strict_set,
)

DATA = Path(__file__).parent / "data"

TREFOIL_JONES = fingerprint(closure(parse_word("n=2: s1 s1 s1"))).jones
UNKNOT = Fingerprint(1, ONE)


def load(name):
    d = parse_bpd((DATA / name).read_text())
    assert validate(d) == []
    return d


class TestFingerprint:
    def test_equality_ignores_crossing_count(self):
        a = Fingerprint(1, ONE, 0)
        b = Fingerprint(1, ONE, 7)
        assert a == b
        assert hash(a) == hash(b)

    def test_orientation_free(self):
        # reversing one component of the Hopf link flips its writhe sign
        # but the canonicalized value must not move
        pos = fingerprint(closure(parse_word("n=2: s1 s1")))
        neg = fingerprint(closure(parse_word("n=2: s1^-1 s1^-1")))
        assert pos == neg

    def test_unlinks(self):
        f = fingerprint(closure(parse_word("n=3:")))
        assert f.component_count == 3
        assert f.jones == D_LOOP ** 2


class TestUnplugOperation:
    def test_bond_choice_everywhere_gives_underlying(self):
        d = gen_example("U", 2)
        choice = {vid: d.node_bond_dart(vid)[0] for vid in d.node_ids()}
        resolved, arcs = unplug(d, choice)
        assert arcs == 2  # the two detached bonds
        assert fingerprint(resolved) == unplug_bonded(d)

    def test_strict_rejects_bond_choice(self):
        d = gen_example("U", 1)
        choice = {vid: d.node_bond_dart(vid)[0] for vid in d.node_ids()}
        with pytest.raises(ValueError, match="strict forbids bond unplug"):
            unplug(d, choice, strict=True)

    def test_classical_diagram_untouched(self):
        d = closure(parse_word("n=2: s1 s1 s1"))
        resolved, arcs = unplug(d, {})
        assert arcs == 0
        assert fingerprint(resolved) == fingerprint(d)


class TestSets:
    def test_classical_singleton(self):
        d = closure(parse_word("n=2: s1 s1"))
        assert unplug_full_set(d) == (fingerprint(d),)
        assert unplug_strict_set(d) == (fingerprint(d),)

    def test_u1_closed_resolutions_all_unknot(self):
        # matched choices close up to unknots; mismatched choices leave
        # everything open and contribute the empty fingerprint
        full = set(unplug_full_set(gen_example("U", 1)))
        assert full == {UNKNOT, EMPTY_FINGERPRINT}

    def test_u_and_k_bonded(self):
        for n in range(0, 5):
            assert unplug_bonded(gen_example("U", n)) == UNKNOT
        for n in range(1, 5):
            f = unplug_bonded(gen_example("K", n))
            assert f.component_count == 2
            assert f.jones == D_LOOP

    def test_bond_unplug_in_full_set(self):
        d = closure(parse_word("n=3: b1 s2 s2 b2"))
        assert unplug_bonded(d) in set(unplug_full_set(d))

    def test_node_bound(self):
        d = gen_example("U", 3)  # 6 nodes
        with pytest.raises(ValueError, match="exceeds bound"):
            unplug_full_set(d, node_bound=5)


class TestWitnesses:
    def test_bonded_unplug_distinguishes_pair(self):
        plain = load("bonded_unknot.bpd")
        knotted = load("bonded_trefoil.bpd")
        assert unplug_bonded(plain) == UNKNOT
        f = unplug_bonded(knotted)
        assert f.component_count == 1
        assert f.jones == TREFOIL_JONES
        assert unplug_bonded(plain) != f

    def test_strict_set_detects_knotted_bond(self):
        g = load("knotted_bond_theta.bpd")
        assert unplug_bonded(g) == UNKNOT  # bonded unplugging sees nothing
        strict = unplug_strict_set(g)
        assert Fingerprint(1, TREFOIL_JONES) in set(strict)
        assert strict == tuple(
            sorted(
                [
                    EMPTY_FINGERPRINT,
                    EMPTY_FINGERPRINT,
                    UNKNOT,
                    Fingerprint(1, TREFOIL_JONES),
                ],
                key=Fingerprint.sort_key,
            )
        )

    def test_swapped_encoding_agrees(self):
        g = load("knotted_bond_theta.bpd")
        gl = load("knotted_bond_theta_swapped.bpd")
        assert unplug_bonded(g) == unplug_bonded(gl)
        assert unplug_strict_set(g) == unplug_strict_set(gl)
        assert unplug_full_set(g) == unplug_full_set(gl)

    def test_goldens_match_construction(self):
        import sys

        sys.path.insert(0, str(Path(__file__).parent))
        from witnesses import knotted_bond_theta

        from bondforge.diagram import canonical_key

        assert canonical_key(load("knotted_bond_theta.bpd")) == canonical_key(
            knotted_bond_theta()
        )


class TestRandomConsistency:
    def test_full_set_contains_strict_values(self):
        rng = random.Random(3)
        for _ in range(10):
            letters = []
            n = rng.randrange(2, 4)
            for _ in range(rng.randrange(0, 4)):
                letters.append(Letter("s", rng.randrange(1, n), rng.choice([1, -1])))
            letters.append(Letter("b", rng.randrange(1, n)))
            d = closure(BraidWord(n, tuple(letters)))
            full = unplug_full_set(d)
            strict = unplug_strict_set(d)
            assert set(strict) <= set(full)
            assert len(full) == 3 ** len(d.node_ids())
            assert len(strict) == 2 ** len(d.node_ids())
