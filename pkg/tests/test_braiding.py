"""Morse slice sequences: diagram building, bond preparation, braiding,
and the closure-invariant certificate."""
import random
import time

import pytest

from bondforge.braiding import (
    Bond,
    Cap,
    Cross,
    Cup,
    SliceSequence,
    braid,
    braid_certificate,
    example_slices,
    parse_bms,
    prepare_bonds,
    random_slices,
    slices_to_diagram,
    to_bms,
    trace,
)
from bondforge.braidalg import BraidWord, closure, format_word, parse_word
from bondforge.diagram import REPELLING, canonical_key, gen_example, validate
from bondforge.moves import RIGID
from bondforge.unplug import fingerprint, unplug_bonded, unplug_strict_set

UNKNOT = SliceSequence((Cup(1, "lu"), Cap(1)))
U1 = SliceSequence((Cup(1, "ru"), Bond(1), Cap(1)))
TREFOIL = SliceSequence(
    (
        Cup(1, "ru"),
        Cup(2, "ru"),
        Cross(1, 1),
        Cross(1, 1),
        Cross(1, 1),
        Cap(2),
        Cap(1),
    )
)


def certificate_invariants(d):
    return (
        unplug_bonded(d),
        unplug_strict_set(d),
        d.bond_count(),
        d.component_count(),
    )


class TestValidation:
    def test_unbalanced(self):
        with pytest.raises(ValueError, match="unbalanced"):
            slices_to_diagram(SliceSequence((Cup(1, "lu"),)))
        with pytest.raises(ValueError, match="out of range"):
            trace(SliceSequence((Cap(1),)))

    def test_positions_checked(self):
        with pytest.raises(ValueError, match="out of range"):
            trace(SliceSequence((Cup(3, "lu"), Cap(1))))
        with pytest.raises(ValueError, match="out of range"):
            trace(SliceSequence((Cup(1, "lu"), Cross(2, 1), Cap(1))))
        with pytest.raises(ValueError, match="out of range"):
            trace(SliceSequence((Cup(1, "lu"), Bond(2), Cap(1))))

    def test_cap_needs_antiparallel_strands(self):
        bad = SliceSequence((Cup(1, "lu"), Cup(2, "lu"), Cap(1), Cap(1)))
        with pytest.raises(ValueError, match="parallel"):
            trace(bad)

    def test_bond_pattern_length(self):
        with pytest.raises(ValueError, match="o/u"):
            trace(
                SliceSequence(
                    (Cup(1, "lu"), Cup(3, "lu"), Bond(1, 2, "ou"), Cap(3), Cap(1))
                )
            )

    def test_strand_balance_of_random_sequences(self):
        for seed in range(100):
            s = random_slices(random.Random(seed), 12, 2)
            trace(s)  # raises on any imbalance


class TestBmsFormat:
    def test_roundtrip(self):
        seqs = [
            UNKNOT,
            U1,
            TREFOIL,
            SliceSequence(
                (
                    Cup(1, "ru"),
                    Cup(3, "lu"),
                    Bond(1, 2, "u", "-"),
                    Cross(2, -1),
                    Cap(3),
                    Cap(1),
                )
            ),
        ]
        for s in seqs:
            assert parse_bms(to_bms(s)) == s

    def test_random_roundtrip(self):
        for seed in range(30):
            s = random_slices(random.Random(seed), 12, 2)
            assert parse_bms(to_bms(s)) == s

    def test_comments_and_blanks(self):
        text = "# a circle\n\ncup 1 lu\ncap 1  # done\n"
        assert parse_bms(text) == UNKNOT

    def test_parse_errors(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_bms("cupboard 1 lu\n")
        with pytest.raises(ValueError, match="line 2"):
            parse_bms("cup 1 lu\ncap x\n")


class TestSlicesToDiagram:
    def test_unknot(self):
        d = slices_to_diagram(UNKNOT)
        assert validate(d) == []
        assert fingerprint(d) == fingerprint(closure(parse_word("n=1:")))

    def test_trefoil_template(self):
        d = slices_to_diagram(TREFOIL)
        ref = closure(parse_word("n=2: s1 s1 s1"))
        assert fingerprint(d) == fingerprint(ref)
        mirror = SliceSequence(
            tuple(
                Cross(e.pos, -e.sign) if isinstance(e, Cross) else e
                for e in TREFOIL.events
            )
        )
        assert fingerprint(slices_to_diagram(mirror)) == fingerprint(
            closure(parse_word("n=2: s1^-1 s1^-1 s1^-1"))
        )

    def test_single_bonded_unknot(self):
        d = slices_to_diagram(U1)
        assert canonical_key(d) == canonical_key(gen_example("U", 1))

    def test_example_families_match_generated_diagrams(self):
        for fam in "UK":
            for n in range(1, 5):
                d = slices_to_diagram(example_slices(fam, n))
                g = gen_example(fam, n)
                assert validate(d) == []
                assert unplug_bonded(d) == unplug_bonded(g)
                assert unplug_strict_set(d) == unplug_strict_set(g)
                assert d.bond_count() == g.bond_count()

    def test_negative_bond_sign_marks_edges(self):
        s = SliceSequence((Cup(1, "ru"), Bond(1, 1, "", "-"), Cap(1)))
        d = slices_to_diagram(s)
        assert REPELLING in {rec.sign for rec in d.edges.values()}


class TestPrepareBonds:
    def test_rigid_rejected(self):
        with pytest.raises(ValueError, match="topological category"):
            prepare_bonds(U1, category=RIGID)
        with pytest.raises(ValueError, match="topological category"):
            braid(U1, category=RIGID)

    def _bond_ends_down(self, s):
        tr = trace(s)
        for ide in tr.evs:
            if ide[0] == "bond":
                if tr.orient[ide[1]] == 1 or tr.orient[ide[2]] == 1:
                    return False
        return True

    def test_bond_on_down_strands_unchanged(self):
        s = SliceSequence(
            (Cup(1, "ru"), Cup(1, "ru"), Bond(1, 2, "o"), Cap(1), Cap(1))
        )
        assert self._bond_ends_down(s)
        assert prepare_bonds(s) == s

    @pytest.mark.parametrize(
        "s",
        [
            U1,  # one endpoint upward (anti-parallel strands)
            SliceSequence((Cup(1, "lu"), Bond(1), Cap(1))),
            SliceSequence(  # both endpoints upward
                (Cup(1, "ru"), Cup(1, "ru"), Bond(2, 2, "o"), Cap(3), Cap(1))
            ),
        ],
    )
    def test_rewrites_put_bonds_on_down_arcs(self, s):
        out = prepare_bonds(s)
        assert self._bond_ends_down(out)
        lhs, rhs = slices_to_diagram(s), slices_to_diagram(out)
        assert certificate_invariants(lhs) == certificate_invariants(rhs)

    def test_random_sequences_prepared_correctly(self):
        rng = random.Random(5)
        for _ in range(40):
            s = random_slices(rng, 12, 2)
            out = prepare_bonds(s)
            assert self._bond_ends_down(out)
            assert prepare_bonds(out) == out
            assert certificate_invariants(
                slices_to_diagram(s)
            ) == certificate_invariants(slices_to_diagram(out))


class TestBraid:
    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            braid(SliceSequence(()))

    def test_monotone_input_round_trips(self):
        w = braid(TREFOIL)
        assert format_word(w) == "n=2: s1 s1 s1"

    def test_output_uses_only_crossings_and_elementary_bonds(self):
        rng = random.Random(9)
        for _ in range(30):
            w = braid(random_slices(rng, 12, 2))
            assert all(let.kind in ("s", "b") for let in w.letters)

    def test_bonded_unknot(self):
        w = braid(U1)
        assert sum(1 for l in w.letters if l.kind == "b") == 1
        assert certificate_invariants(closure(w)) == certificate_invariants(
            slices_to_diagram(U1)
        )

    def test_braided_families_keep_their_bonds(self):
        for fam in "UK":
            for n in (1, 2, 3):
                w = braid(example_slices(fam, n))
                assert sum(1 for l in w.letters if l.kind == "b") == n
                assert closure(w).bond_count() == n

    def test_crossingless_label_choice_is_free(self):
        rng = random.Random(13)
        for _ in range(20):
            s = random_slices(rng, 10, 1)
            wo = braid(s, crossingless_label="o")
            wu = braid(s, crossingless_label="u")
            assert certificate_invariants(closure(wo)) == certificate_invariants(
                closure(wu)
            )

    def test_negative_bond_sign_becomes_inverse_generator(self):
        s = SliceSequence((Cup(1, "ru"), Bond(1, 1, "", "-"), Cap(1)))
        w = braid(s)
        assert [l.exp for l in w.letters if l.kind == "b"] == [-1]


class TestCertificate:
    @pytest.mark.parametrize("fam", ["U", "K"])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_families_pass(self, fam, n):
        start = time.time()
        rep = braid_certificate(example_slices(fam, n))
        assert rep.ok, rep.lines()
        assert time.time() - start < 10

    def test_random_sequences_pass(self):
        rng = random.Random(42)
        for _ in range(20):
            s = random_slices(rng, 12, 2)
            rep = braid_certificate(s)
            assert rep.ok, (to_bms(s), rep.lines())

    def test_corrupted_word_fails(self):
        w = braid(U1)
        bad = BraidWord(w.n, w.letters[:-1])  # drop one generator
        rep = braid_certificate(U1, word=bad)
        assert not rep.ok
        assert any(line.startswith("FAIL") for line in rep.lines())
