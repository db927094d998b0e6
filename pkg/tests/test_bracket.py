"""Bracket state sums: convention pins, oracle agreement, closed forms."""
import random

import pytest

from bondforge.braidalg import BraidWord, Letter, closure, parse_word
from bondforge.bracket import (
    bonded_bracket,
    bonded_bracket_naive,
    kauffman_bracket,
    kauffman_bracket_naive,
    normalized_jones,
    state_count,
)
from bondforge.diagram import BondedDiagram, FreeLoop, gen_example, validate
from bondforge.polyring import (
    A,
    A_INV,
    D_LOOP,
    ONE,
    VAR_a,
    LaurentPoly,
    parse_poly,
)

NEG_A3 = -(A ** 3)


def unknot():
    return BondedDiagram({}, {0: FreeLoop(0)}, {0: ()})


def random_word(rng, n, length, bonds=0):
    letters = []
    for _ in range(length):
        letters.append(Letter("s", rng.randrange(1, n), rng.choice([1, -1])))
    for _ in range(bonds):
        pos = rng.randrange(len(letters) + 1)
        letters.insert(pos, Letter("b", rng.randrange(1, n)))
    return BraidWord(n, tuple(letters))


class TestKauffman:
    def test_unknot(self):
        assert kauffman_bracket(unknot()) == ONE

    def test_circles(self):
        two = BondedDiagram({}, {0: FreeLoop(0), 1: FreeLoop(1)}, {0: (), 1: ()})
        assert kauffman_bracket(two) == D_LOOP

    def test_positive_curl(self):
        d = closure(parse_word("n=2: s1"))
        assert kauffman_bracket(d) == NEG_A3
        assert kauffman_bracket_naive(d) == NEG_A3

    def test_negative_curl(self):
        d = closure(parse_word("n=2: s1^-1"))
        assert kauffman_bracket(d) == -(A_INV ** 3)

    def test_trefoil(self):
        # <s1^3 closure> = -A^5 - A^-3 + A^-7 under the -A^3-curl convention
        d = closure(parse_word("n=2: s1 s1 s1"))
        expected = -(A ** 5) - A_INV ** 3 + A_INV ** 7
        assert kauffman_bracket_naive(d) == expected
        assert kauffman_bracket(d) == expected

    def test_rejects_bonds(self):
        with pytest.raises(ValueError, match="not classical"):
            kauffman_bracket(gen_example("U", 1))

    def test_oracle_agreement_random(self):
        rng = random.Random(42)
        for _ in range(40):
            n = rng.randrange(2, 5)
            w = random_word(rng, n, rng.randrange(0, 8))
            d = closure(w)
            assert kauffman_bracket(d) == kauffman_bracket_naive(d), w


class TestJones:
    def test_unknot_with_curls(self):
        for text in ["n=2: s1", "n=2: s1^-1", "n=3: s1 s2^-1"]:
            assert normalized_jones(closure(parse_word(text))) == ONE

    def test_trefoil_value(self):
        d = closure(parse_word("n=2: s1 s1 s1"))
        # (-A^3)^-3 * (-A^5 - A^-3 + A^-7)
        expected = A_INV ** 4 + A_INV ** 12 - A_INV ** 16
        assert normalized_jones(d) == expected

    def test_mirror_conjugates(self):
        left = normalized_jones(closure(parse_word("n=2: s1 s1 s1")))
        right = normalized_jones(closure(parse_word("n=2: s1^-1 s1^-1 s1^-1")))
        swapped = LaurentPoly({(-eA, ea, eb): c for (eA, ea, eb), c in left.terms.items()})
        assert right == swapped

    def test_hopf_vs_unlink(self):
        hopf = normalized_jones(closure(parse_word("n=2: s1 s1")))
        unlink = normalized_jones(closure(parse_word("n=2:")))
        assert unlink == D_LOOP
        assert hopf != unlink


class TestBondedBracket:
    def test_requires_tight(self):
        d = closure(parse_word("n=3: B1,3o"))
        with pytest.raises(ValueError, match="tighten first"):
            bonded_bracket(d)

    def test_u_closed_form(self):
        base = VAR_a - A ** 3 - A_INV ** 3
        for n in range(1, 7):
            got = bonded_bracket(gen_example("U", n)).substitute("b", 1)
            assert got == base ** n, n

    def test_k1(self):
        got = bonded_bracket(gen_example("K", 1)).substitute("b", 1)
        assert got == VAR_a * D_LOOP - A ** 3 - A_INV ** 3

    def test_k_closed_form(self):
        u = VAR_a - A ** 3 - A_INV ** 3
        s = VAR_a + A + A_INV
        t = A + A_INV
        for n in range(1, 7):
            expected = s ** (n - 1) * (VAR_a * D_LOOP - A ** 3 - A_INV ** 3)
            expected = expected + t * sum(
                (s ** (n - i - 1) * u ** i for i in range(1, n)),
                start=LaurentPoly(),
            )
            got = bonded_bracket(gen_example("K", n)).substitute("b", 1)
            assert got == expected, n

    def test_k_induction_step(self):
        s = VAR_a + A + A_INV
        t = A + A_INV
        for n in range(1, 6):
            k_n = bonded_bracket(gen_example("K", n)).substitute("b", 1)
            k_n1 = bonded_bracket(gen_example("K", n + 1)).substitute("b", 1)
            u_n = bonded_bracket(gen_example("U", n)).substitute("b", 1)
            assert k_n1 == s * k_n + t * u_n

    def test_a_degree_is_bond_count(self):
        rng = random.Random(7)
        for _ in range(30):
            n = rng.randrange(2, 5)
            w = random_word(rng, n, rng.randrange(0, 6), bonds=rng.randrange(1, 4))
            d = closure(w)
            assert validate(d) == []
            assert bonded_bracket(d).max_degree("a") == d.bond_count(), w

    def test_oracle_agreement(self):
        rng = random.Random(11)
        for _ in range(15):
            n = rng.randrange(2, 4)
            w = random_word(rng, n, rng.randrange(0, 6), bonds=rng.randrange(0, 3))
            d = closure(w)
            assert bonded_bracket(d) == bonded_bracket_naive(d), w

    def test_signs_ignored(self):
        plain = bonded_bracket(closure(parse_word("n=2: b1 s1 s1")))
        signed = bonded_bracket(closure(parse_word("n=2: b1 s1 s1 b1 b1^-1")))
        # different diagrams, but the enhanced pair only adds bonds; at least
        # verify sign data itself does not blow up evaluation
        assert plain.max_degree("a") == 1
        assert signed.max_degree("a") == 3

    def test_state_count(self):
        assert state_count(gen_example("U", 3)) == 27
        assert state_count(closure(parse_word("n=2: s1 s1 b1"))) == 12
