"""Words in the bonded braid monoids and their diagram closures.

A word lives on ``n`` strands and is written in the text grammar

    n=<k>: s<i> s<i>^-1 b<i> b<i>^-1 B<i>,<j><pattern> ...

``s<i>`` is the positive crossing of strands i, i+1 (1-based), ``b<i>`` an
elementary bond between adjacent strands, and ``B<i>,<j>`` a long bond from
strand i to strand j whose ``pattern`` is a string of ``o``/``u`` letters,
one per intermediate strand, saying whether the bond passes over or under
it.  ``^-1`` inverts a crossing, or marks the repelling partner of a bond
in the enhanced (group-like) setting.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .diagram import (
    ATTRACTING,
    BOND,
    LINK,
    PLAIN,
    REPELLING,
    OVER_02,
    OVER_13,
    BondedDiagram,
    Crossing,
    EdgeRecord,
    FreeLoop,
    Node,
)

__all__ = [
    "Letter",
    "BraidWord",
    "parse_word",
    "format_word",
    "closure",
    "perm",
    "expsum",
    "bondcount",
    "forget_bonds",
    "collapse_bonds",
    "projections",
    "word_mode",
    "Relation",
    "bb_relations",
    "irredundant_relations",
    "singular_braid_relations",
    "rewrite_rules",
    "relation_neighbors",
    "expand_word",
    "free_reduce",
    "free_cancel",
    "translate_to_irredundant",
    "l_move",
    "SearchResult",
    "equiv_search",
    "MONOID",
    "ENHANCED",
]


@dataclass(frozen=True)
class Letter:
    kind: str  # "s" (crossing), "b" (elementary bond), "B" (long bond)
    i: int
    exp: int = 1
    j: int = 0  # long bonds only: far strand index
    pattern: str = ""  # long bonds only: o/u per intermediate strand

    def inverse(self) -> "Letter":
        return replace(self, exp=-self.exp)


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[Letter, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one strand")
        for let in self.letters:
            _check_letter(let, self.n)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise ValueError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)


def _check_letter(let: Letter, n: int) -> None:
    if let.exp not in (1, -1):
        raise ValueError(f"bad exponent {let.exp}")
    if let.kind == "s":
        if not 1 <= let.i <= n - 1:
            raise ValueError(f"s{let.i} out of range for n={n}")
    elif let.kind == "b":
        if not 1 <= let.i <= n - 1:
            raise ValueError(f"b{let.i} out of range for n={n}")
    elif let.kind == "B":
        if not 1 <= let.i < let.j <= n:
            raise ValueError(f"B{let.i},{let.j} out of range for n={n}")
        if len(let.pattern) != let.j - let.i - 1:
            raise ValueError(
                f"B{let.i},{let.j} needs {let.j - let.i - 1} pattern letters"
            )
        if any(c not in "ou" for c in let.pattern):
            raise ValueError("pattern letters must be o or u")
    else:
        raise ValueError(f"unknown generator kind {let.kind!r}")


_TOKEN_RE = re.compile(
    r"""(?: s(?P<si>\d+)
        | b(?P<bi>\d+)
        | B(?P<Bi>\d+),(?P<Bj>\d+)(?:\[(?P<patb>[ou]*)\]|(?P<pat>[ou]*))
        )(?P<inv>\^-1)?$""",
    re.VERBOSE,
)


def parse_word(text: str) -> BraidWord:
    """Parse the word grammar, e.g. ``"n=3: s2 s1^-1 b2"``."""
    m = re.match(r"\s*n\s*=\s*(\d+)\s*:\s*(.*)$", text, re.DOTALL)
    if not m:
        raise ValueError("word must start with 'n=<k>:'")
    n = int(m.group(1))
    letters = []
    for token in m.group(2).split():
        tm = _TOKEN_RE.match(token)
        if not tm:
            raise ValueError(f"bad token {token!r}")
        exp = -1 if tm.group("inv") else 1
        if tm.group("si") is not None:
            letters.append(Letter("s", int(tm.group("si")), exp))
        elif tm.group("bi") is not None:
            letters.append(Letter("b", int(tm.group("bi")), exp))
        else:
            letters.append(
                Letter(
                    "B",
                    int(tm.group("Bi")),
                    exp,
                    j=int(tm.group("Bj")),
                    pattern=tm.group("patb")
                    if tm.group("patb") is not None
                    else tm.group("pat"),
                )
            )
    return BraidWord(n, tuple(letters))


def format_word(word: BraidWord) -> str:
    parts = [f"n={word.n}:"]
    for let in word.letters:
        if let.kind == "B":
            body = f"B{let.i},{let.j}{let.pattern}"
        else:
            body = f"{let.kind}{let.i}"
        parts.append(body + ("^-1" if let.exp < 0 else ""))
    return " ".join(parts)


# -- projections -----------------------------------------------------------


def perm(word: BraidWord) -> tuple[int, ...]:
    """Induced permutation, as the image tuple (1-based positions).

    ``perm(w)[k]`` is where the strand starting at top position k+1 ends at
    the bottom.  Bonds do not permute.
    """
    image = list(range(1, word.n + 1))
    for let in word.letters:
        if let.kind == "s":
            i = let.i
            for t in range(word.n):
                if image[t] == i:
                    image[t] = i + 1
                elif image[t] == i + 1:
                    image[t] = i
    return tuple(image)


def expsum(word: BraidWord) -> int:
    """Sum of crossing exponents (bonds contribute nothing)."""
    return sum(let.exp for let in word.letters if let.kind == "s")


def bondcount(word: BraidWord) -> int:
    """Signed bond count: plain bonds +1 each, repelling partners -1."""
    return sum(let.exp for let in word.letters if let.kind in ("b", "B"))


def forget_bonds(word: BraidWord) -> BraidWord:
    """Delete every bond letter, leaving a classical braid word."""
    return BraidWord(
        word.n, tuple(let for let in word.letters if let.kind == "s")
    )


def collapse_bonds(word: BraidWord) -> BraidWord:
    """Collapse every bond to a positive crossing of the same strands.

    Long bonds collapse to the crossing of their two end strands conjugated
    past the intermediate ones, here realized on adjacent strands only after
    expansion; elementary bonds map to ``s<i>``.
    """
    letters = []
    for let in word.letters:
        if let.kind == "s":
            letters.append(let)
        elif let.kind == "b":
            letters.append(Letter("s", let.i, 1))
        else:
            for sub in expand_long_bond(let, word.n):
                letters.append(
                    sub if sub.kind == "s" else Letter("s", sub.i, 1)
                )
    return BraidWord(word.n, tuple(letters))


def expand_long_bond(let: Letter, n: int) -> tuple[Letter, ...]:
    """Rewrite a long bond as crossings conjugating an elementary bond.

    A bond from strand i to strand j passing in front of ('o') or behind
    ('u') the intermediate strands equals C b_{j-1} C^-1 where C slides the
    near end rightwards: C = s_i^e1 s_{i+1}^e2 ... s_{j-2}^e, with exponent
    +1 for a front pass and -1 for a back pass (so that the bond end
    carried along keeps the recorded crossing type with each intermediate
    strand; checked against the bonded bracket of the tightened closures).
    """
    if let.kind != "B":
        raise ValueError("not a long bond")
    i, j = let.i, let.j
    if j == i + 1:
        return (Letter("b", i, let.exp),)
    conj = []
    for t, c in enumerate(let.pattern):
        e = 1 if c == "o" else -1
        conj.append(Letter("s", i + t, e))
    out = conj + [Letter("b", j - 1, let.exp)] + [l.inverse() for l in reversed(conj)]
    return tuple(out)


# -- closure to a bonded diagram ------------------------------------------


class _SweepBuilder:
    """Build a diagram by sweeping top to bottom across n strand positions."""

    def __init__(self, n: int):
        self.n = n
        self.edges: dict[int, EdgeRecord] = {}
        self.vertices: dict = {}
        self._next_e = 0
        self._next_v = 0
        self.top: list = []
        self.front: list = []
        for _ in range(n):
            e = self.new_edge(LINK)
            self.top.append((e, 0))
            self.front.append((e, 1))

    def new_edge(self, kind: str, sign: str = PLAIN) -> int:
        e = self._next_e
        self._next_e += 1
        self.edges[e] = EdgeRecord(kind, sign)
        return e

    def add_vertex(self, v) -> int:
        vid = self._next_v
        self._next_v += 1
        self.vertices[vid] = v
        return vid

    def crossing(self, p: int, positive: bool) -> None:
        """Cross strand positions p, p+1 (0-based); positive = NW-SE over."""
        a = self.new_edge(LINK)
        b = self.new_edge(LINK)
        darts = (self.front[p], (a, 0), (b, 0), self.front[p + 1])
        self.add_vertex(Crossing(darts, OVER_02 if positive else OVER_13))
        self.front[p] = (a, 1)
        self.front[p + 1] = (b, 1)

    def bond(self, p: int, q: int, pattern: str, sign: str) -> None:
        """Bond from position p to q (0-based, p < q) across intermediates."""
        segments = [self.new_edge(BOND, sign) for _ in range(q - p)]
        a = self.new_edge(LINK)
        b = self.new_edge(LINK)
        # left node: bond east, strand in from north, out south
        self.add_vertex(Node(((segments[0], 0), self.front[p], (a, 0))))
        self.front[p] = (a, 1)
        for k, t in enumerate(range(p + 1, q)):
            c = self.new_edge(LINK)
            # crossing slots CCW: east(next segment), north(strand in),
            # west(previous segment), south(strand out)
            darts = (
                (segments[k + 1], 0),
                self.front[t],
                (segments[k], 1),
                (c, 0),
            )
            over = OVER_02 if pattern[k] == "o" else OVER_13
            self.add_vertex(Crossing(darts, over))
            self.front[t] = (c, 1)
        # right node: strand in from north, bond west, out south
        self.add_vertex(Node((self.front[q], (segments[-1], 1), (b, 0))))
        self.front[q] = (b, 1)

    def close_strands(self) -> BondedDiagram:
        """Join each bottom end to its own top end with a crossing-free arc."""
        vertices = dict(self.vertices)
        edges = dict(self.edges)
        remap: dict = {}
        free_loops = 0
        for p in range(self.n):
            e_top = self.top[p][0]
            e_bot = self.front[p][0]
            if e_top == e_bot:
                del edges[e_top]
                free_loops += 1
                continue
            # merge: the strand continues from the bottom of e_bot around to
            # the placed end of e_top
            remap[(e_top, 1)] = (e_bot, 1)
            del edges[e_top]
        if remap:
            for vid, v in vertices.items():
                if isinstance(v, Crossing):
                    vertices[vid] = Crossing(
                        tuple(remap.get(dd, dd) for dd in v.darts), v.over
                    )
                elif isinstance(v, Node):
                    vertices[vid] = Node(
                        tuple(remap.get(dd, dd) for dd in v.rotation)
                    )
        base = self._next_v
        for k in range(free_loops):
            vertices[base + k] = FreeLoop(k)
        return BondedDiagram(edges, vertices).orient_arbitrarily()


def closure(word: BraidWord) -> BondedDiagram:
    """The bonded diagram obtained by closing the braid word.

    Strands are oriented downwards through the braid; plain bonds stay
    unsigned unless the word uses inverse bonds, in which case bonds carry
    attracting (+) / repelling (-) signs.
    """
    enhanced = any(let.kind in ("b", "B") and let.exp < 0 for let in word.letters)
    sb = _SweepBuilder(word.n)
    for let in word.letters:
        if let.kind == "s":
            sb.crossing(let.i - 1, let.exp > 0)
        else:
            i = let.i
            j = let.j if let.kind == "B" else let.i + 1
            pattern = let.pattern if let.kind == "B" else ""
            if enhanced:
                sign = ATTRACTING if let.exp > 0 else REPELLING
            else:
                sign = PLAIN
            sb.bond(i - 1, j - 1, pattern, sign)
    return sb.close_strands()


# -- word modes and projections --------------------------------------------


MONOID = "monoid"
ENHANCED = "enhanced"


def word_mode(word: BraidWord) -> str:
    """Enhanced when any bond carries an inverse sign, else monoid."""
    for let in word.letters:
        if let.kind in ("b", "B") and let.exp < 0:
            return ENHANCED
    return MONOID


def projections(word: BraidWord) -> dict:
    """The standard homomorphic images of a word, as one record.

    Each entry is a homomorphism: on a concatenation it composes
    componentwise (permutations compose, counts add, words concatenate).
    """
    return {
        "forget": forget_bonds(word),
        "collapse": collapse_bonds(word),
        "perm": perm(word),
        "expsum": expsum(word),
        "bondcount": bondcount(word),
    }


# -- relation tables --------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """A two-sided rewriting rule between words on the same strands."""

    name: str
    lhs: tuple[Letter, ...]
    rhs: tuple[Letter, ...]

    def swapped(self) -> "Relation":
        return Relation(self.name, self.rhs, self.lhs)


def _s(i: int, e: int = 1) -> Letter:
    return Letter("s", i, e)


def _b(i: int, e: int = 1) -> Letter:
    return Letter("b", i, e)


def bb_relations(n: int, mode: str = MONOID) -> list[Relation]:
    """The defining relation instances of the bonded braid monoid on n
    strands: distant crossings and bonds commute, the braid relation, bonds
    commute with the crossing of their own pair and slide along a pair of
    descending crossings; in enhanced mode bond/inverse-bond pairs cancel.
    """
    rels = []
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append(Relation("distant-crossings", (_s(i), _s(j)), (_s(j), _s(i))))
            rels.append(Relation("distant-bonds", (_b(i), _b(j)), (_b(j), _b(i))))
            for e in (1, -1):
                rels.append(
                    Relation("bond-distant-crossing", (_b(i), _s(j, e)), (_s(j, e), _b(i)))
                )
                rels.append(
                    Relation("bond-distant-crossing", (_b(j), _s(i, e)), (_s(i, e), _b(j)))
                )
    for i in range(1, n - 1):
        rels.append(
            Relation(
                "braid",
                (_s(i), _s(i + 1), _s(i)),
                (_s(i + 1), _s(i), _s(i + 1)),
            )
        )
        rels.append(
            Relation(
                "bond-slide-down",
                (_b(i), _s(i + 1), _s(i)),
                (_s(i + 1), _s(i), _b(i + 1)),
            )
        )
        rels.append(
            Relation(
                "bond-slide-up",
                (_s(i), _s(i + 1), _b(i)),
                (_b(i + 1), _s(i), _s(i + 1)),
            )
        )
    for i in range(1, n):
        for e in (1, -1):
            rels.append(Relation("bond-own-crossing", (_b(i), _s(i, e)), (_s(i, e), _b(i))))
    if mode == ENHANCED:
        for i in range(1, n):
            for e in (1, -1):
                rels.append(Relation("bond-cancel", (_b(i, e), _b(i, -e)), ()))
    return rels


def singular_braid_relations(n: int) -> list[tuple[str, str]]:
    """The singular braid monoid relation table, with the singular
    generators spelled ``t<i>``; used to check that the bonded table is the
    same table under b ↔ t.
    """
    out = []

    def tau(i):
        return f"t{i}"

    def sig(i, e=1):
        return f"s{i}" + ("^-1" if e < 0 else "")

    for i in range(1, n):
        for j in range(i + 2, n):
            out.append((f"{sig(i)} {sig(j)}", f"{sig(j)} {sig(i)}"))
            out.append((f"{tau(i)} {tau(j)}", f"{tau(j)} {tau(i)}"))
            for e in (1, -1):
                out.append((f"{tau(i)} {sig(j, e)}", f"{sig(j, e)} {tau(i)}"))
                out.append((f"{tau(j)} {sig(i, e)}", f"{sig(i, e)} {tau(j)}"))
    for i in range(1, n - 1):
        out.append(
            (f"{sig(i)} {sig(i + 1)} {sig(i)}", f"{sig(i + 1)} {sig(i)} {sig(i + 1)}")
        )
        out.append(
            (f"{tau(i)} {sig(i + 1)} {sig(i)}", f"{sig(i + 1)} {sig(i)} {tau(i + 1)}")
        )
        out.append(
            (f"{sig(i)} {sig(i + 1)} {tau(i)}", f"{tau(i + 1)} {sig(i)} {sig(i + 1)}")
        )
    for i in range(1, n):
        for e in (1, -1):
            out.append((f"{tau(i)} {sig(i, e)}", f"{sig(i, e)} {tau(i)}"))
    return out


def irredundant_relations(n: int, mode: str = MONOID) -> list[Relation]:
    """The minimal relation set: braid relations plus three families tying
    the single bond generator b_1 to the crossings."""
    rels = []
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append(Relation("distant-crossings", (_s(i), _s(j)), (_s(j), _s(i))))
    for i in range(1, n - 1):
        rels.append(
            Relation(
                "braid",
                (_s(i), _s(i + 1), _s(i)),
                (_s(i + 1), _s(i), _s(i + 1)),
            )
        )
    for j in range(3, n):
        for e in (1, -1):
            rels.append(Relation("b1-distant", (_b(1), _s(j, e)), (_s(j, e), _b(1))))
    if n >= 3:
        box = (_s(2), _s(1), _s(1), _s(2))
        rels.append(Relation("b1-box", (_b(1),) + box, box + (_b(1),)))
        # derived conjugate form: the two crossing-conjugate expressions
        # for the second bond agree (box relation divided through)
        rels.append(
            Relation(
                "b1-box",
                (_s(1, -1), _s(2, -1), _b(1), _s(2), _s(1)),
                (_s(1), _s(2), _b(1), _s(2, -1), _s(1, -1)),
            )
        )
    for e in (1, -1):
        rels.append(Relation("b1-own", (_b(1), _s(1, e)), (_s(1, e), _b(1))))
    if mode == ENHANCED:
        for e in (1, -1):
            rels.append(Relation("bond-cancel", (_b(1, e), _b(1, -e)), ()))
    return rels


def _braid_variants(i: int) -> list[Relation]:
    """Derived forms of the braid relation with mixed exponents."""
    out = []
    for e in (1, -1):
        out.append(
            Relation(
                "braid",
                (_s(i, e), _s(i + 1, e), _s(i, e)),
                (_s(i + 1, e), _s(i, e), _s(i + 1, e)),
            )
        )
        out.append(
            Relation(
                "braid",
                (_s(i, e), _s(i + 1, e), _s(i, -e)),
                (_s(i + 1, -e), _s(i, e), _s(i + 1, e)),
            )
        )
        out.append(
            Relation(
                "braid",
                (_s(i, -e), _s(i + 1, e), _s(i, e)),
                (_s(i + 1, e), _s(i, e), _s(i + 1, -e)),
            )
        )
    return out


def _variant_rules(base: list[Relation], n: int, mode: str) -> list[Relation]:
    """Close a relation table under easy consequences used for searching:
    mixed-exponent commutations and braid forms, and signed-bond copies of
    every bond relation in enhanced mode."""
    out = []
    seen = set()

    def push(rel):
        key = (rel.lhs, rel.rhs)
        if key not in seen and (rel.rhs, rel.lhs) not in seen:
            seen.add(key)
            out.append(rel)

    has_braid = set()
    for rel in base:
        if rel.name == "braid" and rel.lhs[0].kind == "s":
            has_braid.add(rel.lhs[0].i)
            continue
        if rel.name == "distant-crossings":
            i, j = rel.lhs[0].i, rel.lhs[1].i
            for e1 in (1, -1):
                for e2 in (1, -1):
                    push(Relation(rel.name, (_s(i, e1), _s(j, e2)), (_s(j, e2), _s(i, e1))))
            continue
        push(rel)
        if mode == ENHANCED and any(l.kind in ("b", "B") for l in rel.lhs):
            flip = lambda ls: tuple(
                replace(l, exp=-l.exp) if l.kind in ("b", "B") else l for l in ls
            )
            push(Relation(rel.name, flip(rel.lhs), flip(rel.rhs)))
    for i in has_braid:
        for rel in _braid_variants(i):
            push(rel)
    return out


def rewrite_rules(n: int, mode: str = MONOID, presentation: str = "reduced") -> list[Relation]:
    """The rule table used by relation_neighbors and the equivalence search."""
    if presentation == "reduced":
        base = bb_relations(n, mode)
    elif presentation == "irredundant":
        base = irredundant_relations(n, mode)
        # derived bridges: the two crossing-conjugate spellings of each
        # higher bond agree (generalized box relations, consequences of
        # the base set); they let the search hop between the spellings
        for i in range(3, n):
            down, up = [], []
            for k in range(i, 1, -1):
                down += [_s(k - 1, -1), _s(k, -1)]
                up += [_s(k - 1), _s(k)]
            lhs = tuple(down) + (_b(1),) + tuple(
                Letter("s", l.i, 1) for l in reversed(down)
            )
            rhs = tuple(up) + (_b(1),) + tuple(
                Letter("s", l.i, -1) for l in reversed(up)
            )
            base.append(Relation("b1-box", lhs, rhs))
    else:
        raise ValueError(f"unknown presentation {presentation!r}")
    return _variant_rules(base, n, mode)


# -- one-step relation rewriting -------------------------------------------


def _long_bonds_commute(a: Letter, c: Letter) -> bool:
    """Whether two long-bond letters commute by the far-apart, nested
    uniform, or matching-crossing-sequence configurations."""
    lo, hi = (a, c) if a.i <= c.i else (c, a)
    if lo.j < hi.i:  # disjoint spans
        return True
    if lo.i < hi.i and hi.j < lo.j:  # nested: hi inside lo
        if lo.pattern and len(set(lo.pattern)) == 1:
            return True
        # markings of the outer bond across the inner span
        inner = lo.pattern[hi.i - lo.i : hi.j - lo.i - 1]
        before = lo.pattern[hi.i - lo.i - 1]
        after = lo.pattern[hi.j - lo.i - 1]
        return inner == hi.pattern and before == after
    return False


def relation_neighbors(
    w: BraidWord, rules: Optional[list[Relation]] = None
) -> list[BraidWord]:
    """Every word one relation application away (both directions, every
    position).  Long-bond letters additionally commute with each other in
    the far-apart, nested-uniform, and matching-sequence configurations.
    """
    mode = word_mode(w)
    if rules is None:
        rules = rewrite_rules(w.n, mode)
    letters = w.letters
    out = []
    seen = set()

    def emit(new_letters):
        word = BraidWord(w.n, tuple(new_letters))
        key = format_word(word)
        if key not in seen:
            seen.add(key)
            out.append(word)

    for rel in rules:
        for lhs, rhs in ((rel.lhs, rel.rhs), (rel.rhs, rel.lhs)):
            if not lhs:
                for p in range(len(letters) + 1):
                    emit(letters[:p] + rhs + letters[p:])
                continue
            for p in range(len(letters) - len(lhs) + 1):
                if letters[p : p + len(lhs)] == lhs:
                    emit(letters[:p] + rhs + letters[p + len(lhs) :])
    for p in range(len(letters) - 1):
        a, c = letters[p], letters[p + 1]
        if a.kind == "B" and c.kind == "B" and _long_bonds_commute(a, c):
            emit(letters[:p] + (c, a) + letters[p + 2 :])
    return out


# -- enhanced cancellation and L-moves --------------------------------------


def free_cancel(w: BraidWord) -> BraidWord:
    """Delete adjacent mutually-inverse bond pairs until none remain.

    Confluent: disjoint deletions commute and an overlapping triple
    b b^-1 b reduces to the same single b either way.
    """
    letters = list(w.letters)
    changed = True
    while changed:
        changed = False
        for p in range(len(letters) - 1):
            a, c = letters[p], letters[p + 1]
            if (
                a.kind in ("b", "B")
                and a.kind == c.kind
                and a.i == c.i
                and a.j == c.j
                and a.pattern == c.pattern
                and a.exp == -c.exp
            ):
                del letters[p : p + 2]
                changed = True
                break
    return BraidWord(w.n, tuple(letters))


def _bond_strands(let: Letter) -> range:
    hi = let.j if let.kind == "B" else let.i + 1
    return range(let.i, hi + 1)


def l_move(
    w: BraidWord, slot: int, strand: int, kind: str = "over", sign: int = 1
) -> BraidWord:
    """Cut the arc at ``strand`` just above letter ``slot`` and pull the new
    strand pair to the right edge, over (or under) everything, forming one
    new crossing with a fresh rightmost strand.  The closure is unchanged.
    """
    if kind not in ("over", "under"):
        raise ValueError(f"bad L-move kind {kind!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not 0 <= slot <= len(w.letters):
        raise ValueError("slot out of range")
    if not 1 <= strand <= w.n:
        raise ValueError("strand out of range")
    if slot < len(w.letters):
        let = w.letters[slot]
        if let.kind in ("b", "B") and strand in _bond_strands(let):
            raise ValueError("L-move forbidden at bond")
    e = 1 if kind == "over" else -1
    out_trip = tuple(_s(t, e) for t in range(strand, w.n))
    back_trip = tuple(_s(t, -e) for t in range(w.n - 1, strand - 1, -1))
    detour = out_trip + (_s(w.n, sign),) + back_trip
    return BraidWord(w.n + 1, w.letters[:slot] + detour + w.letters[slot:])


# -- bounded equivalence search ---------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    verdict: str  # "Equivalent" | "Distinguished" | "Unknown"
    path: tuple[str, ...] = ()
    invariant: str = ""


def expand_word(w: BraidWord) -> BraidWord:
    """Replace every long bond by its crossing-conjugated elementary form."""
    letters = []
    for let in w.letters:
        if let.kind == "B":
            letters.extend(expand_long_bond(let, w.n))
        else:
            letters.append(let)
    return BraidWord(w.n, tuple(letters))


def free_reduce(w: BraidWord) -> BraidWord:
    """Cancel adjacent crossing/inverse pairs (and, in enhanced words,
    adjacent inverse bond pairs) until none remain."""
    enhanced = word_mode(w) == ENHANCED
    letters = list(w.letters)
    changed = True
    while changed:
        changed = False
        for p in range(len(letters) - 1):
            a, c = letters[p], letters[p + 1]
            cancels = (
                a.kind == c.kind
                and a.i == c.i
                and a.j == c.j
                and a.pattern == c.pattern
                and a.exp == -c.exp
                and (a.kind == "s" or enhanced)
            )
            if cancels:
                del letters[p : p + 2]
                changed = True
                break
    return BraidWord(w.n, tuple(letters))


def _closure_invariants(w: BraidWord, node_bound: int = 8) -> list[tuple[str, object]]:
    """Cheap-to-compare invariants of the closure, used for early
    Distinguished verdicts: signed bond count, the underlying-link
    fingerprint, and (for few enough bonds) the strict unplugging multiset.
    """
    from .unplug import unplug_bonded, unplug_strict_set

    d = closure(w)
    out = [
        ("bondcount", bondcount(w)),
        ("unplug_bonded", unplug_bonded(d)),
    ]
    if len(d.node_ids()) <= node_bound:
        out.append(("unplug_strict_set", unplug_strict_set(d)))
    return out


def translate_to_irredundant(w: BraidWord) -> BraidWord:
    """Rewrite a word over the single-bond generating set: every b_i with
    i > 1 becomes the crossing conjugate of b_1."""
    w = expand_word(w)
    letters = []
    for let in w.letters:
        if let.kind == "b" and let.i > 1:
            pre = []
            for k in range(let.i, 1, -1):
                pre += [_s(k - 1, -1), _s(k, -1)]
            letters.extend(pre)
            letters.append(_b(1, let.exp))
            letters.extend(Letter("s", l.i, -l.exp) for l in reversed(pre))
        else:
            letters.append(let)
    return free_reduce(BraidWord(w.n, tuple(letters)))


def _neighbor_moves(w, rules, markov, max_strands, max_length, stabilization=True):
    """All (label, next-word) pairs reachable by one search move."""
    out = []
    for nb in relation_neighbors(w, rules):
        nb = free_reduce(nb)
        if len(nb) <= max_length:
            out.append(("relation", nb))
    if not markov:
        return out
    letters = w.letters
    # conjugation by a crossing generator
    for i in range(1, w.n):
        for e in (1, -1):
            g, ginv = _s(i, e), _s(i, -e)
            nb = free_reduce(BraidWord(w.n, (g,) + letters + (ginv,)))
            if len(nb) <= max_length:
                out.append((f"conjugate s{i}" + ("^-1" if e < 0 else ""), nb))
    if word_mode(w) == ENHANCED:
        bonds = {let.i for let in letters if let.kind == "b"}
        for i in sorted(bonds):
            for e in (1, -1):
                nb = free_reduce(
                    BraidWord(w.n, (_b(i, e),) + letters + (_b(i, -e),))
                )
                if len(nb) <= max_length:
                    out.append((f"bond-conjugate b{i}", nb))
    # cyclic bond commuting: a word ending (starting) in a bond may rotate it
    if letters and letters[-1].kind in ("b", "B"):
        out.append(("bond-commute", BraidWord(w.n, letters[-1:] + letters[:-1])))
    if letters and letters[0].kind in ("b", "B"):
        out.append(("bond-commute", BraidWord(w.n, letters[1:] + letters[:1])))
    # Markov stabilization and destabilization
    if stabilization and w.n + 1 <= max_strands and len(letters) + 1 <= max_length:
        for e in (1, -1):
            nb = BraidWord(w.n + 1, letters + (_s(w.n, e),))
            out.append((f"stabilize {'+' if e > 0 else '-'}", nb))
    if (
        stabilization
        and w.n >= 2
        and letters
        and letters[-1].kind == "s"
        and letters[-1].i == w.n - 1
    ):
        rim = w.n - 1
        used = any(
            (let.kind == "s" and let.i == rim)
            or (let.kind in ("b", "B") and rim + 1 in _bond_strands(let))
            for let in letters[:-1]
        )
        if not used:
            out.append(("destabilize", BraidWord(w.n - 1, letters[:-1])))
    return out


def equiv_search(
    w1: BraidWord,
    w2: BraidWord,
    max_states: int = 20000,
    max_length: int = 24,
    max_strands: int = 7,
    max_depth: int = 12,
    markov: bool = True,
    stabilization: bool = True,
    rules: Optional[list[Relation]] = None,
    skip_invariants: bool = False,
) -> SearchResult:
    """Bidirectional breadth-first search for a move path between words.

    Moves: relation rewrites, and (unless ``markov`` is off) conjugation,
    cyclic bond commuting, and Markov (de)stabilization.  Distinguished is
    returned as soon as a closure invariant differs; Unknown is an honest
    outcome when the budget runs out.  This is a semi-decision procedure.
    """
    if min(max_states, max_length, max_strands, max_depth) <= 0:
        raise ValueError("budget must be positive")
    if not skip_invariants:
        inv1 = dict(_closure_invariants(w1))
        inv2 = dict(_closure_invariants(w2))
        for name in inv1:
            if name in inv2 and inv1[name] != inv2[name]:
                return SearchResult("Distinguished", invariant=name)
    start = free_reduce(expand_word(w1))
    goal = free_reduce(expand_word(w2))
    sides = [
        {format_word(start): (None, None)},
        {format_word(goal): (None, None)},
    ]
    frontiers = [[start], [goal]]
    mode = ENHANCED if ENHANCED in (word_mode(w1), word_mode(w2)) else MONOID
    rule_cache: dict[int, list[Relation]] = {}

    def rules_for(n):
        if rules is not None:
            return rules
        if n not in rule_cache:
            rule_cache[n] = rewrite_rules(n, mode)
        return rule_cache[n]

    def path_from(side, key):
        moves = []
        while True:
            parent, label = sides[side][key]
            if parent is None:
                return moves
            moves.append(label)
            key = parent

    def join(meet_key):
        fwd = list(reversed(path_from(0, meet_key)))
        back = [f"~{label}" for label in path_from(1, meet_key)]
        return SearchResult("Equivalent", tuple(fwd + back))

    if format_word(start) == format_word(goal):
        return SearchResult("Equivalent", ())
    states = 2
    depth = [0, 0]
    while any(frontiers) and states < max_states:
        side = 0 if (frontiers[0] and (len(frontiers[0]) <= len(frontiers[1]) or not frontiers[1])) else 1
        # found paths have length depth[0] + depth[1] <= max_depth
        allowed = max_depth // 2 + (1 if side == 0 else 0) * (max_depth % 2)
        if depth[side] >= allowed:
            frontiers[side] = []
            continue
        depth[side] += 1
        nxt = []
        for w in sorted(frontiers[side], key=format_word):
            for label, nb in _neighbor_moves(
                w, rules_for(w.n), markov, max_strands, max_length, stabilization
            ):
                key = format_word(nb)
                if key in sides[side]:
                    continue
                sides[side][key] = (format_word(w), label)
                if key in sides[1 - side]:
                    return join(key)
                nxt.append(nb)
                states += 1
                if states >= max_states:
                    break
            if states >= max_states:
                break
        frontiers[side] = nxt
    return SearchResult("Unknown")
