"""Convert Morse slice presentations of bonded diagrams into braid words.

A closed bonded diagram is given as a bottom-to-top list of slice events
(cups, caps, crossings, horizontal bonds).  ``braid`` eliminates every
upward-oriented arc by throwing it around the closure at the far right —
an o-labeled arc is rerouted over everything it meets, a u-labeled arc
under — until the picture is monotone, then reads off a braid word over
crossings and elementary bonds whose closure is isotopic to the input.

Bonds must sit on downward strands first; ``prepare_bonds`` rotates bond
endpoints off upward strands with small cap/cup fingers (vertex twists),
which is why the whole pipeline lives in the topological category only.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .braidalg import BraidWord, Letter, closure, expand_long_bond, free_reduce
from .diagram import (
    ATTRACTING,
    BOND,
    LINK,
    PLAIN,
    REPELLING,
    BondedDiagram,
    Crossing,
    EdgeRecord,
    FreeLoop,
    Node,
    OVER_02,
    OVER_13,
)
from .moves import TOPOLOGICAL
from .unplug import unplug_bonded, unplug_strict_set

__all__ = [
    "Cup",
    "Cap",
    "Cross",
    "Bond",
    "SliceEvent",
    "SliceSequence",
    "parse_bms",
    "to_bms",
    "slices_to_diagram",
    "prepare_bonds",
    "braid",
    "braid_certificate",
    "CertificateReport",
    "random_slices",
    "example_slices",
    "trace",
]

UP = 1
DOWN = -1


@dataclass(frozen=True)
class Cup:
    """Local minimum: births strands at pos, pos+1 (lu = left leg up)."""

    pos: int
    orient: str = "lu"


@dataclass(frozen=True)
class Cap:
    """Local maximum: joins strands pos, pos+1 (one up, one down)."""

    pos: int


@dataclass(frozen=True)
class Cross:
    """Crossing of strands pos, pos+1; sign +1 matches a positive braid
    generator (the strand entering upper-left passes over)."""

    pos: int
    sign: int = 1


@dataclass(frozen=True)
class Bond:
    """Horizontal bond from strand pos to strand pos+reach; pattern has one
    o/u letter per strand passed (o = bond in front)."""

    pos: int
    reach: int = 1
    pattern: str = ""
    sign: str = "+"


SliceEvent = Cup | Cap | Cross | Bond


@dataclass(frozen=True)
class SliceSequence:
    events: tuple[SliceEvent, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __len__(self) -> int:
        return len(self.events)


# -- tracing: strand ids, orientations, validation ---------------------------


class _Trace:
    """Persistent-id wiring of a slice sequence.

    levels[t] lists strand ids between events t-1 and t; evs[t] is the
    id-annotated event: ("cup", a, b), ("cap", a, b), ("x", u, v, sign)
    with u left / v right below the crossing, or ("bond", lid, rid,
    pattern, sign).  orient maps each id to UP or DOWN.
    """

    def __init__(self, levels, evs, orient):
        self.levels = levels
        self.evs = evs
        self.orient = orient


def trace(s: SliceSequence) -> _Trace:
    cur: list[int] = []
    levels = [[]]
    evs = []
    orient: dict[int, int] = {}
    nid = 0
    for k, ev in enumerate(s.events):
        w = len(cur)
        if isinstance(ev, Cup):
            if not 1 <= ev.pos <= w + 1:
                raise ValueError(f"event {k}: cup position {ev.pos} out of range")
            if ev.orient not in ("lu", "ru"):
                raise ValueError(f"event {k}: cup orientation must be lu or ru")
            a, b = nid, nid + 1
            nid += 2
            orient[a] = UP if ev.orient == "lu" else DOWN
            orient[b] = -orient[a]
            cur[ev.pos - 1 : ev.pos - 1] = [a, b]
            evs.append(("cup", a, b))
        elif isinstance(ev, Cap):
            if not 1 <= ev.pos <= w - 1:
                raise ValueError(f"event {k}: cap position {ev.pos} out of range")
            a, b = cur[ev.pos - 1], cur[ev.pos]
            if orient[a] + orient[b] != 0:
                raise ValueError(f"event {k}: cap joins parallel strands")
            del cur[ev.pos - 1 : ev.pos + 1]
            evs.append(("cap", a, b))
        elif isinstance(ev, Cross):
            if not 1 <= ev.pos <= w - 1:
                raise ValueError(f"event {k}: crossing position {ev.pos} out of range")
            if ev.sign not in (1, -1):
                raise ValueError(f"event {k}: crossing sign must be +-1")
            u, v = cur[ev.pos - 1], cur[ev.pos]
            cur[ev.pos - 1], cur[ev.pos] = v, u
            evs.append(("x", u, v, ev.sign))
        elif isinstance(ev, Bond):
            if ev.reach < 1 or not 1 <= ev.pos <= w - ev.reach:
                raise ValueError(f"event {k}: bond span out of range")
            if len(ev.pattern) != ev.reach - 1 or any(
                c not in "ou" for c in ev.pattern
            ):
                raise ValueError(f"event {k}: bond needs {ev.reach - 1} o/u letters")
            if ev.sign not in ("+", "-"):
                raise ValueError(f"event {k}: bond sign must be + or -")
            evs.append(
                ("bond", cur[ev.pos - 1], cur[ev.pos - 1 + ev.reach], ev.pattern, ev.sign)
            )
        else:
            raise ValueError(f"event {k}: unknown event {ev!r}")
        levels.append(list(cur))
    if cur:
        raise ValueError("unbalanced cups/caps: sequence does not close")
    return _Trace(levels, evs, orient)


# -- text format -------------------------------------------------------------


def to_bms(s: SliceSequence) -> str:
    lines = []
    for ev in s.events:
        if isinstance(ev, Cup):
            lines.append(f"cup {ev.pos} {ev.orient}")
        elif isinstance(ev, Cap):
            lines.append(f"cap {ev.pos}")
        elif isinstance(ev, Cross):
            lines.append(f"x {ev.pos} {'+' if ev.sign > 0 else '-'}")
        else:
            parts = [f"bond {ev.pos} {ev.reach}"]
            if ev.pattern:
                parts.append(ev.pattern)
            if ev.sign != "+":
                parts.append(ev.sign)
            lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_bms(text: str) -> SliceSequence:
    events: list[SliceEvent] = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "cup" and len(toks) == 3:
                events.append(Cup(int(toks[1]), toks[2]))
            elif toks[0] == "cap" and len(toks) == 2:
                events.append(Cap(int(toks[1])))
            elif toks[0] == "x" and len(toks) == 3 and toks[2] in "+-":
                events.append(Cross(int(toks[1]), 1 if toks[2] == "+" else -1))
            elif toks[0] == "bond" and 3 <= len(toks) <= 5:
                pattern, sign = "", "+"
                for tok in toks[3:]:
                    if tok in ("+", "-"):
                        sign = tok
                    else:
                        pattern = tok
                events.append(Bond(int(toks[1]), int(toks[2]), pattern, sign))
            else:
                raise ValueError("bad event")
        except (ValueError, IndexError):
            raise ValueError(f"line {ln}: cannot parse {raw.strip()!r}") from None
    return SliceSequence(tuple(events))


# -- slice picture to bonded diagram -----------------------------------------


def slices_to_diagram(s: SliceSequence) -> BondedDiagram:
    """Faithful planar code of the slice picture (downward orientation)."""
    trace(s)  # validation
    enhanced = any(isinstance(e, Bond) and e.sign == "-" for e in s.events)
    edges: dict[int, EdgeRecord] = {}
    vertices: dict = {}
    next_e = 0
    next_v = 0
    front: list = []  # open darts, swept top to bottom

    def new_edge(kind, sign=PLAIN):
        nonlocal next_e
        edges[next_e] = EdgeRecord(kind, sign)
        next_e += 1
        return next_e - 1

    def add_vertex(v):
        nonlocal next_v
        vertices[next_v] = v
        next_v += 1

    def remap_dart(old, new):
        for vid, v in vertices.items():
            if isinstance(v, Crossing) and old in v.darts:
                vertices[vid] = Crossing(
                    tuple(new if dd == old else dd for dd in v.darts), v.over
                )
            elif isinstance(v, Node) and old in v.rotation:
                vertices[vid] = Node(
                    tuple(new if dd == old else dd for dd in v.rotation)
                )
        for i, dd in enumerate(front):
            if dd == old:
                front[i] = new

    for ev in reversed(s.events):
        if isinstance(ev, Cap):  # top-down: a maximum births two strands
            e = new_edge(LINK)
            front[ev.pos - 1 : ev.pos - 1] = [(e, 0), (e, 1)]
        elif isinstance(ev, Cup):  # top-down: a minimum joins two strands
            a = front[ev.pos - 1]
            b = front[ev.pos]
            del front[ev.pos - 1 : ev.pos + 1]
            if a[0] == b[0]:
                add_vertex(FreeLoop(next_v))
                del edges[a[0]]
            else:
                remap_dart((b[0], 1 - b[1]), a)
                del edges[b[0]]
        elif isinstance(ev, Cross):
            p = ev.pos - 1
            a = new_edge(LINK)
            b = new_edge(LINK)
            darts = (front[p], (a, 0), (b, 0), front[p + 1])
            add_vertex(Crossing(darts, OVER_02 if ev.sign > 0 else OVER_13))
            front[p] = (a, 1)
            front[p + 1] = (b, 1)
        else:
            p, q = ev.pos - 1, ev.pos - 1 + ev.reach
            if enhanced:
                sign = ATTRACTING if ev.sign == "+" else REPELLING
            else:
                sign = PLAIN
            segments = [new_edge(BOND, sign) for _ in range(q - p)]
            a = new_edge(LINK)
            b = new_edge(LINK)
            add_vertex(Node(((segments[0], 0), front[p], (a, 0))))
            front[p] = (a, 1)
            for k, t in enumerate(range(p + 1, q)):
                c = new_edge(LINK)
                darts = (
                    (segments[k + 1], 0),
                    front[t],
                    (segments[k], 1),
                    (c, 0),
                )
                over = OVER_02 if ev.pattern[k] == "o" else OVER_13
                add_vertex(Crossing(darts, over))
                front[t] = (c, 1)
            add_vertex(Node((front[q], (segments[-1], 1), (b, 0))))
            front[q] = (b, 1)
    return BondedDiagram(edges, vertices).orient_arbitrarily()


# -- step 2: rotate bond ends onto downward strands --------------------------


def prepare_bonds(
    s: SliceSequence, category: str = TOPOLOGICAL
) -> SliceSequence:
    """Rewrite until every bond endpoint sits on a downward strand.

    An endpoint on an upward strand is rotated with a cap/cup finger (a
    vertex twist), legal only under topological vertex isotopy.
    """
    if category != TOPOLOGICAL:
        raise ValueError("braiding requires topological category")
    tr = trace(s)
    out: list[SliceEvent] = []
    for ev, ide in zip(s.events, tr.evs):
        if not isinstance(ev, Bond):
            out.append(ev)
            continue
        _, lid, rid, _, _ = ide
        p, r, pat, sign = ev.pos, ev.reach, ev.pattern, ev.sign
        left_up = tr.orient[lid] == UP
        right_up = tr.orient[rid] == UP
        if left_up:
            p, r, pat = p + 1, r + 1, "o" + pat
            out.append(Cup(p, "ru"))
        if right_up:
            out.append(Cup(p + r + 1, "ru"))
            pat = pat + "o"
            r += 1
        out.append(Bond(p, r, pat, sign))
        if right_up:
            out.append(Cap(p + r - 1))
        if left_up:
            out.append(Cap(p - 1))
    return SliceSequence(tuple(out))


# -- step 3: up-arc elimination ----------------------------------------------


def _incidences(tr: _Trace, alpha: int) -> list[tuple[int, bool]]:
    """Ordered crossing-type incidences of an upward strand.

    Returns (event index, over?) for crossings and bond passes involving
    ``alpha``; over means alpha passes in front at that event.
    """
    hits = []
    for t, ide in enumerate(tr.evs):
        if ide[0] == "x":
            _, u, v, sign = ide
            if alpha in (u, v):
                hits.append((t, (sign > 0) == (alpha == v)))
        elif ide[0] == "bond":
            _, lid, rid, pattern, _ = ide
            level = tr.levels[t]
            if alpha in level:
                li, ri, ai = level.index(lid), level.index(rid), level.index(alpha)
                if li < ai < ri:
                    hits.append((t, pattern[ai - li - 1] == "u"))  # o = bond front
    return hits


def _eliminate_one(tr: _Trace, crossingless_label: str) -> _Trace:
    """Throw the top run of the up-arc with the topmost cap around the
    closure at the far right; returns the rewritten trace."""
    caps: dict[int, tuple[int, int]] = {}
    for t, ide in enumerate(tr.evs):
        if ide[0] == "cap":
            a, b = ide[1], ide[2]
            up_leg = a if tr.orient[a] == UP else b
            caps[up_leg] = (t, b if up_leg == a else a)
    alpha = max(caps, key=lambda k: caps[k][0])
    ia, gamma = caps[alpha]
    ic, beta = None, None
    for t, ide in enumerate(tr.evs):
        if ide[0] == "cup" and alpha in (ide[1], ide[2]):
            ic, beta = t, (ide[1] if ide[2] == alpha else ide[2])
            break
    hits = _incidences(tr, alpha)
    run_start = len(hits)
    while run_start > 0 and hits[run_start - 1][1] == hits[-1][1]:
        run_start -= 1
    over = hits[-1][1] if hits else crossingless_label == "o"
    full = run_start == 0
    lo = ic if full else hits[run_start - 1][0] + 1

    orient = dict(tr.orient)
    if full:
        tau = beta
        orient.pop(alpha)
    else:
        tau = max(orient) + 1
        orient[tau] = DOWN

    # wrap around whichever side crosses less, weighting upward strands
    # heavily (crossing them forces further eliminations later)
    def weight(ids):
        return sum(8 if orient.get(x) == UP else 1 for x in ids)

    if full:
        slot_level = [x for x in tr.levels[lo + 1] if x != alpha]
        slot = slot_level.index(beta)
    else:
        slot_level = tr.levels[lo]
        slot = slot_level.index(alpha)
    ia_level = [x for x in tr.levels[ia] if x != alpha]
    gslot = ia_level.index(gamma)
    cost_right = weight(slot_level[slot + 1 :]) + len(ia_level) - 1 - gslot
    cost_left = weight(slot_level[:slot]) + gslot
    right = cost_right <= cost_left

    out_evs: list = []
    bottom = list(tr.levels[0])
    out_levels: list = [bottom + [tau] if right else [tau] + bottom]

    def emit(ide, upper):
        out_evs.append(ide)
        out_levels.append(list(upper))

    def step_left(cur, mover):
        i = cur.index(mover)
        nxt = list(cur)
        nxt[i - 1], nxt[i] = nxt[i], nxt[i - 1]
        emit(("x", cur[i - 1], mover, 1 if over else -1), nxt)
        return nxt

    def step_right(cur, mover):
        i = cur.index(mover)
        nxt = list(cur)
        nxt[i], nxt[i + 1] = nxt[i + 1], nxt[i]
        emit(("x", mover, cur[i + 1], -1 if over else 1), nxt)
        return nxt

    def travel(cur, mover, target):
        while cur != target:
            cur = step_left(cur, mover) if cur.index(mover) > target.index(
                mover
            ) else step_right(cur, mover)
        return cur

    # below the surgery point: events unchanged, traveler along the edge
    for t in range(lo):
        lv = list(tr.levels[t + 1])
        emit(tr.evs[t], lv + [tau] if right else [tau] + lv)

    # the traveler enters along the bottom edge and crosses to its slot
    cur = list(tr.levels[lo])
    cur = cur + [tau] if right else [tau] + cur
    if full:
        # it replaces the cup: it takes beta's old slot, alpha is gone
        target = [x for x in tr.levels[lo + 1] if x != alpha]
        cur = travel(cur, tau, target)
    else:
        # it stops beside alpha; a new cap ends the kept lower part
        base = [x for x in cur if x != tau]
        pos = base.index(alpha)
        at = pos + 1 if right else pos
        target = base[:at] + [tau] + base[at:]
        cur = travel(cur, tau, target)
        emit(("cap", alpha, tau), [x for x in cur if x not in (alpha, tau)])

    # above the surgery point: drop alpha; reroute gamma at the top cap
    for t in range(lo, len(tr.evs)):
        ide = tr.evs[t]
        if ide[0] == "cup" and alpha in (ide[1], ide[2]):
            continue  # full mode only: the cup is gone
        if ide[0] == "x" and alpha in (ide[1], ide[2]):
            continue  # crossings leave with the thrown arc
        if t == ia:
            # the top cap: gamma crosses out to the edge instead
            cur = [x for x in tr.levels[t] if x != alpha]
            edge = -1 if right else 0
            while cur[edge] != gamma:
                cur = step_right(cur, gamma) if right else step_left(cur, gamma)
            continue
        if ide[0] == "bond":
            _, lid, rid, pattern, bsign = ide
            lvl = tr.levels[t]
            if alpha in lvl:
                li, ri, ai = lvl.index(lid), lvl.index(rid), lvl.index(alpha)
                if li < ai < ri:
                    k = ai - li - 1
                    ide = ("bond", lid, rid, pattern[:k] + pattern[k + 1 :], bsign)
        upper = [x for x in tr.levels[t + 1] if x != alpha]
        if t > ia:
            upper = upper + [gamma] if right else [gamma] + upper
        emit(ide, upper)
    return _Trace(out_levels, out_evs, orient)


def braid(
    s: SliceSequence, crossingless_label: str = "o", category: str = TOPOLOGICAL
) -> BraidWord:
    """Braid word over crossings and elementary bonds with isotopic closure."""
    if not s.events:
        raise ValueError("empty slice sequence")
    prepared = prepare_bonds(s, category)
    tr = trace(prepared)
    budget = 40 * (len(prepared.events) + 4) ** 2
    steps = 0
    while any(o == UP for o in tr.orient.values()):
        steps += 1
        if steps > budget:
            raise RuntimeError("up-arc elimination exceeded iteration budget")
        tr = _eliminate_one(tr, crossingless_label)
    n = len(tr.levels[0])
    letters: list[Letter] = []
    for t in range(len(tr.evs) - 1, -1, -1):
        ide = tr.evs[t]
        level = tr.levels[t]
        if ide[0] == "x":
            _, u, v, sign = ide
            letters.append(Letter("s", level.index(u) + 1, sign))
        else:
            _, lid, rid, pattern, bsign = ide
            i, j = level.index(lid) + 1, level.index(rid) + 1
            exp = 1 if bsign == "+" else -1
            if j == i + 1:
                letters.append(Letter("b", i, exp))
            else:
                letters.extend(
                    expand_long_bond(Letter("B", i, exp, j, pattern), n)
                )
    return _shrink(BraidWord(max(n, 1), tuple(letters)))


def _strands_used(let: Letter) -> set[int]:
    if let.kind == "s" or let.kind == "b":
        return {let.i, let.i + 1}
    return set(range(let.i, let.j + 1))


def _shrink(w: BraidWord) -> BraidWord:
    """Closure-preserving cleanup: free reduction, cyclic conjugation and
    Markov destabilization at either edge of the strand range."""
    w = free_reduce(w)
    improved = True
    while improved:
        improved = False
        # conjugation that enables a cancellation
        for r in range(1, len(w.letters)):
            rot = BraidWord(w.n, w.letters[r:] + w.letters[:r])
            red = free_reduce(rot)
            if len(red) < len(w):
                w = red
                improved = True
                break
        if improved:
            continue
        # destabilization: a lone crossing on an otherwise unused edge strand
        if w.n > 1:
            top = [k for k, let in enumerate(w.letters) if w.n in _strands_used(let)]
            if len(top) == 1 and w.letters[top[0]].kind == "s":
                letters = w.letters[: top[0]] + w.letters[top[0] + 1 :]
                w = BraidWord(w.n - 1, letters)
                improved = True
                continue
            low = [k for k, let in enumerate(w.letters) if 1 in _strands_used(let)]
            if len(low) == 1 and w.letters[low[0]].kind == "s":
                letters = tuple(
                    Letter(l.kind, l.i - 1, l.exp, l.j - 1 if l.kind == "B" else 0, l.pattern)
                    for k, l in enumerate(w.letters)
                    if k != low[0]
                )
                w = BraidWord(w.n - 1, letters)
                improved = True
    return w


# -- certificate -------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    word: BraidWord
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def lines(self) -> list[str]:
        return [
            f"{'PASS' if passed else 'FAIL'} {name}" for name, passed in self.checks
        ]


def braid_certificate(
    s: SliceSequence, word: BraidWord | None = None, node_bound: int = 10
) -> CertificateReport:
    """Compare closure invariants of the braided word against the input."""
    if word is None:
        word = braid(s)
    lhs = slices_to_diagram(s)
    rhs = closure(word)
    checks = [
        ("unplug_bonded", unplug_bonded(lhs) == unplug_bonded(rhs)),
        (
            "unplug_strict_set",
            unplug_strict_set(lhs, node_bound) == unplug_strict_set(rhs, node_bound),
        ),
        ("bondcount", lhs.bond_count() == rhs.bond_count()),
        ("component_count", lhs.component_count() == rhs.component_count()),
    ]
    return CertificateReport(word, tuple(checks))


# -- random generation -------------------------------------------------------


def random_slices(
    rng: random.Random, max_events: int = 12, max_bonds: int = 2
) -> SliceSequence:
    """Random valid closed slice sequence within the given budgets."""
    events: list[SliceEvent] = []
    orient: list[int] = []
    bonds = 0
    while len(events) < max_events:
        w = len(orient)
        room = max_events - len(events)
        if room <= w // 2:
            break  # leave space for closing caps
        choices = ["cup"]
        if w >= 2:
            choices += ["x", "cap", "cap"]
            if bonds < max_bonds:
                choices += ["bond", "bond"]
        kind = rng.choice(choices)
        if kind == "cup":
            p = rng.randint(1, w + 1)
            o = rng.choice(("lu", "ru"))
            events.append(Cup(p, o))
            orient[p - 1 : p - 1] = [UP, DOWN] if o == "lu" else [DOWN, UP]
        elif kind == "cap":
            sites = [p for p in range(1, w) if orient[p - 1] + orient[p] == 0]
            if not sites:
                continue
            p = rng.choice(sites)
            events.append(Cap(p))
            del orient[p - 1 : p + 1]
        elif kind == "x":
            p = rng.randint(1, w - 1)
            events.append(Cross(p, rng.choice((1, -1))))
            orient[p - 1], orient[p] = orient[p], orient[p - 1]
        else:
            reach = rng.randint(1, min(2, w - 1))
            p = rng.randint(1, w - reach)
            pattern = "".join(rng.choice("ou") for _ in range(reach - 1))
            events.append(Bond(p, reach, pattern))
            bonds += 1
    while orient:
        sites = [p for p in range(1, len(orient)) if orient[p - 1] + orient[p] == 0]
        p = rng.choice(sites)
        events.append(Cap(p))
        del orient[p - 1 : p + 1]
    return SliceSequence(tuple(events))


# -- slice forms of the generated families -----------------------------------


def example_slices(family: str, n: int) -> SliceSequence:
    """Slice presentations matching the generated U/K diagram families."""
    if family == "U":
        # one circle with n bond rungs across it
        events: list[SliceEvent] = [Cup(1, "ru")]
        events += [Bond(1)] * n
        events.append(Cap(1))
        return SliceSequence(tuple(events))
    if family == "K":
        # two circles side by side joined by n parallel bonds
        events = [Cup(1, "ru"), Cup(3, "ru")]
        events += [Bond(2)] * n
        events += [Cap(3), Cap(1)]
        return SliceSequence(tuple(events))
    raise ValueError(f"unknown family {family!r}")
