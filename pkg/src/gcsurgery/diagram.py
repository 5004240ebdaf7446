"""
Framed link diagrams
====================

Surgery presentations of closed 3-manifolds, stored as planar diagram
(PD) codes with exact rational framings.

A crossing is the 4-tuple ``(a, b, c, d)`` of arc ids read
counterclockwise starting from the incoming under-arc, so ``a -> c`` is
the under-strand. The over-strand runs ``d -> b`` on a positive crossing
and ``b -> d`` on a negative one. Components with no crossings are bare
unknotted loops.

Most editing happens on the Gauss form: for every component the cyclic
sequence of ``(crossing, is_over)`` passes met along its orientation,
plus one sign per crossing. :meth:`FramedLinkDiagram.from_gauss` turns
that back into PD code.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

FORMAT_VERSION = "1"

Pass = tuple  # (crossing key, is_over)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("framings must be exact; got float %r" % value)
    return Fraction(value)


class DiagramError(ValueError):
    """Raised for malformed diagrams or bad component references."""


@dataclass(frozen=True)
class CurveLabel:
    """Name of a loop in S^1 x (S^1 x Sigma_h): ``x``, ``y``, ``a_i`` or ``b_i``."""

    kind: str
    index: int | None = None

    def __post_init__(self):
        if self.kind not in ("x", "y", "a", "b"):
            raise ValueError("unknown curve kind %r" % self.kind)
        if self.kind in ("x", "y"):
            if self.index is not None:
                raise ValueError("%s takes no index" % self.kind)
        elif self.index is None or self.index < 1:
            raise ValueError("%s needs a positive index" % self.kind)

    def __str__(self):
        if self.index is None:
            return self.kind
        return "%s_%d" % (self.kind, self.index)

    @classmethod
    def parse(cls, text: str) -> "CurveLabel":
        m = re.fullmatch(r"([xyab])(?:_?(\d+))?", text.strip())
        if not m:
            raise ValueError("cannot parse curve label %r" % text)
        kind, index = m.group(1), m.group(2)
        return cls(kind, int(index) if index is not None else None)

    def check_genus(self, h: int) -> None:
        if self.kind in ("a", "b") and self.index > h:
            raise ValueError("%s exceeds ambient genus %d" % (self, h))


@dataclass(frozen=True)
class ComponentData:
    id: int
    framing: Fraction
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "framing", as_fraction(self.framing))

    @property
    def is_integral(self) -> bool:
        return self.framing.denominator == 1


@dataclass(frozen=True)
class Crossing:
    a: int
    b: int
    c: int
    d: int
    sign: int

    @property
    def arcs(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @property
    def over_in(self) -> int:
        return self.d if self.sign > 0 else self.b

    @property
    def over_out(self) -> int:
        return self.b if self.sign > 0 else self.d


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class FramedLinkDiagram:
    components: tuple
    crossings: tuple = ()
    arc_pairs: tuple = ()  # sorted (arc id, component id)

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: c.id))
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "arc_pairs", tuple(sorted(self.arc_pairs)))

    # -- basic accessors -------------------------------------------------

    @property
    def arcs(self) -> dict:
        return dict(self.arc_pairs)

    @property
    def ids(self) -> list:
        return [c.id for c in self.components]

    def component(self, cid: int) -> ComponentData:
        for c in self.components:
            if c.id == cid:
                return c
        raise DiagramError("unknown component id %r" % (cid,))

    def find_label(self, label: str) -> int:
        for c in self.components:
            if c.label == label:
                return c.id
        raise DiagramError("no component labelled %r" % label)

    def framings(self) -> list:
        return [c.framing for c in self.components]

    @property
    def is_integral(self) -> bool:
        return all(c.is_integral for c in self.components)

    def zero_crossing_loops(self) -> dict:
        used = set(self.arcs.values())
        return {c.id: (0 if c.id in used else 1) for c in self.components}

    def __len__(self):
        return len(self.components)

    # -- Gauss form ------------------------------------------------------

    def gauss(self) -> tuple:
        """Return ``(codes, signs)``: per component the list of passes
        ``(crossing index, is_over)`` in traversal order, starting at the
        pass entered by the component's smallest arc."""
        report = validate(self)
        if not report.ok:
            raise DiagramError("; ".join(report.errors))
        ends = {}    # arc -> (crossing, is_over) where the arc ends
        starts = {}  # (crossing, is_over) -> outgoing arc
        for i, x in enumerate(self.crossings):
            ends[x.a] = (i, False)
            starts[(i, False)] = x.c
            ends[x.over_in] = (i, True)
            starts[(i, True)] = x.over_out
        by_comp = {}
        for arc, cid in self.arc_pairs:
            by_comp.setdefault(cid, []).append(arc)
        codes = {}
        for comp in self.components:
            arcs = by_comp.get(comp.id)
            if not arcs:
                codes[comp.id] = []
                continue
            first = min(arcs)
            seq, arc = [], first
            while True:
                p = ends[arc]
                seq.append(p)
                arc = starts[p]
                if arc == first:
                    break
            codes[comp.id] = seq
        return codes, [x.sign for x in self.crossings]

    def gauss_arcs(self) -> dict:
        """Per component, the arc leaving each pass (aligned with ``gauss``)."""
        codes, _ = self.gauss()
        out = {}
        for i, x in enumerate(self.crossings):
            out[(i, False)] = x.c
            out[(i, True)] = x.over_out
        return {cid: [out[p] for p in seq] for cid, seq in codes.items()}

    @classmethod
    def from_gauss(cls, components: Iterable[ComponentData], codes: Mapping,
                   signs: Mapping) -> "FramedLinkDiagram":
        """Build PD code from Gauss sequences.

        ``codes`` maps component id to a list of ``(key, is_over)``;
        crossing keys are arbitrary hashables indexing ``signs``. Arcs
        and crossings are numbered in traversal order, components sorted
        by id, so equal Gauss data always gives equal PD code.
        """
        comps = sorted(components, key=lambda c: c.id)
        index, order = {}, []
        for comp in comps:
            for key, _ in codes.get(comp.id, []):
                if key not in index:
                    index[key] = len(order)
                    order.append(key)
        slots = [dict() for _ in order]
        arc_pairs = []
        next_arc = 1
        for comp in comps:
            seq = codes.get(comp.id, [])
            m = len(seq)
            if m == 0:
                continue
            arcs = list(range(next_arc, next_arc + m))
            next_arc += m
            arc_pairs.extend((a, comp.id) for a in arcs)
            for k, (key, over) in enumerate(seq):
                incoming, outgoing = arcs[k - 1], arcs[k]
                slot = slots[index[key]]
                role = "over" if over else "under"
                if role in slot:
                    raise DiagramError("crossing %r has two %s passes" % (key, role))
                slot[role] = (incoming, outgoing)
        crossings = []
        for key, slot in zip(order, slots):
            if set(slot) != {"over", "under"}:
                raise DiagramError("crossing %r is missing a pass" % (key,))
            s = signs[key]
            a, c = slot["under"]
            o_in, o_out = slot["over"]
            if s > 0:
                b, d = o_out, o_in
            else:
                b, d = o_in, o_out
            crossings.append(Crossing(a, b, c, d, 1 if s > 0 else -1))
        return cls(tuple(comps), tuple(crossings), tuple(arc_pairs))

    def gauss_keyed(self) -> tuple:
        """Gauss form with crossings renumbered by first appearance; two
        diagrams with equal keys differ only by arc naming."""
        codes, signs = self.gauss()
        return tuple(
            (c.id, c.framing, c.label, tuple(codes[c.id])) for c in self.components
        ), tuple(signs)

    def replace(self, components=None, codes=None, signs=None) -> "FramedLinkDiagram":
        old_codes, old_signs = self.gauss()
        return FramedLinkDiagram.from_gauss(
            components if components is not None else self.components,
            codes if codes is not None else old_codes,
            signs if signs is not None else dict(enumerate(old_signs)),
        )

    def with_framing(self, cid: int, framing) -> "FramedLinkDiagram":
        comps = [ComponentData(c.id, framing, c.label) if c.id == cid else c
                 for c in self.components]
        self.component(cid)
        return FramedLinkDiagram(tuple(comps), self.crossings, self.arc_pairs)

    def relabel_ids(self, mapping: Mapping) -> "FramedLinkDiagram":
        comps = [ComponentData(mapping[c.id], c.framing, c.label) for c in self.components]
        pairs = [(a, mapping[c]) for a, c in self.arc_pairs]
        return FramedLinkDiagram(tuple(comps), self.crossings, tuple(pairs))

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "components": [
                {"id": c.id,
                 "framing": {"num": c.framing.numerator, "den": c.framing.denominator},
                 "label": c.label}
                for c in self.components
            ],
            "crossings": [[x.a, x.b, x.c, x.d, x.sign] for x in self.crossings],
            "arcs": {str(a): c for a, c in self.arc_pairs},
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> "FramedLinkDiagram":
        if str(data.get("format_version")) != FORMAT_VERSION:
            raise DiagramError("unsupported format_version %r" % data.get("format_version"))
        try:
            comps = []
            for c in data["components"]:
                fr = c["framing"]
                if int(fr["den"]) == 0:
                    raise DiagramError("component %r has zero denominator" % c["id"])
                comps.append(ComponentData(int(c["id"]),
                                           Fraction(int(fr["num"]), int(fr["den"])),
                                           c.get("label")))
            crossings = []
            for row in data["crossings"]:
                a, b, c_, d, s = (int(v) for v in row)
                crossings.append(Crossing(a, b, c_, d, s))
            pairs = [(int(a), int(c)) for a, c in data["arcs"].items()]
        except (KeyError, TypeError, ValueError) as exc:
            raise DiagramError("malformed diagram data: %s" % exc) from exc
        return cls(tuple(comps), tuple(crossings), tuple(pairs))

    @classmethod
    def from_json(cls, text: str) -> "FramedLinkDiagram":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError("not JSON: %s" % exc) from exc
        return cls.from_dict(data)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def validate(d: FramedLinkDiagram) -> ValidationReport:
    """Check arc pairing, orientation consistency and the component
    partition. Every violation found is reported, not just the first."""
    report = ValidationReport()
    err = report.errors
    ids = [c.id for c in d.components]
    if len(set(ids)) != len(ids):
        err.append("duplicate component ids")
    for c in d.components:
        if c.framing.denominator <= 0:
            err.append("component %d has nonpositive denominator" % c.id)
    arcs = d.arcs
    if len(arcs) != len(d.arc_pairs):
        err.append("arc listed twice in the component map")
    for a, cid in arcs.items():
        if cid not in ids:
            err.append("arc %d assigned to unknown component %d" % (a, cid))

    count, incoming, outgoing = {}, {}, {}
    for i, x in enumerate(d.crossings):
        if x.sign not in (1, -1):
            err.append("crossing %d has sign %r" % (i, x.sign))
            continue
        for a in x.arcs:
            count[a] = count.get(a, 0) + 1
            if a not in arcs:
                err.append("crossing %d references unknown arc %d" % (i, a))
        for a in (x.a, x.over_in):
            incoming[a] = incoming.get(a, 0) + 1
        for a in (x.c, x.over_out):
            outgoing[a] = outgoing.get(a, 0) + 1
    for a in sorted(set(count) | set(arcs)):
        n = count.get(a, 0)
        if n != 2:
            err.append("arc %d appears %d time(s), expected 2" % (a, n))
        elif incoming.get(a, 0) != 1 or outgoing.get(a, 0) != 1:
            err.append("arc %d is not entered once and left once" % a)
    if err:
        return report

    # continuation: each component's arcs form exactly one cycle
    nxt = {}
    for x in d.crossings:
        nxt[x.a] = x.c
        nxt[x.over_in] = x.over_out
    seen = set()
    cycles_per_comp = {}
    for start in sorted(arcs):
        if start in seen:
            continue
        arc, comps_on_cycle = start, set()
        while arc not in seen:
            seen.add(arc)
            comps_on_cycle.add(arcs[arc])
            arc = nxt[arc]
        if len(comps_on_cycle) != 1:
            err.append("arc cycle through %d mixes components %s"
                       % (start, sorted(comps_on_cycle)))
        for cid in comps_on_cycle:
            cycles_per_comp[cid] = cycles_per_comp.get(cid, 0) + 1
    for cid, n in cycles_per_comp.items():
        if n != 1:
            err.append("component %d is split across %d arc cycles" % (cid, n))
    return report


# ---------------------------------------------------------------------------
# builders


def _clasp_passes(tag):
    """Passes for a positive clasp: strand passes and meridian passes."""
    lo, hi = (tag, "lo"), (tag, "hi")
    strand = [(lo, True), (hi, False)]
    meridian = [(lo, False), (hi, True)]
    return strand, meridian, {lo: 1, hi: 1}


def build_unknot(framing=0, label=None) -> FramedLinkDiagram:
    return FramedLinkDiagram((ComponentData(0, framing, label),))


def build_hopf(f1=0, f2=0) -> FramedLinkDiagram:
    strand, meridian, signs = _clasp_passes("h")
    comps = (ComponentData(0, f1), ComponentData(1, f2))
    return FramedLinkDiagram.from_gauss(comps, {0: strand, 1: meridian}, signs)


def build_chain(framings: Sequence) -> FramedLinkDiagram:
    """Linear chain of unknots, each positively clasped to the next."""
    if not framings:
        raise ValueError("chain needs at least one framing")
    codes = {i: [] for i in range(len(framings))}
    signs = {}
    for i in range(len(framings) - 1):
        strand, meridian, s = _clasp_passes(("chain", i))
        codes[i] += strand
        codes[i + 1] = meridian + codes[i + 1]
        signs.update(s)
    comps = tuple(ComponentData(i, f) for i, f in enumerate(framings))
    return FramedLinkDiagram.from_gauss(comps, codes, signs)


def braid_strands(n_strands: int, word: Sequence[int], tag="br"):
    """Passes along each braid strand (keyed by bottom position), the
    bottom-to-top permutation and crossing signs."""
    pos_passes = {j: [] for j in range(n_strands)}  # strand origin -> passes
    where = list(range(n_strands))  # position -> strand origin
    signs = {}
    for t, letter in enumerate(word):
        k = abs(letter)
        if not 1 <= k < n_strands:
            raise ValueError("bad braid letter %r" % letter)
        left, right = where[k - 1], where[k]
        key = (tag, t)
        left_over = letter > 0
        pos_passes[left].append((key, left_over))
        pos_passes[right].append((key, not left_over))
        signs[key] = 1 if letter > 0 else -1
        where[k - 1], where[k] = right, left
    perm = {where[p]: p for p in range(n_strands)}  # origin -> top position
    return pos_passes, perm, signs


def closure_component(n_strands: int, word: Sequence[int], start: int, tag="br"):
    """Passes of the closure component through bottom position ``start``,
    read from there; it ends on that position's closing arc."""
    pos_passes, perm, _ = braid_strands(n_strands, word, tag)
    seq, o = [], start
    while True:
        seq += pos_passes[o]
        o = perm[o]
        if o == start:
            return seq


def braid_closure(n_strands: int, word: Sequence[int], tag="br"):
    """Gauss data of the closure of a braid word.

    Letters are nonzero ints; ``k`` is the Artin generator sigma_k
    (left strand crosses over, positive crossing) and ``-k`` its
    inverse. Strands run upward. Returns ``(codes, signs, starts)``
    where codes are keyed by component number and ``starts[i]`` is the
    bottom position at which component ``i`` begins.
    """
    pos_passes, perm, signs = braid_strands(n_strands, word, tag)
    codes, starts, seen = {}, [], set()
    for origin in range(n_strands):
        if origin in seen:
            continue
        seq, o = [], origin
        while o not in seen:
            seen.add(o)
            seq += pos_passes[o]
            o = perm[o]
        codes[len(starts)] = seq
        starts.append(origin)
    return codes, signs, starts


BORROMEAN_WORD = (1, -2, 1, -2, 1, -2)
WHITEHEAD_WORD = (1, -2, 1, -2, -2)


def build_borromean(f1=0, f2=0, f3=0) -> FramedLinkDiagram:
    codes, signs, starts = braid_closure(3, BORROMEAN_WORD)
    by_start = {s: codes[i] for i, s in enumerate(starts)}
    comps = tuple(ComponentData(i, f) for i, f in enumerate((f1, f2, f3)))
    return FramedLinkDiagram.from_gauss(comps, by_start, signs)


def borromean_block(tag):
    """Passes ``(y, a, b)`` of one Borromean block. The y sequence ends on
    the outer closing arc, so blocks can be strung together along y."""
    codes, signs, starts = braid_closure(3, BORROMEAN_WORD, tag=tag)
    by_start = {s: codes[i] for i, s in enumerate(starts)}
    return by_start[2], by_start[0], by_start[1], signs


def build_s1_sigma(h: int) -> FramedLinkDiagram:
    """Standard surgery diagram of S^1 x Sigma_h: a 0-framed ``y`` circle
    band-summed with one Borromean triple ``(y, a_i, b_i)`` per handle."""
    if h < 0:
        raise ValueError("genus must be nonnegative")
    comps = [ComponentData(0, 0, "y")]
    codes = {0: []}
    signs = {}
    for i in range(1, h + 1):
        y, a, b, s = borromean_block(("blk", i))
        codes[0] += y
        codes[2 * i - 1] = a
        codes[2 * i] = b
        signs.update(s)
        comps += [ComponentData(2 * i - 1, 0, "a_%d" % i),
                  ComponentData(2 * i, 0, "b_%d" % i)]
    return FramedLinkDiagram.from_gauss(comps, codes, signs)


def disjoint_union(d1: FramedLinkDiagram, d2: FramedLinkDiagram) -> FramedLinkDiagram:
    """Split union; ``d2``'s components are renumbered past ``d1``'s."""
    c1, s1 = d1.gauss()
    c2, s2 = d2.gauss()
    shift = (max(d1.ids) + 1) if d1.components else 0
    comps = list(d1.components)
    codes = {cid: [((1, k), o) for k, o in seq] for cid, seq in c1.items()}
    signs = {(1, k): s for k, s in enumerate(s1)}
    for c in d2.components:
        comps.append(ComponentData(c.id + shift, c.framing, c.label))
        codes[c.id + shift] = [((2, k), o) for k, o in c2[c.id]]
    signs.update({(2, k): s for k, s in enumerate(s2)})
    return FramedLinkDiagram.from_gauss(comps, codes, signs)


def next_id(d: FramedLinkDiagram) -> int:
    return max(d.ids) + 1 if d.components else 0


def add_meridian(d: FramedLinkDiagram, cid: int, framing=0, label=None) -> FramedLinkDiagram:
    """Clasp a new unknot around component ``cid`` (linking number +1).
    The clasp goes on the arc closing the component's Gauss sequence."""
    target = d.component(cid)
    codes, signs = d.gauss()
    signs = dict(enumerate(signs))
    new = next_id(d)
    strand, meridian, s = _clasp_passes(("mer", new))
    codes = dict(codes)
    codes[cid] = list(codes[cid]) + strand
    codes[new] = meridian
    signs.update(s)
    if label is None:
        label = "m_%s" % (target.label if target.label else cid)
    comps = list(d.components) + [ComponentData(new, framing, label)]
    return FramedLinkDiagram.from_gauss(comps, codes, signs)


# ---------------------------------------------------------------------------
# linking numbers and connectivity


def crossing_owners(d: FramedLinkDiagram) -> list:
    """Per crossing: (under component, over component, sign)."""
    arcs = d.arcs
    return [(arcs[x.a], arcs[x.over_in], x.sign) for x in d.crossings]


def linking_matrix(d: FramedLinkDiagram) -> list:
    """Symmetric matrix of Fractions: framings on the diagonal, linking
    numbers (half the signed crossing count) off it."""
    report = validate(d)
    if not report.ok:
        raise DiagramError("; ".join(report.errors))
    ids = d.ids
    pos = {cid: i for i, cid in enumerate(ids)}
    n = len(ids)
    twice = [[0] * n for _ in range(n)]
    for under, over, sign in crossing_owners(d):
        if under != over:
            i, j = pos[under], pos[over]
            twice[i][j] += sign
            twice[j][i] += sign
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                m[i][i] = d.components[i].framing
            else:
                if twice[i][j] % 2:
                    raise DiagramError("odd crossing count between components %d and %d"
                                       % (ids[i], ids[j]))
                m[i][j] = Fraction(twice[i][j] // 2)
    return m


def integer_linking_matrix(d: FramedLinkDiagram) -> list:
    m = linking_matrix(d)
    for i, row in enumerate(m):
        if row[i].denominator != 1:
            raise DiagramError("component %d has rational framing %s; clear it first"
                               % (d.components[i].id, row[i]))
    return [[int(v) for v in row] for row in m]


def writhe(d: FramedLinkDiagram, cid: int) -> int:
    return sum(s for u, o, s in crossing_owners(d) if u == o == cid)


def split_classes(d: FramedLinkDiagram) -> list:
    """Components grouped by shared crossings, each class sorted."""
    parent = {cid: cid for cid in d.ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, o, _ in crossing_owners(d):
        ru, ro = find(u), find(o)
        if ru != ro:
            parent[max(ru, ro)] = min(ru, ro)
    classes = {}
    for cid in d.ids:
        classes.setdefault(find(cid), []).append(cid)
    return sorted(classes.values())


def sub_diagram(d: FramedLinkDiagram, keep: Iterable[int]) -> FramedLinkDiagram:
    """Restrict to the given components, deleting every crossing that
    involves a dropped component."""
    keep = set(keep)
    codes, signs = d.gauss()
    owners = crossing_owners(d)
    dead = {i for i, (u, o, _) in enumerate(owners) if u not in keep or o not in keep}
    comps = [c for c in d.components if c.id in keep]
    new_codes = {cid: [p for p in codes[cid] if p[0] not in dead] for cid in keep}
    return FramedLinkDiagram.from_gauss(comps, new_codes, dict(enumerate(signs)))


def delete_components(d: FramedLinkDiagram, drop: Iterable[int]) -> FramedLinkDiagram:
    drop = set(drop)
    for cid in drop:
        d.component(cid)
    return sub_diagram(d, [cid for cid in d.ids if cid not in drop])


# ---------------------------------------------------------------------------
# Reidemeister reductions


def _adjacent(seq, i, j) -> bool:
    m = len(seq)
    return (i + 1) % m == j or (j + 1) % m == i


def find_reidemeister(d: FramedLinkDiagram, only=None):
    """Locate a crossing-reducing R1 or R2 move; returns the crossing
    indices to delete or ``None``. With ``only``, moves must touch one of
    those crossing indices."""
    codes, signs = d.gauss()
    where = {}
    for cid, seq in codes.items():
        for k, (x, over) in enumerate(seq):
            where.setdefault(x, []).append((cid, k, over))
    for x, places in sorted(where.items()):
        (c1, k1, _), (c2, k2, _) = places
        if c1 == c2 and _adjacent(codes[c1], k1, k2) and (only is None or x in only):
            return (x,)
    for cid, seq in codes.items():
        m = len(seq)
        for k in range(m):
            (x, ox), (y, oy) = seq[k], seq[(k + 1) % m]
            if x == y or ox != oy or signs[x] == signs[y]:
                continue
            if only is not None and x not in only and y not in only:
                continue
            # the other passes of x and y must be adjacent too
            px = [p for p in where[x] if not (p[0] == cid and p[1] == k)]
            py = [p for p in where[y] if not (p[0] == cid and p[1] == (k + 1) % m)]
            (cx, kx, _), (cy, ky, _) = px[0], py[0]
            if cx == cy and _adjacent(codes[cx], kx, ky):
                return (x, y)
    return None


def remove_crossings(d: FramedLinkDiagram, doomed) -> FramedLinkDiagram:
    codes, signs = d.gauss()
    doomed = set(doomed)
    new = {cid: [p for p in seq if p[0] not in doomed] for cid, seq in codes.items()}
    return FramedLinkDiagram.from_gauss(d.components, new, dict(enumerate(signs)))


def reduce_reidemeister(d: FramedLinkDiagram) -> FramedLinkDiagram:
    """Apply R1/R2 reductions until none is left."""
    while True:
        hit = find_reidemeister(d)
        if hit is None:
            return d
        d = remove_crossings(d, hit)


# ---------------------------------------------------------------------------
# faces


def _outgoing(x: Crossing, slot: int) -> bool:
    if slot == 0:
        return False
    if slot == 2:
        return True
    if slot == 1:
        return x.sign > 0
    return x.sign < 0


def faces(d: FramedLinkDiagram) -> list:
    """Faces of the projection as sets of ``(arc, right)``: the face lies on
    the right of ``arc`` (seen along its orientation) iff ``right``."""
    where = {}
    for i, x in enumerate(d.crossings):
        for k, a in enumerate(x.arcs):
            where.setdefault(a, []).append((i, k))
    seen, out = set(), []
    for i in range(len(d.crossings)):
        for k in range(4):
            if (i, k) in seen:
                continue
            face, corner = set(), (i, k)
            while corner not in seen:
                seen.add(corner)
                ci, ck = corner
                x = d.crossings[ci]
                a, b = x.arcs[ck], x.arcs[(ck + 1) % 4]
                face.add((a, not _outgoing(x, ck)))
                face.add((b, _outgoing(x, (ck + 1) % 4)))
                ends = where[b]
                other = ends[0] if ends[1] == (ci, (ck + 1) % 4) else ends[1]
                corner = other
            out.append(frozenset(face))
    return out


def same_diagram(d1: FramedLinkDiagram, d2: FramedLinkDiagram) -> bool:
    """Equality up to renaming arcs and reordering crossings."""
    if [(c.id, c.framing) for c in d1.components] != [(c.id, c.framing) for c in d2.components]:
        return False
    if len(d1.crossings) != len(d2.crossings):
        return False
    g1, s1 = d1.gauss()
    g2, s2 = d2.gauss()
    ids = d1.ids

    def search(i, mapping):
        if i == len(ids):
            return True
        a, b = g1[ids[i]], g2[ids[i]]
        if len(a) != len(b):
            return False
        if not a:
            return search(i + 1, mapping)
        for r in range(len(b)):
            m = dict(mapping)
            ok = True
            for (k1, o1), (k2, o2) in zip(a, b[r:] + b[:r]):
                if o1 != o2 or s1[k1] != s2[k2] or m.setdefault(k1, k2) != k2:
                    ok = False
                    break
            if ok and len(set(m.values())) == len(m) and search(i + 1, m):
                return True
        return False

    return search(0, {})
