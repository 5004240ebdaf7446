"""
Invariants of surgered 3-manifolds: first homology from the linking
matrix, pi_1 from the Wirtinger presentation plus one framed-longitude
relator per component, and recognition of the summands that appear in
S^3 # (S^1 x Sigma_g) # (#b S^1 x S^2) # (#c L(p_i, 1)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import (
    DiagramError,
    FramedLinkDiagram,
    crossing_owners,
    integer_linking_matrix,
    reduce_reidemeister,
    split_classes,
    sub_diagram,
)
from .presentation import (
    GroupPresentation,
    abelianization,
    cyclic_group,
    presentations_match,
    surface_times_circle,
    tietze_simplify,
    trivial_group,
)
from .smith import AbelianGroup, cokernel

THREE_MANIFOLD = "three-manifold"
PRODUCT = "product-with-circle"
DEFAULT_BUDGET = 10000


def first_homology(d: FramedLinkDiagram, ambient: str = THREE_MANIFOLD) -> AbelianGroup:
    """Cokernel of the linking matrix; ``PRODUCT`` adds the circle factor."""
    if ambient not in (THREE_MANIFOLD, PRODUCT):
        raise ValueError("unknown ambient %r" % ambient)
    m = integer_linking_matrix(d)
    h1 = cokernel(m, len(m)) if m else AbelianGroup()
    if ambient == PRODUCT:
        h1 = AbelianGroup(h1.rank + 1, h1.torsion)
    return h1


def wirtinger_presentation(d: FramedLinkDiagram) -> GroupPresentation:
    """pi_1 of the surgered manifold.

    One generator per arc (a meridian) and one per crossingless loop.
    Each crossing identifies the two over-arcs and conjugates the under
    arc; each component adds its framed longitude. The longitude is read
    from the component's first arc, multiplying in ``x^s`` for every
    under-pass below over-arc ``x`` at a crossing of sign ``s``, and is
    corrected by ``m^(framing - writhe)``.
    """
    if not d.is_integral:
        raise DiagramError("rational framing present; clear it before computing pi_1")
    arcs = d.arcs
    n_arcs = len(arcs)
    loops = [c.id for c in d.components if c.id not in set(arcs.values())]
    n = n_arcs + len(loops)
    rels, notes = [], []
    for i, x in enumerate(d.crossings):
        if x.over_in != x.over_out:
            rels.append((x.over_in, -x.over_out))
            notes.append("crossing %d over" % i)
        s = x.sign
        # outgoing under-arc c = x^-s a x^s
        ov = x.over_in
        rels.append((-x.c,) + ((-ov,) if s > 0 else (ov,)) + (x.a,) + ((ov,) if s > 0 else (-ov,)))
        notes.append("crossing %d under" % i)

    codes, _ = d.gauss() if d.crossings else ({c.id: [] for c in d.components}, [])
    owners = crossing_owners(d)
    by_comp = {}
    for a, cid in d.arc_pairs:
        by_comp.setdefault(cid, []).append(a)
    for comp in d.components:
        f = int(comp.framing)
        if comp.id in loops:
            g = n_arcs + loops.index(comp.id) + 1
            rels.append((g,) * abs(f) if f >= 0 else (-g,) * abs(f))
            notes.append("longitude %d" % comp.id)
            continue
        first = min(by_comp[comp.id])
        word = []
        writhe = 0
        for xi, over in codes[comp.id]:
            x = d.crossings[xi]
            u, o, s = owners[xi]
            if u == o:
                if not over:
                    writhe += s
            if not over:
                word.append(x.over_in if s > 0 else -x.over_in)
        k = f - writhe
        word += [first] * k if k >= 0 else [-first] * (-k)
        rels.append(tuple(word))
        notes.append("longitude %d" % comp.id)
    names = tuple("x%d" % a for a in range(1, n_arcs + 1)) + tuple("m%d" % c for c in loops)
    return GroupPresentation(n, tuple(rels), tuple(notes), names)


# ---------------------------------------------------------------------------
# recognition

CERTIFIED = "certified"
ABELIAN_ONLY = "abelian-only"


@dataclass(frozen=True)
class Summand:
    kind: str  # S3 | S1xS2 | Lens | S1xSigma | Unknown
    p: int = 0
    q: int = 0
    genus: int = 0
    confidence: str = ABELIAN_ONLY
    components: tuple = ()
    h1: AbelianGroup = field(default_factory=AbelianGroup)
    presentation: str = ""

    @property
    def key(self) -> tuple:
        if self.kind == "Lens":
            return ("Lens", self.p)
        if self.kind == "S1xSigma":
            return ("S1xSigma", self.genus)
        if self.kind == "Unknown":
            return ("Unknown", self.h1.rank, self.h1.torsion)
        return (self.kind,)

    def __str__(self):
        if self.kind == "Lens":
            return "L(%d,%d)" % (self.p, self.q)
        if self.kind == "S1xSigma":
            return "S1xSigma(%d)" % self.genus
        if self.kind == "Unknown":
            return "Unknown[H1=%s]" % self.h1
        return self.kind

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "name": str(self), "confidence": self.confidence,
               "components": list(self.components)}
        if self.kind == "Lens":
            out.update(p=self.p, q=self.q)
        if self.kind == "S1xSigma":
            out["genus"] = self.genus
        if self.kind == "Unknown":
            out["h1"] = self.h1.to_dict()
            out["presentation"] = self.presentation
        return out


@dataclass(frozen=True)
class RecognitionResult:
    summands: tuple  # S^3 summands are absorbed
    confidence: str
    absorbed_s3: int = 0
    notes: tuple = ()

    def keys(self) -> list:
        return sorted(s.key for s in self.summands)

    def __str__(self):
        if not self.summands:
            return "S3"
        return " # ".join(str(s) for s in self.summands)

    def to_dict(self) -> dict:
        return {"summands": [s.to_dict() for s in self.summands],
                "confidence": self.confidence, "absorbed_s3": self.absorbed_s3,
                "name": str(self), "notes": list(self.notes)}


def negative_continued_fraction(coeffs) -> Fraction:
    """[a_1, ..., a_k] = a_1 - 1/(a_2 - 1/(... - 1/a_k))."""
    value = None
    for a in reversed(list(coeffs)):
        a = Fraction(a)
        if value is None:
            value = a
        elif value == 0:
            raise ZeroDivisionError("continued fraction hits 1/0")
        else:
            value = a - 1 / value
    return value


def continuant(coeffs) -> int:
    """Numerator of [a_1, ..., a_k] as the determinant of the chain's
    tridiagonal linking matrix; defined even where a partial fraction
    would divide by zero."""
    prev, cur = 1, 0
    for a in reversed([int(a) for a in coeffs]):
        prev, cur = a * prev - cur, prev
    return prev


def _pair_crossings(sub: FramedLinkDiagram) -> tuple:
    owners = crossing_owners(sub)
    pairs, self_x = {}, 0
    for u, o, s in owners:
        if u == o:
            self_x += 1
        else:
            key = (min(u, o), max(u, o))
            pairs.setdefault(key, []).append((u, o, s))
    return pairs, self_x


def _match_chain(sub: FramedLinkDiagram):
    """Ordered component ids if ``sub`` is a linear chain of clasped unknots."""
    pairs, self_x = _pair_crossings(sub)
    if self_x:
        return None
    ids = sub.ids
    if len(ids) == 1:
        return ids if not sub.crossings else None
    nbrs = {cid: [] for cid in ids}
    for (i, j), xs in pairs.items():
        if len(xs) != 2 or abs(sum(s for _, _, s in xs)) != 2:
            return None
        # a clasp: each strand is over once
        if {u for u, _, _ in xs} != {i, j}:
            return None
        nbrs[i].append(j)
        nbrs[j].append(i)
    ends = [cid for cid, nb in nbrs.items() if len(nb) == 1]
    if any(len(nb) > 2 for nb in nbrs.values()) or len(ends) != 2:
        return None
    order, prev, cur = [min(ends)], None, min(ends)
    while True:
        nxt = [x for x in nbrs[cur] if x != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order if len(order) == len(ids) else None


def _is_borromean_triple(sub: FramedLinkDiagram, triple) -> bool:
    pairs, self_x = _pair_crossings(sub)
    if self_x or len(sub.crossings) != 6:
        return False
    beats = {}
    for key in [(min(p, q), max(p, q)) for p in triple for q in triple if p < q]:
        xs = pairs.get(key, [])
        if len(xs) != 2 or sum(s for _, _, s in xs) != 0:
            return False
        overs = {o for _, o, _ in xs}
        if len(overs) != 1:
            return False
        winner = overs.pop()
        loser = key[0] if winner == key[1] else key[1]
        beats[winner] = loser
    # rock-paper-scissors: every component lies over exactly one other
    return set(beats) == set(triple)


def _match_sigma(sub: FramedLinkDiagram):
    """Return ``(hub, [(u, v), ...])`` for a band sum of Borromean triples."""
    if any(c.framing != 0 for c in sub.components):
        return None
    ids = sub.ids
    if len(ids) < 3 or len(ids) % 2 == 0:
        return None
    pairs, self_x = _pair_crossings(sub)
    if self_x:
        return None
    degree = {cid: set() for cid in ids}
    for (i, j) in pairs:
        degree[i].add(j)
        degree[j].add(i)
    hubs = [cid for cid in ids if degree[cid] == set(ids) - {cid}]
    if len(ids) == 3:
        hubs = hubs[:1]
    if len(hubs) != 1:
        return None
    hub = hubs[0]
    blocks, used = [], set()
    for cid in ids:
        if cid == hub or cid in used:
            continue
        partner = degree[cid] - {hub}
        if len(partner) != 1:
            return None
        other = partner.pop()
        if degree[other] != {hub, cid}:
            return None
        used |= {cid, other}
        blocks.append((cid, other))
    codes, _ = sub.gauss()
    owners = crossing_owners(sub)
    hub_seq = [owners[x] for x, _ in codes[hub]]
    for u, v in blocks:
        if not _is_borromean_triple(sub_diagram(sub, (hub, u, v)), (hub, u, v)):
            return None
        # the block occupies a contiguous stretch of the hub
        marks = [int(u in (a, b) or v in (a, b)) for a, b, _ in hub_seq]
        m = len(marks)
        runs = sum(1 for i in range(m) if marks[i] and not marks[i - 1])
        if runs != 1 and not all(marks):
            return None
    return hub, blocks


def _certify(sub: FramedLinkDiagram, canonical: GroupPresentation, h1: AbelianGroup,
             budget: int) -> tuple:
    pres = wirtinger_presentation(sub)
    simple = tietze_simplify(pres, budget)
    if abelianization(simple) != h1 or abelianization(canonical) != h1:
        return ABELIAN_ONLY, simple
    target = tietze_simplify(canonical, budget)
    if presentations_match(simple, target) or presentations_match(simple, canonical):
        return CERTIFIED, simple
    return ABELIAN_ONLY, simple


def recognize_class(sub: FramedLinkDiagram, budget: int = DEFAULT_BUDGET) -> Summand:
    h1 = first_homology(sub)
    ids = tuple(sub.ids)
    chain = _match_chain(sub)
    if chain is not None:
        coeffs = [sub.component(c).framing for c in chain]
        num, den = continuant(coeffs), continuant(coeffs[1:])
        if num < 0:
            num, den = -num, -den
        p = num
        if p == 1:
            kind, canonical = "S3", trivial_group()
        elif p == 0:
            kind, canonical = "S1xS2", cyclic_group(0)
        else:
            kind, canonical = "Lens", cyclic_group(p)
        conf, _ = _certify(sub, canonical, h1, budget)
        if kind == "Lens":
            return Summand("Lens", p=p, q=den % p, confidence=conf, components=ids, h1=h1)
        return Summand(kind, confidence=conf, components=ids, h1=h1)
    sigma = _match_sigma(sub)
    if sigma is not None:
        g = len(sigma[1])
        conf, _ = _certify(sub, surface_times_circle(g), h1, budget)
        return Summand("S1xSigma", genus=g, confidence=conf, components=ids, h1=h1)
    simple = tietze_simplify(wirtinger_presentation(sub), budget)
    return Summand("Unknown", confidence=ABELIAN_ONLY, components=ids, h1=h1,
                   presentation=str(simple))


def recognize(d: FramedLinkDiagram, budget: int = DEFAULT_BUDGET) -> RecognitionResult:
    """Split into crossing-connected classes and match each against the
    summand vocabulary. Each match is certified when the simplified pi_1
    equals the stored canonical presentation; otherwise only H_1 backs it."""
    if not d.is_integral:
        raise DiagramError("rational framing present; clear it before recognition")
    d = reduce_reidemeister(d)
    summands, absorbed = [], 0
    notes = []
    for cls in split_classes(d):
        s = recognize_class(sub_diagram(d, cls), budget)
        if s.kind == "S3":
            absorbed += 1
            if s.confidence != CERTIFIED:
                summands.append(s)  # an uncertified S^3 stays visible
            continue
        if s.kind == "Lens":
            notes.append("lens summands are identified up to orientation: "
                         "L(p,q) and L(p,-q) are not distinguished")
        summands.append(s)
    summands.sort(key=lambda s: (s.key, s.components))
    conf = CERTIFIED if all(s.confidence == CERTIFIED for s in summands) else ABELIAN_ONLY
    if any(s.kind == "Unknown" for s in summands):
        conf = ABELIAN_ONLY
    return RecognitionResult(tuple(summands), conf, absorbed, tuple(sorted(set(notes))))


def invariant_report(d: FramedLinkDiagram, with_pi1: bool = True,
                     budget: int = DEFAULT_BUDGET) -> dict:
    """The ``inv`` report: H_1, optionally pi_1, and recognition."""
    report = {"h1": first_homology(d).to_dict()}
    if with_pi1:
        pres = wirtinger_presentation(d)
        simple = tietze_simplify(pres, budget)
        report["pi1"] = {"generators": list(simple.names),
                         "relators": [simple.spell(r) for r in simple.relators],
                         "simplified": True,
                         "budget_exhausted": simple.exhausted,
                         "raw_generators": pres.n_generators,
                         "raw_relators": len(pres.relators)}
    report["recognition"] = recognize(d, budget).to_dict()
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)
