"""
Kirby and Rolfsen calculus on framed link diagrams.

Every rule is a pure function ``FramedLinkDiagram -> FramedLinkDiagram``
wrapped by :func:`apply_rule`, which recomputes H_1 of the surgered
manifold before and after and refuses any step that changes it. Rules
raise :class:`RuleError` when their preconditions fail.

Rational coefficients ``p/q`` are first-class here. H_1 of a rational
surgery is read directly from the coefficients and linking numbers,
which keeps the check independent of :func:`clear_rational`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .diagram import (
    ComponentData,
    DiagramError,
    FramedLinkDiagram,
    add_meridian,
    as_fraction,
    faces,
    linking_matrix,
    next_id,
    reduce_reidemeister,
    _clasp_passes,
)
from .smith import AbelianGroup, cokernel

class RuleError(ValueError):
    """A rule's precondition does not hold for the given diagram."""


class InvariantViolation(RuntimeError):
    """A rewrite changed H_1; this is a bug in a rule, never expected."""


def rational_to_chain(r) -> list:
    """Integers ``[a_1, ..., a_k]`` with ``r = a_1 - 1/(a_2 - 1/(... - 1/a_k))``.

    Each ``a_i`` is a ceiling, so every partial remainder lies in (0, 1]
    and the chain is finite.
    """
    r = as_fraction(r)
    out = []
    while True:
        a = ceil(r)
        out.append(a)
        rest = a - r
        if rest == 0:
            return out
        r = 1 / rest


def chain_value(chain) -> Fraction:
    """Inverse of :func:`rational_to_chain`."""
    v = Fraction(chain[-1])
    for a in reversed(chain[:-1]):
        v = a - 1 / v
    return v


def surgery_homology(d: FramedLinkDiagram) -> AbelianGroup:
    """H_1 of rational surgery: meridians modulo ``p_i mu_i + q_i lambda_i``."""
    if not d.components:
        return AbelianGroup()
    lk = linking_matrix(d)
    rows = []
    for i, comp in enumerate(d.components):
        p, q = comp.framing.numerator, comp.framing.denominator
        row = [int(q * lk[i][j]) for j in range(len(lk))]
        row[i] = p
        rows.append(row)
    return cokernel(rows, len(rows))


# ---------------------------------------------------------------------------
# encircling unknots


@dataclass(frozen=True)
class Pierce:
    """One strand of component ``comp`` passing through the disk of an
    encircling unknot ``C``. ``passes`` are the strand's two passes in
    its own order, ``link`` is lk(C, comp) from this strand and
    ``right`` says whether C leaves the strand on its right."""

    comp: int
    passes: tuple
    link: int
    right: bool


def _keyed(d: FramedLinkDiagram):
    codes, signs = d.gauss()
    return {c: list(s) for c, s in codes.items()}, dict(enumerate(signs))


def encircling(codes, signs, cid) -> list:
    """Strands pierced by component ``cid`` if it is an unknot meeting the
    rest of the diagram in at most two clasps, else raise RuleError."""
    seq = codes[cid]
    if not seq:
        return []
    keys = [k for k, _ in seq]
    if len(set(keys)) != len(keys):
        raise RuleError("component %d crosses itself" % cid)
    if len(seq) not in (2, 4):
        raise RuleError("component %d is not a one- or two-strand clasp" % cid)
    owner = {}
    for c, s in codes.items():
        if c != cid:
            for i, (k, o) in enumerate(s):
                owner[k] = (c, i, o)
    n = len(seq)
    for off in (0, 1):
        out = []
        for j in range(n // 2):
            (k1, o1), (k2, o2) = seq[(off + 2 * j) % n], seq[(off + 2 * j + 1) % n]
            c1, i1, s1 = owner[k1]
            c2, i2, s2 = owner[k2]
            if c1 != c2 or o1 == o2 or signs[k1] != signs[k2]:
                break
            m = len(codes[c1])
            if (i1 + 1) % m == i2:
                first, second, c_first = k1, k2, True
            elif (i2 + 1) % m == i1:
                first, second, c_first = k2, k1, False
            else:
                break
            strand_over_first = owner[first][2]
            clockwise = (signs[k1] > 0) == strand_over_first
            passes = ((first, owner[first][2]), (second, owner[second][2]))
            out.append(Pierce(c1, passes, signs[k1], c_first == clockwise))
        else:
            return out
    raise RuleError("component %d is not a supported encircling unknot" % cid)


def twist_passes(m: int, parallel: bool, first_left: bool, tag):
    """Passes for the braid sigma^m between two strands.

    Returns ``(first, second, signs)``: passes along the first strand,
    along the second strand (each in its own direction) and crossing
    signs. ``parallel`` says whether the strands run the same way in the
    plane, ``first_left`` whether the first strand is on the left when
    it points up.
    """
    s1, s2, signs = [], [], {}
    sign = (1 if m > 0 else -1) * (1 if parallel else -1)
    for t in range(abs(m)):
        key = (tag, t)
        left_is_first = first_left if t % 2 == 0 else not first_left
        first_over = (m > 0) if left_is_first else not (m > 0)
        s1.append((key, first_over))
        s2.append((key, not first_over))
        signs[key] = sign
    if not parallel:
        s2.reverse()
    return s1, s2, signs


def _splice(codes, before=None, after=None, drop=()):
    """Rebuild Gauss sequences inserting passes around given passes
    ``(crossing, is_over)`` and dropping the crossings in ``drop``."""
    before, after, drop = before or {}, after or {}, set(drop)
    out = {}
    for c, seq in codes.items():
        new = []
        for k, o in seq:
            new += before.get((k, o), [])
            if k not in drop:
                new.append((k, o))
            new += after.get((k, o), [])
        out[c] = new
    return out


def cancel_bigons(codes, signs, fresh):
    """Remove R2 bigons made by a crossing of ``fresh`` (an ordered list)
    and a neighbour along some strand, preferring the earlier neighbour."""
    fresh = list(fresh)
    while True:
        where = {}
        for c, seq in codes.items():
            for i, (k, o) in enumerate(seq):
                where[(k, o)] = (c, i)
        hit = None
        for x in fresh:
            for ox in (True, False):
                if (x, ox) not in where:
                    continue
                c, i = where[(x, ox)]
                seq = codes[c]
                m = len(seq)
                for y, oy in (seq[(i - 1) % m], seq[(i + 1) % m]):
                    if y == x or oy != ox or signs[x] == signs[y]:
                        continue
                    cx, ix = where[(x, not ox)]
                    cy, iy = where[(y, not oy)]
                    mm = len(codes[cx])
                    if cx == cy and ((ix + 1) % mm == iy or (iy + 1) % mm == ix):
                        hit = (x, y)
                        break
                if hit:
                    break
            if hit:
                break
        if hit is None:
            return codes
        fresh = [k for k in fresh if k not in hit]
        codes = {c: [p for p in seq if p[0] not in hit] for c, seq in codes.items()}


def twist_about(d: FramedLinkDiagram, cid: int, n: int, coefficient=False,
                cancel: bool = True):
    """Rolfsen twist of ``n`` full turns along the disk of unknot ``cid``.

    ``coefficient`` overrides the current coefficient of ``cid`` as a
    pair ``(p, q)``; ``(1, 0)`` stands for an unsurgered curve. The new
    coefficient is ``p / (q + n p)``; when that is infinite the
    component is deleted and the twist takes its place.
    """
    codes, signs = _keyed(d)
    comp = d.component(cid)
    pierces = encircling(codes, signs, cid)
    p, q = coefficient if coefficient else (comp.framing.numerator, comp.framing.denominator)
    q2 = q + n * p
    delete = q2 == 0
    gain = {}
    for pc in pierces:
        gain[pc.comp] = gain.get(pc.comp, 0) + pc.link
    comps = []
    for c in d.components:
        if c.id == cid:
            if not delete:
                comps.append(ComponentData(cid, Fraction(p, q2), c.label))
            continue
        comps.append(ComponentData(c.id, c.framing + n * gain.get(c.id, 0) ** 2, c.label))
    before, drop, fresh = {}, set(), []
    if delete:
        drop = {k for pc in pierces for k, _ in pc.passes}
        codes.pop(cid)
    after = {}
    if len(pierces) == 2:
        e1, e2 = pierces
        parallel = e1.right != e2.right
        m = 2 * n * e1.link * e2.link * (1 if parallel else -1)
        s1, s2, tsigns = twist_passes(m, parallel, e1.right, ("tw", cid, len(signs)))
        signs.update(tsigns)
        fresh = [k for k, _ in s1]
        if (e1.link == e2.link) != parallel:
            raise RuleError("component %d bounds a twisted disk; not supported" % cid)
        before[e1.passes[0]] = s1
        if parallel:
            before.setdefault(e2.passes[0], []).extend(s2)
        else:
            after[e2.passes[1]] = s2
    codes = _splice(codes, before, after, drop)
    if fresh and cancel:
        codes = cancel_bigons(codes, signs, fresh)
    return FramedLinkDiagram.from_gauss(comps, codes, signs)


# ---------------------------------------------------------------------------
# rules (unchecked); see RULES for the checked entry points


def _edge_ok(codes, cid, pos):
    if cid not in codes:
        raise RuleError("unknown component %r" % (cid,))
    m = len(codes[cid])
    if not (0 <= pos < max(m, 1)):
        raise RuleError("component %d has no edge %d" % (cid, pos))


def _sides(d: FramedLinkDiagram, strands):
    """Sides ``(r1, r2)`` of two edges facing one common face."""
    arcs = d.gauss_arcs()
    (c1, k1), (c2, k2) = strands
    a1 = arcs[c1][k1] if arcs[c1] else None
    a2 = arcs[c2][k2] if arcs[c2] else None
    if a1 is not None and a1 == a2:
        raise RuleError("the two strands must be different edges")
    if a1 is None or a2 is None or not d.crossings:
        return True, False
    for face in faces(d):
        for r1 in (True, False):
            for r2 in (True, False):
                if (a1, r1) in face and (a2, r2) in face:
                    return r1, r2
    raise RuleError("the two strands share no face; they cannot be encircled")


def _neg_clasp_passes(tag):
    """Mirror clasp: the strand goes under first; linking number -1."""
    lo, hi = (tag, "lo"), (tag, "hi")
    return [(lo, False), (hi, True)], [(lo, True), (hi, False)], {lo: -1, hi: -1}


def _encircle(d, strands, framing, label=None):
    """Add an unknot bounding a flat disk pierced once by each strand.

    With two strands running opposite ways around a common face the
    circle links the second strand negatively; that keeps its disk flat.
    Returns ``(diagram, new id)``.
    """
    strands = [tuple(s) for s in strands]
    if len(strands) > 2:
        raise RuleError("at most two strands can be encircled")
    codes, signs = _keyed(d)
    for cid, pos in strands:
        _edge_ok(codes, cid, pos)
    new = next_id(d)
    comps = list(d.components) + [ComponentData(new, framing, label or "e%d" % new)]
    codes[new] = []
    rights = _sides(d, strands) if len(strands) == 2 else (True,)
    after, extra = {}, {}
    for j, ((cid, pos), right) in enumerate(zip(strands, rights)):
        mirror = j == 1 and rights[0] == rights[1]
        strand, meridian, s = (_neg_clasp_passes if mirror else _clasp_passes)(("bu", new, j))
        signs.update(s)
        codes[new] += meridian if right else meridian[::-1]
        if codes[cid]:
            after.setdefault(codes[cid][pos], []).extend(strand)
        else:
            extra.setdefault(cid, []).extend(strand)
    codes = _splice(codes, None, after)
    for cid, passes in extra.items():
        codes[cid] += passes
    return FramedLinkDiagram.from_gauss(comps, codes, signs), new


def _blow_up(d, strands=(), sign=1, label=None):
    if sign not in (1, -1):
        raise RuleError("blow-up sign must be +1 or -1")
    grown, new = _encircle(d, strands, sign, label)
    if not strands:
        return grown
    return twist_about(grown, new, sign, coefficient=(1, 0), cancel=False)


def _blow_down(d, cid):
    f = d.component(cid).framing
    if f not in (1, -1):
        raise RuleError("blow-down needs a +1 or -1 framed unknot, got %s" % f)
    return twist_about(d, cid, -int(f))


def _rolfsen_twist(d, cid, n):
    if not isinstance(n, int) or n == 0:
        raise RuleError("twist count must be a nonzero integer")
    return twist_about(d, cid, n)


def _meridian_of(codes, signs, mid):
    pierces = encircling(codes, signs, mid)
    if len(pierces) != 1:
        raise RuleError("component %d is not a meridian of a single strand" % mid)
    return pierces[0]


def _slam_dunk(d, mid):
    codes, signs = _keyed(d)
    pc = _meridian_of(codes, signs, mid)
    k = d.component(pc.comp)
    if not k.is_integral:
        raise RuleError("slam-dunk needs an integer framing on the parent")
    c = d.component(mid).framing
    if c == 0:
        # n - 1/0: the parent becomes an unsurgered curve
        drop = {pc.comp, mid}
        keys = {x for cc in drop for x, _ in codes[cc]}
        comps = [cc for cc in d.components if cc.id not in drop]
        codes = {cc: [p for p in s if p[0] not in keys] for cc, s in codes.items() if cc not in drop}
        return FramedLinkDiagram.from_gauss(comps, codes, signs)
    comps = [ComponentData(cc.id, cc.framing - 1 / c, cc.label) if cc.id == pc.comp else cc
             for cc in d.components if cc.id != mid]
    codes.pop(mid)
    codes = _splice(codes, drop=[k for k, _ in pc.passes])
    return FramedLinkDiagram.from_gauss(comps, codes, signs)


def _clear_rational(d, cid=None):
    if cid is None:
        rational = [c.id for c in d.components if not c.is_integral]
        if not rational:
            raise RuleError("all framings are already integral")
        cid = rational[0]
    comp = d.component(cid)
    if comp.is_integral:
        raise RuleError("component %d already has an integer framing" % cid)
    chain = rational_to_chain(comp.framing)
    out = d.with_framing(cid, chain[0])
    parent = cid
    base = comp.label if comp.label else str(cid)
    for j, a in enumerate(chain[1:], start=1):
        out = add_meridian(out, parent, a, "%s~%d" % (base, j))
        parent = next_id(out) - 1
    return out


def _split_extract(d):
    out = reduce_reidemeister(d)
    if len(out.crossings) == len(d.crossings):
        raise RuleError("no crossing-reducing Reidemeister move applies")
    return out


# ---------------------------------------------------------------------------
# Borromean member with framing +-1


def _block_template(tag):
    from .diagram import BORROMEAN_WORD, closure_component, braid_strands
    _, _, signs = braid_strands(3, BORROMEAN_WORD, tag)
    roles = {r: closure_component(3, BORROMEAN_WORD, start, tag)
             for r, start in (("hub", 2), ("a", 0), ("b", 1))}
    return roles, signs


def _whitehead_template(mirror, tag):
    from .diagram import WHITEHEAD_WORD, braid_strands, closure_component
    word = tuple(-x for x in WHITEHEAD_WORD) if mirror else WHITEHEAD_WORD
    _, perm, signs = braid_strands(3, word, tag)
    hub = closure_component(3, word, 2, tag)
    other_start = next(p for p in range(3) if closure_component(3, word, p, tag)[0] not in hub)
    return hub, closure_component(3, word, other_start, tag), signs


def _match(actual, template, mapping, signs, tsigns):
    m = dict(mapping)
    for (k, o), (tk, to) in zip(actual, template):
        if o != to or signs[k] != tsigns[tk] or m.setdefault(tk, k) != k:
            return None
    return m


def _rotations(seq):
    return [seq[r:] + seq[:r] for r in range(len(seq))] or [seq]


def find_borromean(codes, signs, mid, roles_order=("a", "b")):
    """Locate ``mid`` as a non-hub member of a standard Borromean block.
    Returns ``(role, hub id, other id, hub block start)``."""
    roles, tsigns = _block_template("T")
    seq = codes[mid]
    if len(seq) != 4:
        raise RuleError("component %d is not a Borromean member" % mid)
    owners = {}
    for c, s in codes.items():
        for k, _ in s:
            owners.setdefault(k, set()).add(c)
    partners = sorted({c for k, _ in seq for c in owners[k]} - {mid})
    if len(partners) != 2:
        raise RuleError("component %d is not a Borromean member" % mid)
    for role in roles_order:
        other_role = "b" if role == "a" else "a"
        for hub, other in (partners, partners[::-1]):
            if len(codes[other]) != 4:
                continue
            for rm in _rotations(seq):
                m1 = _match(rm, roles[role], {}, signs, tsigns)
                if m1 is None:
                    continue
                for ro in _rotations(codes[other]):
                    m2 = _match(ro, roles[other_role], m1, signs, tsigns)
                    if m2 is None:
                        continue
                    hs = codes[hub]
                    for start in range(len(hs)):
                        block = [hs[(start + j) % len(hs)] for j in range(4)]
                        m3 = _match(block, roles["hub"], m2, signs, tsigns)
                        if m3 is not None and len(set(m3.values())) == 6:
                            return role, hub, other, start
    raise RuleError("component %d is not a member of a standard Borromean block" % mid)


def _borromean_twist(d, mid, roles_order=("a", "b")):
    f = d.component(mid).framing
    if f not in (1, -1):
        raise RuleError("Borromean twist needs a +1 or -1 framed member")
    codes, signs = _keyed(d)
    role, hub, other, start = find_borromean(codes, signs, mid, roles_order)
    # blowing down a +1 member leaves the mirror of the -1 result; the
    # chirality was fixed against homomorphism counts of the Borromean
    # surgery itself
    hub_seq, other_seq, wsigns = _whitehead_template(f > 0, ("wh", mid))
    signs.update(wsigns)
    hs = codes[hub]
    rest = [hs[(start + 4 + j) % len(hs)] for j in range(len(hs) - 4)]
    codes[hub] = rest + hub_seq
    codes[other] = other_seq
    codes.pop(mid)
    comps = [c for c in d.components if c.id != mid]
    return FramedLinkDiagram.from_gauss(comps, codes, signs)


# ---------------------------------------------------------------------------
# checked engine


@dataclass
class Step:
    rule: str
    params: dict
    h1_before: str
    h1_after: str
    ok: bool
    before: str
    after: str
    pi1: str = "skipped"

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class MoveTrace:
    initial: str = ""
    final: str = ""
    steps: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"initial": self.initial, "final": self.final,
                "steps": [s.to_dict() for s in self.steps]}

    def __len__(self):
        return len(self.steps)


RULES = {
    "blow_up": _blow_up,
    "blow_down": _blow_down,
    "slam_dunk": _slam_dunk,
    "rolfsen_twist": _rolfsen_twist,
    "clear_rational": _clear_rational,
    "borromean_twist": _borromean_twist,
    "split_extract": _split_extract,
}

PI1_MAX_GENERATORS = 6


def _pi1_signature(d):
    from .invariants import wirtinger_presentation
    from .presentation import count_homomorphisms, symmetric_group, tietze_simplify

    if not d.is_integral:
        return None
    g = tietze_simplify(wirtinger_presentation(d))
    if g.exhausted or g.n_generators > PI1_MAX_GENERATORS:
        return None
    return count_homomorphisms(g, symmetric_group(3))


def apply_rule(d: FramedLinkDiagram, rule: str, check_pi1: bool = False, **params):
    """Apply a named rule and verify H_1 (and optionally a pi_1 invariant,
    the number of homomorphisms to S_3) is unchanged.

    Returns ``(diagram, Step)``; raises RuleError on a failed
    precondition and InvariantViolation if an invariant moved.
    """
    if rule not in RULES:
        raise RuleError("unknown rule %r" % rule)
    try:
        out = RULES[rule](d, **params)
    except DiagramError as exc:
        raise RuleError(str(exc)) from exc
    h_before, h_after = surgery_homology(d), surgery_homology(out)
    step = Step(rule, dict(params), str(h_before), str(h_after),
                h_before == h_after, d.digest(), out.digest())
    if not step.ok:
        raise InvariantViolation("%s changed H_1 from %s to %s" % (rule, h_before, h_after))
    if check_pi1:
        a, b = _pi1_signature(d), _pi1_signature(out)
        if a is not None and b is not None:
            if a != b:
                raise InvariantViolation("%s changed the S_3 representation count %d -> %d"
                                         % (rule, a, b))
            step.pi1 = "ok (%d homs to S3)" % a
    return out, step


def blow_up(d, strands=(), sign=1, label=None):
    return apply_rule(d, "blow_up", strands=list(strands), sign=sign, label=label)[0]


def blow_down(d, cid):
    return apply_rule(d, "blow_down", cid=cid)[0]


def slam_dunk(d, mid):
    return apply_rule(d, "slam_dunk", mid=mid)[0]


def rolfsen_twist(d, cid, n):
    return apply_rule(d, "rolfsen_twist", cid=cid, n=n)[0]


def clear_rational(d, cid=None):
    return apply_rule(d, "clear_rational", cid=cid)[0]


def borromean_twist(d, mid):
    return apply_rule(d, "borromean_twist", mid=mid)[0]


def split_extract(d):
    return apply_rule(d, "split_extract")[0]


# ---------------------------------------------------------------------------
# normalization


def _candidates(d):
    """Applicable ``(rule, params)`` in priority order."""
    codes, signs = _keyed(d)
    for c in d.components:
        try:
            pc = _meridian_of(codes, signs, c.id)
        except RuleError:
            continue
        f = c.framing
        parent = d.component(pc.comp)
        if parent.is_integral and (f == 0 or (1 / f).denominator == 1):
            yield "slam_dunk", {"mid": c.id}
    for c in d.components:
        if c.framing in (1, -1) and len(codes[c.id]) == 4:
            try:
                find_borromean(codes, signs, c.id)
            except RuleError:
                continue
            yield "borromean_twist", {"mid": c.id}
    yield "split_extract", {}
    for c in d.components:
        if c.framing in (1, -1):
            yield "blow_down", {"cid": c.id}
    if not d.is_integral:
        yield "clear_rational", {}


def normalize(d: FramedLinkDiagram, check_pi1: bool = False, max_steps: int = 10000):
    """Simplify with slam-dunks, Borromean twists, Reidemeister
    reductions and blow-downs, in that priority, until none applies.
    Leftover rational coefficients are then expanded into integer
    chains. Returns ``(diagram, MoveTrace)``."""
    trace = MoveTrace(initial=d.digest())
    for _ in range(max_steps):
        for rule, params in _candidates(d):
            try:
                d, step = apply_rule(d, rule, check_pi1=check_pi1, **params)
            except RuleError:
                continue
            trace.steps.append(step)
            break
        else:
            break
    else:
        raise RuntimeError("normalization did not terminate in %d steps" % max_steps)
    trace.final = d.digest()
    return d, trace
