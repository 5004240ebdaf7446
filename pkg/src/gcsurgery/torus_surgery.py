"""
Torus surgeries on S^1 x M^3 and the generalized complex bookkeeping.

A (p, q, r)-torus surgery on a torus carrying the loop ``curve`` acts on
the 3-manifold factor as a Dehn surgery on that loop; in the surgery
diagram this means clasping a new meridian around the loop's component.
Which coefficient the meridian gets is set by a *convention*:

``"figure"``
    (+-1, 0, r) on an a-loop attaches a 0-framed meridian whatever r is,
    the way the handle pictures are drawn. Everything else uses ``slope``.
``"slope"``
    The meridian gets r / l, where l is the coefficient of the loop's own
    generator (p for a-loops, q for y and b-loops). ``l = 0`` leaves the
    diagram alone.

The ledger records one type-change locus per r = 0 surgery; those are
only admissible after the symplectic form has been perturbed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

from .diagram import CurveLabel, FramedLinkDiagram, add_meridian, build_s1_sigma

XY_TORUS = "xy-torus"
Y_CURVE_TORUS = "y-curve-torus"
NULLHOMOLOGOUS = "nullhomologous"
BLOWN_UP = "blown-up-nontrivial"
CONVENTIONS = ("figure", "slope")


class PhaseError(ValueError):
    """An r = 0 surgery was attempted before the perturbation marker."""


class LedgerError(ValueError):
    pass


@dataclass(frozen=True)
class TorusSurgerySpec:
    curve: CurveLabel
    p: int
    q: int
    r: int
    torus_kind: str = XY_TORUS

    def __post_init__(self):
        if isinstance(self.curve, str):
            object.__setattr__(self, "curve", CurveLabel.parse(self.curve))
        if self.curve.kind == "x":
            raise ValueError("the circle factor x is never a surgery curve")
        if self.p == 0 and self.q == 0:
            raise ValueError("(p, q) must not be (0, 0)")
        if gcd(gcd(self.p, self.q), self.r) != 1:
            raise ValueError("p, q, r must be coprime: the glued class is primitive")
        if self.torus_kind not in (XY_TORUS, Y_CURVE_TORUS):
            raise ValueError("unknown torus kind %r" % self.torus_kind)

    @property
    def loop_coefficient(self) -> int:
        """Coefficient of the curve's own generator."""
        return self.p if self.curve.kind == "a" else self.q

    def meridian_coefficient(self, convention: str = "figure"):
        """Framing of the meridian added to the diagram, or None when the
        surgery leaves the 3-manifold unchanged."""
        if convention not in CONVENTIONS:
            raise ValueError("unknown convention %r" % convention)
        if convention == "figure" and self.curve.kind == "a" and abs(self.p) == 1 and self.q == 0:
            return Fraction(0)
        ell = self.loop_coefficient
        if ell == 0:
            if self.r == 0:
                raise ValueError("surgery with zero loop coefficient and r = 0 is undefined")
            return None
        return Fraction(self.r, ell)

    def to_dict(self) -> dict:
        return {"curve": str(self.curve), "p": self.p, "q": self.q, "r": self.r,
                "torus_kind": self.torus_kind}

    @classmethod
    def from_dict(cls, data) -> "TorusSurgerySpec":
        return cls(CurveLabel.parse(data["curve"]), int(data["p"]), int(data["q"]),
                   int(data["r"]), data.get("torus_kind", XY_TORUS))


@dataclass(frozen=True)
class LocusRecord:
    id: int
    source: int  # index of the surgery in the history
    flag: str = NULLHOMOLOGOUS
    self_intersection: int = 0
    jump: tuple = (0, 2)

    def __post_init__(self):
        if self.flag == NULLHOMOLOGOUS and self.self_intersection != 0:
            raise LedgerError("a nullhomologous locus has self-intersection 0")
        if self.flag == BLOWN_UP and self.self_intersection != -1:
            raise LedgerError("a blown-up locus has self-intersection -1")
        if self.flag not in (NULLHOMOLOGOUS, BLOWN_UP):
            raise LedgerError("unknown homology flag %r" % self.flag)

    def to_dict(self) -> dict:
        return {"id": self.id, "source": self.source, "class": self.flag,
                "self_intersection": self.self_intersection, "jump": list(self.jump)}


@dataclass(frozen=True)
class GCSLedger:
    loci: tuple = ()
    history: tuple = ()  # (spec dict, phase) pairs
    marker: int | None = None  # history length when the form was perturbed

    @property
    def phases(self) -> list:
        return [phase for _, phase in self.history]

    @property
    def r0_count(self) -> int:
        return sum(1 for spec, _ in self.history if spec["r"] == 0)

    def to_dict(self) -> dict:
        return {
            "loci": [l.to_dict() for l in self.loci],
            "history": [dict(spec, phase=phase) for spec, phase in self.history],
            "phases": self.phases,
            "marker": self.marker,
        }

    @classmethod
    def from_dict(cls, data) -> "GCSLedger":
        loci = tuple(LocusRecord(l["id"], l["source"], l["class"], l["self_intersection"],
                                 tuple(l["jump"])) for l in data.get("loci", []))
        hist = tuple(({k: v for k, v in h.items() if k != "phase"}, h["phase"])
                     for h in data.get("history", []))
        return cls(loci, hist, data.get("marker"))


def check_parity(ledger: GCSLedger) -> bool:
    """Type changes keep their parity: every jump is between values of equal parity."""
    return all((a - b) % 2 == 0 for a, b in (l.jump for l in ledger.loci))


@dataclass(frozen=True)
class CharNumbers:
    euler: int = 0
    signature: int = 0

    def almost_complex_parity(self) -> bool:
        return (self.euler + self.signature) % 2 == 0

    def to_dict(self) -> dict:
        return {"euler": self.euler, "signature": self.signature}


CP2 = CharNumbers(3, 1)
CP2_BAR = CharNumbers(3, -1)


def elliptic_surface(n: int) -> CharNumbers:
    return CharNumbers(12 * n, -8 * n)


def char_fiber_sum(a: CharNumbers, b: CharNumbers, fiber_euler: int = 0) -> CharNumbers:
    return CharNumbers(a.euler + b.euler - 2 * fiber_euler, a.signature + b.signature)


def char_connected_sum(a: CharNumbers, b: CharNumbers) -> CharNumbers:
    return CharNumbers(a.euler + b.euler - 2, a.signature + b.signature)


def en_decomposition_check(n: int) -> bool:
    """E(n) against (2n-1) CP^2 # (10n-1) CP^2-bar, at the level of (chi, sigma)."""
    if n < 1:
        raise ValueError("n must be positive")
    parts = [CP2] * (2 * n - 1) + [CP2_BAR] * (10 * n - 1)
    total = parts[0]
    for piece in parts[1:]:
        total = char_connected_sum(total, piece)
    return total == elliptic_surface(n)


@dataclass(frozen=True)
class ProductFourManifold:
    three_manifold: FramedLinkDiagram
    ledger: GCSLedger = field(default_factory=GCSLedger)
    char: CharNumbers = field(default_factory=CharNumbers)
    circle: str = "x"
    genus: int | None = None

    @classmethod
    def s1_sigma(cls, h: int) -> "ProductFourManifold":
        """S^1 x (S^1 x Sigma_h), i.e. T^2 x Sigma_h."""
        return cls(build_s1_sigma(h), genus=h)

    def to_dict(self) -> dict:
        return {
            "format_version": "1",
            "circle": self.circle,
            "genus": self.genus,
            "three_manifold": self.three_manifold.to_dict(),
            "ledger": self.ledger.to_dict(),
            "char": self.char.to_dict(),
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data) -> "ProductFourManifold":
        return cls(FramedLinkDiagram.from_dict(data["three_manifold"]),
                   GCSLedger.from_dict(data["ledger"]),
                   CharNumbers(**data["char"]), data.get("circle", "x"), data.get("genus"))

    @classmethod
    def from_json(cls, text: str) -> "ProductFourManifold":
        return cls.from_dict(json.loads(text))


def mark_perturbation(m: ProductFourManifold) -> ProductFourManifold:
    """Perturb the symplectic form so the unused tori become symplectic.
    Idempotent; r = 0 surgeries are admissible afterwards."""
    if m.ledger.marker is not None:
        return m
    if m.ledger.r0_count:
        raise PhaseError("an r = 0 surgery already happened before the perturbation")
    return replace(m, ledger=replace(m.ledger, marker=len(m.ledger.history)))


def apply_torus_surgery(m: ProductFourManifold, s: TorusSurgerySpec,
                        convention: str = "figure") -> ProductFourManifold:
    if m.genus is not None:
        s.curve.check_genus(m.genus)
    cid = m.three_manifold.find_label(str(s.curve))
    ledger = m.ledger
    if s.r == 0 and ledger.marker is None:
        raise PhaseError("phase violation: r = 0 surgery on %s before the perturbation marker"
                         % s.curve)
    coeff = s.meridian_coefficient(convention)
    d = m.three_manifold
    if coeff is not None:
        d = add_meridian(d, cid, coeff, "m_%s#%d" % (s.curve, len(ledger.history)))
    index = len(ledger.history)
    if s.r == 0:
        phase = "type-change"
    elif ledger.marker is None:
        phase = "symplectic"
    else:
        phase = "perturbed"
    history = ledger.history + ((s.to_dict(), phase),)
    loci = ledger.loci
    if s.r == 0:
        loci = loci + (LocusRecord(len(loci) + 1, index),)
    return replace(m, three_manifold=d, ledger=replace(ledger, loci=loci, history=history))


def blow_up_locus(m: ProductFourManifold, locus_id: int) -> ProductFourManifold:
    """Blow up a point on a type-change locus: the locus becomes homologically
    nontrivial with self-intersection -1; chi and sigma change by (+1, -1)."""
    loci = list(m.ledger.loci)
    for i, l in enumerate(loci):
        if l.id == locus_id:
            if l.flag != NULLHOMOLOGOUS:
                raise LedgerError("locus %d is already blown up" % locus_id)
            loci[i] = replace(l, flag=BLOWN_UP, self_intersection=-1)
            char = CharNumbers(m.char.euler + 1, m.char.signature - 1)
            return replace(m, ledger=replace(m.ledger, loci=tuple(loci)), char=char)
    raise LedgerError("unknown locus %r" % (locus_id,))


def ledger_report(m: ProductFourManifold) -> dict:
    return {
        "loci": [{"id": l.id, "class": l.flag, "self_intersection": l.self_intersection,
                  "jump": list(l.jump)} for l in m.ledger.loci],
        "phases": m.ledger.phases,
        "marker": m.ledger.marker,
        "parity_ok": check_parity(m.ledger),
        "char": m.char.to_dict(),
    }
