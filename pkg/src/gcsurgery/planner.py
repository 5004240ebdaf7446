"""
Planning, executing and checking torus-surgery constructions of

    S^1 x ( S^3 # a(S^1 x Sigma_g) # b(S^1 x S^2) # L(p_1,1) # ... # L(p_c,1) )

carrying a generalized complex structure with n type-change loci.

Start from S^1 x (S^1 x Sigma_h) with h = a*g + b + c + n. Surgeries with
r = 1 kill pairs of loops while staying symplectic; after the perturbation
marker n surgeries with r = 0 each add one type-change locus. Lens
summands come from (0, p, 1) surgeries on loops that would otherwise
stay free.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .calculus import normalize, surgery_homology
from .diagram import CurveLabel, FramedLinkDiagram
from .invariants import CERTIFIED, recognize
from .smith import AbelianGroup, normalize_torsion
from .torus_surgery import (
    ProductFourManifold,
    TorusSurgerySpec,
    apply_torus_surgery,
    check_parity,
    mark_perturbation,
)

VERIFIED = "verified"
ABELIAN_ONLY = "abelian-only"
FAILED = "failed"


@dataclass(frozen=True)
class TargetSpec:
    a: int = 0
    g: int = 0
    b: int = 0
    c: int = 0
    p: tuple = ()
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        if self.a not in (0, 1):
            raise ValueError("a must be 0 or 1")
        if min(self.g, self.b, self.c) < 0:
            raise ValueError("g, b, c must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if len(self.p) != self.c:
            raise ValueError("need exactly c = %d lens orders, got %d" % (self.c, len(self.p)))
        if any(x < 2 for x in self.p):
            raise ValueError("lens orders must be >= 2")

    @property
    def t(self) -> int:
        return self.b + self.c

    def expected_h1(self) -> AbelianGroup:
        """H_1 of the whole 4-manifold, circle factor included."""
        return AbelianGroup(1 + self.a * (2 * self.g + 1) + self.b, normalize_torsion(self.p))

    def expected_summands(self) -> list:
        keys = []
        if self.a:
            keys.append(("S1xSigma", self.g) if self.g else ("S1xS2",))
        keys += [("S1xS2",)] * self.b
        keys += [("Lens", p) for p in self.p]
        return sorted(keys)

    def to_dict(self) -> dict:
        return {"a": self.a, "g": self.g, "b": self.b, "c": self.c, "p": list(self.p),
                "n": self.n}

    @classmethod
    def from_dict(cls, data) -> "TargetSpec":
        return cls(int(data.get("a", 0)), int(data.get("g", 0)), int(data.get("b", 0)),
                   int(data.get("c", 0)), tuple(data.get("p", ())), int(data["n"]))

    def __str__(self):
        return "a=%d g=%d b=%d c=%d p=%s n=%d" % (self.a, self.g, self.b, self.c,
                                                  list(self.p), self.n)


def genus_formula(t: TargetSpec) -> int:
    return t.a * t.g + t.b + t.c + t.n


@dataclass(frozen=True)
class SurgerySchedule:
    h: int
    specs: tuple
    marker: int

    def __post_init__(self):
        pre, post = self.specs[:self.marker], self.specs[self.marker:]
        if any(s.r == 0 for s in pre) or any(s.r != 0 for s in post):
            raise ValueError("r != 0 surgeries must precede the marker and r = 0 follow it")
        curves = [s.curve for s in self.specs]
        if len(set(curves)) != len(curves):
            raise ValueError("schedule names a curve twice")
        for s in self.specs:
            s.curve.check_genus(self.h)

    def phases(self) -> list:
        return ["symplectic" if i < self.marker else "type-change"
                for i in range(len(self.specs))]

    def to_dict(self) -> dict:
        return {"format_version": "1", "h": self.h, "marker": self.marker,
                "specs": [dict(s.to_dict(), phase=ph)
                          for s, ph in zip(self.specs, self.phases())]}

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data) -> "SurgerySchedule":
        specs = tuple(TorusSurgerySpec.from_dict(s) for s in data["specs"])
        return cls(int(data["h"]), specs, int(data["marker"]))

    @classmethod
    def from_json(cls, text: str) -> "SurgerySchedule":
        return cls.from_dict(json.loads(text))


def make_schedule(t: TargetSpec) -> SurgerySchedule:
    h = genus_formula(t)
    tp, o, n = t.t, t.a * t.g, t.n

    def label(kind, i=None):
        return CurveLabel(kind, i)

    a_one = [TorusSurgerySpec(label("a", o + i), 1, 0, 1) for i in range(1, tp + 1)]
    a_zero = [TorusSurgerySpec(label("a", o + tp + i), 1, 0, 0) for i in range(1, n + 1)]
    if t.a == 0:
        if tp >= 1:
            killed = [label("b", j) for j in range(tp, tp + n + 1)]
            free = [label("b", j) for j in range(1, tp)] + [label("y")]
        else:
            killed = [label("y")] + [label("b", j) for j in range(1, n + 1)]
            free = []
    else:
        killed = [label("b", o + tp + j) for j in range(1, n + 1)]
        free = [label("b", o + j) for j in range(1, tp + 1)]
    b_one = [TorusSurgerySpec(c, 0, 1, 1) for c in killed]
    # lens conversions take b-loops first; y only when a = 0 leaves no other loop
    lens = [TorusSurgerySpec(c, 0, p, 1) for c, p in zip(free[len(free) - t.c:], t.p)] if t.c else []
    pre = a_one + b_one + lens
    return SurgerySchedule(h, tuple(pre + a_zero), len(pre))


def execute(s: SurgerySchedule, convention: str = "figure") -> ProductFourManifold:
    m = ProductFourManifold.s1_sigma(s.h)
    for i, spec in enumerate(s.specs):
        if i == s.marker:
            m = mark_perturbation(m)
        m = apply_torus_surgery(m, spec, convention)
    return mark_perturbation(m)


@dataclass
class Certificate:
    target: TargetSpec
    schedule: SurgerySchedule | None
    final_diagram: FramedLinkDiagram | None
    recognition: dict
    h1_expected: AbelianGroup
    h1_computed: AbelianGroup
    loci_expected: int
    loci_computed: int
    parity_ok: bool
    summands_expected: list
    summands_computed: list
    trace: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    verdict: str = FAILED

    @property
    def h1_ok(self) -> bool:
        return self.h1_expected == self.h1_computed

    def to_dict(self) -> dict:
        return {
            "format_version": "1",
            "target": self.target.to_dict(),
            "schedule": self.schedule.to_dict() if self.schedule else None,
            "final_diagram": self.final_diagram.to_dict() if self.final_diagram else None,
            "recognition": self.recognition,
            "h1": {"expected": self.h1_expected.to_dict(), "computed": self.h1_computed.to_dict(),
                   "match": self.h1_ok},
            "loci": {"expected": self.loci_expected, "computed": self.loci_computed,
                     "match": self.loci_expected == self.loci_computed},
            "parity_ok": self.parity_ok,
            "summands": {"expected": [list(k) for k in self.summands_expected],
                         "computed": [list(k) for k in self.summands_computed]},
            "trace": self.trace,
            "notes": self.notes,
            "verdict": self.verdict,
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def verify(m: ProductFourManifold, t: TargetSpec, schedule: SurgerySchedule | None = None,
           check_pi1: bool = False) -> Certificate:
    expected = t.expected_h1()
    h1_m = surgery_homology(m.three_manifold)
    computed = AbelianGroup(h1_m.rank + 1, h1_m.torsion)
    notes = []
    try:
        final, trace = normalize(m.three_manifold, check_pi1=check_pi1)
        rec = recognize(final)
        rec_dict, keys, conf = rec.to_dict(), rec.keys(), rec.confidence
        steps = [st.to_dict() for st in trace.steps]
        notes += list(rec.notes)
    except Exception as exc:  # a failed normalization is a failed certificate
        final, rec_dict, keys, conf, steps = None, {"error": str(exc)}, [], None, []
        notes.append("normalization failed: %s" % exc)
    cert = Certificate(t, schedule, final, rec_dict, expected, computed,
                       t.n, len(m.ledger.loci), check_parity(m.ledger),
                       t.expected_summands(), keys, steps, notes)
    if not (cert.h1_ok and cert.loci_expected == cert.loci_computed and cert.parity_ok):
        cert.verdict = FAILED
    elif conf == CERTIFIED and keys == cert.summands_expected:
        cert.verdict = VERIFIED
    elif final is not None and not any(k[0] != "Unknown" and k not in cert.summands_expected
                                       for k in keys):
        # H_1 agrees and nothing contradicts the target; pi_1 not certified
        cert.verdict = ABELIAN_ONLY
    else:
        cert.verdict = FAILED
    return cert


def plan_run_verify(t: TargetSpec, convention: str = "figure") -> Certificate:
    s = make_schedule(t)
    return verify(execute(s, convention), t, s)


def target_grid():
    """The small-parameter grid: a in {0,1}, g <= 3 (only with a = 1),
    b, c <= 2, lens orders in 2..5 (as multisets), 1 <= n <= 4."""
    from itertools import combinations_with_replacement
    for a in (0, 1):
        for g in (range(4) if a else (0,)):
            for b in range(3):
                for c in range(3):
                    for ps in combinations_with_replacement(range(2, 6), c):
                        for n in range(1, 5):
                            yield TargetSpec(a, g, b, c, ps, n)
