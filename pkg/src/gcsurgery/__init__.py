"""Symbolic surgery calculus for torus surgeries on S^1 x (S^1 x Sigma_h).

Framed-link surgery diagrams, their homology and fundamental group, a
certified rewrite engine for Kirby/Rolfsen moves, torus surgery with a
ledger of generalized complex type-change loci, and a planner that
builds and checks the target 4-manifolds.
"""

from .calculus import apply_rule, normalize
from .diagram import CurveLabel, FramedLinkDiagram, build_s1_sigma
from .invariants import first_homology, recognize, wirtinger_presentation
from .planner import TargetSpec, execute, make_schedule, verify
from .smith import AbelianGroup, smith_normal_form
from .torus_surgery import ProductFourManifold, TorusSurgerySpec, apply_torus_surgery

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup", "CurveLabel", "FramedLinkDiagram", "ProductFourManifold",
    "TargetSpec", "TorusSurgerySpec", "apply_rule", "apply_torus_surgery",
    "build_s1_sigma", "execute", "first_homology", "make_schedule", "normalize",
    "recognize", "smith_normal_form", "verify", "wirtinger_presentation",
]
