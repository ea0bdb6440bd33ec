"""Exact exterior calculus on Lie algebra coframes for generalized G2 and
SU(3)-structures: structure forms, intrinsic torsion, twisted differentials,
curvature, and the evolution to a flat SU(4)-metric."""

from .coeffs import Poly, RatFuncT
from .forms import Form, box_companion, contract, e, hodge_star, q_pair, q_volume, sigma, wedge
from .frames import Frame, d_twisted, differential, extend_interval, extend_product_circle, parse_structure_equations
from .grammar import parse_form
from .report import Check, VerificationReport
from .su3 import (G2StructureForm, SU3Structure, induce_hypersurface, is_class_W2plus, torsion_decompose,
                  validate_su3)
from .geng2 import build_structure_forms, check_strong, check_weak, solve_weak_H, strong_product_analysis
from .riemann import cartan_connection, curvature, ricci
from .evolution import evolved_family, integrate_rk4, verify_flat_lift
from .registry import list_examples, run_suite

__version__ = "0.1.0"
