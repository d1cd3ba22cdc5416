"""Exact half-twists and ribbon structures for quantum groups.

The package builds finite-dimensional modules over Q(i)(v), realizes the
half-twist X = J T_w0 and everything derived from it (R-matrix, ribbon and
pivotal elements, Frobenius-Schur indicators) as exact matrices, evaluates
shaded tangle diagrams through a monoidal functor, and checks sl2 link
invariants against an independent Kauffman bracket.
"""

from .scalars import Scalar, q_power, v_power, qint, qfactorial
from .rootdata import RootDatum, build_root_datum, order2_characters, gaussian_characters
from .modules import Module, irrep, fundamental, tensor, dual, twist, trivial, decompose
from .halftwist import (
    RibbonChoice,
    braiding,
    classify_ribbons,
    fs_indicator,
    grouplike_g,
    half_twist,
    ribbon_scalar,
    verify_ribbon_axioms,
)
from .tangles import Diagram, Interval, Slice, braid_closure, evaluate, link_invariant, writhe
from .skein import PlanarDiagram, SkeinElement, kauffman_bracket, tl_compose
from .dsl import ParseError, parse_braid, parse_tangle

__version__ = "0.1.0"
