"""Curvature analysis of planar curves: log-aesthetic curves, curvature
histograms and graphs, and similarity / affine / equiaffine self-affinity."""

__version__ = "0.1.0"

from .core import (AffineMap, AnalyticCurve, ArcLengthCurve, Curve, FrenetCurve,
                   INFINITE_RADIUS, SampledCurve, apply_affine, arc_length_reparam,
                   curvature, curvature_jet, curvature_radius, frenet_frame,
                   reconstruct_from_curvature, winding_injectivity_check)
from .equiaffine_esa import (ClassifyTols, EquiaffineCurve, EsaReport, classify_curve,
                             equiaffine_curvature, equiaffine_reparam, esa_witness,
                             reconstruct_equiaffine, spiral_witness, verify_esa)
from .hsa_affine import (HsaReport, bounding_parallelogram, parabola_arc_parallelogram,
                         parabola_subcurve_affine, verify_hsa)
from .lac_msa import (LacFit, LacParams, MsaReport, fit_lac, generate_lac, lac_radius,
                      msa_reparam, verify_msa)
from .lch_lcg import (LCGPlot, LCHistogram, compute_lcg, compute_lch, convergence_report,
                      lcg_gradient)
