"""
loewnerlab: numerical Loewner chains and the geometry of their hulls.

This package provides forward and inverse (zipper) Loewner solvers, Whitney
decompositions and capacity estimates, hyperbolic and internal metric checks,
discrete extremal length, and a scenario harness relating the regularity of
driving functions to the geometry of the generated domains.
"""

# Version
__version__ = "0.1.0"

# Import main classes for easier access
from .core_model import CapacityGrid, Driving, DomainSpec, HullCurve, MapChain
from .forward_solver import ForwardSolver, LoewnerEvolution
from .inverse_solver import ZipperResult, ZipperSolver
from .whitney import WhitneyComplex, WhitneyGeometry
from .metric_analysis import MetricAnalysis
from .modulus import ModulusEstimator, ModulusProblem
from .harness import Report, Scenario, TheoremHarness
from .visualization import LoewnerVisualization
