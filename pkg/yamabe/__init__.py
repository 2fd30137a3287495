__version__ = "0.1.0"
__desc__ = "Combinatorial Yamabe flow on triangulated 3-manifolds with sphere packing metrics"
__author__ = "Serum Studio"
__license__ = "MIT"

from .complex import Complex
from .complex import FacetList
from .complex import build_complex
from .complex import load_builtin
from .complex import parse_facet_list
from .complex import validate_closed
from .curvature import CurvatureField
from .curvature import curvature_field
from .curvature import laplacian
from .flow import FlowConfig
from .flow import run_flow
from .metric import MetricStructure
from .metric import TetBatch
from .print import print

__all__ = [
    "Complex",
    "FacetList",
    "build_complex",
    "load_builtin",
    "parse_facet_list",
    "validate_closed",
    "CurvatureField",
    "curvature_field",
    "laplacian",
    "FlowConfig",
    "run_flow",
    "MetricStructure",
    "TetBatch",
    "print",
]
