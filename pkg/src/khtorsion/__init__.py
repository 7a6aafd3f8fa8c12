"""Integral Khovanov homology of link diagrams and explicit order-two torsion classes."""

from .builtins import BUILTIN_NAMES, builtin
from .complex import (BoundaryMatrix, ChainVector, EnhancedState, ViroComplex,
                      boundary_matrix, differential, enumerate_basis, incidence)
from .diagram import (ChordDiagram, CircleSet, DiagramError, KauffmanState, LinkDiagram,
                      a_smoothing_chord_diagram, braid_closure, insert_pattern, parse_pd,
                      pretzel_diagram, smooth)
from .homology import (GradingMap, HomologyGroup, HomologyTable, graded_euler_characteristic,
                       homology_group, homology_table, image_membership)
from .pattern import PatternMatch, find_patterns, is_bipartite_without_monochords, path_parities
from .snf import SmithForm, smith_normal_form
from .torsion import (TorsionCertificate, build_V, build_Vprime, build_X, certify_torsion,
                      exactness_witness_g1, projection_functional_check,
                      verify_boundary_identity)

__version__ = "0.1.0"
