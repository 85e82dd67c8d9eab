"""Structural invariants, KMS states and factor types of finite k-graphs."""

from .classify import Dense, Discrete, TrivialGroup, TypeIFinite, TypeIII, TypeIInfinity, classify, connes_invariant
from .errors import KGraphError
from .generators import cycle, named_example, pullback, single_vertex
from .graph import FactorisationRules, KGraph, Path, Skeleton, compose, enumerate_paths, segment, validate
from .io import dump_kgraph, load_fixture, parse_kgraph
from .kms import core_trace, cylinder_measure, kms1_eval, toeplitz_eval, toeplitz_state
from .lattice import Lattice
from .periodicity import CharacterSpec, is_periodicity_pair, periodicity_group, theta
from .periods import c_map, class_action, period_group, positive_period, structure_flags, vertex_classes
from .spectral import adjacency, class_block, pf_eigenvector, power_product, rho_vector

__all__ = [
    "CharacterSpec", "Dense", "Discrete", "FactorisationRules", "KGraph", "KGraphError", "Lattice", "Path",
    "Skeleton", "TrivialGroup", "TypeIFinite", "TypeIII", "TypeIInfinity", "adjacency", "c_map",
    "class_action", "class_block", "classify", "compose", "connes_invariant", "core_trace",
    "cycle", "cylinder_measure", "dump_kgraph", "enumerate_paths", "is_periodicity_pair", "kms1_eval",
    "load_fixture", "named_example", "parse_kgraph", "period_group", "periodicity_group",
    "pf_eigenvector", "positive_period", "power_product", "pullback", "rho_vector", "segment",
    "single_vertex", "structure_flags", "theta", "toeplitz_eval", "toeplitz_state", "validate",
    "vertex_classes",
]
