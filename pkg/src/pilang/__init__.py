"""Toolkit for the Pi reversible language over finite types."""

from .errors import PiError
from .normalize import canonical_type, iso_witness, normalizer, size
from .permutation import compile, gate_library, papply, to_dense
from .semantics import enumerate_values, evaluate, evaluate_rev, obs_equiv, rank, trace, unrank
from .syntax import adjoint, check, comb_equal, infer, parse_comb, parse_type, parse_value

__all__ = [
    "PiError",
    "adjoint",
    "canonical_type",
    "check",
    "comb_equal",
    "compile",
    "enumerate_values",
    "evaluate",
    "evaluate_rev",
    "gate_library",
    "infer",
    "iso_witness",
    "normalizer",
    "obs_equiv",
    "papply",
    "parse_comb",
    "parse_type",
    "parse_value",
    "rank",
    "size",
    "to_dense",
    "trace",
    "unrank",
]
