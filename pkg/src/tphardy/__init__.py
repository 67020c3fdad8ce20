"""Composition operators on Hardy-type spaces of a homogeneous rooted tree."""

from .functions import INF, TreeFunction, indicator, tp_norm
from .symbols import Symbol, builtin, classify, invert, preimage_histogram
from .tree import ROOT, enumerate_level, format_vertex, level_size, parse_vertex

__version__ = "0.1.0"
