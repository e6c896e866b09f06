"""LUT mapping with on-the-fly two-level (Ashenhurst-Curtis) decomposition of wide cuts."""
from .acd import (
    AcdResult,
    DecompositionError,
    DelayProfile,
    column_multiplicity,
    compose,
    compute_smallest_multiplicity,
    decompose,
    enumerate_bs_candidates,
    evaluate,
    solve_covering,
    verify_acd,
)
from .aig import Aig, AigerError, parse_aiger, read_aiger, topo_levels, write_aag
from .cuts import Cut, cut_function, enumerate_cuts
from .lutnet import LutNetwork, equiv_check, stats, write_blif
from .mapper import MappingState, cut_area_estimate, cut_delay, map_aig, realize
from .truthtable import TruthTable, tt_from_hex, tt_to_hex

__version__ = "0.1.0"
