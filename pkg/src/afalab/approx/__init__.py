"""Stage-wise approximations and the constructions that manipulate them."""

from afalab.approx.calculus import (
    Classification, classify, countdown, dual, f_from_v, mind_changes, reconstruct_from_countdown,
    v_from_f, v_membership, v_set,
)
from afalab.approx.constructions import (
    NO1COMPLETE_BELOW, NO_MCOMPLETE_ABOVE, NOCOLLAPSE, Defeat, OneCompleteBuild, check_defeats,
    diagonal_witness, one_complete_build,
)
from afalab.approx.functions import augmented, empty, iota, join
from afalab.approx.processes import StepProcess, load_registry, parse_registry
from afalab.approx.ranges import Sigma2Stream, limit_range, load_stream, parse_stream, range_encoder
from afalab.approx.trace import (
    ABOVE, BELOW, FREE, ApproximationTrace, dump_trace, format_trace, load_trace, parse_trace,
)

__all__ = [
    "ABOVE", "BELOW", "FREE", "NO1COMPLETE_BELOW", "NO_MCOMPLETE_ABOVE", "NOCOLLAPSE",
    "ApproximationTrace", "Classification", "Defeat", "OneCompleteBuild", "Sigma2Stream", "StepProcess",
    "augmented", "check_defeats", "classify", "countdown", "diagonal_witness", "dual", "dump_trace",
    "empty", "f_from_v", "format_trace", "iota", "join", "limit_range", "load_registry", "load_stream",
    "load_trace", "mind_changes", "one_complete_build", "parse_registry", "parse_stream", "parse_trace",
    "range_encoder", "reconstruct_from_countdown", "v_from_f", "v_membership", "v_set",
]
