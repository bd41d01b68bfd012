"""Adjacency-only decoders for spoke graphs, audited against a restricted oracle."""

from afalab.decoders.directed import DirectedDecoder, decode_directed, directed_decoder
from afalab.decoders.oracle import OracleRefusal, SpokeOracle
from afalab.decoders.plans import Plan
from afalab.decoders.structure import (
    CenterCertificate, EndpointReport, certify_centers, find_hubs, walk_strand,
)
from afalab.decoders.undirected import (
    ElongatedDecoder, StandardDecoder, decode_elongated, decode_standard, elongated_decoder,
    locate_endpoints_elongated, locate_endpoints_standard, loop_index, standard_decoder,
)


def decoder_for(view, shape: str, duv: int | None = None, u_hint: int | None = None):
    """The decoder matching a build shape (singledegree graphs decode as standard)."""
    if shape in ("standard", "singledegree"):
        return standard_decoder(view)
    if shape == "elongated":
        return elongated_decoder(view, duv, u_hint)
    if shape == "directed":
        return directed_decoder(view)
    raise ValueError(f"unknown shape {shape!r}")


__all__ = [
    "CenterCertificate", "DirectedDecoder", "ElongatedDecoder", "EndpointReport", "OracleRefusal",
    "Plan", "SpokeOracle", "StandardDecoder", "certify_centers", "decode_directed",
    "decode_elongated", "decode_standard", "decoder_for", "directed_decoder", "elongated_decoder",
    "find_hubs", "locate_endpoints_elongated", "locate_endpoints_standard", "loop_index",
    "standard_decoder", "walk_strand",
]
