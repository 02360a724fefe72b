"""Serially concatenated PPM codec: encoder, Poisson channel, iterative decoder."""

from relaylink.scppm.config import CodeData, ScppmConfig, load_code_data
from relaylink.scppm.encoder import encode, interleave_index, deinterleave_index
from relaylink.scppm.channel import poisson_channel, slot_log_likelihood_ratio
from relaylink.scppm.decoder import decode, kernel_backend

__all__ = [
    "ScppmConfig",
    "CodeData",
    "load_code_data",
    "encode",
    "interleave_index",
    "deinterleave_index",
    "poisson_channel",
    "slot_log_likelihood_ratio",
    "decode",
    "kernel_backend",
]
