"""Zero-error decoder for block-concatenation codes.

Every run of zeros in the received word is cut back, in steps of ``ell``
zeros, to the longest admissible block run that does not exceed it.  The
map is total on words starting with a non-zero symbol and fixes codewords.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

from .core import ChannelParams, Word, split_runs, to_run_form


class RunDecode(NamedTuple):
    i: int
    j: int
    run: int


@lru_cache(maxsize=65536)
def decode_run(params: ChannelParams, u: int) -> RunDecode:
    if u < 0:
        raise ValueError("run length must be non-negative")
    ell = params.ell
    i = (u % ell) + 1
    if not params.bounded:
        return RunDecode(i, 0, i - 1)
    # largest j with L(i, j) <= u + 1, by the integer recurrence
    step = params.r * ell + 1
    L, j = i, 0
    while L * step + ell <= u + 1:
        L = L * step + ell
        j += 1
    return RunDecode(i, j, L - 1)


def decode(params: ChannelParams, z: Sequence[int]) -> Word:
    out = []
    for sigma, u in to_run_form(z):
        out.append(sigma)
        out.extend([0] * decode_run(params, u).run)
    return tuple(out)


def decode_prime(params: ChannelParams, z: Sequence[int]) -> Word:
    """Decoder for the prefixed code: keep the first ``ell`` symbols as they
    are, then decode the zero run that follows and the remaining blocks."""
    ell = params.ell
    if len(z) < ell:
        raise ValueError(f"received word shorter than the prefix length {ell}")
    out = list(z[:ell])
    lead, segs = split_runs(z[ell:])
    out.extend([0] * decode_run(params, lead).run)
    for sigma, u in segs:
        out.append(sigma)
        out.extend([0] * decode_run(params, u).run)
    return tuple(out)
