"""Difference map between duplication-channel words and 0-insertion words.

``phi`` replaces every symbol by its difference (mod q) with the symbol
``ell`` places earlier; a tandem duplication of length ``ell`` then shows up
as an inserted block of ``ell`` zeros.
"""

from __future__ import annotations

from typing import Sequence

from .core import ChannelParams, Word, check_word


def phi(params: ChannelParams, xt: Sequence[int]) -> Word:
    q, ell = params.q, params.ell
    xt = check_word(xt, q)
    return tuple(
        (xt[k] - (xt[k - ell] if k >= ell else 0) + q) % q for k in range(len(xt))
    )


def phi_inverse(params: ChannelParams, x: Sequence[int]) -> Word:
    q, ell = params.q, params.ell
    x = check_word(x, q)
    out = []
    for k, s in enumerate(x):
        out.append((s + (out[k - ell] if k >= ell else 0)) % q)
    return tuple(out)
