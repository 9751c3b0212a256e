"""Simulation of the duplication and 0-insertion channels.

Two ways of computing the exact output set of an input word are provided:

* ``generic``: a left-to-right sweep over input positions that keeps the set
  of distinct output prefixes.  It only knows how a single position expands
  and works for both channel models.  It serves as the reference.
* ``runs``: interval arithmetic on the run form.  Under zero insertion a run
  of ``u`` zeros that follows ``e`` insertion-eligible positions can grow to
  any length ``u + k*ell`` with ``0 <= k <= e*r``, independently of the other
  runs.  The duplication model is handled through ``phi`` with the first
  ``ell - 1`` positions frozen.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import FrozenSet, Iterator, Optional, Sequence

from .core import INF, BudgetExceeded, ChannelParams, Word, split_runs
from .transform import phi, phi_inverse

ZERO_INSERTION = "zero-insertion"
DUPLICATION = "duplication"
MODELS = (ZERO_INSERTION, DUPLICATION)

MAX_LENGTH_SPREAD = 64
MAX_OUTPUTS = 10**7


def _check_model(model):
    if model not in MODELS:
        raise ValueError(f"unknown channel model {model!r}; expected one of {MODELS}")


def _check_pattern(params: ChannelParams, n: int, pattern: Sequence[int], cap=None):
    if len(pattern) != n:
        raise ValueError(f"pattern has {len(pattern)} counts for a word of length {n}")
    bound = params.r if params.bounded else cap
    for c in pattern:
        if c < 0 or (bound is not None and c > bound):
            raise ValueError(f"insertion count {c} outside [0, {bound}]")


def apply_zero_insertion(params: ChannelParams, x: Sequence[int], pattern: Sequence[int],
                         cap: Optional[int] = None) -> Word:
    """Insert ``pattern[i]`` blocks of ``ell`` zeros right after ``x[i]``."""
    _check_pattern(params, len(x), pattern, cap)
    out = []
    for s, c in zip(x, pattern):
        out.append(s)
        out.extend([0] * (c * params.ell))
    return tuple(out)


def apply_duplication(params: ChannelParams, xt: Sequence[int], pattern: Sequence[int],
                      cap: Optional[int] = None) -> Word:
    """Insert ``pattern[i]`` copies of ``xt[i-ell+1 .. i]`` right after ``xt[i]``.

    Copies always refer to the input word, never to previously inserted
    material.  Positions before ``ell`` (1-based) cannot be duplicated.
    """
    _check_pattern(params, len(xt), pattern, cap)
    ell = params.ell
    out = []
    for k, (s, c) in enumerate(zip(xt, pattern)):
        out.append(s)
        if c:
            if k + 1 < ell:
                raise ValueError(f"position {k + 1} is shorter than the duplication length {ell}")
            out.extend(tuple(xt[k - ell + 1:k + 1]) * c)
    return tuple(out)


def _insertion_bound(params: ChannelParams, cap: Optional[int]) -> int:
    if params.bounded:
        return params.r
    if cap is None:
        raise ValueError("unbounded r needs an explicit cap on insertions per position")
    return cap


def sample_pattern(params: ChannelParams, n: int, rng: random.Random,
                   probs: Optional[Sequence[float]] = None, cap: Optional[int] = None,
                   first_free: int = 0) -> list:
    """Independent counts on ``{0..r}``; positions below ``first_free`` get 0."""
    r = _insertion_bound(params, cap)
    values = range(r + 1)
    if probs is not None:
        if len(probs) != r + 1 or any(p <= 0 for p in probs):
            raise ValueError("probs must be a strictly positive vector of length r + 1")
        counts = rng.choices(values, weights=probs, k=n)
    else:
        counts = [rng.randint(0, r) for _ in range(n)]
    for k in range(min(first_free, n)):
        counts[k] = 0
    return counts


def sample_output(params: ChannelParams, x: Sequence[int], model: str = ZERO_INSERTION,
                  seed=None, rng: Optional[random.Random] = None,
                  probs: Optional[Sequence[float]] = None, cap: Optional[int] = None) -> Word:
    _check_model(model)
    if rng is None:
        rng = random.Random(seed)
    if model == ZERO_INSERTION:
        pattern = sample_pattern(params, len(x), rng, probs, cap)
        return apply_zero_insertion(params, x, pattern, cap)
    pattern = sample_pattern(params, len(x), rng, probs, cap, first_free=params.ell - 1)
    return apply_duplication(params, x, pattern, cap)


@dataclass(frozen=True)
class OutputSet:
    words: FrozenSet[Word]
    source: Word
    params: ChannelParams
    model: str

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return tuple(w) in self.words

    def __iter__(self) -> Iterator[Word]:
        return iter(sorted(self.words, key=lambda w: (len(w), w)))


def _frozen_prefix(params: ChannelParams, model: str) -> int:
    return 0 if model == ZERO_INSERTION else params.ell - 1


def _run_reach(params: ChannelParams, x: Sequence[int], frozen: int):
    """Per-run ``(u, kmax)`` for a 0-insertion word; the run may become
    ``u + k*ell`` for ``0 <= k <= kmax``.  Positions ``< frozen`` get no
    insertions.  Returns ``(nonzero symbols, runs)`` with the leading zero run
    first (possibly empty)."""
    r = params.r
    lead, segs = split_runs(x)
    eligible = max(0, lead - frozen)
    runs = [(lead, eligible * r)]
    symbols = []
    pos = lead
    for sigma, u in segs:
        symbols.append(sigma)
        eligible = (pos + u + 1) - max(pos, frozen)
        runs.append((u, max(0, eligible) * r))
        pos += u + 1
    return tuple(symbols), runs


def segment_outputs(params: ChannelParams, u: int) -> range:
    """Run lengths that a block ``sigma 0^u`` can turn into."""
    if not params.bounded:
        raise ValueError("segment fan-out is infinite for unbounded r")
    ell = params.ell
    return range(u, u + (u + 1) * params.r * ell + 1, ell)


def _check_budget(params, n, max_spread):
    if not params.bounded:
        raise ValueError("output sets are infinite for unbounded r")
    spread = n * params.r * params.ell
    if spread > max_spread:
        raise BudgetExceeded(f"output lengths span {spread} > {max_spread} symbols")


def _outputs_runs(params, x, model, max_outputs):
    frozen = _frozen_prefix(params, model)
    z = phi(params, x) if model == DUPLICATION else tuple(x)
    symbols, runs = _run_reach(params, z, frozen)
    size = 1
    for _, kmax in runs:
        size *= kmax + 1
    if size > max_outputs:
        raise BudgetExceeded(f"output set has {size} > {max_outputs} members")
    ell = params.ell
    choices = [range(u, u + kmax * ell + 1, ell) for u, kmax in runs]
    out = set()
    for lens in itertools.product(*choices):
        w = [0] * lens[0]
        for sigma, v in zip(symbols, lens[1:]):
            w.append(sigma)
            w.extend([0] * v)
        w = tuple(w)
        out.add(phi_inverse(params, w) if model == DUPLICATION else w)
    return out


def _expansions(params, x, model):
    r, ell = params.r, params.ell
    for k, s in enumerate(x):
        if model == ZERO_INSERTION:
            yield [(s,) + (0,) * (c * ell) for c in range(r + 1)]
        elif k + 1 < ell:
            yield [(s,)]
        else:
            unit = tuple(x[k - ell + 1:k + 1])
            yield [(s,) + unit * c for c in range(r + 1)]


def _outputs_generic(params, x, model, max_outputs):
    prefixes = {()}
    for options in _expansions(params, x, model):
        prefixes = {p + opt for p in prefixes for opt in options}
        if len(prefixes) > max_outputs:
            raise BudgetExceeded(f"output set exceeds {max_outputs} members")
    return prefixes


def output_set(params: ChannelParams, x: Sequence[int], model: str = ZERO_INSERTION,
               backend: str = "auto", max_spread: int = MAX_LENGTH_SPREAD,
               max_outputs: int = MAX_OUTPUTS) -> OutputSet:
    _check_model(model)
    x = tuple(x)
    _check_budget(params, len(x), max_spread)
    if backend == "auto":
        backend = "runs"
    if backend == "runs":
        words = _outputs_runs(params, x, model, max_outputs)
    elif backend == "generic":
        words = _outputs_generic(params, x, model, max_outputs)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return OutputSet(frozenset(words), x, params, model)


def _runs_compatible(a, b, ell) -> bool:
    (u, ku), (v, kv) = a, b
    if (u - v) % ell:
        return False
    return max(u, v) <= min(u + ku * ell, v + kv * ell)


def reach_profile(params: ChannelParams, x: Sequence[int], model: str = ZERO_INSERTION):
    """``(non-zero symbols, [(u, kmax), ...])`` describing every output of ``x``.

    For the duplication model this describes the outputs of ``phi(x)``.
    """
    if model == DUPLICATION:
        x = phi(params, x)
    frozen = _frozen_prefix(params, model)
    if not params.bounded:
        # a run with one eligible position can outgrow any other run
        params = ChannelParams(params.q, params.ell, len(x) + 1)
    return _run_reach(params, x, frozen)


def profiles_confusable(a, b, ell: int) -> bool:
    if a[0] != b[0]:
        return False
    return all(_runs_compatible(s, t, ell) for s, t in zip(a[1], b[1]))


def confusable(params: ChannelParams, x: Sequence[int], y: Sequence[int],
               model: str = ZERO_INSERTION, backend: str = "auto") -> bool:
    """Whether ``x`` and ``y`` can produce a common channel output."""
    _check_model(model)
    x, y = tuple(x), tuple(y)
    if x == y:
        return True
    if backend == "generic":
        sx = output_set(params, x, model, backend="generic").words
        sy = output_set(params, y, model, backend="generic").words
        return not sx.isdisjoint(sy)
    if backend not in ("auto", "runs"):
        raise ValueError(f"unknown backend {backend!r}")
    big = max(len(x), len(y)) + 1
    p = params if params.bounded else ChannelParams(params.q, params.ell, big)
    return profiles_confusable(reach_profile(p, x, model), reach_profile(p, y, model), params.ell)


def invariant_key(params: ChannelParams, x: Sequence[int], model: str = ZERO_INSERTION):
    """A channel invariant: confusable words always share this key.

    Inserted zeros never touch the non-zero symbols and change every zero
    run by a multiple of ``ell``.
    """
    if model == DUPLICATION:
        x = phi(params, x)
    lead, segs = split_runs(x)
    ell = params.ell
    return (lead % ell,) + tuple((sigma, u % ell) for sigma, u in segs)


__all__ = [
    "ZERO_INSERTION", "DUPLICATION", "MODELS", "OutputSet", "apply_zero_insertion",
    "apply_duplication", "sample_pattern", "sample_output", "output_set", "segment_outputs",
    "confusable", "invariant_key", "reach_profile", "profiles_confusable", "INF",
]
