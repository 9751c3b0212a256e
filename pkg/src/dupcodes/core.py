"""Words, channel parameters and the run-form decomposition.

A word is a plain tuple of small non-negative integers.  The run form of a
word that starts with a non-zero symbol is the tuple of segments
``(sigma, u)`` standing for ``sigma`` followed by ``u`` zeros.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Tuple, Union

Word = Tuple[int, ...]

INF = math.inf
MAX_Q = 1 << 16


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size budget."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed."""


@dataclass(frozen=True)
class ChannelParams:
    q: int
    ell: int
    r: Union[int, float]

    def __post_init__(self):
        if not isinstance(self.q, int) or not 2 <= self.q <= MAX_Q:
            raise ValueError(f"alphabet size must be an integer in [2, {MAX_Q}], got {self.q!r}")
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ValueError(f"duplication length must be a positive integer, got {self.ell!r}")
        if self.r != INF and (not isinstance(self.r, int) or self.r < 1):
            raise ValueError(f"repetition bound must be a positive integer or INF, got {self.r!r}")

    @property
    def bounded(self) -> bool:
        return self.r != INF

    def __str__(self):
        return f"q={self.q} ell={self.ell} r={format_r(self.r)}"


def parse_r(text: str) -> Union[int, float]:
    text = text.strip().lower()
    if text in ("inf", "infinity", "unbounded"):
        return INF
    return int(text)


def format_r(r) -> str:
    return "inf" if r == INF else str(r)


class Segment(NamedTuple):
    sigma: int
    u: int


RunForm = Tuple[Segment, ...]


def check_word(w: Sequence[int], q: int) -> Word:
    w = tuple(w)
    for s in w:
        if not 0 <= s < q:
            raise ValueError(f"symbol {s} outside alphabet of size {q}")
    return w


def split_runs(w: Sequence[int]) -> Tuple[int, RunForm]:
    """Return ``(lead, segments)`` where ``lead`` counts the leading zeros."""
    lead = 0
    n = len(w)
    while lead < n and w[lead] == 0:
        lead += 1
    segs = []
    k = lead
    while k < n:
        sigma = w[k]
        k += 1
        start = k
        while k < n and w[k] == 0:
            k += 1
        segs.append(Segment(sigma, k - start))
    return lead, tuple(segs)


def to_run_form(w: Sequence[int]) -> RunForm:
    if len(w) == 0:
        raise ValueError("empty word has no run form")
    if w[0] == 0:
        raise ValueError("run form needs a word starting with a non-zero symbol")
    return split_runs(w)[1]


def to_word(rf: Iterable[Tuple[int, int]]) -> Word:
    out = []
    for sigma, u in rf:
        out.append(sigma)
        out.extend([0] * u)
    return tuple(out)


def weight(w: Sequence[int]) -> int:
    return sum(1 for s in w if s)


@dataclass(frozen=True)
class SpaceSq:
    """Words of length 1..n whose first symbol is non-zero."""

    params: ChannelParams
    n: int

    def __contains__(self, w) -> bool:
        return membership_Sq(self, w)

    def __len__(self):
        q = self.params.q
        return sum((q - 1) * q ** (m - 1) for m in range(1, self.n + 1))

    def __iter__(self):
        return iter_space(self.params.q, self.n)


def membership_Sq(space: SpaceSq, w: Sequence[int]) -> bool:
    return 1 <= len(w) <= space.n and w[0] != 0


def iter_words(q: int, length: int):
    """All words of exactly ``length`` symbols in lexicographic order."""
    return itertools.product(range(q), repeat=length)


def iter_space(q: int, n: int, min_length: int = 1, leading_zero: bool = False):
    """Words in canonical order (length, then lexicographic).

    By default only words with a non-zero first symbol are produced, which is
    the space S_q(n).
    """
    for m in range(min_length, n + 1):
        if m == 0:
            yield ()
        elif leading_zero:
            yield from itertools.product(range(q), repeat=m)
        else:
            for first in range(1, q):
                for rest in itertools.product(range(q), repeat=m - 1):
                    yield (first,) + rest


def canonical_key(w: Sequence[int]):
    return (len(w), tuple(w))


def parse_word(text: str, q: int) -> Word:
    """Parse the text format: digit string for q <= 10, else space separated."""
    text = text.strip()
    if not text:
        return ()
    if q <= 10 and not any(c.isspace() for c in text):
        if not text.isdigit():
            raise ValueError(f"not a word: {text!r}")
        syms = [int(c) for c in text]
    else:
        syms = [int(tok) for tok in text.split()]
    return check_word(syms, q)


def format_word(w: Sequence[int], q: int) -> str:
    if q <= 10:
        return "".join(str(s) for s in w)
    return " ".join(str(s) for s in w)
