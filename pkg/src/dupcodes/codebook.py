"""Optimal zero-error codes built from run-length blocks.

A block is a non-zero symbol followed by ``L - 1`` zeros, where the block
length ``L`` belongs to the family

    L(i, 0) = i,    L(i, j + 1) = L(i, j) * (r*ell + 1) + ell,    1 <= i <= ell,

equivalently ``L(i, j) = ((r*i + 1) * (r*ell + 1)**j - 1) / r``.  For
unbounded ``r`` the family collapses to ``L in {1, ..., ell}``.  Codewords
are concatenations of blocks of total length at most ``n``.

Codewords are ordered canonically by length and then lexicographically,
which is what ``rank``/``unrank`` index against.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence

from .core import (
    INF, BudgetExceeded, ChannelParams, Word, format_r, iter_space, split_runs,
)
from .channel import segment_outputs

ENUMERATE_BUDGET = 10**6


class BlockId(NamedTuple):
    sigma: int
    i: int
    j: int
    length: int

    def word(self) -> Word:
        return (self.sigma,) + (0,) * (self.length - 1)


def block_length(params: ChannelParams, i: int, j: int) -> int:
    if not 1 <= i <= params.ell:
        raise ValueError(f"residue index {i} outside 1..{params.ell}")
    if not params.bounded:
        if j != 0:
            raise ValueError("unbounded r only has level-0 blocks")
        return i
    L = i
    for _ in range(j):
        L = L * (params.r * params.ell + 1) + params.ell
    return L


def block_lengths(params: ChannelParams, n: int) -> List[tuple]:
    """``(L, i, j)`` for every admissible block length ``L <= n``, sorted."""
    out = []
    for i in range(1, params.ell + 1):
        if not params.bounded:
            if i <= n:
                out.append((i, i, 0))
            continue
        L, j = i, 0
        while L <= n:
            out.append((L, i, j))
            L = L * (params.r * params.ell + 1) + params.ell
            j += 1
    out.sort()
    return out


def blocks_up_to(params: ChannelParams, n: int) -> List[BlockId]:
    return [BlockId(sigma, i, j, L)
            for L, i, j in block_lengths(params, n)
            for sigma in range(1, params.q)]


def greedy_block_construction(params: ChannelParams, max_length: int) -> Dict[tuple, List[int]]:
    """Greedy selection of blocks, independently for every ``(sigma, i)``.

    Candidate blocks of a class are scanned by increasing length; the shortest
    one not yet covered is selected and every block it can turn into at the
    channel output is crossed out.  Returns selected block lengths per class.
    """
    if not params.bounded:
        raise ValueError("greedy construction needs a finite r")
    ell = params.ell
    selected = {}
    for sigma in range(1, params.q):
        for i in range(1, ell + 1):
            covered = set()
            picks = []
            for L in range(i, max_length + 1, ell):
                if L in covered:
                    continue
                picks.append(L)
                for v in segment_outputs(params, L - 1):
                    covered.add(v + 1)
            selected[(sigma, i)] = picks
    return selected


@dataclass(frozen=True)
class CountTable:
    """Codeword counts for lengths ``0..n``.

    ``totals[m]`` counts block concatenations of length ``<= m`` including the
    empty word, so ``|C(m)| = totals[m] - 1``.  ``by_weight[w][m]`` counts
    those made of exactly ``w`` blocks (only filled up to ``max_weight``).
    """

    params: ChannelParams
    n: int
    totals: List[int]
    by_weight: List[List[int]] = field(default_factory=list)

    def size(self, m: Optional[int] = None, w: Optional[int] = None) -> int:
        m = self.n if m is None else m
        if w is None:
            return self.totals[m] - 1
        if w == 0:
            return 0
        if w >= len(self.by_weight):
            raise ValueError(f"weight {w} not tabulated (max {len(self.by_weight) - 1})")
        return self.by_weight[w][m]


def count(params: ChannelParams, n: int, max_weight: Optional[int] = None) -> CountTable:
    if n < 0:
        raise ValueError("n must be non-negative")
    lengths = [L for L, _, _ in block_lengths(params, n)]
    mult = params.q - 1
    totals = [1] * (n + 1)
    for m in range(1, n + 1):
        s = 0
        for L in lengths:
            if L > m:
                break
            s += totals[m - L]
        totals[m] = 1 + mult * s
    by_weight = []
    if max_weight is not None:
        by_weight.append([1] * (n + 1))
        for _ in range(max_weight):
            prev = by_weight[-1]
            cur = [0] * (n + 1)
            for m in range(1, n + 1):
                s = 0
                for L in lengths:
                    if L > m:
                        break
                    s += prev[m - L]
                cur[m] = mult * s
            by_weight.append(cur)
    return CountTable(params, n, totals, by_weight)


class Codebook:
    """The code ``C(n)``, or its constant-weight subcode ``C(n; w)``."""

    def __init__(self, params: ChannelParams, n: int, weight: Optional[int] = None):
        if n < 0:
            raise ValueError("n must be non-negative")
        if weight is not None and weight < 0:
            raise ValueError("weight must be non-negative")
        self.params = params
        self.n = n
        self.weight = weight
        self.lengths = [L for L, _, _ in block_lengths(params, n)]
        self._desc = sorted(self.lengths, reverse=True)
        self._runs = frozenset(L - 1 for L in self.lengths)
        mult = params.q - 1
        if weight is None:
            exact = [0] * (n + 1)
            exact[0] = 1
            for m in range(1, n + 1):
                exact[m] = mult * sum(exact[m - L] for L in self.lengths if L <= m)
            self._exact = [exact]
        else:
            # _exact[k][m]: words of exactly k blocks and exactly length m
            rows = [[1] + [0] * n]
            for _ in range(weight):
                prev = rows[-1]
                cur = [0] * (n + 1)
                for m in range(1, n + 1):
                    cur[m] = mult * sum(prev[m - L] for L in self.lengths if L <= m)
                rows.append(cur)
            self._exact = rows
        self._steps = {}
        final = self._exact[-1]
        self._cum = [0] * (n + 1)
        acc = 0
        for m in range(1, n + 1):
            acc += final[m]
            self._cum[m] = acc

    def __repr__(self):
        w = "" if self.weight is None else f", weight={self.weight}"
        return f"Codebook({self.params}, n={self.n}{w})"

    def header(self) -> str:
        p = self.params
        h = f"# q={p.q} ell={p.ell} r={format_r(p.r)} n={self.n}"
        if self.weight is not None:
            h += f" w={self.weight}"
        return h

    @property
    def size(self) -> int:
        return self._cum[self.n]

    def __len__(self):
        return self.size

    def _count(self, length: int, blocks_left: Optional[int]) -> int:
        if self.weight is None:
            return self._exact[0][length]
        return self._exact[blocks_left][length]

    def __contains__(self, w) -> bool:
        return is_codeword(self, w)

    def _step(self, rem: int, left: Optional[int]):
        """Choices for the next block with ``rem`` symbols and ``left`` blocks to go.

        Returns ``(pieces, starts, offsets, next_left)``: the admissible next
        blocks as words in canonical order (smaller symbol first, then longer
        block first), the number of completions preceding each of them, the
        same offsets keyed by ``(symbol, block length)``, and the block budget
        after this block.
        """
        key = (rem, left)
        t = self._steps.get(key)
        if t is None:
            nxt = None if left is None else left - 1
            entries = []
            if left is None or left > 0:
                for B in self._desc:
                    if B <= rem:
                        c = self._count(rem - B, nxt)
                        if c:
                            entries.append((B, c))
            pieces, starts, offsets = [], [], {}
            acc = 0
            for sigma in range(1, self.params.q):
                for B, c in entries:
                    pieces.append(((sigma,) + (0,) * (B - 1), B))
                    starts.append(acc)
                    offsets[(sigma, B)] = acc
                    acc += c
            t = (pieces, starts, offsets, nxt)
            self._steps[key] = t
        return t

    def __iter__(self):
        for m in range(1, self.n + 1):
            if self._count(m, self.weight):
                yield from self._iter_from(m, self.weight, ())

    def _iter_from(self, rem, left, prefix):
        pieces, _, _, nxt = self._step(rem, left)
        for piece, B in pieces:
            if B == rem:
                yield prefix + piece
            else:
                yield from self._iter_from(rem - B, nxt, prefix + piece)

    def rank(self, w: Sequence[int]) -> int:
        m = len(w)
        if not 1 <= m <= self.n or w[0] == 0:
            raise ValueError("not a codeword of this codebook")
        k = self._cum[m - 1]
        rem = m
        left = self.weight
        steps = self._steps
        pos = 0
        while pos < m:
            end = pos + 1
            while end < m and w[end] == 0:
                end += 1
            t = steps.get((rem, left)) or self._step(rem, left)
            offset = t[2].get((w[pos], end - pos))
            if offset is None:
                raise ValueError("not a codeword of this codebook")
            k += offset
            left = t[3]
            rem -= end - pos
            pos = end
        return k

    def unrank(self, k: int) -> Word:
        if not 0 <= k < self.size:
            raise IndexError(f"index {k} outside [0, {self.size})")
        m = bisect.bisect_right(self._cum, k)
        k -= self._cum[m - 1]
        out = ()
        rem = m
        left = self.weight
        steps = self._steps
        while rem:
            pieces, starts, _, left = steps.get((rem, left)) or self._step(rem, left)
            idx = bisect.bisect_right(starts, k) - 1
            k -= starts[idx]
            piece, B = pieces[idx]
            out += piece
            rem -= B
        return out


def is_codeword(cb: Codebook, w: Sequence[int]) -> bool:
    if not 1 <= len(w) <= cb.n or w[0] == 0:
        return False
    segs = split_runs(w)[1]
    if cb.weight is not None and len(segs) != cb.weight:
        return False
    runs = cb._runs
    return all(u in runs for _, u in segs)


def enumerate_codewords(cb: Codebook, budget: int = ENUMERATE_BUDGET) -> List[Word]:
    if cb.size > budget:
        raise BudgetExceeded(f"codebook has {cb.size} > {budget} codewords")
    return list(cb)


def rank(cb: Codebook, w: Sequence[int]) -> int:
    return cb.rank(w)


def unrank(cb: Codebook, k: int) -> Word:
    return cb.unrank(k)


class CodePrime:
    """Code for the channel that never inserts after the first ``ell - 1``
    symbols and allows any first symbol.

    Members are an arbitrary prefix of ``ell`` symbols, then a zero run whose
    length is an admissible block run, then a block concatenation; total
    length at most ``n``.  Only defined for ``n >= ell``.
    """

    def __init__(self, params: ChannelParams, n: int):
        if n < params.ell:
            raise ValueError(f"C' is only defined for n >= ell ({n} < {params.ell})")
        self.params = params
        self.n = n
        self.lengths = [L for L, _, _ in block_lengths(params, n)]
        self._runs = frozenset(L - 1 for L in self.lengths)
        self._table = count(params, n)

    @property
    def size(self) -> int:
        ell = self.params.ell
        tail = self.n - ell
        total = sum(self._table.totals[tail - (L - 1)] for L in self.lengths if L - 1 <= tail)
        return self.params.q ** ell * total

    def __len__(self):
        return self.size

    def __contains__(self, w) -> bool:
        ell = self.params.ell
        if not ell <= len(w) <= self.n:
            return False
        lead, segs = split_runs(w[ell:])
        return lead in self._runs and all(u in self._runs for _, u in segs)

    def __iter__(self):
        # brute force over the ambient space; intended for small n only
        for w in iter_space(self.params.q, self.n, min_length=self.params.ell, leading_zero=True):
            if w in self:
                yield w


def code_prime(params: ChannelParams, n: int) -> CodePrime:
    return CodePrime(params, n)


__all__ = [
    "BlockId", "block_length", "block_lengths", "blocks_up_to", "greedy_block_construction",
    "CountTable", "count", "Codebook", "is_codeword", "enumerate_codewords", "rank", "unrank",
    "CodePrime", "code_prime", "INF",
]
