"""Brute-force certification on small instances.

The confusability graph has every word of the space as a vertex and an edge
between any two words that can produce a common channel output.  A code is
zero-error exactly when it is an independent set, so the largest zero-error
code is a maximum independent set, found here by exact branch and bound.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .channel import (
    ZERO_INSERTION, confusable, invariant_key, profiles_confusable, reach_profile,
)
from .core import BudgetExceeded, ChannelParams, Word, canonical_key, iter_space

GRAPH_BUDGET = 20_000
MIS_BUDGET = 2_000


@dataclass(frozen=True)
class ConfusabilityGraph:
    params: ChannelParams
    n: int
    model: str
    vertices: Tuple[Word, ...]
    adjacency: Tuple[int, ...]  # bitsets over vertex indices

    def __len__(self):
        return len(self.vertices)

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.adjacency[a] >> b & 1)

    def edges(self):
        for a, mask in enumerate(self.adjacency):
            for b in _bits(mask):
                if b > a:
                    yield a, b

    def index(self, w: Sequence[int]) -> int:
        return self.vertices.index(tuple(w))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _pair_test(params, words, model, backend):
    """Return ``test(a, b)`` deciding confusability of ``words[a]``, ``words[b]``."""
    if backend == "generic":
        return lambda a, b: confusable(params, words[a], words[b], model, backend="generic")
    p = params
    if not params.bounded:
        longest = max((len(w) for w in words), default=0)
        p = ChannelParams(params.q, params.ell, longest + 1)
    profiles = [reach_profile(p, w, model) for w in words]
    ell = params.ell
    return lambda a, b: profiles_confusable(profiles[a], profiles[b], ell)


def build_graph(params: ChannelParams, n: int, model: str = ZERO_INSERTION,
                vertices: Optional[Sequence[Sequence[int]]] = None,
                budget: int = GRAPH_BUDGET, backend: str = "auto") -> ConfusabilityGraph:
    """Confusability graph on ``S_q(n)`` (or on an explicit vertex list).

    Only pairs that share the channel invariant (the sequence of non-zero
    symbols) are tested; all other pairs can never meet at the output.
    """
    if vertices is None:
        q = params.q
        size = sum((q - 1) * q ** (m - 1) for m in range(1, n + 1))
        if size > budget:
            raise BudgetExceeded(f"space has {size} > {budget} words")
        vertices = list(iter_space(q, n))
    else:
        vertices = sorted({tuple(v) for v in vertices}, key=canonical_key)
        if len(vertices) > budget:
            raise BudgetExceeded(f"{len(vertices)} > {budget} vertices")
    adj = [0] * len(vertices)
    groups = defaultdict(list)
    for k, v in enumerate(vertices):
        groups[invariant_key(params, v, model)].append(k)
    test = _pair_test(params, vertices, model, backend)
    for members in groups.values():
        for s, a in enumerate(members):
            for b in members[s + 1:]:
                if test(a, b):
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
    return ConfusabilityGraph(params, n, model, tuple(vertices), tuple(adj))


def _components(adj: Sequence[int], alive: int) -> List[int]:
    comps = []
    while alive:
        seed = alive & -alive
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            nxt &= alive & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        alive &= ~comp
    return comps


def _clique_cover_bound(adj, cand: int) -> int:
    """Number of cliques in a greedy clique cover of ``cand``."""
    cliques = 0
    rest = cand
    while rest:
        v = (rest & -rest).bit_length() - 1
        clique = 1 << v
        common = adj[v] & rest
        while common:
            u = (common & -common).bit_length() - 1
            clique |= 1 << u
            common &= adj[u]
        rest &= ~clique
        cliques += 1
    return cliques


def _greedy_mis(adj, cand: int) -> int:
    chosen = 0
    while cand:
        best = min(_bits(cand), key=lambda v: (bin(adj[v] & cand).count("1"), v))
        chosen |= 1 << best
        cand &= ~(adj[best] | (1 << best))
    return chosen


def _mis_component(adj, cand: int) -> int:
    best = _greedy_mis(adj, cand)
    best_size = bin(best).count("1")

    def search(cand, chosen, size):
        nonlocal best, best_size
        # vertices of degree <= 1 belong to some maximum independent set
        changed = True
        while changed and cand:
            changed = False
            for v in _bits(cand):
                nb = adj[v] & cand
                if nb & (nb - 1) == 0:
                    chosen |= 1 << v
                    size += 1
                    cand &= ~(nb | (1 << v))
                    changed = True
                    break
        if not cand:
            if size > best_size:
                best, best_size = chosen, size
            return
        if size + _clique_cover_bound(adj, cand) <= best_size:
            return
        v = max(_bits(cand), key=lambda u: (bin(adj[u] & cand).count("1"), -u))
        search(cand & ~(adj[v] | (1 << v)), chosen | (1 << v), size + 1)
        search(cand & ~(1 << v), chosen, size)

    search(cand, 0, 0)
    return best


def max_independent_set(g: ConfusabilityGraph, budget: int = MIS_BUDGET) -> Tuple[int, List[Word]]:
    """Exact maximum independent set; returns ``(size, witness words)``."""
    if len(g) > budget:
        raise BudgetExceeded(f"graph has {len(g)} > {budget} vertices")
    chosen = 0
    for comp in _components(g.adjacency, (1 << len(g)) - 1):
        chosen |= _mis_component(g.adjacency, comp)
    witness = [g.vertices[v] for v in sorted(_bits(chosen))]
    return len(witness), witness


def brute_zero_error_check(params: ChannelParams, code, model: str = ZERO_INSERTION,
                           backend: str = "auto") -> Tuple[bool, Optional[Tuple[Word, Word]]]:
    """Check every pair of distinct codewords for confusability.

    Pairs with different channel invariants are skipped since they can never
    be confused.  Returns ``(True, None)`` or ``(False, first bad pair)``.
    """
    words = sorted({tuple(w) for w in code}, key=canonical_key)
    groups = defaultdict(list)
    for k, w in enumerate(words):
        groups[invariant_key(params, w, model)].append(k)
    test = _pair_test(params, words, model, backend)
    bad = None
    for members in groups.values():
        for s, a in enumerate(members):
            for b in members[s + 1:]:
                if test(a, b):
                    if bad is None or (a, b) < bad:
                        bad = (a, b)
                    break
    if bad is None:
        return True, None
    return False, (words[bad[0]], words[bad[1]])
