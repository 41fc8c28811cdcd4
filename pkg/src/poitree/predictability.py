"""Sequence entropy and the upper bound on location predictability.

A visit history is reduced to a symbol sequence (one symbol per place,
consecutive repeats collapsed). Its entropy rate is estimated with a
Lempel-Ziv match-length estimator, and the entropy rate is converted into the
maximum achievable prediction accuracy by inverting Fano's inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

from .tree import TIER_GLOBAL, TIER_LOCAL, PoiTree
from .trajectory import Trajectory

FANO_TOLERANCE = 1e-9

# Symbol ids are packed into a string so substring containment can use the
# fast str.find machinery; code points must dodge the surrogate block.
_SURROGATE_START = 0xD800


@dataclass(frozen=True)
class PoiSequence:
    """A place-visit symbol sequence with its alphabet size."""

    symbols: tuple[str, ...]
    alphabet_size: int

    def __len__(self) -> int:
        return len(self.symbols)


def _collapse(symbols: list[str]) -> PoiSequence:
    collapsed: list[str] = []
    for s in symbols:
        if not collapsed or collapsed[-1] != s:
            collapsed.append(s)
    return PoiSequence(symbols=tuple(collapsed), alphabet_size=len(set(collapsed)))


def sequence_from_tree(t: Trajectory, tree: PoiTree, tier: str = TIER_LOCAL) -> PoiSequence:
    """Symbol sequence of a trajectory's visits to the tree's places.

    At the global tier each global place is a symbol. At the local tier the
    symbols are the local places plus any global place without children
    (which acts as its own finest-grained place). Fixes assigned to no place
    are dropped; consecutive repeats collapse to one symbol.

    Raises
    ------
    ValueError
        If the tier is unknown or no fix is assigned to any place.
    """
    if tier not in (TIER_GLOBAL, TIER_LOCAL):
        raise ValueError(f"tier must be {TIER_GLOBAL!r} or {TIER_LOCAL!r}, got {tier!r}")
    fix_symbol: dict[int, str] = {}
    if tier == TIER_GLOBAL:
        chosen = tree.global_pois
    else:
        childless = tuple(p for p in tree.global_pois if not tree.children_of(p.id))
        chosen = tree.local_pois + childless
    for poi in chosen:
        for idx in poi.member_indices:
            fix_symbol[idx] = poi.id
    if not fix_symbol:
        raise ValueError("no fixes are assigned to any place at this tier")
    ordered = [fix_symbol[i] for i in sorted(fix_symbol)]
    return _collapse(ordered)


def sequence_from_labels(labels: Sequence[int]) -> PoiSequence:
    """Symbol sequence from per-visit cluster labels; noise (-1) is dropped."""
    kept = [f"c{int(lab)}" for lab in labels if lab != -1]
    if not kept:
        raise ValueError("no visits are assigned to any cluster")
    return _collapse(kept)


def _match_lengths(codes: list[int]) -> list[int]:
    """Shortest-absent-prefix lengths for each position.

    lengths[p] is the smallest k such that the window starting at p of length
    k does not occur anywhere in the first p symbols; when every window
    through the end of the sequence occurs earlier, it saturates at
    (n - p) + 1. lengths[0] is 1. Successive values can drop by at most 1,
    so each search resumes near the previous length.
    """
    n = len(codes)
    if n == 0:
        return []
    s = "".join(chr(c if c < _SURROGATE_START else c + 0x800) for c in codes)
    lengths = [1]
    prev = 1
    for p in range(1, n):
        k = max(1, prev - 1)
        while k <= n - p and s.find(s[p : p + k], 0, p) != -1:
            k += 1
        lengths.append(k)
        prev = k
    return lengths


def lz_match_lengths(symbols: Sequence[Hashable]) -> list[int]:
    """Per-position shortest-absent-prefix lengths of a symbol sequence.

    See :func:`lz_entropy_bits`; exposed so callers can inspect the raw
    match lengths the estimate is built from.
    """
    ids: dict[Hashable, int] = {}
    codes = [ids.setdefault(sym, len(ids)) for sym in symbols]
    return _match_lengths(codes)


def lz_entropy_bits(symbols: Sequence[Hashable]) -> float:
    """Lempel-Ziv estimate of the entropy rate in bits per symbol.

    S = n * log2(n) / sum of match lengths. Needs at least 2 symbols.
    """
    n = len(symbols)
    if n < 2:
        raise ValueError(f"entropy estimation needs at least 2 symbols, got {n}")
    total = sum(lz_match_lengths(symbols))
    return n * math.log2(n) / total


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def solve_fano(entropy_bits: float, alphabet_size: int) -> float:
    """Largest prediction accuracy consistent with the entropy rate.

    Solves S = H(p) + (1 - p) * log2(N - 1) for p on [1/N, 1], where the
    right side strictly decreases in p. Degenerate inputs clamp: one place or
    non-positive entropy give 1, entropy at or above log2(N) gives 1/N.
    """
    if alphabet_size < 1:
        raise ValueError(f"alphabet_size must be >= 1, got {alphabet_size}")
    n = alphabet_size
    if n == 1 or entropy_bits <= 0.0:
        return 1.0
    if entropy_bits >= math.log2(n):
        return 1.0 / n
    log_rest = math.log2(n - 1)

    def gap(p: float) -> float:
        return _binary_entropy(p) + (1.0 - p) * log_rest - entropy_bits

    lo, hi = 1.0 / n, 1.0
    while hi - lo > FANO_TOLERANCE:
        mid = (lo + hi) / 2.0
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class PredictabilityResult:
    """Entropy rate and the accuracy ceiling derived from it."""

    entropy_bits: float
    alphabet_size: int
    pi_max: float
    degenerate: bool


def predictability_limit(sequence: PoiSequence | Sequence[Hashable]) -> PredictabilityResult:
    """Entropy rate and predictability ceiling of a symbol sequence.

    Sequences shorter than 2 symbols carry no transition information; they
    return pi_max = 1 flagged degenerate.
    """
    if isinstance(sequence, PoiSequence):
        symbols: Sequence[Hashable] = sequence.symbols
    else:
        symbols = sequence
    alphabet = len(set(symbols))
    if len(symbols) < 2:
        return PredictabilityResult(
            entropy_bits=0.0, alphabet_size=alphabet, pi_max=1.0, degenerate=True
        )
    entropy = lz_entropy_bits(symbols)
    return PredictabilityResult(
        entropy_bits=entropy,
        alphabet_size=alphabet,
        pi_max=solve_fano(entropy, alphabet),
        degenerate=False,
    )
