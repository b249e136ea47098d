"""Words over a repeated-letter alphabet: restriction, prefix-count statistics,
and adjacent-transposition distance to the standard periodic word.

A word of shape (a, b) is a sequence of length a*b over letters 0..a-1, each
appearing exactly b times. The standard word is (0, 1, ..., a-1) repeated b
times, i.e. the letter at position p is p mod a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .products import Permutation


@dataclass(frozen=True, eq=False)
class Word:
    """letters: (a*b,) indices in [0, a), each occurring exactly b times."""

    letters: np.ndarray
    alphabet_size: int
    multiplicity: int

    def __post_init__(self):
        w = np.ascontiguousarray(np.asarray(self.letters, dtype=np.int64))
        if w is self.letters:
            w = w.copy()
        a, b = self.alphabet_size, self.multiplicity
        if a < 1 or b < 1 or w.shape != (a * b,):
            raise ValueError(f"word must have length a*b = {a}*{b}, got shape {w.shape}")
        if w.min() < 0 or w.max() >= a:
            raise ValueError("letter indices out of range")
        if not (np.bincount(w, minlength=a) == b).all():
            raise ValueError(f"every letter must appear exactly {b} times")
        w.setflags(write=False)
        object.__setattr__(self, "letters", w)

    @property
    def length(self) -> int:
        return self.alphabet_size * self.multiplicity


def standard_word(a: int, b: int) -> Word:
    return Word(np.tile(np.arange(a), b), alphabet_size=a, multiplicity=b)


def random_word(a: int, b: int, rng: np.random.Generator) -> Word:
    """Uniform over all arrangements of the standard multiset."""
    return Word(rng.permutation(np.tile(np.arange(a), b)), alphabet_size=a, multiplicity=b)


def restrict_word(sigma: Permutation, n: int, a: int, b: int) -> Word:
    """Word induced by a permutation on the periodic row layout.

    The row is laid out with letter p mod a at position p for p < a*b; scanning
    positions sigma(1), ..., sigma(n) and keeping those below a*b yields the
    word. Uniform permutations induce uniform words.
    """
    if a * b > n:
        raise ValueError(f"a*b = {a * b} exceeds n = {n}")
    if sigma.n != n:
        raise ValueError("permutation size mismatch")
    imgs = sigma.order
    kept = imgs[imgs < a * b]
    return Word(kept % a, alphabet_size=a, multiplicity=b)


def prefix_counts(w: Word) -> np.ndarray:
    """counts[i, j] = occurrences of letter i among the first j positions,
    for j = 0..length; shape (a, length+1)."""
    onehot = (w.letters[None, :] == np.arange(w.alphabet_size)[:, None]).astype(np.int64)
    out = np.zeros((w.alphabet_size, w.length + 1), dtype=np.int64)
    np.cumsum(onehot, axis=1, out=out[:, 1:])
    return out


def tau(w: Word) -> float:
    """(max prefix-count discrepancy between letters + 1) / b."""
    pc = prefix_counts(w)
    disc = int((pc.max(axis=0) - pc.min(axis=0)).max())
    return (disc + 1) / w.multiplicity


def _target_ranks(w: Word) -> np.ndarray:
    """Rank of each position under the stable matching to the standard word:
    the m-th occurrence of letter l is destined for slot m*a + l."""
    a = w.alphabet_size
    occurrence = np.empty(w.length, dtype=np.int64)
    for letter in range(a):
        occurrence[w.letters == letter] = np.arange(w.multiplicity)
    return occurrence * a + w.letters


def _merge_count(ranks: list[int]) -> int:
    n = len(ranks)
    if n <= 1:
        return 0
    mid = n // 2
    left, right = ranks[:mid], ranks[mid:]
    inv = _merge_count(left) + _merge_count(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            j += 1
            inv += len(left) - i
    merged.extend(left[i:])
    merged.extend(right[j:])
    ranks[:] = merged
    return inv


def transposition_distance(w: Word) -> int:
    """Adjacent transpositions needed to reach the standard word under stable
    matching of equal letters: the inversion count of the rank sequence."""
    return _merge_count(_target_ranks(w).tolist())


def transpositions_to_standard(w: Word) -> list[int]:
    """Explicit swap schedule: swapping positions (p, p+1) for each listed p,
    in order, transforms the word into the standard word. Its length equals
    transposition_distance(w)."""
    ranks = _target_ranks(w).tolist()
    swaps: list[int] = []
    for i in range(1, len(ranks)):
        j = i
        while j > 0 and ranks[j - 1] > ranks[j]:
            ranks[j - 1], ranks[j] = ranks[j], ranks[j - 1]
            swaps.append(j - 1)
            j -= 1
    return swaps


def apply_transpositions(letters: np.ndarray, swaps: list[int]) -> np.ndarray:
    out = np.array(letters, dtype=np.int64)
    for p in swaps:
        out[p], out[p + 1] = out[p + 1], out[p]
    return out


def tau_tail_bound(a: int, b: int, p: float, exact: bool = True) -> float:
    """Tail bound for tau exceeding p / sqrt(b) over uniform random words.

    exact: 2 a^2 C(2b, ceil(b - p sqrt(b) + 1)) / C(2b, b).
    asymptotic surrogate: 2 a^2 e^{-p^2}. Needs p sqrt(b) <= b + 1.
    """
    if a < 1 or b < 1 or p <= 0:
        raise ValueError("need a, b >= 1 and p > 0")
    if p * math.sqrt(b) > b + 1:
        raise ValueError(f"p sqrt(b) = {p * math.sqrt(b):.6g} exceeds b + 1 = {b + 1}")
    if not exact:
        return 2.0 * a * a * math.exp(-p * p)
    m = math.ceil(b - p * math.sqrt(b) + 1)
    if m < 0:
        return 0.0
    ratio = Fraction(math.comb(2 * b, m), math.comb(2 * b, b))
    return 2.0 * a * a * float(ratio)


def tau_tail_empirical(a: int, b: int, p: float, trials: int, seed: int,
                       _chunk: int = 4096) -> float:
    """Frequency of tau(w) > p / sqrt(b) over uniform random words."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    base = np.tile(np.arange(a), b)
    length = a * b
    hits = 0
    done = 0
    while done < trials:
        c = min(_chunk, trials - done)
        keys = rng.random((c, length))
        perm = np.argsort(keys, axis=1)
        letters = base[perm]  # each row a uniform multiset arrangement
        onehot = letters[:, :, None] == np.arange(a)[None, None, :]
        pc = np.cumsum(onehot, axis=1)
        disc = (pc.max(axis=2) - pc.min(axis=2)).max(axis=1)
        taus = (disc + 1) / b
        hits += int((taus > p / math.sqrt(b)).sum())
        done += c
    return hits / trials
