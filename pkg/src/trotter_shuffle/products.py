"""Permuted exponential-product paths and the block-average machinery.

The central objects: partial products P_k = prod_{i<=k} exp(A_{sigma(i)}/n),
their sup-deviation from the reference path exp(k A / n), consecutive-block
schemes, the two block-average conditions (mean and norm), and the
deterministic deviation bound they imply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, exp_stack, mat_exp, op_norm, op_norms
from .rows import ArrayRow, RowStats, element_norms, row_stats


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection of {0, ..., n-1}; order[k] is the image of position k."""

    order: np.ndarray

    def __post_init__(self):
        o = np.ascontiguousarray(np.asarray(self.order, dtype=np.int64))
        if o is self.order:
            o = o.copy()
        if o.ndim != 1 or o.size < 1:
            raise ValueError("permutation must be a non-empty 1-d index array")
        counts = np.bincount(o, minlength=o.size) if o.min() >= 0 else None
        if counts is None or counts.size != o.size or not (counts == 1).all():
            raise ValueError("not a bijection of 0..n-1")
        o.setflags(write=False)
        object.__setattr__(self, "order", o)

    @property
    def n(self) -> int:
        return self.order.size

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))


def uniform_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniformly random permutation (Fisher-Yates), deterministic in the stream."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(rng.permutation(n))


@dataclass(frozen=True)
class BlockScheme:
    """b consecutive blocks of size a covering the first a*b positions."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("block size and count must be >= 1")

    @property
    def covered(self) -> int:
        return self.a * self.b

    def blocks(self):
        return [range(j * self.a, (j + 1) * self.a) for j in range(self.b)]


def choose_blocks(n: int, stats: RowStats, eps: float = 0.0,
                  mode: str = "sqrt_default") -> BlockScheme:
    """Pick a block size for a row of length n.

    sqrt_default takes a = ceil(sqrt(n)). The probability mode grows a by the
    concentration scale L1*Linf*e^{2 L1} so the block tail bound decays; the
    almost_sure mode adds a log n factor for summability. Always 1 <= a <= n/2.
    """
    if n < 4:
        raise ValueError("need n >= 4 to form at least two blocks")
    if mode == "sqrt_default":
        a = math.ceil(math.sqrt(n))
    elif mode in ("probability", "almost_sure"):
        scale = max(1.0, stats.l1 * stats.linf * math.exp(2.0 * stats.l1))
        if mode == "almost_sure":
            scale *= math.log(n)
        a = math.ceil(math.sqrt(n * scale))
    else:
        raise ValueError(f"unknown block mode {mode!r}")
    a = max(1, min(a, n // 2))
    return BlockScheme(a=a, b=n // a)


def exp_factors(row: ArrayRow) -> np.ndarray:
    """exp(A_i / n) for every element, shape (n, d, d).

    Letters (or bit-identical repeated elements) are exponentiated once.
    """
    n = row.n
    if row.alphabet is not None:
        base = exp_stack(row.alphabet / n)
        return base[row.letter_of]
    uniq, inverse = np.unique(row.elements.reshape(n, -1), axis=0, return_inverse=True)
    d = row.d
    base = exp_stack(uniq.reshape(-1, d, d) / n)
    return base[inverse]


def partial_products(row: ArrayRow, sigma: Permutation) -> np.ndarray:
    """P_0 = I, P_k = P_{k-1} exp(A_{sigma(k)}/n); shape (n+1, d, d)."""
    if sigma.n != row.n:
        raise ValueError(f"permutation size {sigma.n} != row length {row.n}")
    factors = exp_factors(row)[sigma.order]
    n, d = row.n, row.d
    out = np.empty((n + 1, d, d), dtype=np.complex128)
    p = np.eye(d, dtype=np.complex128)
    out[0] = p
    for k in range(n):
        p = p @ factors[k]
        out[k + 1] = p
    return out


def reference_path(target, n: int) -> np.ndarray:
    """exp(k A / n) for k = 0..n, shape (n+1, d, d).

    Powers exp(A/n) step by step and recomputes exactly every ceil(sqrt(n))
    steps to keep accumulated round-off at the sqrt(n) * eps scale.
    """
    a = as_matrix(target, "target")
    if n < 1:
        raise ValueError("n must be >= 1")
    d = a.shape[0]
    anchor = math.ceil(math.sqrt(n))
    e1 = mat_exp(a / n)
    out = np.empty((n + 1, d, d), dtype=np.complex128)
    out[0] = np.eye(d, dtype=np.complex128)
    for k in range(1, n + 1):
        out[k] = mat_exp(a * (k / n)) if k % anchor == 0 else out[k - 1] @ e1
    return out


@dataclass(frozen=True, eq=False)
class PathReport:
    """Per-step deviations ||P_k - exp(k A/n)|| and their certified supremum.

    sup_dev = max_k deviation + slack, where slack = ||A|| e^{||A||} / n covers
    the motion of exp(t A) inside one grid cell, so sup_dev upper-bounds the
    deviation at every continuous time t in [0, 1].
    """

    deviations: np.ndarray
    sup_dev: float
    slack: float


def path_deviation(row: ArrayRow, sigma: Permutation, target) -> PathReport:
    tgt = as_matrix(target, "target")
    prods = partial_products(row, sigma)
    ref = reference_path(tgt, row.n)
    devs = op_norms(prods - ref)
    devs.setflags(write=False)
    nt = op_norm(tgt)
    slack = nt * math.exp(nt) / row.n
    return PathReport(deviations=devs, sup_dev=float(devs.max()) + slack, slack=slack)


@dataclass(frozen=True)
class BlockConditionReport:
    ok: bool
    worst_mean_gap: float
    worst_norm_gap: float


def check_block_conditions(row: ArrayRow, sigma: Permutation, scheme: BlockScheme,
                           eps: float) -> BlockConditionReport:
    """Worst block-average gaps of the permuted row, in the e^{L1}-weighted form.

    worst_mean_gap  = max_j ||mean_{i in V_j} A_{sigma(i)} - A_n|| e^{L1}
    worst_norm_gap  = max_j |mean_{i in V_j} ||A_{sigma(i)}|| - L1| e^{L1}
    ok means both are <= eps. Positions past a*b are ignored here (the path
    bound handles them as a separate tail).
    """
    if sigma.n != row.n:
        raise ValueError("permutation size mismatch")
    if scheme.covered > row.n:
        raise ValueError(f"scheme covers {scheme.covered} > n = {row.n}")
    stats = row_stats(row)
    scale = math.exp(stats.l1)
    idx = sigma.order[: scheme.covered]
    blocks = row.elements[idx].reshape(scheme.b, scheme.a, row.d, row.d)
    mean_gap = float(op_norms(blocks.mean(axis=1) - stats.mean).max()) * scale
    norms = element_norms(row)[idx].reshape(scheme.b, scheme.a)
    norm_gap = float(np.abs(norms.mean(axis=1) - stats.l1).max()) * scale
    return BlockConditionReport(ok=(mean_gap <= eps and norm_gap <= eps),
                                worst_mean_gap=mean_gap, worst_norm_gap=norm_gap)


def prop_uniform_bound(l1: float, norm_mean: float, eps: float, b: int) -> float:
    """Deterministic sup-deviation bound implied by block conditions at level eps.

    (3/(2b)) (e^{eps/b} (L1+eps)^2 + (L1+eps+||A_n||) + ||A_n||^2) e^{L1+eps}
        + eps e^{eps}
    """
    if min(l1, norm_mean, eps) < 0 or b < 1:
        raise ValueError("arguments must be non-negative with b >= 1")
    if norm_mean > l1 + 1e-12:
        raise ValueError(f"||A_n|| = {norm_mean} cannot exceed L1 = {l1}")
    s = l1 + eps
    main = (math.exp(eps / b) * s * s + (s + norm_mean) + norm_mean * norm_mean)
    return (3.0 / (2.0 * b)) * main * math.exp(s) + eps * math.exp(eps)
