"""Block-entropy estimation on finite-alphabet symbol sequences.

Estimates use the empirical non-overlapping block distribution: a sequence
of length n yields m = floor(n/k) disjoint blocks starting at index 0, the
trailing remainder is ignored.  Two estimators are provided:

* ``naive`` -- the plug-in estimator ``-sum (n_i/m) log2 (n_i/m)``, which
  systematically underestimates when blocks are undersampled;
* ``grassberger`` -- the bias-corrected estimator
  ``-sum (n_i/m) log(exp(G(n_i)) / m)`` (evaluated in nats, reported in
  bits), where ``G(2n+1) = G(2n) = -euler_gamma - log 2 + sum_{j<=n} 2/(2j-1)``.

Conditional entropies are differences of block entropies of consecutive
orders, each estimated on its own block distribution; rescaled variants
divide by the first-order estimate to remove marginal symbol-frequency
effects.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeriesError, ValidationError
from .series import SymbolSeries

EULER_GAMMA = 0.5772156649015329
_LN2 = math.log(2.0)

ESTIMATORS = ("naive", "grassberger")


def _symbols_of(s) -> tuple[np.ndarray, int]:
    """Accept a SymbolSeries, a digit string, or a plain integer array."""
    if isinstance(s, SymbolSeries):
        return s.symbols.astype(np.int64), s.alphabet_size
    if isinstance(s, str):
        if s and not s.isdigit():
            raise ValidationError("symbol strings must contain digits only")
        s = np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(s)
    if arr.ndim != 1:
        raise ValidationError("symbol input must be 1-dimensional")
    arr = arr.astype(np.int64)
    if arr.size and arr.min() < 0:
        raise ValidationError("symbols must be non-negative integers")
    alphabet = int(arr.max()) + 1 if arr.size else 2
    return arr, max(alphabet, 2)


@dataclass
class BlockDistribution:
    """Counts of length-k blocks; ``counts[i]`` indexes blocks base-alphabet."""

    k: int
    alphabet_size: int
    counts: np.ndarray  # int64, length alphabet_size**k
    n_blocks: int

    @property
    def n_boxes(self) -> int:
        """Number of possible blocks M (occupied or not)."""
        return self.alphabet_size ** self.k

    def as_dict(self) -> dict[str, int]:
        """Observed blocks as digit strings, e.g. ``{"01": 3}``."""
        out = {}
        for code in np.flatnonzero(self.counts):
            digits = []
            c = int(code)
            for _ in range(self.k):
                digits.append(chr(ord("0") + c % self.alphabet_size))
                c //= self.alphabet_size
            out["".join(reversed(digits))] = int(self.counts[code])
        return out


def block_distribution(s, k: int) -> BlockDistribution:
    """Count non-overlapping k-blocks starting at index 0."""
    symbols, alphabet = _symbols_of(s)
    n = len(symbols)
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValidationError(f"block order k must be a positive integer, got {k!r}")
    if k > n:
        raise ValidationError(f"block order k={k} exceeds series length {n}")
    if n > 0 and k > math.log2(n):
        warnings.warn(
            f"block order k={k} exceeds log2(n)={math.log2(n):.1f}; "
            "block statistics will be poor", stacklevel=2)
    m = n // k
    blocks = symbols[: m * k].reshape(m, k)
    powers = alphabet ** np.arange(k - 1, -1, -1, dtype=np.int64)
    codes = blocks @ powers
    counts = np.bincount(codes, minlength=alphabet ** k)
    return BlockDistribution(k=int(k), alphabet_size=alphabet,
                             counts=counts.astype(np.int64), n_blocks=m)


@dataclass(frozen=True)
class EntropyEstimate:
    """An entropy value in bits together with how it was obtained."""

    estimator: str
    kind: str       # "block" | "conditional" | "rescaled_block" | "rescaled_conditional"
    k: int
    value: float
    n_blocks: int


def grassberger_g(n_max: int) -> np.ndarray:
    """Table of correction terms G_0..G_{n_max}.

    Built by one pass over the odd-denominator series
    ``G(2n) = G(2n-2) + 2/(2n-1)`` with ``G(0) = G(1) = -euler_gamma - log 2``
    and ``G(2n+1) = G(2n)``.
    """
    if n_max < 0:
        raise ValidationError("n_max must be >= 0")
    g = np.empty(n_max + 1)
    g0 = -EULER_GAMMA - _LN2
    g[0] = g0
    if n_max >= 1:
        g[1] = g0
    if n_max >= 2:
        half = n_max // 2
        cum = g0 + np.cumsum(2.0 / (2.0 * np.arange(1, half + 1) - 1.0))
        g[2::2] = cum[: len(g[2::2])]
        if n_max >= 3:
            g[3::2] = cum[: len(g[3::2])]
    return g


def _require_counts(d: BlockDistribution) -> np.ndarray:
    if d.n_blocks < 1:
        raise ValidationError("entropy estimate needs at least one block")
    return d.counts[d.counts > 0]


def naive_entropy(d: BlockDistribution) -> EntropyEstimate:
    """Plug-in block entropy in bits, with the 0*log(0) = 0 convention."""
    counts = _require_counts(d)
    p = counts / d.n_blocks
    value = float(-(p * np.log2(p)).sum())
    return EntropyEstimate("naive", "block", d.k, value, d.n_blocks)


def grassberger_entropy(d: BlockDistribution) -> EntropyEstimate:
    """Bias-corrected block entropy in bits."""
    counts = _require_counts(d)
    g = grassberger_g(int(counts.max()))
    n = d.n_blocks
    nats = math.log(n) - float(counts @ g[counts]) / n
    return EntropyEstimate("grassberger", "block", d.k, nats / _LN2, n)


_ESTIMATOR_FN = {"naive": naive_entropy, "grassberger": grassberger_entropy}


def block_entropy(s, k: int, estimator: str = "grassberger") -> EntropyEstimate:
    """Block entropy H_k of a symbol sequence by the chosen estimator."""
    if estimator not in ESTIMATORS:
        raise ValidationError(f"unknown estimator {estimator!r}")
    return _ESTIMATOR_FN[estimator](block_distribution(s, k))


def conditional_entropy(s, k: int, estimator: str = "grassberger") -> EntropyEstimate:
    """Conditional entropy h_k = H_k - H_{k-1}; h_1 is H_1 by definition.

    Each term is estimated on its own block distribution.
    """
    if k < 1:
        raise ValidationError("conditional entropy order must be >= 1")
    hk = block_entropy(s, k, estimator)
    if k == 1:
        return EntropyEstimate(estimator, "conditional", 1, hk.value, hk.n_blocks)
    hk1 = block_entropy(s, k - 1, estimator)
    return EntropyEstimate(estimator, "conditional", k, hk.value - hk1.value, hk.n_blocks)


def rescaled_entropies(s, k: int, estimator: str = "grassberger"
                       ) -> tuple[EntropyEstimate, EntropyEstimate]:
    """Rescaled block and conditional entropies (H_k/H_1, h_k/H_1)."""
    h1 = block_entropy(s, 1, estimator)
    if h1.value <= 0.0:
        raise DegenerateSeriesError(
            "rescaling undefined: first-order entropy is zero (constant symbols)")
    hk = block_entropy(s, k, estimator)
    hck = conditional_entropy(s, k, estimator)
    return (
        EntropyEstimate(estimator, "rescaled_block", k, hk.value / h1.value, hk.n_blocks),
        EntropyEstimate(estimator, "rescaled_conditional", k, hck.value / h1.value, hck.n_blocks),
    )
