"""Closed-form entropies of sign-discretized AR(1) and MA(1) processes.

For a stationary Gaussian AR(1) or MA(1) process discretized by sign
(0 for negative, 1 for positive), the probabilities of short symbol
strings have arccos closed forms:

AR(1), x_t = phi * x_{t-1} + e_t:
    mu(0 .gap. 0) = arccos(-phi^(gap+1)) / (2 pi)
    mu(0 .gap. 1) = arccos( phi^(gap+1)) / (2 pi)

MA(1), x_t = e_t + theta * e_{t-1}:
    mu(00) = arccos(-theta / (1 + theta^2)) / (2 pi)
    mu(01) = arccos( theta / (1 + theta^2)) / (2 pi)
    and pairs separated by a gap >= 1 factorize into products.

Length-3 string measures follow from three linear relations
(``mu(000)+mu(001)=mu(00)``, ``mu(010)+mu(011)=mu(01)``,
``mu(000)+mu(010)=mu(0.0)``) combined with two exact symmetries of such
processes: complement invariance ``mu(s) = mu(s-bar)`` and time-reversal
invariance ``mu(s1..sk) = mu(sk..s1)``.  No closed form is known for
orders k >= 4.

Block entropies H_1, H_2, H_3 (bits) and conditional entropies
h_k = H_k - H_{k-1} follow directly.  They are even functions of the
process parameter, so they are evaluated at |phi|, |theta|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import ValidationError
from .validation import check_in_range

TWO_PI = 2.0 * math.pi


def _xlog2x(p: float) -> float:
    """p * log2(p) with the 0 log 0 = 0 convention."""
    return 0.0 if p == 0.0 else p * math.log2(p)


@dataclass(frozen=True)
class TheoreticalEntropies:
    """Exact entropies (bits) of a sign-discretized process, orders 1..3."""

    H1: float
    H2: float
    H3: float
    h2: float
    h3: float


class ProcessKind:
    """A simulatable process whose sign discretization has known measures."""

    def simulate(self, n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        raise NotImplementedError

    def _pair(self, same_sign: bool, gap: int) -> float:
        """mu(0 .gap. 0) if same_sign else mu(0 .gap. 1)."""
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    # -- string measures ---------------------------------------------------

    def _triples(self) -> tuple[float, float, float]:
        """(mu(000), mu(001), mu(010)) solved from the pair measures."""
        mu00 = self._pair(True, 0)
        mu01 = self._pair(False, 0)
        mu0g0 = self._pair(True, 1)
        a = 0.5 * (mu0g0 + mu00 - mu01)   # mu(000)
        c = 0.5 * (mu0g0 - mu00 + mu01)   # mu(010)
        b = mu00 - a                      # mu(001)
        return a, b, c

    def string_measure(self, string: str, gap: int = 0) -> float:
        """Probability of a binary string, optionally with a gap.

        Supported forms: single symbols; two symbols separated by ``gap``
        unobserved steps; contiguous length-3 strings (``gap == 0``).
        """
        if not string or any(ch not in "01" for ch in string):
            raise ValidationError(f"not a binary string: {string!r}")
        if gap < 0:
            raise ValidationError("gap must be >= 0")
        if len(string) == 1:
            if gap:
                raise ValidationError("gap is meaningless for a single symbol")
            return 0.5
        # complement symmetry: canonicalize to a string starting with 0
        if string[0] == "1":
            string = "".join("1" if ch == "0" else "0" for ch in string)
        if len(string) == 2:
            return self._pair(string[0] == string[1], gap)
        if len(string) == 3 and gap == 0:
            a, b, c = self._triples()
            return {"000": a, "001": b, "010": c, "011": b}[string]
        raise NotImplementedError(
            f"no closed form for strings of length {len(string)}"
            + (" with a gap" if gap else "") + " (only k <= 3 is supported)")

    def theoretical_entropies(self) -> TheoreticalEntropies:
        """Exact H_1..H_3, h_2, h_3 in bits.

        Entropies are even in the process parameter; evaluation uses the
        absolute parameter value so that opposite-sign parameters produce
        bitwise-identical results.
        """
        p = self._abs_params()
        mu00 = p._pair(True, 0)
        mu01 = p._pair(False, 0)
        h2_block = -2.0 * _xlog2x(mu00) - 2.0 * _xlog2x(mu01)
        a, b, c = p._triples()
        h3_block = -2.0 * _xlog2x(a) - 4.0 * _xlog2x(b) - 2.0 * _xlog2x(c)
        return TheoreticalEntropies(
            H1=1.0, H2=h2_block, H3=h3_block,
            h2=h2_block - 1.0, h3=h3_block - h2_block)

    def _abs_params(self) -> "ProcessKind":
        return self


@dataclass(frozen=True)
class WhiteNoise(ProcessKind):
    """I.i.d. Gaussian noise; every length-k string has measure 2^-k."""

    def simulate(self, n, rng, scale=1.0):
        return scale * rng.standard_normal(n)

    def _pair(self, same_sign, gap):
        return 0.25

    def theoretical_entropies(self):
        return TheoreticalEntropies(H1=1.0, H2=2.0, H3=3.0, h2=1.0, h3=1.0)

    @property
    def name(self) -> str:
        return "white-noise"


@dataclass(frozen=True)
class Ar1(ProcessKind):
    """Stationary Gaussian AR(1): x_t = phi x_{t-1} + e_t, |phi| < 1."""

    phi: float

    def __post_init__(self):
        check_in_range(self.phi, "phi", -1.0, 1.0, inclusive="neither")

    def simulate(self, n, rng, scale=1.0):
        eps = rng.standard_normal(n)
        # exact stationary start: x_prev ~ N(0, 1/(1-phi^2))
        x_prev = rng.standard_normal() / math.sqrt(1.0 - self.phi ** 2)
        out = lfilter([1.0], [1.0, -self.phi], eps, zi=np.array([self.phi * x_prev]))[0]
        return scale * out

    def _pair(self, same_sign, gap):
        rho = self.phi ** (gap + 1)
        return math.acos(-rho if same_sign else rho) / TWO_PI

    def _abs_params(self):
        return Ar1(abs(self.phi))

    def params(self):
        return {"phi": self.phi}

    @property
    def name(self) -> str:
        return "ar1"


@dataclass(frozen=True)
class Ma1(ProcessKind):
    """Gaussian MA(1): x_t = e_t + theta e_{t-1}, |theta| < 1."""

    theta: float

    def __post_init__(self):
        check_in_range(self.theta, "theta", -1.0, 1.0, inclusive="neither")

    def simulate(self, n, rng, scale=1.0):
        eps = rng.standard_normal(n + 1)
        return scale * (eps[1:] + self.theta * eps[:-1])

    def _pair(self, same_sign, gap):
        if gap >= 1:
            return 0.25  # observations more than one step apart are independent
        rho = self.theta / (1.0 + self.theta ** 2)
        return math.acos(-rho if same_sign else rho) / TWO_PI

    def _abs_params(self):
        return Ma1(abs(self.theta))

    def params(self):
        return {"theta": self.theta}

    @property
    def name(self) -> str:
        return "ma1"


def string_measure(process: ProcessKind, string: str, gap: int = 0) -> float:
    return process.string_measure(string, gap)


def theoretical_entropies(process: ProcessKind) -> TheoreticalEntropies:
    return process.theoretical_entropies()


def entropy_table(kind: str, params: np.ndarray) -> list[dict]:
    """Rows (parameter, H1, H2/2, H3/3, h2, h3) over a parameter grid."""
    rows = []
    for value in params:
        if kind == "ar1":
            te = Ar1(float(value)).theoretical_entropies()
        elif kind == "ma1":
            te = Ma1(float(value)).theoretical_entropies()
        else:
            raise ValidationError(f"unknown process kind {kind!r}")
        rows.append({
            "parameter": float(value),
            "H1": te.H1, "H2_over_2": te.H2 / 2.0, "H3_over_3": te.H3 / 3.0,
            "h2": te.h2, "h3": te.h3,
        })
    return rows
