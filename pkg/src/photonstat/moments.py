"""Normalization-constant ladders and factorial moments of modified states.

The ladder N_0..N_K of a state collects either the normally ordered
expectation values <a^+k a^k> (falling factorial weights) or the
anti-normally ordered <a^k a^+k> (rising factorial weights).  Factorial
moments of photon-subtracted and photon-added versions of the state are
pure algebra on that ladder:

    subtract n photons:  <a^+x a^x> = N_{n+x} / N_n          (normal ladder)
    add m photons:       <a^+x a^x> = (1/N_m) * sum_k (-1)^k k! C(x,k)^2
                                       * N_{m+x-k}       (anti-normal ladder)

The second formula is the operator reordering identity
a^+x a^x = sum_k (-1)^k k! C(x,k)^2 a^{x-k} a^+(x-k) taken in expectation.
"""

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .exceptions import CancellationError, CancellationWarning, UndefinedStateError
from .states import NumberDistribution

# alternating sums smaller than this fraction of their largest term are
# flagged as cancellation-dominated
CANCELLATION_RTOL = 1e-8


class Ordering(enum.Enum):
    NORMAL = "normal"
    ANTINORMAL = "antinormal"


class ModKind(enum.Enum):
    SUBTRACT = "subtract"
    ADD = "add"


@dataclass(frozen=True)
class StateModification:
    """Subtract or add a fixed number of photons; count = 0 is the identity."""

    kind: ModKind
    count: int

    def __post_init__(self):
        if not isinstance(self.count, int) or self.count < 0:
            raise ValueError("count must be a nonnegative integer")

    @classmethod
    def subtract(cls, n):
        return cls(ModKind.SUBTRACT, n)

    @classmethod
    def add(cls, m):
        return cls(ModKind.ADD, m)

    @classmethod
    def identity(cls):
        return cls(ModKind.SUBTRACT, 0)


@dataclass(frozen=True)
class MomentLadder:
    """Ladder of norm constants N_0..N_K with its ordering convention."""

    values: np.ndarray
    ordering: Ordering
    base: NumberDistribution

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def order(self):
        return self.values.size - 1

    def __getitem__(self, k):
        return float(self.values[k])


def ladder_sums_exact(probs, order, rising=False):
    """Exact-rational ladder sums; reference path and overflow fallback.

    Accepts any sequence convertible to Fraction (floats convert exactly).
    Returns a list of Fractions.
    """
    sums = [Fraction(0)] * (order + 1)
    for n, p in enumerate(probs):
        frac = Fraction(p)
        if frac == 0:
            continue
        w = frac
        sums[0] += w
        kmax = order if rising else min(order, n)
        for k in range(1, kmax + 1):
            w *= (n + k) if rising else (n - k + 1)
            sums[k] += w
    return sums


def _ladder(dist, order, rising):
    if order < 0:
        raise ValueError("ladder order must be nonnegative")
    values = kernels.ladder_sums(dist.probs, order, rising)
    if not np.all(np.isfinite(values)):
        # falling-factorial weights overflowed float64 for some occupied n;
        # redo exactly and convert at the end
        exact = ladder_sums_exact(dist.probs, order, rising)
        try:
            values = np.array([float(v) for v in exact])
        except OverflowError:
            kind = "anti-normal" if rising else "normal"
            raise OverflowError(
                f"{kind} ladder entry up to order {order} exceeds the "
                "float64 range") from None
    return values


def normal_ladder(dist, order):
    """N_k = <a^+k a^k> of the base state for k = 0..order."""
    return MomentLadder(_ladder(dist, order, rising=False), Ordering.NORMAL, dist)


def antinormal_ladder(dist, order):
    """N_k = <a^k a^+k> of the base state for k = 0..order."""
    return MomentLadder(_ladder(dist, order, rising=True), Ordering.ANTINORMAL, dist)


def _check_cover(ladder, needed, ordering):
    if ladder.ordering is not ordering:
        raise ValueError(f"ladder must be {ordering.value}ly ordered")
    if ladder.order < needed:
        raise ValueError(
            f"ladder covers orders 0..{ladder.order}, need {needed}")


def subtracted_factorial_moment(ladder, n, x):
    """<a^+x a^x> on the n-photon-subtracted state: N_{n+x}/N_n."""
    if n < 0 or x < 0:
        raise ValueError("n and x must be nonnegative")
    _check_cover(ladder, n + x, Ordering.NORMAL)
    norm = ladder.values[n]
    if norm <= 0.0:
        raise UndefinedStateError(
            f"subtracting {n} photons annihilates the state (N_{n} = 0)")
    return float(ladder.values[n + x] / norm)


def reorder_coefficients(x):
    """Integer coefficients of a^{x-k} a^+(x-k) in the expansion of a^+x a^x.

    coeff[k] = (-1)^k k! C(x,k)^2 for k = 0..x, exact.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    return [(-1) ** k * math.factorial(k) * math.comb(x, k) ** 2
            for k in range(x + 1)]


def added_factorial_moment(ladder, m, x):
    """<a^+x a^x> on the m-photon-added state, from the anti-normal ladder.

    Evaluates the alternating reordering sum with exact rounding (fsum) and
    flags cancellation-dominated results; a negative sum beyond the
    cancellation tolerance raises CancellationError.
    """
    if m < 0 or x < 0:
        raise ValueError("m and x must be nonnegative")
    _check_cover(ladder, m + x, Ordering.ANTINORMAL)
    norm = ladder.values[m]
    if norm <= 0.0:
        raise UndefinedStateError(f"anti-normal ladder entry N_{m} vanished")
    coeffs = reorder_coefficients(x)
    terms = [c * ladder.values[m + x - k] for k, c in enumerate(coeffs)]
    total = math.fsum(terms)
    scale = max(abs(t) for t in terms)
    if total < -CANCELLATION_RTOL * scale:
        raise CancellationError(
            f"alternating sum for m={m}, x={x} is negative "
            f"({total:.3e} against largest term {scale:.3e})")
    if abs(total) < CANCELLATION_RTOL * scale:
        warnings.warn(
            f"alternating sum for m={m}, x={x} is below {CANCELLATION_RTOL:g}"
            " of its largest term; cancellation may dominate",
            CancellationWarning, stacklevel=2)
    return max(total, 0.0) / norm


def modified_moment(dist, mod, x):
    """<a^+x a^x> of the modified state, dispatching on the modification."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if mod.count == 0 or mod.kind is ModKind.SUBTRACT:
        ladder = normal_ladder(dist, mod.count + x)
        return subtracted_factorial_moment(ladder, mod.count, x)
    ladder = antinormal_ladder(dist, mod.count + x)
    return added_factorial_moment(ladder, mod.count, x)


def modified_moment_sequence(dist, mod, x_max):
    """Factorial moments m_0..m_{x_max} of the modified state.

    Builds one ladder of sufficient length and reads every order from it.
    """
    if x_max < 0:
        raise ValueError("x_max must be nonnegative")
    if mod.count == 0 or mod.kind is ModKind.SUBTRACT:
        ladder = normal_ladder(dist, mod.count + x_max)
        return np.array([subtracted_factorial_moment(ladder, mod.count, x)
                         for x in range(x_max + 1)])
    ladder = antinormal_ladder(dist, mod.count + x_max)
    return np.array([added_factorial_moment(ladder, mod.count, x)
                     for x in range(x_max + 1)])
