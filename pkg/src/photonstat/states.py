"""Truncated photon-number distributions for standard single-mode states.

Every quantity downstream (factorial moments, nonclassicality criteria) is
diagonal in the number basis, so a state is represented by its photon-number
probability vector alone.  Probabilities are built by stable forward
recursion (never by evaluating factorials), and the truncation point is
chosen adaptively: the tail mass must fall below ``eps_tail`` and the
highest requested factorial moment must be converged under cutoff doubling.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import AccuracyError

FAMILIES = ("coherent", "thermal", "fock", "squeezed")

# Exponent guard for log-space tail bounds (exp of anything below is 0.0).
_LOG_TINY = -745.0


@dataclass(frozen=True)
class CutoffPolicy:
    """Accuracy policy for choosing the Fock-space truncation point.

    eps_tail: required upper bound on the omitted probability mass.
    rel_tol: relative convergence tolerance for the moment-doubling check.
    max_cutoff: hard cap on the cutoff (exceeding it raises AccuracyError).
    max_moment_order: factorial-moment order used in the convergence check;
        set it at least as high as the largest ladder order you will request.
    """

    eps_tail: float = 1e-12
    rel_tol: float = 1e-10
    max_cutoff: int = 4096
    max_moment_order: int = 12

    def __post_init__(self):
        if self.eps_tail <= 0:
            raise ValueError("eps_tail must be positive")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.max_cutoff < 1:
            raise ValueError("max_cutoff must be at least 1")
        if self.max_moment_order < 0:
            raise ValueError("max_moment_order must be nonnegative")


DEFAULT_POLICY = CutoffPolicy()


@dataclass(frozen=True)
class NumberDistribution:
    """Truncated photon-number distribution with a guaranteed tail bound.

    probs[n] is the probability of n photons, n = 0..cutoff.  tail_bound is
    an upper bound on the probability mass omitted by the truncation
    (relative to the untruncated state the builder targeted; 0 for states
    with finite support).
    """

    probs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        arr = np.ascontiguousarray(self.probs, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("probs must be a nonempty 1-d array")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("probabilities must be finite and nonnegative")
        if not (0.0 <= self.tail_bound < 1.0):
            raise ValueError("tail_bound must lie in [0, 1)")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def cutoff(self):
        return self.probs.size - 1

    def total(self):
        return math.fsum(self.probs)

    def mean(self):
        return math.fsum(n * p for n, p in enumerate(self.probs))

    def renormalized(self):
        """Return a copy scaled to unit total probability."""
        s = self.total()
        if s <= 0.0:
            raise ValueError("cannot renormalize a zero distribution")
        return NumberDistribution(self.probs / s, self.tail_bound)


def _coherent_probs(alpha_sq, cutoff):
    # Poisson pmf by forward recursion: p_{n+1} = p_n * lam / (n+1)
    p = np.zeros(cutoff + 1)
    p[0] = math.exp(-alpha_sq)
    for n in range(cutoff):
        p[n + 1] = p[n] * alpha_sq / (n + 1)
    return p


def _coherent_tail(alpha_sq, cutoff):
    if alpha_sq == 0.0:
        return 0.0
    ratio = alpha_sq / (cutoff + 1)
    if ratio >= 1.0:
        return 1.0
    # sum_{n>D} p_n <= p_D * r / (1 - r) with r = lam/(D+1); log space
    # avoids underflow of p_D (and of r itself for subnormal lam).
    log_pd = -alpha_sq + cutoff * math.log(alpha_sq) - math.lgamma(cutoff + 1)
    log_tail = (log_pd + math.log(alpha_sq) - math.log(cutoff + 1)
                - math.log1p(-ratio))
    return math.exp(max(log_tail, _LOG_TINY)) if log_tail < 0 else 1.0


def _thermal_probs(nbar, cutoff):
    p = np.zeros(cutoff + 1)
    q = nbar / (1.0 + nbar)
    p[0] = 1.0 / (1.0 + nbar)
    for n in range(cutoff):
        p[n + 1] = p[n] * q
    return p


def _thermal_tail(nbar, cutoff):
    if nbar == 0.0:
        return 0.0
    # exact geometric tail: q^(D+1)
    log_tail = (cutoff + 1) * math.log(nbar / (1.0 + nbar))
    return math.exp(max(log_tail, _LOG_TINY))


def _squeezed_probs(r, cutoff):
    # p_{2k} = (2k)! tanh^{2k} r / (4^k (k!)^2 cosh r); odd entries vanish.
    # Even-index recursion: p_{2(k+1)} = p_{2k} * tanh^2 r * (2k+1)/(2k+2).
    p = np.zeros(cutoff + 1)
    t = math.tanh(r) ** 2
    p[0] = 1.0 / math.cosh(r)
    k = 0
    while 2 * (k + 1) <= cutoff:
        p[2 * (k + 1)] = p[2 * k] * t * (2 * k + 1) / (2 * k + 2)
        k += 1
    return p


def _squeezed_tail(r, cutoff):
    if r == 0.0:
        return 0.0
    t = math.tanh(r) ** 2
    if t == 0.0:
        # tanh^2 underflowed: the true tail is below r^2 < ulp(0)
        return math.ulp(0.0)
    k = cutoff // 2  # index of the last even entry <= cutoff
    # consecutive even terms decay by at least a factor t
    log_p2k = (math.lgamma(2 * k + 1) - 2 * k * math.log(2.0)
               - 2 * math.lgamma(k + 1) + k * math.log(t)
               - math.log(math.cosh(r)))
    log_tail = log_p2k + math.log(t) - math.log1p(-t)
    return math.exp(max(log_tail, _LOG_TINY)) if log_tail < 0 else 1.0


_BUILDERS = {
    "coherent": (_coherent_probs, _coherent_tail),
    "thermal": (_thermal_probs, _thermal_tail),
    "squeezed": (_squeezed_probs, _squeezed_tail),
}


def _raw_factorial_moment(probs, order):
    """sum_n p_n * n(n-1)...(n-order+1) on the unnormalized vector."""
    return float(kernels.ladder_sums(probs, order, False)[order])


def _moment_converged(family, param, cutoff, policy):
    order = policy.max_moment_order
    pmf, _ = _BUILDERS[family]
    m_here = _raw_factorial_moment(pmf(param, cutoff), order)
    m_twice = _raw_factorial_moment(pmf(param, 2 * cutoff), order)
    if m_twice == 0.0:
        return m_here == 0.0
    return abs(m_twice - m_here) <= policy.rel_tol * abs(m_twice)


def choose_cutoff(family, param, policy=DEFAULT_POLICY):
    """Smallest cutoff satisfying the tail and moment-convergence criteria.

    Raises AccuracyError when no cutoff up to policy.max_cutoff works.
    """
    if family == "fock":
        n = _as_fock_index(param)
        if n > policy.max_cutoff:
            raise AccuracyError(
                f"fock index {n} exceeds max_cutoff {policy.max_cutoff}")
        return n
    if family not in _BUILDERS:
        raise ValueError(f"unknown state family {family!r}")
    if param < 0:
        raise ValueError(f"{family} parameter must be nonnegative")
    if param == 0.0:
        return 0

    _, tail = _BUILDERS[family]

    def acceptable(cutoff):
        return (tail(param, cutoff) <= policy.eps_tail
                and _moment_converged(family, param, cutoff, policy))

    # grow to a passing cutoff, then binary-search the smallest one
    lo, hi = 0, 8
    while not acceptable(min(hi, policy.max_cutoff)):
        lo = hi
        if hi >= policy.max_cutoff:
            best = tail(param, policy.max_cutoff)
            raise AccuracyError(
                f"{family}({param}) needs cutoff > {policy.max_cutoff}: "
                f"tail bound {best:.3e} vs eps_tail {policy.eps_tail:.3e}, "
                f"or moment order {policy.max_moment_order} not converged "
                f"to rel_tol {policy.rel_tol:.1e}")
        hi = min(hi * 2, policy.max_cutoff)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if acceptable(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _as_fock_index(param):
    n = int(param)
    if n != param or n < 0:
        raise ValueError("fock parameter must be a nonnegative integer")
    return n


def _build(family, param, policy, renormalize):
    cutoff = choose_cutoff(family, param, policy)
    pmf, tail = _BUILDERS[family]
    probs = pmf(param, cutoff)
    dist = NumberDistribution(probs, tail(param, cutoff))
    return dist.renormalized() if renormalize else dist


def build_coherent(alpha_sq, policy=DEFAULT_POLICY, renormalize=True):
    """Coherent state with mean photon number |alpha|^2 (Poissonian)."""
    return _build("coherent", alpha_sq, policy, renormalize)


def build_thermal(nbar, policy=DEFAULT_POLICY, renormalize=True):
    """Thermal state with mean photon number nbar (geometric pmf)."""
    return _build("thermal", nbar, policy, renormalize)


def build_fock(n):
    """Number state |n>: p_n = 1, finite support, zero tail."""
    n = _as_fock_index(n)
    probs = np.zeros(n + 1)
    probs[n] = 1.0
    return NumberDistribution(probs, 0.0)


def build_squeezed_vacuum(r, policy=DEFAULT_POLICY, renormalize=True):
    """Squeezed vacuum with squeezing parameter r (even photon numbers only)."""
    return _build("squeezed", r, policy, renormalize)


def build_state(family, param, policy=DEFAULT_POLICY):
    """Construct a base state by family name; see FAMILIES."""
    if family == "coherent":
        return build_coherent(param, policy)
    if family == "thermal":
        return build_thermal(param, policy)
    if family == "fock":
        return build_fock(param)
    if family == "squeezed":
        return build_squeezed_vacuum(param, policy)
    raise ValueError(f"unknown state family {family!r}")
