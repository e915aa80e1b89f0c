"""Nonclassicality criteria evaluated from factorial-moment sequences.

Criteria covered:

* Mandel Q (variance vs mean), including the closed forms for subtracted
  and added states written directly on the normalization ladder.
* Generalized Mandel Q^(l) in both of its circulating forms: the plain
  central-moment form and the normally ordered form.  These coincide at
  l = 1 and genuinely differ for l >= 2 on non-Poissonian states, so both
  are computed and reported side by side.
* Lee higher-order sub-Poissonian function d_h^(l-1) = m_l - m_1^l.
* Agarwal-Tara A3 determinant ratio over 3x3 moment matrices.

Raw photon-number moments are always derived from factorial moments via
Stirling numbers of the second kind, so every criterion is a function of
the normalization ladder alone.  Undefined values (vacuum mean) are
reported as NaN plus a flag, never raised, so sweeps survive them.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import CancellationWarning, UndefinedStateError
from .moments import (
    Ordering,
    StateModification,
    modified_moment_sequence,
)

# |det(mu) - det(m)| below this fraction of the largest cofactor product
# means the A3 denominator carries no significant digits
DET_DEGENERACY_TOL = 1e-10


@lru_cache(maxsize=None)
def stirling2(z, k):
    """Stirling number of the second kind S(z, k), exact integer."""
    if k < 0 or z < 0 or k > z:
        raise ValueError("need 0 <= k <= z")
    if z == k:
        return 1
    if k == 0:
        return 0
    return k * stirling2(z - 1, k) + stirling2(z - 1, k - 1)


def mu_from_m(m, z_max=None):
    """Raw moments mu_z = <n^z> from factorial moments via Stirling weights.

    mu_z = sum_{k=1..z} S(z,k) m_k; weights are exact integers.
    """
    if z_max is None:
        z_max = len(m) - 1
    if len(m) <= z_max:
        raise ValueError(f"need factorial moments up to order {z_max}")
    mu = np.empty(z_max + 1)
    mu[0] = 1.0
    for z in range(1, z_max + 1):
        mu[z] = math.fsum(stirling2(z, k) * float(m[k]) for k in range(1, z + 1))
    return mu


@dataclass(frozen=True)
class MomentPair:
    """Factorial moments m and raw moments mu of one state, same length."""

    m: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.float64)
        mu = np.asarray(self.mu, dtype=np.float64)
        if m.shape != mu.shape:
            raise ValueError("m and mu must have equal length")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_factorial(cls, m):
        return cls(np.asarray(m, dtype=np.float64), mu_from_m(m))


def mandel_q(m1, m2):
    """Mandel Q = (m_2 - m_1^2)/m_1; NaN when the mean vanishes.

    Negative values indicate sub-Poissonian statistics; -1 is the Fock
    floor, 0 the Poissonian boundary.
    """
    if m1 == 0.0:
        return math.nan
    return (m2 - m1 * m1) / m1


def mandel_q_subtracted(ladder, n):
    """Mandel Q of the n-photon-subtracted state straight off the ladder:
    N_{n+2}/N_{n+1} - N_{n+1}/N_n."""
    if ladder.ordering is not Ordering.NORMAL:
        raise ValueError("ladder must be normally ordered")
    if ladder.order < n + 2:
        raise ValueError(f"ladder covers 0..{ladder.order}, need {n + 2}")
    v = ladder.values
    if v[n] <= 0.0 or v[n + 1] <= 0.0:
        raise UndefinedStateError(
            f"subtracting {n} photons leaves no state with positive mean")
    return float(v[n + 2] / v[n + 1] - v[n + 1] / v[n])


def mandel_q_added(ladder, m):
    """Mandel Q of the m-photon-added state straight off the ladder:
    (N_{m+2} - 4 N_{m+1} + 2 N_m)/(N_{m+1} - N_m) - (N_{m+1} - N_m)/N_m."""
    if ladder.ordering is not Ordering.ANTINORMAL:
        raise ValueError("ladder must be anti-normally ordered")
    if ladder.order < m + 2:
        raise ValueError(f"ladder covers 0..{ladder.order}, need {m + 2}")
    v = ladder.values
    if v[m + 1] <= v[m]:
        raise ValueError(
            "anti-normal ladder is not strictly increasing at "
            f"k={m}; corrupted ladder or mean-zero state")
    mean = (v[m + 1] - v[m]) / v[m]
    second = math.fsum((v[m + 2], -4.0 * v[m + 1], 2.0 * v[m]))
    return float(second / (v[m + 1] - v[m]) - mean)


def lee_dh(m, ell):
    """Lee function d_h^(ell-1) = m_ell - m_1^ell for ell >= 2.

    Negative values witness higher-order sub-Poissonian statistics.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    if len(m) <= ell:
        raise ValueError(f"need factorial moments up to order {ell}")
    return float(m[ell] - float(m[1]) ** ell)


def poisson_central_moment(lam, order):
    """Central moment <(n - lam)^order> of a Poisson distribution, even order.

    Raw moments come from the Stirling expansion E[n^z] = sum_k S(z,k) lam^k
    (Touchard polynomial), then the binomial central-moment conversion.
    """
    if order < 2 or order % 2 != 0:
        raise ValueError("order must be an even integer >= 2")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    raw = [1.0] + [
        math.fsum(stirling2(z, k) * lam ** k for k in range(1, z + 1))
        for z in range(1, order + 1)
    ]
    return math.fsum(
        math.comb(order, j) * raw[j] * (-lam) ** (order - j)
        for j in range(order + 1)
    )


def q_ell_normal(m, ell):
    """Generalized Mandel parameter, normally ordered form.

    <:(Delta n)^(2l):> / O_2l(m_1), with the numerator expanded over
    factorial moments: sum_j C(2l,j) (-m_1)^(2l-j) m_j.  Equals mandel_q
    at l = 1; NaN when the mean vanishes.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if len(m) <= 2 * ell:
        raise ValueError(f"need factorial moments up to order {2 * ell}")
    m1 = float(m[1])
    if m1 == 0.0:
        return math.nan
    num = math.fsum(
        math.comb(2 * ell, j) * (-m1) ** (2 * ell - j) * float(m[j])
        for j in range(2 * ell + 1)
    )
    return num / poisson_central_moment(m1, 2 * ell)


def q_ell_central(mu, ell):
    """Generalized Mandel parameter, plain central-moment form.

    (<(Delta n)^(2l)> - O_2l(mu_1)) / O_2l(mu_1), the central moment
    expanded from raw moments.  Equals mandel_q at l = 1; NaN when the
    mean vanishes.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if len(mu) <= 2 * ell:
        raise ValueError(f"need raw moments up to order {2 * ell}")
    mu1 = float(mu[1])
    if mu1 == 0.0:
        return math.nan
    central = math.fsum(
        math.comb(2 * ell, j) * (-mu1) ** (2 * ell - j) * float(mu[j])
        for j in range(2 * ell + 1)
    )
    o2l = poisson_central_moment(mu1, 2 * ell)
    return (central - o2l) / o2l


@dataclass(frozen=True)
class DegenerateA3:
    """Marker for an A3 with a vanishing denominator (0/0-type case)."""

    det_m: float
    det_mu: float


def _det3(a):
    # fully expanded cofactor form, exactly rounded over the 6 products
    return math.fsum((
        a[0][0] * a[1][1] * a[2][2],
        -a[0][0] * a[1][2] * a[2][1],
        -a[0][1] * a[1][0] * a[2][2],
        a[0][1] * a[1][2] * a[2][0],
        a[0][2] * a[1][0] * a[2][1],
        -a[0][2] * a[1][1] * a[2][0],
    ))


def _cofactor_scale(a):
    # largest first-row entry times its 2x2 minor, in magnitude
    minors = (
        a[1][1] * a[2][2] - a[1][2] * a[2][1],
        a[1][0] * a[2][2] - a[1][2] * a[2][0],
        a[1][0] * a[2][1] - a[1][1] * a[2][0],
    )
    return max(abs(a[0][j] * minors[j]) for j in range(3))


def _hankel3(seq):
    return [[float(seq[0]), float(seq[1]), float(seq[2])],
            [float(seq[1]), float(seq[2]), float(seq[3])],
            [float(seq[2]), float(seq[3]), float(seq[4])]]


def agarwal_tara(m, mu=None, tol_det=DET_DEGENERACY_TOL):
    """Agarwal-Tara A3 = det(m3) / (det(mu3) - det(m3)).

    m3 and mu3 are the 3x3 Hankel matrices of factorial and raw moments of
    orders 0..4; mu defaults to the Stirling conversion of m.  A3 < 0
    witnesses nonclassicality.  When the denominator is smaller than
    tol_det times the largest cofactor product, the ratio is meaningless
    and a DegenerateA3 marker carrying both determinants is returned.
    """
    if len(m) < 5:
        raise ValueError("need factorial moments up to order 4")
    if mu is None:
        mu = mu_from_m(m, 4)
    mat_m = _hankel3(m)
    mat_mu = _hankel3(mu)
    det_m = _det3(mat_m)
    det_mu = _det3(mat_mu)
    denom = det_mu - det_m
    scale = max(_cofactor_scale(mat_m), _cofactor_scale(mat_mu))
    if abs(denom) <= tol_det * scale:
        return DegenerateA3(det_m=det_m, det_mu=det_mu)
    return det_m / denom


@dataclass(frozen=True)
class CriteriaReport:
    """Every criterion for one (state, modification) pair.

    Maps are keyed by l for the generalized Mandel families and by the
    order h = l - 1 for the Lee family (so lee_dh[1] = m_2 - m_1^2).
    Undefined entries are NaN and carry a flag; a3 may be a DegenerateA3
    marker.  flags is a sorted tuple of diagnostic tokens.
    """

    mean: float
    mandel_q: float
    q_ell_normal: dict = field(default_factory=dict)
    q_ell_central: dict = field(default_factory=dict)
    lee_dh: dict = field(default_factory=dict)
    a3: object = math.nan
    flags: tuple = ()

    @property
    def undefined(self):
        return "undefined_state" in self.flags


def _undefined_report(flags):
    return CriteriaReport(mean=math.nan, mandel_q=math.nan, a3=math.nan,
                          flags=tuple(sorted(set(flags))))


def evaluate_all(dist, mod=None, ell_max=3):
    """Evaluate every criterion for dist under the given modification.

    One moment ladder of order count + max(2*ell_max, 4) serves all
    criteria.  Degenerate or undefined entries populate flags instead of
    raising, so parameter sweeps always get a report back.
    """
    if ell_max < 1:
        raise ValueError("ell_max must be at least 1")
    if mod is None:
        mod = StateModification.identity()
    x_max = max(2 * ell_max, ell_max + 1, 4)
    flags = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CancellationWarning)
        try:
            m = modified_moment_sequence(dist, mod, x_max)
        except UndefinedStateError:
            return _undefined_report(["undefined_state"])
    if any(issubclass(w.category, CancellationWarning) for w in caught):
        flags.append("cancellation")

    mu = mu_from_m(m)
    mean = float(m[1])
    q = mandel_q(mean, float(m[2]))
    if mean == 0.0:
        flags.append("undefined_mean")

    qn = {ell: q_ell_normal(m, ell) for ell in range(1, ell_max + 1)}
    qc = {ell: q_ell_central(mu, ell) for ell in range(1, ell_max + 1)}
    dh = {ell - 1: lee_dh(m, ell) for ell in range(2, ell_max + 2)}
    a3 = agarwal_tara(m, mu=None)
    if isinstance(a3, DegenerateA3):
        flags.append("a3_degenerate")

    return CriteriaReport(
        mean=mean,
        mandel_q=q,
        q_ell_normal=qn,
        q_ell_central=qc,
        lee_dh=dh,
        a3=a3,
        flags=tuple(sorted(set(flags))),
    )
