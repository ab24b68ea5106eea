"""
Analytic symbol error rates under midpoint detection and unit-variance noise.

Usage:
    from twrc_toolkit.phy import PamScheme, ser_p2p_analytic, ser_sum_analytic

    scheme = PamScheme(q=2, alpha=1.0)
    ser_p2p_analytic(scheme)    # 0.15866
    ser_sum_analytic(scheme)    # 0.23798
    ser_pnc_analytic(scheme)    # PNC error after the mod-q collapse
"""

import math

import numpy as np
from django.core.exceptions import ValidationError
from scipy.special import erfc
from scipy.stats import norm

from .pam import SumConstellation


def gaussian_two_sided_tail(a):
    """
    Pr(|n| >= a) for n ~ N(0, 1).

    Args:
        a: Non-negative threshold.
    """
    a = float(a)
    if not a >= 0:
        raise ValidationError(f"Threshold must be >= 0, got {a}", code='invalid_threshold')
    return float(erfc(a / math.sqrt(2.0)))


def ser_p2p_analytic(scheme):
    """Point-to-point PAM symbol error rate, ((q-1)/q) Pr(|n| >= d/2)."""
    q = scheme.q
    return (q - 1) / q * gaussian_two_sided_tail(scheme.spacing / 2.0)


def ser_sum_analytic(scheme):
    """
    Detection error rate on the superimposed constellation.

    The two end points err on one side only; interior points err on both.
    The probability-weighted mix equals ((q^2-1)/q^2) Pr(|n| >= d/2).
    """
    sc = SumConstellation.for_scheme(scheme)
    probs = sc.probs
    two_sided = gaussian_two_sided_tail(scheme.spacing / 2.0)
    one_sided = 0.5 * two_sided

    end_points = probs[0] * one_sided + probs[-1] * one_sided
    interior = probs[1:-1].sum() * two_sided
    return float(end_points + interior)


def _interval_prob(lo, hi):
    """Pr(lo < n <= hi) computed on whichever tail keeps precision."""
    upper_tail = norm.sf(lo) - norm.sf(hi)
    lower_tail = norm.cdf(hi) - norm.cdf(lo)
    middle = 1.0 - norm.cdf(lo) - norm.sf(hi)
    return np.where(lo >= 0, upper_tail, np.where(hi <= 0, lower_tail, middle))


def ser_pnc_analytic(scheme):
    """
    Exact PNC symbol error after midpoint detection and the mod-q collapse.

    A detection error only matters when the detected index lands in a
    different residue class mod q, so this never exceeds ser_sum_analytic.
    """
    sc = SumConstellation.for_scheme(scheme)
    q = sc.q
    edges = np.concatenate(([-np.inf], sc.thresholds, [np.inf]))
    points = sc.points

    # transition[m, j] = Pr(detected j | sent m)
    lo = edges[None, :-1] - points[:, None]
    hi = edges[None, 1:] - points[:, None]
    transition = _interval_prob(lo, hi)

    m, j = np.meshgrid(np.arange(2 * q - 1), np.arange(2 * q - 1), indexing='ij')
    wrong_class = (m - j) % q != 0
    return float((sc.probs[:, None] * transition * wrong_class).sum())
