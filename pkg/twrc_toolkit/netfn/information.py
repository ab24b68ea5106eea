"""
Exact entropy analysis of relay functions.

Usage:
    from twrc_toolkit.netfn import builtin, check_conditions

    report = check_conditions(builtin('xor', 2))
    report.valid                  # True
    report.i_w3_w1                # 0.0 bits

W1 and W2 are independent uniform symbols over Z_q, so the joint pmf of
(W1, W2, W3) has q^2 equiprobable atoms and every quantity is computed exactly
by summation. The joint array is indexed [w1, w2, w3].
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError
from scipy.special import rel_entr
from scipy.stats import entropy as scipy_entropy

from ..conf import get_setting


logger = logging.getLogger(__name__)

W1, W2, W3 = 0, 1, 2

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class NetFnReport:
    h_w2_given_w1w3: float
    h_w1_given_w2w3: float
    i_w3_w1: float
    i_w3_w2: float
    satisfies_recoverability: bool
    satisfies_independence: bool
    valid: bool
    tol: float

    def to_dict(self):
        return {
            'h_w2_given_w1w3': self.h_w2_given_w1w3,
            'h_w1_given_w2w3': self.h_w1_given_w2w3,
            'i_w3_w1': self.i_w3_w1,
            'i_w3_w2': self.i_w3_w2,
            'satisfies_recoverability': self.satisfies_recoverability,
            'satisfies_independence': self.satisfies_independence,
            'valid': self.valid,
            'tol': self.tol,
        }


def _check_pmf(pmf):
    pmf = np.asarray(pmf, dtype=float)
    if pmf.size == 0 or np.any(pmf < 0) or not np.all(np.isfinite(pmf)):
        raise ValidationError("pmf entries must be finite and >= 0", code='not_normalized')
    total = pmf.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"pmf sums to {total}, expected 1", code='not_normalized')
    return pmf


def _marginal(joint, keep):
    """Sum out every axis not in keep, keeping dimensions for broadcasting."""
    drop = tuple(axis for axis in range(joint.ndim) if axis not in keep)
    return joint.sum(axis=drop, keepdims=True)


def entropy(pmf):
    """Shannon entropy in bits of a pmf of any shape."""
    pmf = _check_pmf(pmf)
    return float(scipy_entropy(pmf.reshape(-1), base=2))


def conditional_entropy(joint, target, given):
    """
    H(target | given) in bits.

    Args:
        joint: Joint pmf array, one axis per variable.
        target: Axes of the target variables.
        given: Axes of the conditioning variables (may be empty).
    """
    joint = _check_pmf(joint)
    target, given = tuple(target), tuple(given)
    p_tg = _marginal(joint, target + given)
    p_g = _marginal(joint, given)
    # sum p(t, g) log p(t, g) / p(g), with 0 log 0 = 0, never below zero
    return max(0.0, float(-rel_entr(p_tg, np.broadcast_to(p_g, p_tg.shape)).sum() / math.log(2)))


def mutual_information(joint, a, b):
    """I(a; b) in bits, as the divergence of p(a, b) from p(a) p(b)."""
    joint = _check_pmf(joint)
    a, b = tuple(a), tuple(b)
    p_ab = _marginal(joint, a + b)
    product = _marginal(joint, a) * _marginal(joint, b)
    return float(rel_entr(p_ab, product).sum() / math.log(2))


def joint_pmf(f):
    """
    Joint pmf of (W1, W2, W3 = f(W1, W2)) for independent uniform inputs.

    Returns:
        np.ndarray: Shape (q, q, m).
    """
    q = f.q
    joint = np.zeros((q, q, f.m))
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing='ij')
    joint[a, b, f.table] = 1.0 / (q * q)
    return joint


def check_conditions(f, tol=None):
    """
    Check whether f can carry the downlink at full rate.

    Recoverability: each end recovers the other's message from W3 and its own
    (H(W2|W1,W3) = H(W1|W2,W3) = 0). Independence: W3 reveals nothing about
    either input alone (I(W3;W1) = I(W3;W2) = 0).

    Args:
        f: The relay function.
        tol: Zero-test tolerance in bits (defaults to TWRC_ENTROPY_TOL).
    """
    tol = get_setting('TWRC_ENTROPY_TOL') if tol is None else float(tol)
    if not tol > 0:
        raise ValidationError(f"tol must be > 0, got {tol}", code='invalid_tol')

    joint = joint_pmf(f)
    h_w2 = conditional_entropy(joint, (W2,), (W1, W3))
    h_w1 = conditional_entropy(joint, (W1,), (W2, W3))
    i_w1 = mutual_information(joint, (W3,), (W1,))
    i_w2 = mutual_information(joint, (W3,), (W2,))

    recoverable = h_w2 <= tol and h_w1 <= tol
    independent = i_w1 <= tol and i_w2 <= tol

    logger.debug(
        f"Checked {f.name} over q={f.q}: recoverable={recoverable} independent={independent}",
        extra={'netfn': f.name, 'q': f.q, 'm': f.m},
    )

    return NetFnReport(
        h_w2_given_w1w3=h_w2,
        h_w1_given_w2w3=h_w1,
        i_w3_w1=i_w1,
        i_w3_w2=i_w2,
        satisfies_recoverability=recoverable,
        satisfies_independence=independent,
        valid=recoverable and independent,
        tol=tol,
    )


def verify_identity_chain(f):
    """
    Residuals of the two information identities behind the validity conditions.

    H(W2|W1) - H(W3|W1) = H(W2|W3,W1) holds for any deterministic f, and
    H(W3) - H(W3|W1) = I(W3;W1) always. Each side is computed independently.

    Returns:
        tuple: (chain-rule residual, mutual-information residual), both in bits.
    """
    joint = joint_pmf(f)
    h_w2_w1 = conditional_entropy(joint, (W2,), (W1,))
    h_w3_w1 = conditional_entropy(joint, (W3,), (W1,))
    h_w2_w3w1 = conditional_entropy(joint, (W2,), (W3, W1))
    h_w3 = entropy(_marginal(joint, (W3,)))
    i_w3_w1 = mutual_information(joint, (W3,), (W1,))

    chain = abs(h_w2_w1 - h_w3_w1 - h_w2_w3w1)
    info = abs(h_w3 - h_w3_w1 - i_w3_w1)
    return chain, info
