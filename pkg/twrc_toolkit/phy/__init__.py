"""q-ary PAM, the relay superposition channel and symbol error rates."""

from .pam import (
    PamScheme,
    SumConstellation,
    modulate,
    detect,
    detect_sum,
    pnc_demap,
)
from .channel import NoiseModel, superimpose_and_noise
from .ser import (
    gaussian_two_sided_tail,
    ser_p2p_analytic,
    ser_sum_analytic,
    ser_pnc_analytic,
)

__all__ = [
    'PamScheme',
    'SumConstellation',
    'modulate',
    'detect',
    'detect_sum',
    'pnc_demap',
    'NoiseModel',
    'superimpose_and_noise',
    'gaussian_two_sided_tail',
    'ser_p2p_analytic',
    'ser_sum_analytic',
    'ser_pnc_analytic',
]
