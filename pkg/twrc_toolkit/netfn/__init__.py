"""Relay functions and their exact information-theoretic checks."""

from .functions import (
    BUILTINS,
    NetFn,
    builtin,
    load_netfn,
    random_netfn,
    recover_partner,
    broadcast_exchange,
)
from .information import (
    NetFnReport,
    entropy,
    conditional_entropy,
    mutual_information,
    joint_pmf,
    check_conditions,
    verify_identity_chain,
)

__all__ = [
    'BUILTINS',
    'NetFn',
    'builtin',
    'load_netfn',
    'random_netfn',
    'recover_partner',
    'broadcast_exchange',
    'NetFnReport',
    'entropy',
    'conditional_entropy',
    'mutual_information',
    'joint_pmf',
    'check_conditions',
    'verify_identity_chain',
]
