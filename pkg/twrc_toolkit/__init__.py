"""
TWRC Toolkit - capacity, relay-function and PNC tooling for the three-node
two-way relay channel.

This package provides:

Capacity (capacity):
- PowerProfile, upper_bound, sic_rates, low_snr_gap, combine_rates
- exchange_rate for cut-set, SIC + network coding and PNC + network coding

Relay functions (netfn):
- NetFn tables, builtins (xor, modq-add, int-sum, const)
- exact entropy analysis of the recoverability and independence conditions

Physical layer (phy):
- q-ary PAM, AWGN superposition, midpoint detection, PNC demapping
- analytic point-to-point, superimposed and PNC symbol error rates

Coding (coding):
- ring-linear repetition and single-parity-check codes over Z_q
- nearest-codeword decoding and the end-to-end PNC uplink chain

Harness (harness):
- sharded, seeded Monte Carlo sweeps, CSV/JSON reports
- management commands twrc_bounds, twrc_rates, twrc_ser, twrc_chain, twrc_netfn
- the `twrc` console script
"""

__version__ = '1.0.0'
__author__ = 'TWRC Toolkit'

default_app_config = 'twrc_toolkit.apps.TwrcToolkitConfig'
