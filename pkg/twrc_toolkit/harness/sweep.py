"""
Seeded Monte Carlo sweeps and the experiment runner behind the CLI.

Usage:
    from twrc_toolkit.harness import ExperimentConfig, Mode, run_sweep, run_experiment

    cfg = ExperimentConfig(mode=Mode.SER_SUM, q=2, snr_db_grid=[0, 5, 10], trials=10 ** 6, seed=7)
    for row in run_sweep(cfg):
        print(row.snr_db, row.analytic, row.empirical, row.stderr)

    run_experiment(ExperimentConfig(mode='Bounds', powers=PowerProfile(15, 15, 15))).bound

Trials at each grid point are split into shards of TWRC_SHARD_SIZE. Shard j of
grid point i draws from SeedSequence(seed, spawn_key=(i, j)), and shard error
counts are summed, so results do not depend on the worker count or on the
order in which shards finish.
"""

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from django.core.exceptions import ValidationError

from ..capacity import (
    BoundReport,
    PowerProfile,
    Strategy,
    db_to_linear,
    exchange_rate,
    sic_efficiency,
    sic_rates,
    upper_bound,
)
from ..coding import parse_code_spec, pnc_chain_batch
from ..conf import get_setting, resolve_workers
from ..netfn import NetFnReport, builtin, check_conditions, load_netfn
from ..phy import (
    NoiseModel,
    PamScheme,
    SumConstellation,
    detect,
    detect_sum,
    modulate,
    pnc_demap,
    ser_p2p_analytic,
    ser_pnc_analytic,
    ser_sum_analytic,
    superimpose_and_noise,
)


logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64


class Mode(enum.Enum):
    SER_P2P = 'SerP2p'
    SER_SUM = 'SerSum'
    SER_PNC = 'SerPnc'
    CHAIN = 'Chain'
    BOUNDS = 'Bounds'
    RATES = 'Rates'
    NETFN_CHECK = 'NetFnCheck'


SWEEP_MODES = (Mode.SER_P2P, Mode.SER_SUM, Mode.SER_PNC, Mode.CHAIN)


def _invalid(message):
    return ValidationError(message, code='invalid_config')


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything needed to rerun an experiment bit for bit.

    Sweep modes and Rates need a non-empty snr_db_grid, Chain needs a
    code_spec such as 'rep:5', Bounds needs powers and NetFnCheck needs
    either a builtin netfn name or a table_path.
    """

    mode: Mode
    q: int = 2
    snr_db_grid: tuple = ()
    trials: int = 100000
    seed: int = 0
    code_spec: str = None
    powers: PowerProfile = None
    netfn: str = None
    table_path: str = None

    def __post_init__(self):
        try:
            mode = Mode(self.mode)
        except ValueError:
            raise _invalid(f"Unknown mode {self.mode!r}")
        object.__setattr__(self, 'mode', mode)

        try:
            grid = tuple(float(snr) for snr in self.snr_db_grid)
        except (TypeError, ValueError):
            raise _invalid(f"SNR grid must be a list of numbers, got {self.snr_db_grid!r}")
        if not all(math.isfinite(snr) for snr in grid):
            raise _invalid("SNR grid values must be finite")
        object.__setattr__(self, 'snr_db_grid', grid)

        if int(self.q) != self.q or self.q < 2:
            raise _invalid(f"q must be an integer >= 2, got {self.q}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise _invalid(f"trials must be an integer >= 1, got {self.trials}")
        if int(self.seed) != self.seed or not 0 <= self.seed < SEED_LIMIT:
            raise _invalid(f"seed must be an integer in [0, 2**64), got {self.seed}")
        object.__setattr__(self, 'q', int(self.q))
        object.__setattr__(self, 'trials', int(self.trials))
        object.__setattr__(self, 'seed', int(self.seed))

        if (mode in SWEEP_MODES or mode == Mode.RATES) and not grid:
            raise _invalid(f"{mode.value} needs a non-empty SNR grid")
        if mode == Mode.CHAIN and not self.code_spec:
            raise _invalid("Chain needs a code spec such as 'rep:5' or 'spc:2'")
        if mode == Mode.BOUNDS and self.powers is None:
            raise _invalid("Bounds needs a power profile")
        if mode == Mode.NETFN_CHECK and not (self.netfn or self.table_path):
            raise _invalid("NetFnCheck needs a builtin name or a table path")

    def to_dict(self):
        return {
            'mode': self.mode.value,
            'q': self.q,
            'snr_db_grid': list(self.snr_db_grid),
            'trials': self.trials,
            'seed': self.seed,
            'code_spec': self.code_spec,
            'powers': self.powers.to_dict() if self.powers else None,
            'netfn': self.netfn,
            'table_path': self.table_path,
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        if data.get('powers'):
            data['powers'] = PowerProfile(**data['powers'])
        return cls(**data)


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    analytic: float
    empirical: float
    stderr: float
    trials: int

    columns = ('snr_db', 'analytic', 'empirical', 'stderr', 'trials')

    @classmethod
    def from_counts(cls, snr_db, analytic, errors, trials):
        empirical = errors / trials
        return cls(
            snr_db=float(snr_db),
            analytic=float(analytic),
            empirical=float(empirical),
            stderr=math.sqrt(empirical * (1.0 - empirical) / trials),
            trials=int(trials),
        )

    def to_dict(self):
        return {name: getattr(self, name) for name in self.columns}


@dataclass(frozen=True)
class RateRow:
    snr_db: float
    upper_bound: float
    sic_rate: float
    efficiency: float
    regime: str

    columns = ('snr_db', 'upper_bound', 'sic_rate', 'efficiency', 'regime')

    def to_dict(self):
        return {name: getattr(self, name) for name in self.columns}


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    rows: tuple = ()
    bound: BoundReport = None
    exchanges: tuple = ()
    netfn_report: NetFnReport = None

    @property
    def records(self):
        """The flat records written to CSV."""
        if self.rows:
            return self.rows
        if self.exchanges:
            return self.exchanges
        return (self.netfn_report,) if self.netfn_report else ()

    def to_dict(self):
        return {
            'config': self.config.to_dict(),
            'rows': [row.to_dict() for row in self.rows],
            'bound': self.bound.to_dict() if self.bound else None,
            'exchanges': [report.to_dict() for report in self.exchanges],
            'netfn_report': self.netfn_report.to_dict() if self.netfn_report else None,
        }


def _shard_sizes(trials, shard_size):
    full, rest = divmod(trials, shard_size)
    return [shard_size] * full + ([rest] if rest else [])


def _shard_rng(seed, grid_index, shard_index):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(grid_index, shard_index)))


def _p2p_errors(scheme, n, rng):
    u = rng.integers(0, scheme.q, size=n)
    y = modulate(u, scheme) + NoiseModel().sample(n, rng)
    return int(np.count_nonzero(detect(y, scheme) != u))


def _relay_detection(scheme, n, rng):
    # SerSum and SerPnc share this draw order, so their errors are nested
    u1 = rng.integers(0, scheme.q, size=n)
    u2 = rng.integers(0, scheme.q, size=n)
    y = superimpose_and_noise(modulate(u1, scheme), modulate(u2, scheme), NoiseModel(), rng)
    return detect_sum(y, SumConstellation.for_scheme(scheme)), u1 + u2


def _sum_errors(scheme, n, rng):
    m_hat, m = _relay_detection(scheme, n, rng)
    return int(np.count_nonzero(m_hat != m))


def _pnc_errors(scheme, n, rng):
    m_hat, m = _relay_detection(scheme, n, rng)
    return int(np.count_nonzero(pnc_demap(m_hat, scheme.q) != m % scheme.q))


def _chain_errors(code, scheme, n, rng):
    w1 = rng.integers(0, code.q, size=(n, code.k))
    w2 = rng.integers(0, code.q, size=(n, code.k))
    _, packet_errors, _ = pnc_chain_batch(code, scheme, w1, w2, rng)
    return int(np.count_nonzero(packet_errors))


def _count_errors(count, cfg, grid_index, executor):
    sizes = _shard_sizes(cfg.trials, get_setting('TWRC_SHARD_SIZE'))

    def run_shard(shard_index):
        return count(sizes[shard_index], _shard_rng(cfg.seed, grid_index, shard_index))

    return sum(executor.map(run_shard, range(len(sizes)))), len(sizes)


def run_sweep(cfg):
    """
    Estimate error rates over the SNR grid of a sweep-mode config.

    Returns:
        list[SweepRow]: One row per grid point, in grid order.
    """
    if cfg.mode not in SWEEP_MODES:
        raise _invalid(f"{cfg.mode.value} is not a sweep mode")

    code = parse_code_spec(cfg.code_spec, cfg.q) if cfg.mode == Mode.CHAIN else None
    if code is not None:
        # Fail fast on codebooks that cannot be enumerated
        code.codebook

    rows = []
    with ThreadPoolExecutor(max_workers=resolve_workers()) as executor:
        for grid_index, snr_db in enumerate(cfg.snr_db_grid):
            scheme = PamScheme.from_snr_db(cfg.q, snr_db)
            if cfg.mode == Mode.SER_P2P:
                count, analytic = partial(_p2p_errors, scheme), ser_p2p_analytic(scheme)
            elif cfg.mode == Mode.SER_SUM:
                count, analytic = partial(_sum_errors, scheme), ser_sum_analytic(scheme)
            elif cfg.mode == Mode.SER_PNC:
                count, analytic = partial(_pnc_errors, scheme), ser_pnc_analytic(scheme)
            else:
                # analytic column is the uncoded PNC symbol error
                count, analytic = partial(_chain_errors, code, scheme), ser_pnc_analytic(scheme)

            errors, shards = _count_errors(count, cfg, grid_index, executor)
            row = SweepRow.from_counts(snr_db, analytic, errors, cfg.trials)
            logger.info(
                f"{cfg.mode.value} q={cfg.q} at {snr_db} dB: {errors}/{cfg.trials} errors",
                extra={
                    'mode': cfg.mode.value,
                    'q': cfg.q,
                    'snr_db': snr_db,
                    'trials': cfg.trials,
                    'errors': errors,
                    'shards': shards,
                },
            )
            rows.append(row)
    return rows


def rate_rows(snr_db_grid):
    """Bound, SIC rate and SIC efficiency with p1 = p2 = p3 = 10^(dB/10)."""
    rows = []
    for snr_db in snr_db_grid:
        pp = PowerProfile.symmetric(db_to_linear(snr_db))
        rows.append(RateRow(
            snr_db=float(snr_db),
            upper_bound=upper_bound(pp).upper_bound,
            sic_rate=exchange_rate(pp, Strategy.SIC_NETWORK_CODING).rate,
            efficiency=sic_efficiency(pp),
            regime=sic_rates(pp).regime.value,
        ))
    return rows


def run_experiment(cfg):
    """
    Run any experiment mode.

    Returns:
        ExperimentResult: rows for sweep and Rates modes, bound and exchanges
        for Bounds, netfn_report for NetFnCheck.
    """
    if cfg.mode in SWEEP_MODES:
        return ExperimentResult(config=cfg, rows=tuple(run_sweep(cfg)))

    if cfg.mode == Mode.RATES:
        return ExperimentResult(config=cfg, rows=tuple(rate_rows(cfg.snr_db_grid)))

    if cfg.mode == Mode.BOUNDS:
        return ExperimentResult(
            config=cfg,
            bound=upper_bound(cfg.powers),
            exchanges=tuple(exchange_rate(cfg.powers, strategy) for strategy in Strategy),
        )

    f = load_netfn(cfg.table_path) if cfg.table_path else builtin(cfg.netfn, cfg.q)
    return ExperimentResult(config=cfg, netfn_report=check_conditions(f))
