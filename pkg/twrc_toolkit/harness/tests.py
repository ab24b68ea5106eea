"""Tests for the sweep engine, reports, management commands and twrc CLI."""

import json
import math
from io import StringIO

import pytest
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError

from ..capacity import PowerProfile, Strategy
from ..coding import CodebookTooLarge
from ..conf import resolve_workers
from .cli import cli
from .reports import format_table, read_csv, read_json, write_csv, write_json
from .sweep import ExperimentConfig, Mode, RateRow, SweepRow, run_experiment, run_sweep


GRID = [0.0, 5.0, 10.0]


def within_four_stderr(row):
    return abs(row.empirical - row.analytic) <= 4 * row.stderr


class TestExperimentConfig:
    """Test cases for ExperimentConfig."""

    def test_mode_from_string(self):
        """Test modes may be given by value."""
        cfg = ExperimentConfig(mode='SerSum', snr_db_grid=[0])
        assert cfg.mode == Mode.SER_SUM
        assert cfg.snr_db_grid == (0.0,)

    @pytest.mark.parametrize('kwargs', [
        {'mode': 'Nope', 'snr_db_grid': [0]},
        {'mode': 'SerP2p'},
        {'mode': 'SerP2p', 'snr_db_grid': [0], 'trials': 0},
        {'mode': 'SerP2p', 'snr_db_grid': [0], 'q': 1},
        {'mode': 'SerP2p', 'snr_db_grid': [0], 'seed': -1},
        {'mode': 'SerP2p', 'snr_db_grid': [0], 'seed': 2 ** 64},
        {'mode': 'SerP2p', 'snr_db_grid': [float('nan')]},
        {'mode': 'Chain', 'snr_db_grid': [0]},
        {'mode': 'Bounds'},
        {'mode': 'Rates'},
        {'mode': 'NetFnCheck'},
    ])
    def test_invalid(self, kwargs):
        """Test invalid configs raise with the invalid_config code."""
        with pytest.raises(ValidationError) as exc_info:
            ExperimentConfig(**kwargs)
        assert exc_info.value.code == 'invalid_config'

    def test_dict_round_trip(self):
        """Test a config survives to_dict and from_dict."""
        cfg = ExperimentConfig(mode=Mode.BOUNDS, powers=PowerProfile(1, 2, 3), seed=9)
        assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


class TestSweepRow:
    """Test cases for SweepRow."""

    def test_from_counts(self):
        """Test the binomial standard error."""
        row = SweepRow.from_counts(0, 0.2, 25, 100)
        assert row.empirical == 0.25
        assert row.stderr == pytest.approx((0.25 * 0.75 / 100) ** 0.5)

    def test_no_errors(self):
        """Test zero errors give zero standard error."""
        row = SweepRow.from_counts(10, 1e-9, 0, 1000)
        assert row.empirical == 0.0
        assert row.stderr == 0.0


class TestRunSweep:
    """Statistical checks of the Monte Carlo sweeps against closed forms."""

    def test_p2p_binary_zero_db(self):
        """Test binary PAM at 0 dB against 0.15866."""
        cfg = ExperimentConfig(mode=Mode.SER_P2P, q=2, snr_db_grid=[0], trials=10 ** 6, seed=7)
        row, = run_sweep(cfg)
        assert row.analytic == pytest.approx(0.158655, abs=1e-6)
        assert abs(row.empirical - 0.15866) <= 4 * row.stderr

    def test_sum_binary_zero_db(self):
        """Test the superimposed constellation at 0 dB against 0.23798."""
        cfg = ExperimentConfig(mode=Mode.SER_SUM, q=2, snr_db_grid=[0], trials=10 ** 6, seed=7)
        row, = run_sweep(cfg)
        assert row.analytic == pytest.approx(0.237983, abs=1e-6)
        assert abs(row.empirical - 0.23798) <= 4 * row.stderr

    @pytest.mark.parametrize('q', [2, 4, 8])
    def test_p2p_grid(self, q):
        """Test point-to-point SER over the SNR grid with 10^6 trials."""
        cfg = ExperimentConfig(mode=Mode.SER_P2P, q=q, snr_db_grid=GRID, trials=10 ** 6, seed=11)
        for row in run_sweep(cfg):
            assert within_four_stderr(row), row

    @pytest.mark.parametrize('q', [2, 4, 8])
    def test_sum_grid(self, q):
        """Test superimposed SER over the SNR grid and its ratio to the p2p SER."""
        sums = run_sweep(ExperimentConfig(mode=Mode.SER_SUM, q=q, snr_db_grid=GRID, trials=10 ** 6, seed=12))
        p2p = run_sweep(ExperimentConfig(mode=Mode.SER_P2P, q=q, snr_db_grid=GRID, trials=1, seed=12))
        for row, reference in zip(sums, p2p):
            assert within_four_stderr(row), row
            assert row.analytic / reference.analytic == pytest.approx((q + 1) / q, rel=1e-12)

    @pytest.mark.parametrize('q', [2, 4, 8])
    def test_pnc_never_exceeds_sum(self, q):
        """Test PNC errors are bounded by detection errors on identical draws."""
        sums = run_sweep(ExperimentConfig(mode=Mode.SER_SUM, q=q, snr_db_grid=GRID, trials=10 ** 6, seed=13))
        pncs = run_sweep(ExperimentConfig(mode=Mode.SER_PNC, q=q, snr_db_grid=GRID, trials=10 ** 6, seed=13))
        for pnc, detection in zip(pncs, sums):
            assert pnc.empirical <= detection.empirical
            assert pnc.analytic <= detection.analytic
            assert within_four_stderr(pnc), pnc

    def test_chain_beats_uncoded(self):
        """Test repetition l = 5 at 10 dB against the uncoded PNC SER."""
        cfg = ExperimentConfig(mode=Mode.CHAIN, q=2, snr_db_grid=[10], trials=100000, seed=3, code_spec='rep:5')
        row, = run_sweep(cfg)
        assert row.empirical < row.analytic

    def test_chain_error_rate_non_increasing(self):
        """Test the coded packet error rate does not rise along an SNR grid."""
        cfg = ExperimentConfig(
            mode=Mode.CHAIN, q=4, snr_db_grid=[0, 2, 4, 6, 8], trials=20000, seed=11, code_spec='spc:2',
        )
        rows = run_sweep(cfg)
        assert [row.snr_db for row in rows] == [0, 2, 4, 6, 8]
        for prev, row in zip(rows, rows[1:]):
            assert row.empirical <= prev.empirical + 4 * math.hypot(row.stderr, prev.stderr)
        assert rows[-1].empirical < rows[0].empirical

    def test_chain_codebook_too_large(self, settings):
        """Test unenumerable codes fail before any trials run."""
        settings.TWRC_MAX_CODEBOOK = 4
        cfg = ExperimentConfig(mode=Mode.CHAIN, q=2, snr_db_grid=[0], trials=10, code_spec='spc:3')
        with pytest.raises(CodebookTooLarge):
            run_sweep(cfg)

    def test_not_a_sweep(self):
        """Test run_sweep rejects non-sweep modes."""
        with pytest.raises(ValidationError):
            run_sweep(ExperimentConfig(mode=Mode.RATES, snr_db_grid=[0]))


class TestDeterminism:
    """Test sweeps are reproducible bit for bit."""

    def test_single_trial_repeat(self):
        """Test trials = 1 gives identical rows on a rerun."""
        cfg = ExperimentConfig(mode=Mode.SER_PNC, q=4, snr_db_grid=GRID, trials=1, seed=5)
        assert run_sweep(cfg) == run_sweep(cfg)

    def test_worker_count_does_not_matter(self, monkeypatch, settings):
        """Test one worker and four workers produce identical rows."""
        settings.TWRC_SHARD_SIZE = 3000
        cfg = ExperimentConfig(mode=Mode.SER_SUM, q=4, snr_db_grid=GRID, trials=10000, seed=21)
        monkeypatch.setenv('TWRC_MAX_WORKERS', '1')
        serial = run_sweep(cfg)
        monkeypatch.setenv('TWRC_MAX_WORKERS', '4')
        assert run_sweep(cfg) == serial

    def test_seed_matters(self):
        """Test different seeds give different estimates."""
        base = dict(mode=Mode.SER_P2P, q=2, snr_db_grid=[0], trials=10000)
        assert run_sweep(ExperimentConfig(seed=1, **base)) != run_sweep(ExperimentConfig(seed=2, **base))

    def test_csv_byte_identical(self, tmp_path):
        """Test two runs of the same config write byte-identical CSV."""
        cfg = ExperimentConfig(mode=Mode.CHAIN, q=4, snr_db_grid=GRID, trials=5000, seed=8, code_spec='spc:2')
        write_csv(run_sweep(cfg), tmp_path / 'a.csv')
        write_csv(run_sweep(cfg), tmp_path / 'b.csv')
        assert (tmp_path / 'a.csv').read_bytes() == (tmp_path / 'b.csv').read_bytes()


class TestRunExperiment:
    """Test cases for run_experiment."""

    def test_bounds(self):
        """Test equal powers of 15 give the unit bound at t1 = 0.5."""
        result = run_experiment(ExperimentConfig(mode=Mode.BOUNDS, powers=PowerProfile(15, 15, 15)))
        assert result.bound.upper_bound == pytest.approx(1.0, abs=1e-12)
        assert result.bound.t1_opt == pytest.approx(0.5, abs=1e-12)
        rates = {report.strategy: report.rate for report in result.exchanges}
        assert rates[Strategy.PNC_NETWORK_CODING] == pytest.approx(rates[Strategy.CUT_SET_BOUND])
        assert rates[Strategy.SIC_NETWORK_CODING] < rates[Strategy.CUT_SET_BOUND]
        assert result.records == result.exchanges

    def test_rates(self):
        """Test SIC efficiency approaches 1 at low SNR and falls with SNR."""
        result = run_experiment(ExperimentConfig(mode=Mode.RATES, snr_db_grid=[-30, -20, -10, 0, 10, 20]))
        efficiencies = [row.efficiency for row in result.rows]
        assert efficiencies[0] > 0.99
        assert efficiencies == sorted(efficiencies, reverse=True)
        assert all(row.sic_rate <= row.upper_bound for row in result.rows)
        assert all(isinstance(row, RateRow) for row in result.rows)

    def test_netfn_builtin(self):
        """Test XOR passes and the integer sum fails."""
        xor = run_experiment(ExperimentConfig(mode=Mode.NETFN_CHECK, q=2, netfn='xor'))
        assert xor.netfn_report.valid
        int_sum = run_experiment(ExperimentConfig(mode=Mode.NETFN_CHECK, q=2, netfn='int-sum'))
        assert not int_sum.netfn_report.valid
        assert int_sum.netfn_report.i_w3_w1 == pytest.approx(0.5, abs=1e-9)

    def test_netfn_table(self, tmp_path):
        """Test a table file is loaded for the check."""
        path = tmp_path / 'table.txt'
        path.write_text('3 3\n0 1 2\n1 2 0\n2 0 1\n')
        result = run_experiment(ExperimentConfig(mode=Mode.NETFN_CHECK, table_path=str(path)))
        assert result.netfn_report.valid


class TestReports:
    """Test cases for CSV, JSON and table output."""

    def test_format_table(self):
        """Test columns are aligned and floats shortened."""
        table = format_table(['a', 'value'], [(1, 0.123456789), (22, True)])
        lines = table.split('\n')
        assert lines[0] == 'a  | value   '
        assert lines[2] == ' 1 | 0.123457'
        assert lines[3] == '22 |     true'

    def test_csv_header_and_round_trip(self, tmp_path):
        """Test the fixed header and that rows read back unchanged."""
        rows = run_sweep(ExperimentConfig(mode=Mode.SER_PNC, q=2, snr_db_grid=GRID, trials=2000, seed=4))
        path = tmp_path / 'ser.csv'
        write_csv(rows, path)
        text = path.read_text(encoding='utf-8')
        assert text.startswith('snr_db,analytic,empirical,stderr,trials\n')
        assert text.endswith('\n') and '\r' not in text
        assert read_csv(path) == rows

    def test_rate_csv(self, tmp_path):
        """Test rate rows use their own header."""
        rows = run_experiment(ExperimentConfig(mode=Mode.RATES, snr_db_grid=[0, 10])).rows
        path = tmp_path / 'rates.csv'
        write_csv(rows, path)
        assert path.read_text().startswith('snr_db,upper_bound,sic_rate,efficiency,regime\n')
        assert read_csv(path) == list(rows)

    def test_unknown_csv(self, tmp_path):
        """Test foreign CSV files are rejected."""
        path = tmp_path / 'other.csv'
        path.write_text('x,y\n1,2\n')
        with pytest.raises(ValidationError):
            read_csv(path)

    @pytest.mark.parametrize('cfg', [
        ExperimentConfig(mode=Mode.SER_SUM, q=4, snr_db_grid=[0, 3], trials=1000, seed=1),
        ExperimentConfig(mode=Mode.BOUNDS, powers=PowerProfile(10, 2, 6)),
        ExperimentConfig(mode=Mode.RATES, snr_db_grid=[-10, 0]),
        ExperimentConfig(mode=Mode.NETFN_CHECK, q=2, netfn='const'),
    ])
    def test_json_round_trip(self, tmp_path, cfg):
        """Test JSON reports parse back to the same result."""
        result = run_experiment(cfg)
        path = tmp_path / 'report.json'
        write_json(result, path)
        assert read_json(path) == result

    def test_json_schema_violation(self, tmp_path):
        """Test malformed reports are rejected by the schema."""
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps({'config': {'mode': 'SerP2p'}, 'rows': []}))
        with pytest.raises(ValidationError) as exc_info:
            read_json(path)
        assert exc_info.value.code == 'invalid_report'


class TestResolveWorkers:
    """Test cases for resolve_workers."""

    def test_environment(self, monkeypatch):
        """Test the environment variable sets the worker count."""
        monkeypatch.setenv('TWRC_MAX_WORKERS', '3')
        assert resolve_workers() == 3

    def test_setting(self, monkeypatch, settings):
        """Test the setting applies without the environment variable."""
        monkeypatch.delenv('TWRC_MAX_WORKERS', raising=False)
        settings.TWRC_MAX_WORKERS = 2
        assert resolve_workers() == 2

    def test_default(self, monkeypatch, settings):
        """Test the CPU count is the fallback."""
        monkeypatch.delenv('TWRC_MAX_WORKERS', raising=False)
        settings.TWRC_MAX_WORKERS = None
        assert resolve_workers() >= 1

    @pytest.mark.parametrize('value', ['0', '-2', 'many'])
    def test_invalid(self, monkeypatch, value):
        """Test non-positive and non-numeric values raise."""
        monkeypatch.setenv('TWRC_MAX_WORKERS', value)
        with pytest.raises(ValidationError) as exc_info:
            resolve_workers()
        assert exc_info.value.code == 'invalid_workers'


class TestCommands:
    """Test cases for the twrc_* management commands."""

    def test_bounds(self):
        """Test the bound at 11.76 dB on every node."""
        out = StringIO()
        call_command('twrc_bounds', '--p1-db', '11.76', '--p2-db', '11.76', '--p3-db', '11.76', stdout=out)
        output = out.getvalue()
        line = next(l for l in output.splitlines() if l.startswith('upper_bound'))
        _, bound, _, t1 = line.split()
        assert float(bound) == pytest.approx(1.0, abs=1e-3)
        assert t1 == '0.500000'
        assert 'PncNetworkCoding' in output

    def test_bounds_linear(self):
        """Test --linear reads powers as linear values."""
        out = StringIO()
        call_command('twrc_bounds', '--p1', '15', '--p2', '15', '--p3', '15', '--linear', stdout=out)
        assert 'upper_bound 1.000000 t1 0.500000' in out.getvalue()

    def test_bounds_missing_power(self):
        """Test a missing power is a usage error."""
        with pytest.raises(CommandError) as exc_info:
            call_command('twrc_bounds', '--p1-db', '0', '--p2-db', '0', stdout=StringIO())
        assert exc_info.value.returncode == 1

    def test_rates_table(self):
        """Test the rates table lists every grid point."""
        out = StringIO()
        call_command('twrc_rates', '--snr-db', '-10', '0', '10', stdout=out)
        assert 'efficiency' in out.getvalue()
        assert len([l for l in out.getvalue().splitlines() if 'Intermediate' in l]) == 3

    def test_ser_writes_reports(self, tmp_path):
        """Test --csv and --json outputs."""
        csv_path, json_path = tmp_path / 'ser.csv', tmp_path / 'ser.json'
        out = StringIO()
        call_command(
            'twrc_ser', '--mode', 'pnc', '--q', '4', '--snr-db', '0', '5', '--trials', '2000',
            '--csv', str(csv_path), '--json', str(json_path), stdout=out,
        )
        assert len(read_csv(csv_path)) == 2
        assert read_json(json_path).config.mode == Mode.SER_PNC
        assert f'Wrote {csv_path}' in out.getvalue()

    def test_domain_error(self):
        """Test domain errors carry return code 2."""
        with pytest.raises(CommandError) as exc_info:
            call_command('twrc_ser', '--q', '1', stdout=StringIO())
        assert exc_info.value.returncode == 2

    def test_chain(self):
        """Test the chain command prints one row per SNR."""
        out = StringIO()
        call_command('twrc_chain', '--code', 'rep:3', '--snr-db', '0', '6', '--trials', '1000', stdout=out)
        assert len(out.getvalue().strip().splitlines()) == 4

    def test_netfn_const(self):
        """Test the constant function is reported invalid."""
        out = StringIO()
        call_command('twrc_netfn', '--q', '2', '--builtin', 'const', stdout=out)
        assert 'valid: false' in out.getvalue()
        assert 'recoverable: false' in out.getvalue()


class TestCli:
    """Test cases for the twrc entry point."""

    def run(self, *argv):
        out, err = StringIO(), StringIO()
        code = cli(list(argv), stdout=out, stderr=err)
        return code, out.getvalue(), err.getvalue()

    def test_netfn_xor(self):
        """Test the XOR example exits 0 and reports valid."""
        code, out, _ = self.run('netfn', '--q', '2', '--builtin', 'xor')
        assert code == 0
        assert 'valid: true' in out

    def test_ser_sum(self):
        """Test a small superimposed SER run."""
        code, out, _ = self.run('ser', '--mode', 'sum', '--q', '2', '--snr-db', '0', '--trials', '20000', '--seed', '7')
        assert code == 0
        assert 'empirical' in out

    def test_unknown_flag(self):
        """Test unknown flags are usage errors with the usage text."""
        code, _, err = self.run('ser', '--bogus')
        assert code == 1
        assert 'usage: twrc ser' in err

    def test_unknown_subcommand(self):
        """Test an unknown subcommand lists the valid ones."""
        code, _, err = self.run('plot')
        assert code == 1
        assert 'bounds' in err

    def test_no_arguments(self):
        """Test running without a subcommand is a usage error."""
        assert self.run()[0] == 1

    def test_help(self):
        """Test --help prints the subcommand help and exits 0."""
        code, out, _ = self.run('chain', '--help')
        assert code == 0
        assert '--code' in out

    def test_domain_error(self):
        """Test an unenumerable code exits 2."""
        code, _, err = self.run('chain', '--code', 'spc:30', '--q', '4', '--trials', '10')
        assert code == 2
        assert 'enumeration bound' in err

    def test_bounds_db_overflow(self):
        """Test an overflowing dB power exits 2."""
        code, _, err = self.run('bounds', '--p1-db', '4000', '--p2-db', '0', '--p3-db', '0')
        assert code == 2
        assert 'overflows' in err

    def test_ser_snr_overflow(self):
        """Test an overflowing SNR grid point exits 2."""
        assert self.run('ser', '--snr-db', '4000', '--trials', '10')[0] == 2

    def test_invalid_table(self, tmp_path):
        """Test a malformed table file exits 2."""
        path = tmp_path / 'bad.txt'
        path.write_text('2 2\n0 1\n')
        assert self.run('netfn', '--table', str(path))[0] == 2

    def test_csv_deterministic(self, tmp_path):
        """Test two CLI runs write byte-identical CSV."""
        for name in ('a.csv', 'b.csv'):
            code, _, _ = self.run('ser', '--mode', 'p2p', '--q', '8', '--trials', '30000', '--seed', '1',
                                  '--csv', str(tmp_path / name))
            assert code == 0
        assert (tmp_path / 'a.csv').read_bytes() == (tmp_path / 'b.csv').read_bytes()
