"""
Report output: text tables, CSV through pandas and schema-checked JSON.

Usage:
    from twrc_toolkit.harness import write_csv, read_csv, write_json, read_json

    write_csv(result.rows, 'ser.csv')       # snr_db,analytic,empirical,stderr,trials
    write_json(result, 'ser.json')           # rows plus the config that produced them
    read_json('ser.json')                    # ExperimentResult
"""

import json

import jsonschema
import pandas as pd
from django.core.exceptions import ValidationError

from ..capacity import BoundReport, ExchangeReport, Strategy
from ..conf import get_setting
from ..netfn import NetFnReport
from .sweep import SWEEP_MODES, ExperimentConfig, ExperimentResult, Mode, RateRow, SweepRow


NUMBER = {'type': 'number'}
NULLABLE_STRING = {'type': ['string', 'null']}

SWEEP_ROW_SCHEMA = {
    'type': 'object',
    'properties': {
        'snr_db': NUMBER,
        'analytic': NUMBER,
        'empirical': {'type': 'number', 'minimum': 0, 'maximum': 1},
        'stderr': {'type': 'number', 'minimum': 0},
        'trials': {'type': 'integer', 'minimum': 1},
    },
    'required': list(SweepRow.columns),
    'additionalProperties': False,
}

RATE_ROW_SCHEMA = {
    'type': 'object',
    'properties': {
        'snr_db': NUMBER,
        'upper_bound': NUMBER,
        'sic_rate': NUMBER,
        'efficiency': NUMBER,
        'regime': {'type': 'string'},
    },
    'required': list(RateRow.columns),
    'additionalProperties': False,
}

REPORT_SCHEMA = {
    'type': 'object',
    'properties': {
        'config': {
            'type': 'object',
            'properties': {
                'mode': {'enum': [mode.value for mode in Mode]},
                'q': {'type': 'integer', 'minimum': 2},
                'snr_db_grid': {'type': 'array', 'items': NUMBER},
                'trials': {'type': 'integer', 'minimum': 1},
                'seed': {'type': 'integer', 'minimum': 0},
                'code_spec': NULLABLE_STRING,
                'powers': {
                    'type': ['object', 'null'],
                    'properties': {'p1': NUMBER, 'p2': NUMBER, 'p3': NUMBER},
                    'required': ['p1', 'p2', 'p3'],
                },
                'netfn': NULLABLE_STRING,
                'table_path': NULLABLE_STRING,
            },
            'required': ['mode', 'q', 'snr_db_grid', 'trials', 'seed'],
        },
        'rows': {
            'type': 'array',
            'items': {'oneOf': [SWEEP_ROW_SCHEMA, RATE_ROW_SCHEMA]},
        },
        'bound': {'type': ['object', 'null']},
        'exchanges': {'type': 'array', 'items': {'type': 'object'}},
        'netfn_report': {'type': ['object', 'null']},
    },
    'required': ['config', 'rows'],
}


def _cell(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_table(headers, rows):
    """Format rows of values as an aligned plain-text table."""
    cells = [[_cell(value) for value in row] for row in rows]
    widths = [
        max([len(header)] + [len(row[i]) for row in cells])
        for i, header in enumerate(headers)
    ]

    header = ' | '.join(f"{h:<{w}}" for h, w in zip(headers, widths))
    lines = [header, '-' * len(header)]
    for row in cells:
        lines.append(' | '.join(f"{c:>{w}}" for c, w in zip(row, widths)))
    return '\n'.join(lines)


def write_csv(rows, path):
    """
    Write records with a header taken from their to_dict() keys.

    Output is byte-identical for identical rows.
    """
    rows = list(rows)
    if not rows:
        raise ValidationError("Nothing to write", code='invalid_report')
    columns = list(rows[0].to_dict())
    df = pd.DataFrame([row.to_dict() for row in rows], columns=columns)
    df.to_csv(
        path,
        index=False,
        encoding='utf-8',
        lineterminator='\n',
        float_format=get_setting('TWRC_CSV_FLOAT_FORMAT'),
    )


def read_csv(path):
    """Read a CSV written by write_csv back into rows."""
    df = pd.read_csv(path, float_precision='round_trip')
    columns = tuple(df.columns)
    if columns == SweepRow.columns:
        return [
            SweepRow(
                snr_db=float(record['snr_db']),
                analytic=float(record['analytic']),
                empirical=float(record['empirical']),
                stderr=float(record['stderr']),
                trials=int(record['trials']),
            )
            for record in df.to_dict('records')
        ]
    if columns == RateRow.columns:
        return [
            RateRow(
                snr_db=float(record['snr_db']),
                upper_bound=float(record['upper_bound']),
                sic_rate=float(record['sic_rate']),
                efficiency=float(record['efficiency']),
                regime=str(record['regime']),
            )
            for record in df.to_dict('records')
        ]
    raise ValidationError(f"Unrecognized CSV header {','.join(columns)}", code='invalid_report')


def write_json(result, path):
    """Write an ExperimentResult, config included, as JSON."""
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(result.to_dict(), handle, indent=2)
        handle.write('\n')


def read_json(path):
    """
    Parse a JSON report written by write_json.

    Raises:
        ValidationError: code 'invalid_report' if the file does not match
            the report schema.
    """
    with open(path, 'r', encoding='utf-8') as handle:
        data = json.load(handle)
    try:
        jsonschema.validate(data, REPORT_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ValidationError(f"Invalid report {path}: {e.message}", code='invalid_report')

    config = ExperimentConfig.from_dict(data['config'])
    row_type = SweepRow if config.mode in SWEEP_MODES else RateRow
    exchanges = []
    for report in data.get('exchanges', []):
        report = dict(report)
        report['strategy'] = Strategy(report['strategy'])
        exchanges.append(ExchangeReport(**report))

    return ExperimentResult(
        config=config,
        rows=tuple(row_type(**row) for row in data['rows']),
        bound=BoundReport(**data['bound']) if data.get('bound') else None,
        exchanges=tuple(exchanges),
        netfn_report=NetFnReport(**data['netfn_report']) if data.get('netfn_report') else None,
    )
