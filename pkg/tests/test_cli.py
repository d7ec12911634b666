import json

import pytest

from probdel.cli import (
    DEFAULT_INPUT_TOLERANCE, DEFAULT_SEED, build_parser, main, normalized_pair, run_verification,
)
from probdel.exceptions import ProbDelNormalizationError
from probdel.output import OutputParser
from probdel.testing import degraded_isometry_matrix


def run(tmp_path, *argv, name="out.txt"):
    target = tmp_path / name
    code = main(list(argv) + ['--out', str(target)])
    text = target.read_text(encoding='utf-8') if target.exists() else None
    return code, text


def rows_by(text, column):
    _, rows = OutputParser().parse_csv(text)
    return {row[column]: row for row in rows}


def test_normalized_pair():
    x, y = normalized_pair(0.7071068, 0.7071068, ('a', 'b'), 1e-6)
    assert abs(x) ** 2 + abs(y) ** 2 == pytest.approx(1.0, abs=1e-15)

    with pytest.raises(ProbDelNormalizationError, match=r"\|a\|\^2 \+ \|b\|\^2 = 1"):
        normalized_pair(0.6, 0.6, ('a', 'b'), 1e-6)


def test_fidelity_command(tmp_path):
    code, text = run(tmp_path, 'fidelity', '--a', '0.7071068', '--b', '0.7071068', '--p', '0.7071068')
    assert code == 0

    rows = rows_by(text, 'source')
    assert set(rows) == {'closed', 'oracle', 'published'}
    assert rows['closed']['f2'] == pytest.approx(0.978553, abs=1e-6)
    assert rows['oracle']['f2'] == pytest.approx(rows['closed']['f2'], abs=1e-10)
    assert rows['closed']['f1'] == pytest.approx(0.853553, abs=1e-6)
    assert rows['published']['note'] == 'retention-fidelity'


def test_fidelity_basis_input(tmp_path):
    code, text = run(tmp_path, 'fidelity', '--a', '1', '--b', '0', '--p', '0.7071068', '--q', '0.7071068')
    assert code == 0

    rows = rows_by(text, 'source')
    assert rows['oracle']['f1'] == pytest.approx(1.0, abs=1e-12)
    assert rows['oracle']['f2'] == pytest.approx(0.75, abs=1e-6)
    assert rows['published']['note'] is None


def test_fidelity_complex_input(tmp_path):
    code, text = run(tmp_path, 'fidelity', '--a', '0.6', '--b', '0,0.8', '--p', '0,1', '--format', 'json')
    assert code == 0

    document = json.loads(text)
    assert document['params']['b'] == '0,0.8'
    closed, oracle, _ = document['rows']
    assert closed['f2'] == pytest.approx(oracle['f2'], abs=1e-10)


def test_fidelity_rejects_unnormalized_input(tmp_path):
    code, text = run(tmp_path, 'fidelity', '--a', '0.6', '--b', '0.6', '--p', '0.5')
    assert code == 2
    assert text is None

    code, _ = run(tmp_path, 'fidelity', '--a', '0.6', '--b', '0.6', '--p', '0.5', '--input-tolerance', '0.5')
    assert code == 0


def test_sweep_command(tmp_path):
    code, text = run(tmp_path, 'sweep', '--var', 'p', '--steps', '11')
    assert code == 0

    columns, rows = OutputParser().parse_csv(text)
    assert columns == ['x', 'f1', 'f2', 'delta']
    assert len(rows) == 11
    assert rows[0]['x'] == 0.001
    assert rows[-1]['x'] == 1.0
    assert rows[-1]['f2'] == pytest.approx(0.75)

    code, _ = run(tmp_path, 'sweep', '--var', 'ab', '--min', '-0.7')
    assert code == 2


def test_table_commands(tmp_path):
    code, text = run(tmp_path, 'table', '--which', '1')
    assert code == 0
    rows = rows_by(text, 'ab')
    assert len(rows) == 8
    assert rows[0.25]['p_at_max'] == pytest.approx(0.958315, abs=1e-6)
    assert rows[0.25]['note'] == 'open-end'

    code, text = run(tmp_path, 'table', '--which', 'over-ab', '--format', 'json')
    assert code == 0
    document = json.loads(text)
    assert document['params'] == {'which': 'over-ab'}
    first = document['rows'][0]
    assert first['p'] == 0.25
    assert first['note'] == 'table2-p0.25'
    assert any("0.9970" in note for note in document['notes'])


def test_optimize_commands(tmp_path):
    code, text = run(tmp_path, 'optimize', '--minimax')
    assert code == 0
    (row, ) = rows_by(text, 'a_star').values()
    assert row['f2'] == pytest.approx(0.957107, abs=1e-6)
    assert row['A_star'] == pytest.approx(0.146447, abs=1e-6)

    code, text = run(tmp_path, 'optimize', '--ab', '0.4330127')
    assert code == 0
    (row, ) = rows_by(text, 'ab').values()
    assert row['f2_max'] == pytest.approx(0.9625, abs=1e-6)
    assert row['published_f2'] == 0.975
    assert row['note'] == 'max-formula;tilted-maximum'

    code, text = run(tmp_path, 'optimize', '--ab', '0.5', name="bad.txt")
    assert code == 2
    assert text is None


def test_figures_command(tmp_path):
    code, text = run(tmp_path, 'figures', '--name', 'optimum-vs-a', '--steps', '9')
    assert code == 0
    _, rows = OutputParser().parse_csv(text)
    assert len(rows) == 9
    assert all(row['limit'] is False for row in rows)

    code, text = run(tmp_path, 'figures', '--name', 'plus-state-vs-p', '--steps', '5')
    assert code == 0
    assert text.splitlines()[0] == 'x,f1,f2,delta'


def test_output_is_byte_identical(tmp_path):
    argv = ('fidelity', '--a', '0.6', '--b', '0.8', '--p', '0.5', '--format', 'json')
    _, first = run(tmp_path, *argv, name="first.json")
    _, second = run(tmp_path, *argv, name="second.json")
    assert (tmp_path / "first.json").read_bytes() == (tmp_path / "second.json").read_bytes()

    _, first = run(tmp_path, 'verify', '--trials', '3', '--seed', '7', name="v1.csv")
    _, second = run(tmp_path, 'verify', '--trials', '3', '--seed', '7', name="v2.csv")
    assert first == second


def test_verify_command(tmp_path):
    code, text = run(tmp_path, 'verify', '--trials', '1', '--seed', '7')
    assert code == 0
    rows = rows_by(text, 'check')
    assert set(rows) == {
        'isometry', 'oracle-f1', 'oracle-f2', 'density-matrix', 'positivity',
        'closed-reduced-state', 'pb-reduction', 'sweep-oracle',
    }
    assert all(row['ok'] is True for row in rows.values())


def test_verify_detects_broken_machine(tmp_path, monkeypatch):
    monkeypatch.setattr('probdel.cli.isometry_matrix', degraded_isometry_matrix)

    code, text = run(tmp_path, 'verify', '--trials', '2', '--seed', '7')
    assert code == 1
    rows = rows_by(text, 'check')
    assert rows['isometry']['ok'] is False
    assert rows['oracle-f2']['ok'] is True


def test_run_verification_with_builder():
    results = run_verification(trials=2, seed=1, isometry_builder=degraded_isometry_matrix)
    failed = [r.name for r in results if not r.ok]
    assert failed == ['isometry']


def test_unwritable_output(tmp_path):
    code = main(['optimize', '--minimax', '--out', str(tmp_path / "missing" / "out.csv")])
    assert code == 3


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(['table', '--which', '3'])
    assert excinfo.value.code == 2

    with pytest.raises(SystemExit) as excinfo:
        main(['verify', '--trials', '0'])
    assert excinfo.value.code == 2

    with pytest.raises(SystemExit) as excinfo:
        main(['--version'])
    assert excinfo.value.code == 0
    assert "probdel" in capsys.readouterr().out


def test_common_options_before_command(tmp_path):
    target = tmp_path / "out.json"
    code = main(['--format', 'json', '--out', str(target), 'optimize', '--minimax'])
    assert code == 0
    document = json.loads(target.read_text(encoding='utf-8'))
    assert document['rows'][0]['f2'] == pytest.approx(0.957107, abs=1e-6)

    code = main(['--seed', '7', '--out', str(tmp_path / "before.csv"), 'verify', '--trials', '2'])
    assert code == 0
    code = main(['verify', '--trials', '2', '--seed', '7', '--out', str(tmp_path / "after.csv")])
    assert code == 0
    assert (tmp_path / "before.csv").read_bytes() == (tmp_path / "after.csv").read_bytes()


def test_common_option_defaults():
    args = build_parser().parse_args(['optimize', '--minimax'])
    assert args.format == 'csv'
    assert args.out is None
    assert args.verbose == 0
    assert args.seed == DEFAULT_SEED
    assert args.input_tolerance == DEFAULT_INPUT_TOLERANCE

    args = build_parser().parse_args(['--format', 'json', '-v', 'optimize', '--minimax', '--format', 'csv'])
    assert args.format == 'csv'
    assert args.verbose == 1
