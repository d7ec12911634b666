"""Command line front end.

Every command builds an :class:`~probdel.output.OutputRecord` and writes it as CSV or JSON, to
standard output or to ``--out``. Exit codes: 0 success, 1 failed verification, 2 usage or domain
error, 3 output error."""
import argparse
import logging
import math
import sys

import numpy as np

from . import version
from .analysis import (
    EPSILON, FIGURE_SWEEPS, SweepSpec, SweepVariable, build_table1, build_table2,
    figure_sweeps, max_f2_printed, minimax_f2, optimum, optimum_curve,
    oracle_spot_check, sweep,
)
from .exceptions import (
    ProbDelError, ProbDelNormalizationError, ProbDelOutputError, ProbDelVerificationError,
)
from .fidelity import (
    closed_fidelities, f1_closed, f1_printed, oracle_fidelities,
)
from .fields import ComplexField
from .machine import (
    BlankState, MachineParams, QubitState, gram_report, isometry_matrix,
    pati_braunstein_params, random_blank_state, random_machine_params,
    random_qubit_state, reduced_state, reduced_state_closed,
)
from .models import CheckResult
from .output import OutputFormat, OutputRecord, OutputSerializer, write_output
from .published import (
    KNOWN_DISCREPANCIES, NOTES, PUBLISHED_MINIMAX, PUBLISHED_TABLE1,
    PUBLISHED_TABLE2, PUBLISHED_TILTED_MAXIMUM, VALUE_TOLERANCE, published_row,
)
from .states import Factor
from .utils import log_configuration, parse_complex, tolerances

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240521
DEFAULT_TRIALS = 1000
DEFAULT_INPUT_TOLERANCE = 1e-6
DEFAULT_SWEEP_STEPS = 101
DEFAULT_FIGURE_STEPS = 201

ORACLE_TOLERANCE = 1e-10
DENSITY_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
PB_TOLERANCE = 1e-12

OPTIMUM_CURVE = 'optimum-vs-a'
TILTED_AB = math.sqrt(3) / 4

_complex_field = ComplexField()


def _format_complex(value):
    return _complex_field.render(complex(value))


def normalized_pair(x, y, names, input_tolerance):
    """Normalize ``(x, y)`` to unit weight if it is within ``input_tolerance`` of it."""
    weight = abs(x) ** 2 + abs(y) ** 2
    if abs(weight - 1.0) > input_tolerance:
        raise ProbDelNormalizationError("Inputs violate |{0}|^2 + |{1}|^2 = 1: got {2:.15g} (input tolerance {3:.1e})".format(
            names[0], names[1], weight, input_tolerance))
    norm = math.sqrt(weight)
    return x / norm, y / norm


def run_verification(trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, isometry_builder=None):
    """Property checks over random machines and inputs; returns one :class:`CheckResult` per check."""
    isometry_builder = isometry_builder or isometry_matrix
    rng = np.random.default_rng(seed)

    worst = {
        'isometry': 0.0,
        'oracle-f1': 0.0,
        'oracle-f2': 0.0,
        'density-matrix': 0.0,
        'positivity': 0.0,
        'closed-reduced-state': 0.0,
        'pb-reduction': 0.0,
    }
    pb = pati_braunstein_params()

    for _ in range(trials):
        state = random_qubit_state(rng)
        params = random_machine_params(rng)
        blank = random_blank_state(rng)

        worst['isometry'] = max(worst['isometry'], gram_report(isometry_builder(params, blank)).deviation)

        oracle = oracle_fidelities(state, params, blank)
        closed = closed_fidelities(state, params, blank)
        worst['oracle-f1'] = max(worst['oracle-f1'], abs(closed.f1 - oracle.f1))
        worst['oracle-f2'] = max(worst['oracle-f2'], abs(closed.f2 - oracle.f2))

        for keep in (Factor.MODE1, Factor.MODE2):
            rho = reduced_state(params, blank, state, keep)
            entries = rho.entries
            worst['density-matrix'] = max(
                worst['density-matrix'],
                float(np.max(np.abs(entries - entries.conj().T))),
                abs(rho.trace() - 1.0),
            )
            worst['positivity'] = max(worst['positivity'], -float(rho.eigenvalues()[0]))
            closed_rho = reduced_state_closed(params, blank, state, keep)
            worst['closed-reduced-state'] = max(worst['closed-reduced-state'], float(np.max(np.abs(entries - closed_rho.entries))))

        pb_oracle = oracle_fidelities(state, pb, blank)
        worst['pb-reduction'] = max(worst['pb-reduction'], abs(pb_oracle.delta - state.A))

    worst['sweep-oracle'] = oracle_spot_check(sweep(FIGURE_SWEEPS['half-p-vs-ab'](DEFAULT_FIGURE_STEPS)), rng, fraction=0.05)

    limits = {
        'isometry': tolerances.isometry,
        'oracle-f1': ORACLE_TOLERANCE,
        'oracle-f2': ORACLE_TOLERANCE,
        'density-matrix': DENSITY_TOLERANCE,
        'positivity': PSD_TOLERANCE,
        'closed-reduced-state': ORACLE_TOLERANCE,
        'pb-reduction': PB_TOLERANCE,
        'sweep-oracle': ORACLE_TOLERANCE,
    }
    return [CheckResult(name, worst[name] <= limits[name], worst[name], limits[name]) for name in worst]


def _note_keys(keys):
    return ";".join(keys) if keys else None


def cmd_verify(args):
    results = run_verification(args.trials, args.seed)
    record = OutputRecord(
        command='verify',
        params={'trials': args.trials, 'seed': args.seed},
        columns=('check', 'ok', 'deviation', 'tolerance'),
        rows=tuple((r.name, bool(r.ok), r.deviation, r.tolerance) for r in results),
    )
    _emit(record, args)

    failed = [r for r in results if not r.ok]
    if failed:
        raise ProbDelVerificationError(
            failed[0].name, "Verification check {!r} failed: deviation {:.3e} exceeds {:.1e}".format(
                failed[0].name, failed[0].deviation, failed[0].tolerance))


def cmd_fidelity(args):
    tol = args.input_tolerance
    a, b = normalized_pair(parse_complex(args.a), parse_complex(args.b), ('a', 'b'), tol)
    p = parse_complex(args.p)
    if args.q is not None:
        p, q = normalized_pair(p, parse_complex(args.q), ('p', 'q'), tol)
    else:
        if abs(p) > 1 + tol:
            raise ProbDelNormalizationError("|p| must not exceed 1, got {!r}".format(args.p))
        if abs(p) > 1:
            p = p / abs(p)
        q = complex(math.sqrt(max(0.0, 1.0 - abs(p) ** 2)))
    m0, m1 = normalized_pair(parse_complex(args.blank_m0), parse_complex(args.blank_m1), ('M0', 'M1'), tol)

    state = QubitState(a, b)
    params = MachineParams(p, q)
    blank = BlankState(m0, m1)

    closed = closed_fidelities(state, params, blank)
    oracle = oracle_fidelities(state, params, blank)
    printed_f1 = f1_printed(state, params.q)

    notes = []
    if abs(printed_f1 - f1_closed(state, params.q)) > 1e-12:
        notes.append('retention-fidelity')

    record = OutputRecord(
        command='fidelity',
        params={
            'a': _format_complex(a), 'b': _format_complex(b), 'p': _format_complex(p), 'q': _format_complex(q),
            'm0': _format_complex(m0), 'm1': _format_complex(m1),
        },
        columns=('source', 'f1', 'f2', 'delta', 'note'),
        rows=(
            ('closed', closed.f1, closed.f2, closed.delta, None),
            ('oracle', oracle.f1, oracle.f2, oracle.delta, None),
            ('published', printed_f1, closed.f2, closed.f2 - printed_f1, _note_keys(notes)),
        ),
        notes=tuple(NOTES[k] for k in notes),
    )
    _emit(record, args)


SWEEP_DEFAULT_BOUNDS = {
    SweepVariable.P: (EPSILON, 1.0),
    SweepVariable.AB: (-0.5, 0.5),
    SweepVariable.A: (0.0, 1.0),
}


def cmd_sweep(args):
    variable = SweepVariable(args.var)
    grid_min, grid_max = SWEEP_DEFAULT_BOUNDS[variable]
    if args.min is not None:
        grid_min = args.min
    if args.max is not None:
        grid_max = args.max

    if variable is SweepVariable.P:
        a, b = normalized_pair(args.a, args.b, ('a', 'b'), args.input_tolerance)
        spec = SweepSpec(variable, grid_min, grid_max, args.steps, a=a, b=b)
        params = {'var': variable.value, 'min': grid_min, 'max': grid_max, 'steps': args.steps, 'a': a, 'b': b}
    else:
        spec = SweepSpec(variable, grid_min, grid_max, args.steps, p=args.p)
        params = {'var': variable.value, 'min': grid_min, 'max': grid_max, 'steps': args.steps, 'p': args.p}

    _emit(_sweep_record('sweep', params, sweep(spec)), args)


def _sweep_record(command, params, result):
    return OutputRecord(
        command=command,
        params=params,
        columns=('x', 'f1', 'f2', 'delta'),
        rows=tuple(tuple(row) for row in result.rows),
    )


TABLE_ALIASES = {'1': 'over-p', '2': 'over-ab'}


def _diff(ours, published):
    if published is None:
        return None
    return abs(ours - published)


def cmd_table(args):
    which = TABLE_ALIASES.get(args.which, args.which)
    notes = ['open-end']
    rows = []

    if which == 'over-p':
        columns = (
            'ab', 'f2_min', 'p_at_min', 'min_is_limit', 'f2_max', 'p_at_max', 'max_is_limit', 'f2_sd',
            'published_f2_min', 'published_f2_max', 'published_p_at_max', 'published_f2_sd',
            'diff_f2_min', 'diff_f2_max', 'diff_p_at_max', 'diff_f2_sd', 'note',
        )
        for row in build_table1():
            ref = published_row(PUBLISHED_TABLE1, row.key)
            rows.append((
                row.key, row.f2_min, row.x_at_min, row.min_is_limit, row.f2_max, row.x_at_max, row.max_is_limit, row.f2_sd,
                ref.f2_min, ref.f2_max, ref.x_at_max, ref.f2_sd,
                _diff(row.f2_min, ref.f2_min), _diff(row.f2_max, ref.f2_max), _diff(row.x_at_max, ref.x_at_max),
                _diff(row.f2_sd, ref.f2_sd),
                _note_keys(['open-end'] if row.min_is_limit or row.max_is_limit else []),
            ))
        notes.append('max-formula')
    else:
        columns = (
            'p', 'f2_min', 'ab_at_min', 'symmetric_min', 'f2_max', 'ab_at_max', 'max_is_limit',
            'published_f2_min', 'published_ab_at_min', 'published_f2_max', 'published_ab_at_max',
            'diff_f2_min', 'diff_f2_max', 'diff_ab_at_max', 'note',
        )
        for row in build_table2():
            ref = published_row(PUBLISHED_TABLE2, row.key)
            row_notes = []
            if row.max_is_limit:
                row_notes.append('open-end')
            known = KNOWN_DISCREPANCIES.get(('table2', row.key))
            if known and abs(row.f2_max - ref.f2_max) > VALUE_TOLERANCE:
                row_notes.append(known)
                notes.append(known)
            rows.append((
                row.key, row.f2_min, row.x_at_min, row.symmetric_min, row.f2_max, row.x_at_max, row.max_is_limit,
                ref.f2_min, ref.x_at_min, ref.f2_max, ref.x_at_max,
                _diff(row.f2_min, ref.f2_min), _diff(row.f2_max, ref.f2_max), _diff(row.x_at_max, ref.x_at_max),
                _note_keys(row_notes),
            ))

    record = OutputRecord(
        command='table',
        params={'which': which},
        columns=columns,
        rows=tuple(rows),
        notes=tuple(NOTES[k] for k in notes),
    )
    _emit(record, args)


def cmd_optimize(args):
    if args.minimax:
        result = minimax_f2()
        record = OutputRecord(
            command='optimize',
            params={'minimax': True},
            columns=('a_star', 'ab_star', 'A_star', 'f2', 'grid_f2', 'published_f2', 'note'),
            rows=((result.a_star, result.ab_star, result.A_star, result.value, result.grid_value, PUBLISHED_MINIMAX, 'max-formula'), ),
            notes=(NOTES['max-formula'], ),
        )
    else:
        best = optimum(args.ab)
        note_keys = ['max-formula']
        published_f2 = None
        if abs(abs(args.ab) - TILTED_AB) < 1e-6:
            note_keys.append('tilted-maximum')
            published_f2 = PUBLISHED_TILTED_MAXIMUM
        record = OutputRecord(
            command='optimize',
            params={'ab': args.ab},
            columns=('ab', 'q', 'p', 'f2_max', 'f2_max_printed_formula', 'published_f2', 'note'),
            rows=((best.ab, best.q, best.p, best.f2, max_f2_printed(args.ab), published_f2, _note_keys(note_keys)), ),
            notes=tuple(NOTES[k] for k in note_keys),
        )
    _emit(record, args)


def cmd_figures(args):
    if args.name == OPTIMUM_CURVE:
        record = OutputRecord(
            command='figures',
            params={'name': args.name, 'steps': args.steps},
            columns=('a', 'ab', 'q', 'p', 'f2', 'limit'),
            rows=tuple(tuple(row) for row in optimum_curve(args.steps)),
        )
    else:
        result = figure_sweeps(args.steps, names=[args.name])[args.name]
        record = _sweep_record('figures', {'name': args.name, 'steps': args.steps}, result)
    _emit(record, args)


def _emit(record, args):
    for note in record.notes:
        logger.info("Note: %s", note)
    write_output(OutputSerializer().serialize(record, args.format), args.out)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got {!r}".format(text))
    return value


def _add_common_options(parser, suppress=False):
    """Options accepted both before and after the command.

    The command's copies default to ``SUPPRESS`` so they only override what was given before it."""
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument('-v', '--verbose', action='count', default=default(0),
                        help="Log debug output; give twice to log full states instead of summaries")
    parser.add_argument('--format', choices=[f.value for f in OutputFormat], default=default(OutputFormat.CSV.value),
                        help="Output format (default: csv)")
    parser.add_argument('--out', default=default(None), help="Output file (default: standard output)")
    parser.add_argument('--seed', type=int, default=default(DEFAULT_SEED), help="Random seed (default: {})".format(DEFAULT_SEED))
    parser.add_argument('--input-tolerance', type=float, default=default(DEFAULT_INPUT_TOLERANCE),
                        help="Allowed normalization error of given amplitudes before they are normalized (default: {:g})".format(
                            DEFAULT_INPUT_TOLERANCE))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _add_common_options(common, suppress=True)

    parser = argparse.ArgumentParser(prog='probdel', description="Probabilistic quantum deletion machine")
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(version))
    _add_common_options(parser)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    p = subparsers.add_parser('verify', parents=[common], help="Check isometry and closed forms against simulation")
    p.add_argument('--trials', type=_positive_int, default=DEFAULT_TRIALS)
    p.set_defaults(func=cmd_verify)

    p = subparsers.add_parser('fidelity', parents=[common], help="Fidelities for one input and machine")
    p.add_argument('--a', required=True, help="Amplitude of |0>, as re[,im]")
    p.add_argument('--b', required=True, help="Amplitude of |1>, as re[,im]")
    p.add_argument('--p', required=True, help="Deleting amplitude, as re[,im]")
    p.add_argument('--q', default=None, help="Retaining amplitude (default: +sqrt(1 - |p|^2))")
    p.add_argument('--blank-m0', default=repr(1 / math.sqrt(2)), help="Blank state amplitude of |0> (default: 1/sqrt(2))")
    p.add_argument('--blank-m1', default=repr(1 / math.sqrt(2)), help="Blank state amplitude of |1> (default: 1/sqrt(2))")
    p.set_defaults(func=cmd_fidelity)

    p = subparsers.add_parser('sweep', parents=[common], help="Fidelities along a uniform grid")
    p.add_argument('--var', choices=[v.value for v in SweepVariable], required=True)
    p.add_argument('--steps', type=_positive_int, default=DEFAULT_SWEEP_STEPS)
    p.add_argument('--min', type=float, default=None)
    p.add_argument('--max', type=float, default=None)
    p.add_argument('--p', type=float, default=1.0, help="Fixed p for ab and a sweeps (default: 1)")
    p.add_argument('--a', type=float, default=1 / math.sqrt(2), help="Fixed a for p sweeps (default: 1/sqrt(2))")
    p.add_argument('--b', type=float, default=1 / math.sqrt(2), help="Fixed b for p sweeps (default: 1/sqrt(2))")
    p.set_defaults(func=cmd_sweep)

    p = subparsers.add_parser('table', parents=[common], help="Extrema tables with published values")
    p.add_argument('--which', choices=['over-p', 'over-ab'] + sorted(TABLE_ALIASES), required=True)
    p.set_defaults(func=cmd_table)

    p = subparsers.add_parser('optimize', parents=[common], help="Best q for an input, or the minimax fidelity")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--ab', type=float)
    group.add_argument('--minimax', action='store_true')
    p.set_defaults(func=cmd_optimize)

    p = subparsers.add_parser('figures', parents=[common], help="Data behind the standard fidelity plots")
    p.add_argument('--name', choices=list(FIGURE_SWEEPS) + [OPTIMUM_CURVE], required=True)
    p.add_argument('--steps', type=_positive_int, default=DEFAULT_FIGURE_STEPS)
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )

    try:
        with log_configuration.changed(reduced=args.verbose < 2):
            args.func(args)
    except ProbDelVerificationError as e:
        logger.error("%s", e)
        return 1
    except ProbDelOutputError as e:
        logger.error("%s", e)
        return 3
    except ProbDelError as e:
        logger.error("%s", e)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
