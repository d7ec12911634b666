"""Sweeps, extrema and table builders for real parameters and the blank state ``|+>``.

All functions here work with real amplitudes ``a, b`` and real machine parameters ``p`` and
``q = +sqrt(1 - p^2)``. Grids never contain ``p = 0``; extrema that sit at that open end are
reported as limit values evaluated at ``q = 1``."""
import logging
import math

import numpy as np
from scipy.optimize import bisect

from .exceptions import ProbDelDomainError, ProbDelVerificationError
from .fidelity import f1_real, f2_real, oracle_fidelities
from .fields import (
    ArrayField, BooleanField, CodeField, ContainerField, IntegerField, RealField,
)
from .machine import BlankState, MachineParams, QubitState
from .models import CurveRow, Minimax, Optimum, SweepRow
from .types import Container
from .utils import RepresentableEnum, doc_enum

logger = logging.getLogger(__name__)

#: Open lower end of p grids, standing in for p -> 0
EPSILON = 1e-3

DEFAULT_TABLE1_AB = (-0.25, -0.10, 0.10, 0.25, 0.30, 0.35, 0.40, 0.45)
DEFAULT_TABLE2_P = (0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999, 1.0)

MINIMAX_GRID = (0.001, 0.249, 10 ** 6)
MINIMAX_GRID_TOLERANCE = 1e-9

CROSSOVER_SCAN_POINTS = 1001
CROSSOVER_XTOL = 1e-9

SQRT_HALF = 1 / math.sqrt(2)


@doc_enum
class SweepVariable(RepresentableEnum):
    """Quantity varied along a sweep"""

    P = 'p'  # doc: Deleting amplitude p, with fixed input amplitudes a, b
    AB = 'ab'  # doc: Product ab of the input amplitudes, with fixed p
    A = 'a'  # doc: Input amplitude a with b = +sqrt(1 - a^2), with fixed p


def _q_of(p):
    return np.sqrt(np.clip(1.0 - np.asarray(p, dtype=float) ** 2, 0.0, None))


def real_amplitudes(ab):
    """Real ``(a, b)`` with ``a >= |b|``, ``a^2 + b^2 = 1`` and ``a * b = ab``; vectorized."""
    ab = np.asarray(ab, dtype=float)
    if np.any(np.abs(ab) > 0.5):
        raise ProbDelDomainError("ab must lie in [-0.5, 0.5], got {!r}".format(ab.tolist()))
    s = np.sqrt(np.clip(1.0 - 4.0 * ab ** 2, 0.0, None))
    a = np.sqrt((1.0 + s) / 2.0)
    b = ab / a
    if a.ndim == 0:
        return float(a), float(b)
    return a, b


class SweepSpec(Container):
    """Uniform one-dimensional grid plus the values held fixed"""
    variable = CodeField(enum=SweepVariable, _d="Swept quantity")
    grid_min = RealField(_d="First grid point")
    grid_max = RealField(_d="Last grid point")
    steps = IntegerField(_d="Number of grid points")
    p = RealField(required=False, _d="Fixed deleting amplitude for ab and a sweeps")
    a = RealField(required=False, _d="Fixed amplitude of |0> for p sweeps")
    b = RealField(required=False, _d="Fixed amplitude of |1> for p sweeps")

    def _validate(self):
        if self.grid_min > self.grid_max:
            raise ProbDelDomainError("Grid bounds out of order: {!r} > {!r}".format(self.grid_min, self.grid_max))

        if self.variable is SweepVariable.P:
            if not (0 < self.grid_min and self.grid_max <= 1):
                raise ProbDelDomainError("p grid must satisfy 0 < grid_min <= grid_max <= 1 (p = 0 never deletes)")
            if self.a is None or self.b is None:
                raise ProbDelDomainError("p sweeps need fixed amplitudes a and b")
            QubitState(self.a, self.b)
        else:
            if self.variable is SweepVariable.AB:
                if not (-0.5 <= self.grid_min and self.grid_max <= 0.5):
                    raise ProbDelDomainError("ab grid must satisfy -0.5 <= grid_min <= grid_max <= 0.5")
            elif not (0 <= self.grid_min and self.grid_max <= 1):
                raise ProbDelDomainError("a grid must satisfy 0 <= grid_min <= grid_max <= 1")
            if self.p is None or not (0 < self.p <= 1):
                raise ProbDelDomainError("Fixed p must lie in (0, 1], got {!r}".format(self.p))

    @classmethod
    def over_p(cls, grid_min=EPSILON, grid_max=1.0, steps=1000, a=SQRT_HALF, b=SQRT_HALF):
        return cls(SweepVariable.P, grid_min, grid_max, steps, a=a, b=b)

    @classmethod
    def over_ab(cls, grid_min=-0.5, grid_max=0.5, steps=1001, p=1.0):
        return cls(SweepVariable.AB, grid_min, grid_max, steps, p=p)

    @classmethod
    def over_a(cls, grid_min=0.0, grid_max=1.0, steps=101, p=1.0):
        return cls(SweepVariable.A, grid_min, grid_max, steps, p=p)

    def grid(self):
        return np.linspace(self.grid_min, self.grid_max, self.steps)

    def evaluation_points(self):
        """Grid and the matching real ``(a, b, q)`` arrays."""
        x = self.grid()
        if self.variable is SweepVariable.P:
            a = np.full_like(x, self.a)
            b = np.full_like(x, self.b)
            q = _q_of(x)
        else:
            if self.variable is SweepVariable.AB:
                a, b = real_amplitudes(x)
            else:
                a = x
                b = np.sqrt(np.clip(1.0 - x ** 2, 0.0, None))
            q = np.full_like(x, float(_q_of(self.p)))
        return x, a, b, q

    def p_at(self, i, x):
        return float(x[i]) if self.variable is SweepVariable.P else self.p


class SweepResult(Container):
    """Fidelities along a sweep, ascending in x"""
    spec = ContainerField(type=SweepSpec, _d="Grid that produced the values")
    x = ArrayField(dtype=float, _d="Grid points")
    f1 = ArrayField(dtype=float, _d="Fidelity of retention")
    f2 = ArrayField(dtype=float, _d="Fidelity of deletion")
    delta = ArrayField(dtype=float, _d="f2 - f1")

    def _validate(self):
        n = self.spec.steps
        for name in ('x', 'f1', 'f2', 'delta'):
            if getattr(self, name).shape != (n, ):
                raise ProbDelDomainError("Column {} has shape {}, expected ({},)".format(name, getattr(self, name).shape, n))

    @property
    def rows(self):
        return [SweepRow(*values) for values in zip(self.x.tolist(), self.f1.tolist(), self.f2.tolist(), self.delta.tolist())]


def sweep(spec):
    x, a, b, q = spec.evaluation_points()
    f1 = f1_real(a, b, q)
    f2 = f2_real(a, b, q)
    logger.debug("Sweep over %s: %d points in [%.15g, %.15g]", spec.variable.value, spec.steps, spec.grid_min, spec.grid_max)
    return SweepResult(spec, x, f1, f2, f2 - f1)


def oracle_spot_check(result, rng, fraction=0.01):
    """Largest deviation between the sweep and simulated fidelities on a random subsample of grid points."""
    x, a, b, _ = result.spec.evaluation_points()
    count = max(1, int(round(fraction * len(x))))
    indices = np.sort(rng.choice(len(x), size=count, replace=False))

    blank = BlankState.plus()
    deviation = 0.0
    for i in indices:
        params = MachineParams.from_deletion_probability(result.spec.p_at(i, x))
        oracle = oracle_fidelities(QubitState(float(a[i]), float(b[i])), params, blank)
        deviation = max(deviation, abs(oracle.f1 - result.f1[i]), abs(oracle.f2 - result.f2[i]))
    return deviation


def optimal_q(ab):
    """``q`` maximising the deletion fidelity for fixed ``ab``: ``ab / (1 - 2 (ab)^2)``."""
    ab = float(ab)
    if not abs(ab) < 0.5:
        raise ProbDelDomainError(
            "Optimal q needs |ab| < 0.5; at |ab| = 0.5 it reaches |q| = 1, forcing p = 0 which is not a valid machine (got ab={!r})".format(ab))
    return ab / (1.0 - 2.0 * ab ** 2)


def max_f2(ab):
    """Largest deletion fidelity for fixed ``ab``: ``1 - A + A / (2 (1 - 2A))`` with ``A = (ab)^2``."""
    q = optimal_q(ab)
    a, b = real_amplitudes(ab)
    return f2_real(a, b, q)


def max_f2_printed(ab):
    """``1 - A + A / (1 - 2A)``, the published maximum formula.

    Exceeds 1 for moderate ``ab`` (1.00893 at ab = 0.25) and so cannot be a fidelity."""
    ab = float(ab)
    if not abs(ab) < 0.5:
        raise ProbDelDomainError("|ab| must be below 0.5, got {!r}".format(ab))
    A = ab ** 2
    return 1.0 - A + A / (1.0 - 2.0 * A)


def optimum(ab):
    q = optimal_q(ab)
    return Optimum(float(ab), q, math.sqrt(1.0 - q ** 2), max_f2(ab))


def _max_f2_of_A(A):
    return 1.0 - A + A / (2.0 * (1.0 - 2.0 * A))


def minimax_f2():
    """Smallest, over all inputs, of the best achievable deletion fidelity.

    Analytic minimum of ``g(A) = 1 - A + A / (2 (1 - 2A))`` at ``A* = (1 - 1/sqrt(2)) / 2``, checked against a
    dense grid in ``A``."""
    A_star = (1.0 - SQRT_HALF) / 2.0
    value = _max_f2_of_A(A_star)

    lo, hi, n = MINIMAX_GRID
    grid_value = float(np.min(_max_f2_of_A(np.linspace(lo, hi, n))))
    if abs(grid_value - value) > MINIMAX_GRID_TOLERANCE:
        raise ProbDelVerificationError(
            'minimax-grid', "Grid minimum {:.15g} disagrees with analytic minimum {:.15g}".format(grid_value, value))

    ab_star = math.sqrt(A_star)
    a_star = math.sqrt((1.0 + math.sqrt(1.0 - 4.0 * A_star)) / 2.0)
    return Minimax(a_star, ab_star, A_star, value, grid_value)


def _check_p(p):
    p = float(p)
    if not (0 < p <= 1):
        raise ProbDelDomainError("p must lie in (0, 1], got {!r}".format(p))
    return p


def f2_difference_from_pb(ab, p):
    """Deletion fidelity minus the Pati-Braunstein value ``1 - (ab)^2``: ``q (q (ab)^2 + ab - q/2)``."""
    q = float(_q_of(_check_p(p)))
    ab = np.asarray(ab, dtype=float)
    retval = q * (q * ab ** 2 + ab - q / 2.0)
    return float(retval) if retval.ndim == 0 else retval


def crossover_ab(p):
    """Smallest ab above which the machine deletes strictly better than Pati-Braunstein, or None."""
    p = _check_p(p)
    x = np.linspace(-0.5, 0.5, CROSSOVER_SCAN_POINTS)
    difference = f2_difference_from_pb(x, p)

    positive = np.flatnonzero(difference > 0)
    if not len(positive):
        logger.debug("No crossover for p=%.15g", p)
        return None

    i = positive[0]
    if i == 0:
        return float(x[0])
    return float(bisect(lambda ab: f2_difference_from_pb(ab, p), x[i - 1], x[i], xtol=CROSSOVER_XTOL))


def crossover_ab_exact(p):
    q = float(_q_of(_check_p(p)))
    if q == 0:
        return None
    return (math.sqrt(1.0 + 2.0 * q ** 2) - 1.0) / (2.0 * q)


class TableRow(Container):
    """Extrema of the deletion fidelity along one sweep"""
    key = RealField(_d="ab for the table over p, p for the table over ab")
    f2_min = RealField(_d="Smallest deletion fidelity")
    x_at_min = RealField(_d="Grid location of the minimum (0 stands for the open end p -> 0)")
    f2_max = RealField(_d="Largest deletion fidelity")
    x_at_max = RealField(_d="Grid location of the maximum")
    f2_sd = RealField(required=False, _d="Population standard deviation over the grid")
    min_is_limit = BooleanField(required=False, default=False, _d="Minimum is a limit value, not attained")
    max_is_limit = BooleanField(required=False, default=False, _d="Maximum is a limit value, not attained")
    symmetric_min = BooleanField(required=False, default=False, _d="Minimum is attained at x_at_min and at -x_at_min")

    def _validate(self):
        if self.f2_min > self.f2_max + 1e-12:
            raise ProbDelDomainError("Row {!r}: minimum {!r} above maximum {!r}".format(self.key, self.f2_min, self.f2_max))


def _open_end_limit(ab):
    """Deletion fidelity at q = 1, the limit of the p grid's open end."""
    a, b = real_amplitudes(ab)
    return f2_real(a, b, 1.0)


def build_table1(ab_values=DEFAULT_TABLE1_AB, p_grid=None):
    """Extrema and spread of the deletion fidelity over p, one row per ab."""
    p_grid = p_grid or SweepSpec.over_p()
    rows = []

    for ab in ab_values:
        a, b = real_amplitudes(ab)
        result = sweep(p_grid.replace(a=a, b=b))
        x, f2 = result.x, result.f2
        at_open_end = p_grid.grid_min <= EPSILON

        i_min = int(np.argmin(f2))
        f2_min, x_at_min, min_is_limit = float(f2[i_min]), float(x[i_min]), False
        if i_min == 0 and at_open_end:
            f2_min, x_at_min, min_is_limit = _open_end_limit(ab), 0.0, True

        i_max = int(np.argmax(f2))
        f2_max, x_at_max, max_is_limit = float(f2[i_max]), float(x[i_max]), False
        if i_max == 0 and at_open_end:
            f2_max, x_at_max, max_is_limit = _open_end_limit(ab), 0.0, True
        if abs(ab) < 0.5:
            best = optimum(ab)
            if best.q >= 0 and p_grid.grid_min <= best.p <= p_grid.grid_max:
                f2_max, x_at_max, max_is_limit = best.f2, best.p, False

        rows.append(TableRow(
            key=ab, f2_min=f2_min, x_at_min=x_at_min, f2_max=f2_max, x_at_max=x_at_max,
            f2_sd=float(np.std(f2)), min_is_limit=min_is_limit, max_is_limit=max_is_limit,
        ))
        logger.debug("Table over p, ab=%.15g: min %.15g, max %.15g at p=%.15g", ab, f2_min, f2_max, x_at_max)

    return rows


def build_table2(p_values=DEFAULT_TABLE2_P, ab_grid=None):
    """Extrema of the deletion fidelity over ab, one row per p."""
    ab_grid = ab_grid or SweepSpec.over_ab()
    rows = []

    for p in p_values:
        spec = ab_grid.replace(p=p)
        result = sweep(spec)
        x, f2 = result.x, result.f2
        q = float(_q_of(p))

        i_min = int(np.argmin(f2))
        f2_min, x_at_min = float(f2[i_min]), float(x[i_min])
        mirror = -x_at_min
        symmetric_min = bool(
            x_at_min != 0 and spec.grid_min <= mirror <= spec.grid_max
            and abs(f2_real(*real_amplitudes(mirror), q) - f2_min) <= 1e-12
        )

        # d f2 / d(ab) = q - 2 p^2 ab
        ab_star = q / (2.0 * p ** 2)
        if spec.grid_min <= ab_star <= spec.grid_max:
            x_at_max = ab_star
            f2_max = f2_real(*real_amplitudes(ab_star), q)
        else:
            i_max = int(np.argmax(f2))
            f2_max, x_at_max = float(f2[i_max]), float(x[i_max])

        rows.append(TableRow(
            key=p, f2_min=f2_min, x_at_min=x_at_min, f2_max=f2_max, x_at_max=x_at_max,
            max_is_limit=(x_at_max == 0), symmetric_min=symmetric_min,
        ))
        logger.debug("Table over ab, p=%.15g: min %.15g at ab=%.15g, max %.15g at ab=%.15g", p, f2_min, x_at_min, f2_max, x_at_max)

    return rows


def optimum_curve(steps=99):
    """Best achievable deletion fidelity as a function of the input amplitude ``a`` in (0, 1)."""
    rows = []
    for a in np.linspace(0.0, 1.0, steps + 2)[1:-1]:
        a = float(a)
        b = math.sqrt(1.0 - a ** 2)
        ab = a * b
        if abs(ab) >= 0.5 - 1e-12:
            rows.append(CurveRow(a, ab, 1.0, 0.0, 1.0, True))
            continue
        best = optimum(ab)
        rows.append(CurveRow(a, ab, best.q, best.p, best.f2, False))
    return rows


FIGURE_SWEEPS = {
    'pb-deletion-vs-ab': lambda steps: SweepSpec.over_ab(-0.5, 0.5, steps, p=1.0),
    'plus-state-vs-p': lambda steps: SweepSpec.over_p(EPSILON, 1.0, steps),
    'tilted-state-vs-p': lambda steps: SweepSpec.over_p(EPSILON, 1.0, steps, a=math.sqrt(3) / 2, b=0.5),
    'half-p-vs-ab': lambda steps: SweepSpec.over_ab(-0.5, 0.5, steps, p=0.5),
}


def figure_sweeps(steps=201, names=None):
    """Named sweeps behind the standard fidelity plots, in a stable order."""
    names = names or list(FIGURE_SWEEPS)
    retval = {}
    for name in names:
        if name not in FIGURE_SWEEPS:
            raise ProbDelDomainError("Unknown figure sweep {!r}, known: {}".format(name, ", ".join(FIGURE_SWEEPS)))
        retval[name] = sweep(FIGURE_SWEEPS[name](steps))
    return retval
