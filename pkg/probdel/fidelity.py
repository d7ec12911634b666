"""Fidelities of retention (mode 1) and deletion (mode 2).

Closed forms are checked against :func:`oracle_fidelities`, which simulates the machine and takes
overlaps of the reduced states. Printed variants that disagree with the simulation are kept under
``*_printed`` names so that the disagreement stays documented and testable."""
import logging

import numpy as np

from .exceptions import ProbDelDomainError, ProbDelNormalizationError, ProbDelValueError
from .fields import RealField
from .machine import reduced_state
from .states import Factor, PureState, QUBIT_LAYOUT, fidelity_pure
from .types import Container
from .utils import log_configuration, tolerances

logger = logging.getLogger(__name__)

#: Slack allowed when checking that a fidelity lies in [0, 1]
RANGE_SLACK = 1e-12


class FidelityPair(Container):
    """Retention and deletion fidelity of one machine run"""
    f1 = RealField(minimum=-RANGE_SLACK, maximum=1 + RANGE_SLACK, _d="Fidelity of retention, <psi|rho1|psi>")
    f2 = RealField(minimum=-RANGE_SLACK, maximum=1 + RANGE_SLACK, _d="Fidelity of deletion, <S|rho2|S>")
    delta = RealField(_d="f2 - f1")

    def _validate(self):
        if self.delta != self.f2 - self.f1:
            raise ProbDelValueError("delta {!r} is not f2 - f1 = {!r}".format(self.delta, self.f2 - self.f1))

    @classmethod
    def from_values(cls, f1, f2):
        f1, f2 = float(f1), float(f2)
        return cls(f1, f2, f2 - f1)


def f1_closed(state, q):
    """``1 - (2 - q - q*) |a|^2 |b|^2``

    The machine is the identity at ``q = 1``, where this gives 1."""
    q = complex(q)
    if abs(q) > 1 + RANGE_SLACK:
        raise ProbDelDomainError("|q| must not exceed 1, got {!r}".format(q))
    return 1.0 - (2.0 - 2.0 * q.real) * state.A


def f1_printed(state, q):
    """``1 - (2 + q + q*) |a|^2 |b|^2``, the published retention fidelity.

    Disagrees with the simulated value whenever ``Re q != 0`` and ``ab != 0``."""
    q = complex(q)
    return 1.0 - (2.0 + 2.0 * q.real) * state.A


def f2_closed_general(state, params, blank):
    """Deletion fidelity for complex amplitudes and an arbitrary blank state."""
    a, b, p, q = state.a, state.b, params.p, params.q
    m0, m1 = blank.m0, blank.m1
    A = state.A

    cross = a * b.conjugate() * m0.conjugate() * m1 * (q * abs(a) ** 2 + q.conjugate() * abs(b) ** 2)

    retval = (
        abs(p) ** 2 * (1 - 2 * A)
        + abs(q) ** 2 * (abs(a) ** 4 * abs(m0) ** 2 + abs(b) ** 4 * abs(m1) ** 2)
        + A
        + 2 * cross.real
    )
    return float(retval)


def f2_plus_blank(state, params):
    """Deletion fidelity for the blank state ``|+>``."""
    a, b, q = state.a, state.b, params.q
    A = state.A
    cross = a * b.conjugate() * (q * abs(a) ** 2 + q.conjugate() * abs(b) ** 2)
    return float((1 - 0.5 * abs(q) ** 2) * (1 - 2 * A) + A + cross.real)


def _check_real_inputs(a, b, q):
    a, b, q = np.asarray(a, dtype=float), np.asarray(b, dtype=float), np.asarray(q, dtype=float)
    if np.any(np.abs(a ** 2 + b ** 2 - 1.0) > tolerances.normalization):
        raise ProbDelNormalizationError("Real amplitudes must satisfy a^2 + b^2 = 1")
    if np.any(np.abs(q) > 1 + RANGE_SLACK):
        raise ProbDelDomainError("|q| must not exceed 1")
    return a, b, q


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def f1_real(a, b, q):
    """``1 - 2 a^2 b^2 (1 - q)`` for real amplitudes, blank ``|+>``; vectorized."""
    a, b, q = _check_real_inputs(a, b, q)
    return _scalar_or_array(1.0 - 2.0 * a ** 2 * b ** 2 * (1.0 - q))


def f1_real_printed(a, b, q):
    """``1 - 2 a^2 b^2 (1 + q)``, the published real retention fidelity."""
    a, b, q = _check_real_inputs(a, b, q)
    return _scalar_or_array(1.0 - 2.0 * a ** 2 * b ** 2 * (1.0 + q))


def f2_real(a, b, q):
    """``(1 - 2 a^2 b^2)(1 - q^2 / 2) + q ab + a^2 b^2`` for real amplitudes, blank ``|+>``; vectorized.

    Negative ``q`` is accepted; the optimum for negative ``ab`` lies there."""
    a, b, q = _check_real_inputs(a, b, q)
    ab = a * b
    A = ab ** 2
    return _scalar_or_array((1.0 - 2.0 * A) * (1.0 - 0.5 * q ** 2) + q * ab + A)


def delta_f(state, params, blank):
    return f2_closed_general(state, params, blank) - f1_closed(state, params.q)


def delta_f_printed(state, params, blank):
    """``f2 - f1`` with the published retention fidelity; ``0.25 + q - 0.25 q^2`` for ``|+>`` and real ``q``."""
    return f2_closed_general(state, params, blank) - f1_printed(state, params.q)


def closed_fidelities(state, params, blank):
    return FidelityPair.from_values(f1_closed(state, params.q), f2_closed_general(state, params, blank))


def oracle_fidelities(state, params, blank):
    """Fidelities by brute force: run the machine, trace out, take overlaps."""
    rho1 = reduced_state(params, blank, state, Factor.MODE1)
    rho2 = reduced_state(params, blank, state, Factor.MODE2)

    psi = PureState(QUBIT_LAYOUT, state.vector)
    sigma = PureState(QUBIT_LAYOUT, blank.vector)

    retval = FidelityPair.from_values(fidelity_pure(psi, rho1), fidelity_pure(sigma, rho2))

    if log_configuration.reduced:
        logger.debug("Oracle f1=%.15g f2=%.15g", retval.f1, retval.f2)
    else:
        logger.debug("Oracle fidelities for %r, %r, %r: %r", state, params, blank, retval)
    return retval
