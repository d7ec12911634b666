"""The probabilistic deletion machine.

The machine acts on two copies of a qubit (mode 1, mode 2) and a three-level ancilla whose
orthonormal basis vectors stand for the ready state ``|A>`` and the two final states ``|A0>``
and ``|A1>``::

    |00>|A>  ->  p |0>|S>|A0> + q |00>|A>
    |01>|A>  ->  |01>|A>
    |10>|A>  ->  |10>|A>
    |11>|A>  ->  p |1>|S>|A1> + q |11>|A>

where ``|S>`` is the blank state. ``p = 1, q = 0`` is the Pati-Braunstein deleting machine.
Only the span of ``|ij>|A>`` is modelled; the machine is a 12x4 isometry on that subspace."""
import logging
import math

import numpy as np

from .exceptions import ProbDelDomainError, ProbDelLayoutError, ProbDelNormalizationError
from .fields import ComplexField
from .models import IsometryReport
from .states import (
    DELETION_LAYOUT, DensityMatrix, Factor, PureState, describe, outer,
    partial_trace, tensor,
)
from .types import Container
from .utils import log_configuration, tolerances

logger = logging.getLogger(__name__)

#: Ancilla basis indices
ANCILLA_READY = 0
ANCILLA_ZERO = 1
ANCILLA_ONE = 2


def _check_unit_pair(owner, first, second, x, y):
    deviation = abs(abs(x) ** 2 + abs(y) ** 2 - 1.0)
    if deviation > tolerances.normalization:
        raise ProbDelNormalizationError(
            "{}: |{}|^2 + |{}|^2 = 1 violated by {:.3e} (tolerance {:.1e})".format(
                owner, first, second, deviation, tolerances.normalization))


class QubitState(Container):
    """Input state ``a|0> + b|1>``"""
    a = ComplexField(_d="Amplitude of |0>")
    b = ComplexField(_d="Amplitude of |1>")

    def _validate(self):
        _check_unit_pair(self.__class__.__name__, 'a', 'b', self.a, self.b)

    @classmethod
    def plus(cls):
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))

    @property
    def vector(self):
        return np.array([self.a, self.b], dtype=complex)

    @property
    def A(self):
        """``|a|^2 |b|^2``"""
        return abs(self.a) ** 2 * abs(self.b) ** 2


class BlankState(Container):
    """Blank state ``M0|0> + M1|1>`` that mode 2 should be reset to"""
    m0 = ComplexField(_d="Amplitude of |0>")
    m1 = ComplexField(_d="Amplitude of |1>")

    def _validate(self):
        _check_unit_pair(self.__class__.__name__, 'M0', 'M1', self.m0, self.m1)

    @classmethod
    def plus(cls):
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))

    @property
    def vector(self):
        return np.array([self.m0, self.m1], dtype=complex)


class MachineParams(Container):
    """Branch amplitudes of the machine.

    ``|p|^2`` is the deletion probability, ``|q|^2`` the probability that the copy survives."""
    p = ComplexField(_d="Amplitude of the deleting branch")
    q = ComplexField(_d="Amplitude of the retaining branch")

    def _validate(self):
        _check_unit_pair(self.__class__.__name__, 'p', 'q', self.p, self.q)
        if abs(self.p) == 0:
            raise ProbDelDomainError("MachineParams: p must not vanish (p = 0 never deletes)")

    @classmethod
    def from_deletion_probability(cls, p):
        """Real parameters from the real amplitude ``p`` in ``(0, 1]``, with ``q = +sqrt(1 - p^2)``."""
        if isinstance(p, complex) or not (0 < p <= 1):
            raise ProbDelDomainError("Real deleting amplitude must lie in (0, 1], got {!r}".format(p))
        return cls(float(p), math.sqrt(max(0.0, 1.0 - float(p) ** 2)))

    @property
    def deletion_probability(self):
        return abs(self.p) ** 2


def pati_braunstein_params():
    return MachineParams(1.0, 0.0)


def _ket(mode1, mode2, ancilla):
    return tensor(tensor(mode1, mode2), ancilla)


def _build_isometry(params, blank, zero_ancilla):
    """Columns are the images of ``|00>|A>, |01>|A>, |10>|A>, |11>|A>``."""
    e = np.eye(2, dtype=complex)
    ancilla = np.eye(3, dtype=complex)
    ready, one = ancilla[ANCILLA_READY], ancilla[ANCILLA_ONE]
    sigma = blank.vector

    columns = [
        params.p * _ket(e[0], sigma, zero_ancilla) + params.q * _ket(e[0], e[0], ready),
        _ket(e[0], e[1], ready),
        _ket(e[1], e[0], ready),
        params.p * _ket(e[1], sigma, one) + params.q * _ket(e[1], e[1], ready),
    ]
    return np.stack(columns, axis=1)


def isometry_matrix(params, blank):
    """The machine as an explicit 12x4 complex matrix."""
    return _build_isometry(params, blank, np.eye(3, dtype=complex)[ANCILLA_ZERO])


def machine_basis_images(params, blank):
    matrix = isometry_matrix(params, blank)
    return tuple(PureState(DELETION_LAYOUT, matrix[:, i]) for i in range(4))


def gram_report(matrix):
    gram = matrix.conj().T @ matrix
    deviation = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
    return IsometryReport(deviation <= tolerances.isometry, deviation, gram)


def verify_isometry(params, blank):
    """Check that the basis images are orthonormal.

    Returns an :class:`~probdel.models.IsometryReport` carrying the verdict, the largest entrywise
    deviation of the Gram matrix from the identity, and the Gram matrix itself."""
    report = gram_report(isometry_matrix(params, blank))
    if not report.ok:
        logger.warning("Machine %r with blank %r is not an isometry, deviation %.3e", params, blank, report.deviation)
    return report


def _log_state(label, value):
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("{} {}\n{}".format(label, "(abbrv.)" if log_configuration.reduced else "", describe(value)))


def apply_machine(params, blank, state):
    """Output of the machine for the input ``|psi>|psi>|A>``, by linear extension over the basis images."""
    coefficients = tensor(state.vector, state.vector)
    amplitudes = isometry_matrix(params, blank) @ coefficients

    with tolerances.changed(normalization=max(tolerances.normalization, 1e-10)):
        retval = PureState(DELETION_LAYOUT, amplitudes)

    _log_state("Machine output", retval)
    return retval


def _check_keep(keep):
    name = keep.value if isinstance(keep, Factor) else keep
    if name not in (Factor.MODE1.value, Factor.MODE2.value):
        raise ProbDelLayoutError("Reduced states are available for mode1 and mode2, not {!r}".format(keep))
    return Factor(name)


def reduced_state(params, blank, state, keep):
    """Reduced density matrix of one mode, obtained by simulation."""
    keep = _check_keep(keep)
    output = apply_machine(params, blank, state)
    with tolerances.changed(trace=max(tolerances.trace, 1e-10), hermiticity=max(tolerances.hermiticity, 1e-10)):
        retval = partial_trace(outer(output), keep)

    _log_state("Reduced state of {}".format(keep.value), retval)
    return retval


def reduced_state_closed(params, blank, state, keep):
    """Closed-form reduced density matrix of one mode in the computational basis.

    Both modes share the off-diagonal element ``q a b* |a|^2 + q* a b* |b|^2``. Mode 1 has the input
    populations on its diagonal; mode 2 is ``|p|^2 (1 - 2A) |S><S|`` plus the retained part
    ``diag(|q|^2 |a|^4, |q|^2 |b|^4)`` plus ``A`` times the identity, with ``A = |a|^2 |b|^2``."""
    keep = _check_keep(keep)
    a, b, p, q = state.a, state.b, params.p, params.q
    A = state.A
    off = q * a * b.conjugate() * abs(a) ** 2 + q.conjugate() * a * b.conjugate() * abs(b) ** 2

    if keep is Factor.MODE1:
        entries = np.array([
            [abs(a) ** 2, off],
            [off.conjugate(), abs(b) ** 2],
        ], dtype=complex)
    else:
        sigma = blank.vector
        entries = abs(p) ** 2 * (1 - 2 * A) * np.outer(sigma, sigma.conj())
        entries = entries + np.array([
            [abs(q) ** 2 * abs(a) ** 4, off],
            [off.conjugate(), abs(q) ** 2 * abs(b) ** 4],
        ], dtype=complex)
        entries = entries + A * np.eye(2)

    return DensityMatrix(2, entries)


def _random_unit_pair(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_qubit_state(rng):
    return QubitState(*_random_unit_pair(rng))


def random_blank_state(rng):
    return BlankState(*_random_unit_pair(rng))


def random_machine_params(rng):
    while True:
        p, q = _random_unit_pair(rng)
        if abs(p) > 1e-6:
            return MachineParams(p, q)

