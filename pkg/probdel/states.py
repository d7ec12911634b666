"""Dense pure states and density matrices on small tensor-product spaces.

Basis index ``k`` of a composite system corresponds to the digits ``(i1, i2, ...)`` in mixed radix
``factor_dims`` with ``i1`` the most significant digit, which is numpy's C ordering."""
import io
import logging

import numpy as np

from .exceptions import ProbDelLayoutError, ProbDelNormalizationError, ProbDelValueError
from .fields import ArrayField, ContainerField, IntegerField, TextField, TupleField
from .types import Container
from .utils import RepresentableEnum, doc_enum, log_configuration, tolerances

logger = logging.getLogger(__name__)


@doc_enum
class Factor(RepresentableEnum):
    """Named registers of the deletion machine"""

    MODE1 = 'mode1'  # doc: First qubit, the retained copy
    MODE2 = 'mode2'  # doc: Second qubit, the copy to be deleted
    ANCILLA = 'ancilla'  # doc: Machine ancilla with orthonormal basis |A>, |A0>, |A1>


def _factor_name(keep):
    return keep.value if isinstance(keep, Factor) else str(keep)


class SystemLayout(Container):
    """Ordered tensor factors of a composite system"""
    factor_dims = TupleField(item=IntegerField(), min_count=1, _d="Factor dimensions, most significant first")
    names = TupleField(item=TextField(), min_count=1, _d="Factor names")

    def _validate(self):
        if len(self.factor_dims) != len(self.names):
            raise ProbDelLayoutError("Layout has {} dimensions but {} names".format(len(self.factor_dims), len(self.names)))
        if len(set(self.names)) != len(self.names):
            raise ProbDelLayoutError("Duplicate factor names in {!r}".format(self.names))

    @classmethod
    def single(cls, dim, name='system'):
        return cls((dim, ), (name, ))

    @property
    def dim(self):
        return int(np.prod(self.factor_dims))

    def index_of(self, name):
        name = _factor_name(name)
        try:
            return self.names.index(name)
        except ValueError:
            raise ProbDelLayoutError("Unknown factor {!r}, layout has {}".format(name, ", ".join(self.names))) from None

    def dim_of(self, name):
        return self.factor_dims[self.index_of(name)]

    def digits(self, index):
        """Mixed-radix digits of a flat basis index."""
        return tuple(int(d) for d in np.unravel_index(index, self.factor_dims))

    def flat_index(self, *digits):
        return int(np.ravel_multi_index(digits, self.factor_dims))


DELETION_LAYOUT = SystemLayout((2, 2, 3), (Factor.MODE1.value, Factor.MODE2.value, Factor.ANCILLA.value))

QUBIT_LAYOUT = SystemLayout.single(2, 'qubit')


def _raw(vector):
    if isinstance(vector, PureState):
        return vector.amplitudes
    retval = np.asarray(vector, dtype=complex)
    if retval.ndim != 1:
        raise ProbDelValueError("Expected a state vector, got shape {}".format(retval.shape))
    if not np.all(np.isfinite(retval)):
        raise ProbDelValueError("Non-finite amplitudes in state vector")
    return retval


class PureState(Container):
    """Normalized state vector over a :class:`SystemLayout`.

    Unnormalized intermediates are plain numpy arrays ("raw vectors"); this type only holds
    vectors whose squared norm is one within the normalization tolerance."""
    layout = ContainerField(type=SystemLayout, _d="Tensor factor layout")
    amplitudes = ArrayField(ndim=1, _d="Amplitudes in mixed-radix basis order")

    def _validate(self):
        if self.amplitudes.shape[0] != self.layout.dim:
            raise ProbDelLayoutError("State has {} amplitudes, layout needs {}".format(self.amplitudes.shape[0], self.layout.dim))
        deviation = abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0)
        if deviation > tolerances.normalization:
            raise ProbDelNormalizationError(
                "State is not normalized: | ||psi||^2 - 1 | = {:.3e} exceeds {:.1e}".format(deviation, tolerances.normalization))

    @classmethod
    def from_vector(cls, vector, layout=None):
        vector = _raw(vector)
        return cls(layout or SystemLayout.single(vector.shape[0]), vector)

    @property
    def dim(self):
        return self.layout.dim

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


class DensityMatrix(Container):
    """Hermitian, positive semidefinite, unit-trace matrix"""
    dim = IntegerField(_d="Hilbert space dimension")
    entries = ArrayField(ndim=2, _d="Matrix entries")
    layout = ContainerField(type=SystemLayout, required=False, _d="Tensor factor layout, needed for partial traces")

    def _validate(self):
        if self.entries.shape != (self.dim, self.dim):
            raise ProbDelLayoutError("Matrix of shape {} does not match dim={}".format(self.entries.shape, self.dim))
        if self.layout is not None and self.layout.dim != self.dim:
            raise ProbDelLayoutError("Layout of dimension {} does not match dim={}".format(self.layout.dim, self.dim))

        hermiticity = float(np.max(np.abs(self.entries - self.entries.conj().T)))
        if hermiticity > tolerances.hermiticity:
            raise ProbDelNormalizationError("Matrix is not Hermitian: deviation {:.3e}".format(hermiticity))

        trace = complex(np.trace(self.entries))
        if abs(trace - 1.0) > tolerances.trace:
            raise ProbDelNormalizationError("Matrix trace {!r} differs from 1".format(trace))

        smallest = float(self.eigenvalues()[0])
        if smallest < tolerances.eigenvalue:
            raise ProbDelNormalizationError("Matrix is not positive semidefinite: smallest eigenvalue {:.3e}".format(smallest))

    def eigenvalues(self):
        """Eigenvalues in ascending order."""
        return np.linalg.eigvalsh(self.entries)

    def trace(self):
        return complex(np.trace(self.entries))


def tensor(u, v):
    """Kronecker product of two state vectors, returned as a raw vector.

    ``(u ⊗ v)[i * n + j] == u[i] * v[j]``; the norm of the result is the product of the norms."""
    return np.kron(_raw(u), _raw(v))


def basis_state(layout, *digits):
    vector = np.zeros(layout.dim, dtype=complex)
    vector[layout.flat_index(*digits)] = 1.0
    return PureState(layout, vector)


def outer(u):
    """Projector ``|u><u|`` of a normalized state."""
    if not isinstance(u, PureState):
        u = PureState.from_vector(u)
    return DensityMatrix(u.dim, np.outer(u.amplitudes, u.amplitudes.conj()), layout=u.layout)


def partial_trace(rho, keep):
    """Reduced density matrix of factor ``keep``, tracing out all other factors."""
    layout = rho.layout
    if layout is None:
        raise ProbDelLayoutError("Density matrix carries no layout, cannot trace out factors")

    k = layout.index_of(keep)
    dims = tuple(layout.factor_dims)
    n = len(dims)

    rows = list(range(n))
    columns = [rows[i] if i != k else n + k for i in range(n)]
    reduced = np.einsum(rho.entries.reshape(dims + dims), rows + columns, [k, n + k])

    return DensityMatrix(dims[k], reduced, layout=SystemLayout.single(dims[k], layout.names[k]))


def fidelity_pure(psi, rho):
    """Overlap ``<psi|rho|psi>`` of a pure state with a density matrix."""
    if not isinstance(psi, PureState):
        psi = PureState.from_vector(psi)
    if psi.dim != rho.dim:
        raise ProbDelLayoutError("State of dimension {} does not match matrix of dimension {}".format(psi.dim, rho.dim))

    value = complex(np.vdot(psi.amplitudes, rho.entries @ psi.amplitudes))
    if abs(value.imag) > tolerances.imaginary:
        raise ProbDelValueError("Expectation value {!r} has an imaginary residue".format(value))

    return value.real


def purity(rho):
    return float(np.real(np.trace(rho.entries @ rho.entries)))


def describe(value):
    """Text for debug logs: full nested dump, or a one-line summary in reduced mode."""
    if log_configuration.reduced:
        if isinstance(value, PureState):
            return "PureState(dim={}, norm={:.15g})".format(value.dim, value.norm())
        if isinstance(value, DensityMatrix):
            return "DensityMatrix(dim={}, trace={:.15g}, purity={:.15g})".format(value.dim, value.trace().real, purity(value))
        return repr(value)

    out = io.StringIO()
    if hasattr(value, 'print_nested'):
        value.print_nested(stream=out, prefix="\t")
    else:
        out.write(repr(value))
    return out.getvalue()
