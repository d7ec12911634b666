import math
import re
import threading
from contextlib import contextmanager
try:
    from enum import Enum, EnumType
except ImportError:
    from enum import Enum, EnumMeta as EnumType

from .exceptions import ProbDelValueError

#: Number of significant digits used whenever a real number leaves the process.
SIGNIFICANT_DIGITS = 15

COMPLEX_RE = re.compile(r'^\s*(?P<re>[^,\s]+)\s*(?:,\s*(?P<im>[^,\s]+)\s*)?$')


def format_real(value):
    return "{:.{}g}".format(value, SIGNIFICANT_DIGITS)


def parse_complex(text):
    """Parse the textual form ``re[,im]`` into a complex number.

    ``"0.6"`` is the real number 0.6, ``"0.6,0.8"`` is 0.6 + 0.8i."""
    match = COMPLEX_RE.match(str(text))
    if not match:
        raise ProbDelValueError("Expected 're' or 're,im' for a complex value, got {!r}".format(text))
    try:
        real = float(match.group('re'))
        imag = float(match.group('im')) if match.group('im') is not None else 0.0
    except ValueError as e:
        raise ProbDelValueError("Expected 're' or 're,im' for a complex value, got {!r}".format(text)) from e
    if not (math.isfinite(real) and math.isfinite(imag)):
        raise ProbDelValueError("Non-finite complex value {!r}".format(text))
    return complex(real, imag)


class DocTypeMixin:
    _DOC_TYPE = None

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)

        type_ = self._DOC_TYPE
        if type_ is None:
            if isinstance(getattr(self, 'type', None), type):
                type_ = getattr(self, 'type')

        if type_ is not None:
            if not self.__doc__:
                self.__doc__ = ""

            name = type_.__name__
            if type_.__module__ != 'builtins':
                name = "{}.{}".format(type_.__module__, name)

            self.__doc__ = self.__doc__ + "\n\n:type: :class:`{}`".format(name)


class FieldRenderFormatStringMixin:
    _FORMAT_STRING = None

    def _render_value(self, value):
        return self._FORMAT_STRING.format(value)


class RepresentableEnum(Enum):
    def __repr__(self):
        return "{}.{}.{}".format(self.__class__.__module__, self.__class__.__name__, self.name)

    def __str__(self):
        return self.value


class LogConfiguration(threading.local):
    """Thread-local configuration object to guide log output.

    reduced: Log summaries (norms, traces, deviations) instead of full state vectors and density matrices.
    """
    def __init__(self, reduced=False):
        super().__init__()
        self.reduced = reduced

    @staticmethod
    def set(reduced=False):
        """Permanently change the log configuration for this thread."""
        log_configuration.reduced = reduced

    @staticmethod
    @contextmanager
    def changed(reduced=False):
        """Temporarily change the log configuration for this thread."""
        old_reduced = log_configuration.reduced
        log_configuration.set(reduced=reduced)
        try:
            yield
        finally:
            log_configuration.set(reduced=old_reduced)


log_configuration = LogConfiguration()


class ToleranceConfiguration(threading.local):
    """Thread-local numerical tolerances.

    normalization: allowed deviation of a state's squared norm (or a coefficient pair's weight) from one.
    hermiticity: allowed entrywise deviation of a density matrix from its adjoint.
    trace: allowed deviation of a density matrix trace from one.
    eigenvalue: smallest admissible density matrix eigenvalue.
    isometry: allowed entrywise deviation of a Gram matrix from the identity.
    imaginary: allowed imaginary residue of an expectation value that must be real.
    """
    DEFAULTS = {
        'normalization': 1e-12,
        'hermiticity': 1e-12,
        'trace': 1e-12,
        'eigenvalue': -1e-10,
        'isometry': 1e-12,
        'imaginary': 1e-12,
    }

    def __init__(self):
        super().__init__()
        for name, value in self.DEFAULTS.items():
            setattr(self, name, value)

    @staticmethod
    def set(**kwargs):
        """Permanently change tolerances for this thread."""
        for name, value in kwargs.items():
            if name not in ToleranceConfiguration.DEFAULTS:
                raise TypeError("Unknown tolerance {!r}".format(name))
            setattr(tolerances, name, float(value))

    @staticmethod
    @contextmanager
    def changed(**kwargs):
        """Temporarily change tolerances for this thread."""
        old = {name: getattr(tolerances, name) for name in kwargs}
        tolerances.set(**kwargs)
        try:
            yield tolerances
        finally:
            tolerances.set(**old)


tolerances = ToleranceConfiguration()

try:
    from enum_tools import document_enum

    doc_enum = document_enum
except ImportError:
    def doc_enum(an_enum: EnumType) -> EnumType:
        return an_enum
