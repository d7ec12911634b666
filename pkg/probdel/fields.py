import math
import numbers
import re
from types import MappingProxyType

import numpy as np

from probdel.exceptions import ProbDelValueError
from probdel.types import Container, TypedField
from probdel.utils import (
    DocTypeMixin, FieldRenderFormatStringMixin, SIGNIFICANT_DIGITS,
    format_real, parse_complex,
)


class ValueField(DocTypeMixin, TypedField):
    pass


class ContainerField(DocTypeMixin, TypedField):
    def _check_value(self, value):
        if self.type:
            if not isinstance(value, self.type):
                raise TypeError("Value {!r} is not of type {!r}".format(value, self.type))
        super()._check_value(value)

    def _parse_value(self, value):
        if isinstance(value, dict) and self.type:
            return self.type(**value)
        return value


class RealField(FieldRenderFormatStringMixin, ValueField):
    type = 'real'
    _DOC_TYPE = float
    _FORMAT_STRING = "{{:.{}g}}".format(SIGNIFICANT_DIGITS)

    def __init__(self, *args, minimum=None, maximum=None, **kwargs):
        self.minimum = minimum
        self.maximum = maximum
        super().__init__(*args, **kwargs)

    def _parse_value(self, value):
        if isinstance(value, (complex, np.complexfloating)):
            raise TypeError("Complex value {!r} not allowed for value of type {!r}".format(value, self.type))
        try:
            _value = float(value)
        except (TypeError, ValueError) as e:
            raise ProbDelValueError("Invalid value {!r} for value of type {!r}".format(value, self.type)) from e
        if not math.isfinite(_value):
            raise ProbDelValueError("Non-finite value {!r} not allowed for value of type {!r}".format(value, self.type))
        return _value

    def _check_value(self, value):
        if self.minimum is not None and value < self.minimum:
            raise ProbDelValueError("Value {!r} below minimum {!r}".format(value, self.minimum))
        if self.maximum is not None and value > self.maximum:
            raise ProbDelValueError("Value {!r} above maximum {!r}".format(value, self.maximum))
        super()._check_value(value)


class ComplexField(ValueField):
    type = 'complex'
    _DOC_TYPE = complex

    def _parse_value(self, value):
        if isinstance(value, str):
            return parse_complex(value)
        if not isinstance(value, numbers.Number) or isinstance(value, bool):
            raise TypeError("Invalid value {!r} for value of type {!r}".format(value, self.type))
        _value = complex(value)
        if not (math.isfinite(_value.real) and math.isfinite(_value.imag)):
            raise ProbDelValueError("Non-finite value {!r} not allowed for value of type {!r}".format(value, self.type))
        return _value

    def _render_value(self, value):
        if value.imag == 0:
            return format_real(value.real)
        return "{},{}".format(format_real(value.real), format_real(value.imag))


class IntegerField(FieldRenderFormatStringMixin, ValueField):
    type = 'int'
    _DOC_TYPE = int
    _FORMAT_STRING = "{:d}"

    def _parse_value(self, value):
        if isinstance(value, bool):
            raise TypeError("Boolean {!r} not allowed for value of type {!r}".format(value, self.type))
        if isinstance(value, str):
            if not re.match(r'^[1-9]\d*$', value):
                raise ProbDelValueError("Only positive integers allowed for value of type {!r}: {!r}".format(self.type, value))
            return int(value, 10)
        if not isinstance(value, numbers.Integral):
            raise TypeError("Invalid value {!r} for value of type {!r}".format(value, self.type))
        if value < 1:
            raise ProbDelValueError("Only positive integers allowed for value of type {!r}: {!r}".format(self.type, value))
        return int(value)


class TextField(FieldRenderFormatStringMixin, ValueField):
    type = 'txt'
    _DOC_TYPE = str
    _FORMAT_STRING = "{}"

    def _parse_value(self, value): return str(value)


class BooleanField(ValueField):
    type = 'bool'
    _DOC_TYPE = bool

    def _render_value(self, value):
        return "true" if value else "false"

    def _parse_value(self, value):
        if value is True or value == "true":
            return True
        elif value is False or value == "false":
            return False
        else:
            raise ProbDelValueError("Invalid value {!r} for BooleanField".format(value))


class CodeFieldMixin:

    def __init__(self, enum=None, *args, **kwargs):
        if enum:
            self._DOC_TYPE = enum
            self._enum = enum
        else:
            self._enum = None
        super().__init__(*args, **kwargs)

    def _parse_value(self, value):
        if self._enum and isinstance(value, self._enum):
            return value
        retval = super()._parse_value(value)
        if self._enum:
            try:
                retval = self._enum(retval)
            except ValueError as e:
                raise ProbDelValueError("Invalid value {!r}, expected one of {}".format(
                    value, ", ".join(str(m.value) for m in self._enum))) from e
        return retval

    def _render_value(self, value):
        retval = value
        if self._enum:
            retval = str(value.value)
        return super()._render_value(retval)

    def _inline_doc_comment(self, value):
        retval = super()._inline_doc_comment(value)
        if self._enum and value is not None:
            addendum = value.__doc__
            if addendum and addendum is not value.__class__.__doc__:
                if not retval:
                    retval = " # "
                else:
                    retval = retval + ": "
                retval = retval + addendum
        return retval


class CodeField(CodeFieldMixin, TextField):
    type = 'code'
    _DOC_TYPE = str


class TupleField(ValueField):
    """Fixed sequence whose items are parsed by another field."""
    type = 'tuple'
    _DOC_TYPE = tuple

    def __init__(self, item=None, *args, min_count=0, **kwargs):
        self.item = item
        self.min_count = min_count
        super().__init__(*args, **kwargs)

    def _parse_value(self, value):
        if isinstance(value, (str, bytes)):
            raise TypeError("Expected a sequence, got {!r}".format(value))
        retval = []
        for v in value:
            v_ = self.item._parse_value(v) if self.item else v
            if self.item:
                self.item._check_value(v_)
            retval.append(v_)
        if len(retval) < self.min_count:
            raise ProbDelValueError("Sequence {!r} shorter than min_count={}".format(retval, self.min_count))
        return tuple(retval)

    def _render_value(self, value):
        if self.item:
            return tuple(self.item.render(v) for v in value)
        return tuple(value)


class MappingField(ValueField):
    """Read-only mapping, insertion order kept."""
    type = 'map'
    _DOC_TYPE = dict

    def _parse_value(self, value):
        return MappingProxyType(dict(value))

    def _render_value(self, value):
        return dict(value)


class ArrayField(ValueField):
    """Finite numpy array of fixed rank, stored as a read-only copy."""
    type = 'array'
    _DOC_TYPE = np.ndarray

    def __init__(self, *args, ndim=1, dtype=complex, **kwargs):
        self.ndim = ndim
        self.dtype = dtype
        super().__init__(*args, **kwargs)

    def _parse_value(self, value):
        if self.dtype is float and np.iscomplexobj(value):
            raise TypeError("Complex array not allowed for real ArrayField")
        _value = np.array(value, dtype=self.dtype)
        if _value.ndim != self.ndim:
            raise ProbDelValueError("Expected an array of rank {}, got shape {}".format(self.ndim, _value.shape))
        if not np.all(np.isfinite(_value)):
            raise ProbDelValueError("Non-finite entries not allowed in array of shape {}".format(_value.shape))
        _value.flags.writeable = False
        return _value

    def _render_value(self, value):
        return value.tolist()


__all__ = [
    'Container', 'ValueField', 'ContainerField', 'RealField', 'ComplexField', 'IntegerField',
    'TextField', 'BooleanField', 'CodeField', 'TupleField', 'MappingField', 'ArrayField',
]
