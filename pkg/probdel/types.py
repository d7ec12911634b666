from contextlib import suppress

from .exceptions import ProbDelFrozenError


class Field:
    def __init__(self, required=True, default=None, _d=None):
        self.required = required
        self.default = default
        self.name = None

        self.__doc__ = _d

    def __set_name__(self, owner, name):
        self.name = name

    def _default_value(self):
        return self.default

    def __get__(self, instance, owner):
        if instance is None:
            return self

        if self not in instance._values:
            return self._default_value()

        return instance._values[self]

    def __set__(self, instance, value):
        if instance.__dict__.get('_frozen', False):
            raise ProbDelFrozenError("Cannot assign {}.{}: values are immutable after construction".format(
                instance.__class__.__name__, self.name))

        if value is None:
            instance._values[self] = self._default_value()
        else:
            value_ = self._parse_value(value)
            self._check_value(value_)
            instance._values[self] = value_

    def __delete__(self, instance):
        raise ProbDelFrozenError("Cannot delete {}.{}".format(instance.__class__.__name__, self.name))

    def _parse_value(self, value):
        raise NotImplementedError('Needs to be implemented in subclass')

    def _render_value(self, value):
        raise NotImplementedError('Needs to be implemented in subclass')

    def _check_value(self, value):
        with suppress(NotImplementedError):
            self._render_value(value)

    def render(self, value):
        if value is None:
            return None

        return self._render_value(value)

    def _inline_doc_comment(self, value):
        if self.__doc__:
            d = self.__doc__.splitlines()[0].strip()
            if d:
                return " # {}".format(d)
        return ""


class TypedField(Field):
    def __init__(self, type=None, *args, **kwargs):
        super().__init__(*args, **kwargs)

        self.type = type or getattr(self.__class__, 'type', None)


class ContainerMeta(type):
    def __new__(cls, name, bases, classdict):
        retval = super().__new__(cls, name, bases, classdict)
        retval._fields = {}
        for supercls in reversed(bases):
            if hasattr(supercls, '_fields'):
                retval._fields.update((k, v) for (k, v) in supercls._fields.items())
        retval._fields.update((k, v) for (k, v) in classdict.items() if isinstance(v, Field))
        return retval


class Container(metaclass=ContainerMeta):
    """Immutable value built from declared :class:`Field` attributes.

    Values may be given positionally (in declaration order) or by keyword. After all fields are
    parsed and checked, :meth:`_validate` runs and the instance is frozen."""

    def __init__(self, *args, **kwargs):
        init_values = {}

        if len(args) > len(self._fields):
            raise TypeError("__init__() takes at most {} positional arguments ({} given)".format(len(self._fields), len(args)))

        for init_value, field_name in zip(args, self._fields):
            init_values[field_name] = init_value

        for field_name in self._fields:
            if field_name in kwargs:
                if field_name in init_values:
                    raise TypeError("__init__() got multiple values for argument {}".format(field_name))
                init_values[field_name] = kwargs.pop(field_name)

        if kwargs:
            raise TypeError("__init__() got unexpected keyword arguments {}".format(", ".join(sorted(kwargs))))

        self._values = {}

        for k, v in init_values.items():
            setattr(self, k, v)

        for name, field in self._fields.items():
            if field.required and getattr(self, name) is None:
                raise TypeError("Required field {}.{} was not given".format(self.__class__.__name__, name))

        self._validate()
        self._frozen = True

    def __setattr__(self, name, value):
        if self.__dict__.get('_frozen', False):
            raise ProbDelFrozenError("Cannot assign {}.{}: values are immutable after construction".format(
                self.__class__.__name__, name))
        super().__setattr__(name, value)

    def _validate(self):
        pass

    def replace(self, **changes):
        """Return a new instance with some field values exchanged."""
        values = {name: getattr(self, name) for name in self._fields}
        values.update(changes)
        return self.__class__(**values)

    def as_dict(self):
        return {name: getattr(self, name) for name in self._fields}

    @property
    def _repr_items(self):
        for name, field in self._fields.items():
            val = getattr(self, name)
            if not field.required and val is None:
                continue
            yield (name, val)

    def __repr__(self):
        return "{}.{}({})".format(
            self.__class__.__module__,
            self.__class__.__name__,
            ", ".join(
                "{}={!r}".format(name, val) for (name, val) in self._repr_items
            )
        )

    def print_nested(self, stream=None, level=0, indent="    ", prefix="", first_level_indent=True, trailer="", print_doc=True, first_line_suffix=""):
        """Structured nested print of the object to the given stream."""
        import sys
        stream = stream or sys.stdout

        stream.write(
            ((prefix + level * indent) if first_level_indent else "")
            + "{}.{}(".format(self.__class__.__module__, self.__class__.__name__)
            + first_line_suffix
            + "\n"
        )
        for name, val in self._repr_items:
            if print_doc:
                docstring = self._fields[name]._inline_doc_comment(val)
            else:
                docstring = ""
            if not hasattr(getattr(val, 'print_nested', None), '__call__'):
                rendered = "{!r}".format(val).replace("\n", "\n" + prefix + (level + 2) * indent)
                stream.write(
                    (prefix + (level + 1) * indent) + "{} = {},{}\n".format(name, rendered, docstring)
                )
            else:
                stream.write(
                    (prefix + (level + 1) * indent) + "{} = ".format(name)
                )
                val.print_nested(stream=stream, level=level + 2, indent=indent, prefix=prefix, first_level_indent=False, trailer=",", print_doc=print_doc,
                                 first_line_suffix=docstring)
        stream.write((prefix + level * indent) + "){}\n".format(trailer))
