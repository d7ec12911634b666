import csv
import io
import json
import logging
import numbers
import sys

from .exceptions import ProbDelOutputError, ProbDelValueError
from .fields import MappingField, TextField, TupleField
from .types import Container
from .utils import RepresentableEnum, doc_enum, format_real

logger = logging.getLogger(__name__)


@doc_enum
class OutputFormat(RepresentableEnum):
    """Serialization of command results"""

    CSV = 'csv'  # doc: Header row plus one line per row, comma separated, LF terminated
    JSON = 'json'  # doc: One object with command, params, rows and notes


class OutputRecord(Container):
    """Result of one command, ready for serialization"""
    command = TextField(_d="Command name")
    params = MappingField(_d="Effective parameters")
    columns = TupleField(item=TextField(), min_count=1, _d="Column names, stable across versions")
    rows = TupleField(_d="Row tuples in column order")
    notes = TupleField(item=TextField(), required=False, default=(), _d="Discrepancy and limit notes")

    def _validate(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ProbDelValueError("Row {!r} does not match columns {!r}".format(row, self.columns))


def render_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return "{:d}".format(value)
    if isinstance(value, numbers.Real):
        return format_real(value)
    return str(value)


def _json_value(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return str(value)


class OutputSerializer:
    """Serializer for :class:`OutputRecord` values"""

    def serialize(self, record, format=OutputFormat.CSV):
        format = OutputFormat(format)
        if format is OutputFormat.JSON:
            return self.serialize_json(record)
        return self.serialize_csv(record)

    def serialize_csv(self, record):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(record.columns)
        for row in record.rows:
            writer.writerow([render_cell(value) for value in row])
        return out.getvalue()

    def serialize_json(self, record):
        document = {
            'command': record.command,
            'params': {k: _json_value(v) for (k, v) in record.params.items()},
            'rows': [
                {name: _json_value(value) for (name, value) in zip(record.columns, row)}
                for row in record.rows
            ],
            'notes': list(record.notes),
        }
        return json.dumps(document, indent=2) + "\n"


class OutputParser:
    """Parser for CSV produced by :class:`OutputSerializer`"""

    @staticmethod
    def parse_cell(text):
        if text == "":
            return None
        if text in ("true", "false"):
            return text == "true"
        try:
            return float(text)
        except ValueError:
            return text

    def parse_csv(self, text):
        """Return the column names and the rows as dictionaries."""
        reader = csv.reader(io.StringIO(text))
        try:
            columns = next(reader)
        except StopIteration:
            raise ProbDelValueError("Empty CSV document") from None

        rows = []
        for line in reader:
            if len(line) != len(columns):
                raise ProbDelValueError("CSV line {!r} does not match header {!r}".format(line, columns))
            rows.append({name: self.parse_cell(cell) for (name, cell) in zip(columns, line)})
        return columns, rows


def write_output(text, path=None):
    """Write to ``path``, or to standard output when no path is given."""
    if path is None or path == '-':
        sys.stdout.write(text)
        return
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    except OSError as e:
        raise ProbDelOutputError("Cannot write output to {}: {}".format(path, e)) from e
    logger.info("Wrote %d bytes to %s", len(text.encode('utf-8')), path)
