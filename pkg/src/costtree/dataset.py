"""Attribute-based datasets: schema, columnar storage, CSV I/O, generators.

A dataset holds examples over a fixed schema of nominal and numeric
attributes plus a nominal class attribute.  Values are stored columnwise:
nominal columns as integer codes into the attribute's domain, numeric
columns as float64.  Induction code operates on a dataset plus an index
array, so subsetting never copies the underlying columns.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DataFormatError

# Names and nominal values may not contain the separators used by the
# CSV and tree file formats.
_NAME_RE = re.compile(r"^[^\s,:{}=<>]+$")
_VALUE_RE = re.compile(r"^[^\s,:{}=<>]+$")


@dataclass(frozen=True)
class Attribute:
    """One column of the schema. ``domain`` is None for numeric attributes."""

    name: str
    index: int
    domain: tuple[str, ...] | None = None

    @property
    def is_numeric(self) -> bool:
        return self.domain is None

    @property
    def arity(self) -> int:
        if self.domain is None:
            raise ValueError(f"attribute {self.name!r} is numeric")
        return len(self.domain)

    def code_of(self, value: str | float) -> int:
        """Domain position of a nominal value."""
        if self.domain is None:
            raise ValueError(f"attribute {self.name!r} is numeric")
        try:
            return self.domain.index(str(value))
        except ValueError:
            raise DataFormatError(
                f"value {value!r} not in domain of attribute {self.name!r}"
            ) from None


class Example(NamedTuple):
    values: tuple
    label: str


def _check_name(name: str, what: str) -> None:
    if not _NAME_RE.match(name):
        raise DataFormatError(f"invalid {what} {name!r}")


def make_schema(spec: Sequence[tuple[str, tuple[str, ...] | None]]) -> tuple[Attribute, ...]:
    """Build a schema from (name, domain-or-None) pairs."""
    names = set()
    schema = []
    for j, (name, domain) in enumerate(spec):
        _check_name(name, "attribute name")
        if name in names:
            raise DataFormatError(f"duplicate attribute name {name!r}")
        names.add(name)
        if domain is not None:
            if len(domain) < 2:
                raise DataFormatError(
                    f"attribute {name!r} needs at least two domain values"
                )
            for v in domain:
                _check_name(v, "nominal value")
            if len(set(domain)) != len(domain):
                raise DataFormatError(f"duplicate domain value in {name!r}")
            domain = tuple(domain)
        schema.append(Attribute(name, j, domain))
    return tuple(schema)


class Dataset:
    """Immutable columnar example collection over a fixed schema."""

    def __init__(
        self,
        schema: tuple[Attribute, ...],
        classes: tuple[str, ...],
        columns: list[np.ndarray],
        y: np.ndarray,
    ):
        if len(classes) < 2:
            raise DataFormatError("need at least two classes")
        if len(set(classes)) != len(classes):
            raise DataFormatError("duplicate class name")
        for c in classes:
            _check_name(c, "class name")
        if len(columns) != len(schema):
            raise DataFormatError("column count does not match schema")
        self.schema = tuple(schema)
        self.classes = tuple(classes)
        self._columns = [np.asarray(col) for col in columns]
        self._y = np.asarray(y, dtype=np.int64)
        for a, col in zip(self.schema, self._columns):
            if col.shape != self._y.shape:
                raise DataFormatError("ragged columns")
            if a.is_numeric:
                if not np.all(np.isfinite(col)):
                    raise DataFormatError(
                        f"non-finite value in numeric attribute {a.name!r}"
                    )
        if len(self._y) and (self._y.min() < 0 or self._y.max() >= len(classes)):
            raise DataFormatError("class code out of range")

    # -- basic accessors ----------------------------------------------------

    def __len__(self) -> int:
        return len(self._y)

    @property
    def n_examples(self) -> int:
        return len(self._y)

    @property
    def n_attributes(self) -> int:
        return len(self.schema)

    @property
    def y(self) -> np.ndarray:
        return self._y

    def column(self, j: int) -> np.ndarray:
        return self._columns[j]

    def class_counts(self, idx: np.ndarray | None = None) -> np.ndarray:
        y = self._y if idx is None else self._y[idx]
        return np.bincount(y, minlength=len(self.classes))

    def class_frequencies(self, idx: np.ndarray | None = None) -> np.ndarray:
        counts = self.class_counts(idx)
        total = counts.sum()
        if total == 0:
            raise ValueError("empty example set has no class frequencies")
        return counts / total

    def example(self, i: int) -> Example:
        values = []
        for a, col in zip(self.schema, self._columns):
            if a.is_numeric:
                values.append(float(col[i]))
            else:
                values.append(a.domain[int(col[i])])
        return Example(tuple(values), self.classes[int(self._y[i])])

    @property
    def examples(self) -> list[Example]:
        return [self.example(i) for i in range(len(self))]

    def select(self, idx: np.ndarray) -> "Dataset":
        """New dataset containing the rows in ``idx`` (copies columns)."""
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(
            self.schema,
            self.classes,
            [col[idx] for col in self._columns],
            self._y[idx],
        )

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_examples(
        schema: Sequence[Attribute],
        classes: Sequence[str],
        examples: Sequence[Example | tuple],
    ) -> "Dataset":
        schema = tuple(schema)
        classes = tuple(classes)
        class_index = {c: k for k, c in enumerate(classes)}
        n = len(examples)
        columns: list[np.ndarray] = []
        for a in schema:
            dtype = np.float64 if a.is_numeric else np.int64
            columns.append(np.empty(n, dtype=dtype))
        y = np.empty(n, dtype=np.int64)
        for i, ex in enumerate(examples):
            values, label = ex
            if len(values) != len(schema):
                raise DataFormatError(
                    f"example {i} has {len(values)} values, expected {len(schema)}"
                )
            for a in schema:
                v = values[a.index]
                if a.is_numeric:
                    fv = float(v)
                    if not np.isfinite(fv):
                        raise DataFormatError(
                            f"non-finite value for attribute {a.name!r}"
                        )
                    columns[a.index][i] = fv
                else:
                    columns[a.index][i] = a.code_of(v)
            if str(label) not in class_index:
                raise DataFormatError(f"unknown class label {label!r}")
            y[i] = class_index[str(label)]
        return Dataset(schema, classes, columns, y)


# -- CSV format --------------------------------------------------------------
#
# Header: comma-separated "name:kind" fields, kind is "num" or "{v1,v2,...}".
# The last column is the class attribute and must be nominal.  One example
# per row; nominal cells are domain symbols, numeric cells are decimal
# literals.  Missing values are not supported.


def _split_header(line: str) -> list[str]:
    fields = []
    depth = 0
    cur = []
    for ch in line:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise DataFormatError("unbalanced braces in header")
        if ch == "," and depth == 0:
            fields.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise DataFormatError("unbalanced braces in header")
    fields.append("".join(cur))
    return fields


def _parse_header_field(field: str) -> tuple[str, tuple[str, ...] | None]:
    name, sep, kind = field.partition(":")
    if not sep:
        raise DataFormatError(f"malformed header field {field!r}")
    name = name.strip()
    kind = kind.strip()
    _check_name(name, "attribute name")
    if kind == "num":
        return name, None
    if kind.startswith("{") and kind.endswith("}"):
        values = tuple(v.strip() for v in kind[1:-1].split(","))
        if len(values) < 2 or any(not v for v in values):
            raise DataFormatError(f"bad domain in header field {field!r}")
        return name, values
    raise DataFormatError(f"malformed header field {field!r}")


def load_dataset(path: str | Path) -> Dataset:
    """Read a dataset from its CSV file form."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    fields = _split_header(lines[0])
    if len(fields) < 2:
        raise DataFormatError(f"{path}: header needs attributes and a class column")
    parsed = [_parse_header_field(f) for f in fields]
    cls_name, cls_domain = parsed[-1]
    if cls_domain is None:
        raise DataFormatError(f"{path}: class column must be nominal")
    schema = make_schema(parsed[:-1])
    classes = cls_domain
    n = len(lines) - 1
    columns: list[np.ndarray] = [
        np.empty(n, dtype=np.float64 if a.is_numeric else np.int64) for a in schema
    ]
    y = np.empty(n, dtype=np.int64)
    class_index = {c: k for k, c in enumerate(classes)}
    for i, line in enumerate(lines[1:]):
        cells = line.split(",")
        if len(cells) != len(schema) + 1:
            raise DataFormatError(
                f"{path}: row {i + 1} has {len(cells)} cells, expected {len(schema) + 1}"
            )
        for a in schema:
            cell = cells[a.index].strip()
            if not cell or cell == "?":
                raise DataFormatError(f"{path}: missing value in row {i + 1}")
            if a.is_numeric:
                try:
                    v = float(cell)
                except ValueError:
                    raise DataFormatError(
                        f"{path}: bad numeric value {cell!r} in row {i + 1}"
                    ) from None
                if not np.isfinite(v):
                    raise DataFormatError(f"{path}: non-finite value in row {i + 1}")
                columns[a.index][i] = v
            else:
                if cell not in a.domain:
                    raise DataFormatError(
                        f"{path}: value {cell!r} not in domain of {a.name!r} (row {i + 1})"
                    )
                columns[a.index][i] = a.domain.index(cell)
        label = cells[-1].strip()
        if label not in class_index:
            raise DataFormatError(f"{path}: unknown class {label!r} in row {i + 1}")
        y[i] = class_index[label]
    return Dataset(schema, classes, columns, y)


def _format_number(v: float) -> str:
    # repr round-trips float64 exactly, keeping save/load lossless
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def save_dataset(ds: Dataset, path: str | Path) -> None:
    parts = []
    for a in ds.schema:
        kind = "num" if a.is_numeric else "{" + ",".join(a.domain) + "}"
        parts.append(f"{a.name}:{kind}")
    parts.append("class:{" + ",".join(ds.classes) + "}")
    lines = [",".join(parts)]
    for i in range(len(ds)):
        cells = []
        for a in ds.schema:
            col = ds.column(a.index)
            if a.is_numeric:
                cells.append(_format_number(col[i]))
            else:
                cells.append(a.domain[int(col[i])])
        cells.append(ds.classes[int(ds.y[i])])
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


# -- synthetic hard-concept generators ---------------------------------------

_BOOL = ("0", "1")


def _bool_schema(names: Sequence[str]) -> tuple[Attribute, ...]:
    return make_schema([(n, _BOOL) for n in names])


def _bits_dataset(names: Sequence[str], bits: np.ndarray, labels: np.ndarray) -> Dataset:
    schema = _bool_schema(names)
    columns = [bits[:, j].astype(np.int64) for j in range(bits.shape[1])]
    return Dataset(schema, _BOOL, columns, labels.astype(np.int64))


def generate_multiplexer(address_bits: int, n_instances: int, seed: int = 0) -> Dataset:
    """Multiplexer concept: ``address_bits`` address lines select which of
    the 2^address_bits data lines carries the label.

    Address lines are read most significant bit first.
    """
    if address_bits < 1:
        raise ValueError("address_bits must be >= 1")
    n_data = 2 ** address_bits
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(n_instances, address_bits + n_data))
    weights = 2 ** np.arange(address_bits - 1, -1, -1)
    index = bits[:, :address_bits] @ weights
    labels = bits[np.arange(n_instances), address_bits + index]
    names = [f"addr{i}" for i in range(address_bits)] + [f"data{i}" for i in range(n_data)]
    return _bits_dataset(names, bits, labels)


def generate_xor(relevant: int, irrelevant: int, n_instances: int, seed: int = 0) -> Dataset:
    """Parity concept: label is the XOR of the first ``relevant`` bits;
    the remaining bits carry no signal."""
    if relevant < 1 or irrelevant < 0:
        raise ValueError("need relevant >= 1 and irrelevant >= 0")
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(n_instances, relevant + irrelevant))
    labels = bits[:, :relevant].sum(axis=1) % 2
    names = [f"x{i + 1}" for i in range(relevant)] + [f"irr{i + 1}" for i in range(irrelevant)]
    return _bits_dataset(names, bits, labels)


def generate_numeric_xor3d(irrelevant: int, n_instances: int, seed: int = 0) -> Dataset:
    """Continuous parity analogue: three coordinates drawn uniformly from
    [-1, 1]; label is the sign of their product (zero maps to -1).
    ``irrelevant`` extra coordinates are drawn the same way."""
    if irrelevant < 0:
        raise ValueError("irrelevant must be >= 0")
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-1.0, 1.0, size=(n_instances, 3 + irrelevant))
    labels = (vals[:, 0] * vals[:, 1] * vals[:, 2] > 0).astype(np.int64)
    names = [f"x{i + 1}" for i in range(3)] + [f"irr{i + 1}" for i in range(irrelevant)]
    schema = make_schema([(n, None) for n in names])
    classes = ("-1", "1")
    columns = [vals[:, j].copy() for j in range(vals.shape[1])]
    return Dataset(schema, classes, columns, labels)


def _selector_group(bits: np.ndarray) -> np.ndarray:
    # the two selector bits pick one of four disjoint sub-concepts
    return bits[:, 0] * 2 + bits[:, 1]


def generate_multi_xor(n_instances: int, seed: int = 0) -> Dataset:
    """Composite parity concept over 11 binary attributes.

    Selector bits (s1, s2) choose the active sub-concept:
    (0,0) -> x1 XOR x2, (0,1) -> x3 XOR x4, (1,0) -> x5 XOR x6,
    (1,1) -> x7 XOR x8 XOR x9.  Attributes outside the active group
    never influence the label.
    """
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(n_instances, 11))
    group = _selector_group(bits)
    x = bits[:, 2:]
    sub = np.stack(
        [
            (x[:, 0] + x[:, 1]) % 2,
            (x[:, 2] + x[:, 3]) % 2,
            (x[:, 4] + x[:, 5]) % 2,
            (x[:, 6] + x[:, 7] + x[:, 8]) % 2,
        ],
        axis=1,
    )
    labels = sub[np.arange(n_instances), group]
    names = ["s1", "s2"] + [f"x{i + 1}" for i in range(9)]
    return _bits_dataset(names, bits, labels)


def generate_multi_and_or(n_instances: int, seed: int = 0) -> Dataset:
    """Composite concept over 11 binary attributes with AND/OR sub-concepts.

    Selector bits (s1, s2) choose the active sub-concept:
    (0,0) -> x1 AND x2, (0,1) -> x3 OR x4, (1,0) -> x5 AND x6,
    (1,1) -> x7 OR x8 OR x9.
    """
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(n_instances, 11))
    group = _selector_group(bits)
    x = bits[:, 2:]
    sub = np.stack(
        [
            x[:, 0] & x[:, 1],
            x[:, 2] | x[:, 3],
            x[:, 4] & x[:, 5],
            x[:, 6] | x[:, 7] | x[:, 8],
        ],
        axis=1,
    )
    labels = sub[np.arange(n_instances), group]
    names = ["s1", "s2"] + [f"x{i + 1}" for i in range(9)]
    return _bits_dataset(names, bits, labels)
