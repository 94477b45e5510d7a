"""Loading, validating, and joining embedding matrices with annotations."""

from __future__ import annotations

import csv
import struct
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateKey,
    EmptyInput,
    EmptyIntersection,
    FormatError,
    InputIoError,
    MissingColumn,
    UnknownLabel,
)

BINARY_MAGIC = b"MKF64\x00\x00\x01"  # 8 bytes, followed by <u4 n, <u4 d


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Dense n x d matrix of float64 feature vectors, one row per sample."""

    values: np.ndarray
    sample_ids: tuple[str, ...]

    def __eq__(self, other):
        if not isinstance(other, EmbeddingMatrix):
            return NotImplemented
        return self.sample_ids == other.sample_ids and np.array_equal(self.values, other.values)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise FormatError(f"embedding matrix must be 2-D and non-empty, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise FormatError("embedding matrix contains NaN or Inf")
        ids = tuple(self.sample_ids)
        if len(ids) != v.shape[0]:
            raise FormatError(f"{len(ids)} sample ids for {v.shape[0]} rows")
        if len(set(ids)) != len(ids):
            dupes = [k for k, c in Counter(ids).items() if c > 1]
            raise DuplicateKey(f"duplicate sample ids: {dupes[:5]}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sample_ids", ids)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class AnnotationTable:
    """Categorical metadata keyed by unique sample id."""

    sample_ids: tuple[str, ...]
    columns: dict[str, tuple[str, ...]]

    def __post_init__(self):
        ids = tuple(self.sample_ids)
        if len(set(ids)) != len(ids):
            dupes = [k for k, c in Counter(ids).items() if c > 1]
            raise DuplicateKey(f"duplicate sample ids: {dupes[:5]}")
        cols = {name: tuple(vals) for name, vals in self.columns.items()}
        for name, vals in cols.items():
            if len(vals) != len(ids):
                raise FormatError(f"column {name!r} has {len(vals)} values for {len(ids)} ids")
        object.__setattr__(self, "sample_ids", ids)
        object.__setattr__(self, "columns", cols)

    def __len__(self) -> int:
        return len(self.sample_ids)

    def column(self, name: str) -> tuple[str, ...]:
        if name not in self.columns:
            raise MissingColumn(f"no column named {name!r}; have {sorted(self.columns)}")
        return self.columns[name]

    def label_counts(self, column: str) -> dict[str, int]:
        return dict(Counter(self.column(column)))

    def label_set(self, column: str) -> set[str]:
        return set(self.column(column))

    def subset(self, ids: list[str]) -> "AnnotationTable":
        index = {sid: i for i, sid in enumerate(self.sample_ids)}
        rows = [index[sid] for sid in ids]
        return AnnotationTable(
            sample_ids=tuple(ids),
            columns={name: tuple(vals[r] for r in rows) for name, vals in self.columns.items()},
        )


@dataclass(frozen=True)
class LabeledDataset:
    """Embeddings joined with annotations on a shared, ordered id set."""

    embeddings: EmbeddingMatrix
    annotations: AnnotationTable
    label_column: str
    n_dropped: int = 0

    def __post_init__(self):
        if self.embeddings.sample_ids != self.annotations.sample_ids:
            raise FormatError("embedding ids and annotation ids differ after join")
        self.annotations.column(self.label_column)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.annotations.column(self.label_column)


def load_embeddings(path, format: str = "csv") -> EmbeddingMatrix:
    """Load an embedding matrix from CSV or raw binary-f64.

    CSV: first column is the sample id; an optional header row whose first
    cell is "id" is skipped.  Binary: 8-byte magic, <u4 n, <u4 d, then n*d
    little-endian float64 values row-major; ids are the row indices.
    """
    path = Path(path)
    if not path.is_file():
        raise InputIoError(f"{path}: no such file")
    if format == "csv":
        return _load_embeddings_csv(path)
    if format == "binary-f64":
        return _load_embeddings_binary(path)
    raise FormatError(f"unknown embedding format {format!r}")


def _load_embeddings_csv(path: Path) -> EmbeddingMatrix:
    ids: list[str] = []
    rows: list[list[float]] = []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise InputIoError(f"{path}: {e}") from e
    with fh:
        reader = csv.reader(fh)
        width = None
        for lineno, row in enumerate(reader, start=1):
            if not row:
                continue
            if lineno == 1 and row[0] == "id":
                continue
            if len(row) < 2:
                raise FormatError(f"{path}:{lineno}: need an id and at least one value")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise FormatError(f"{path}:{lineno}: ragged row ({len(row)} cells, expected {width})")
            ids.append(row[0])
            try:
                values = [float(c) for c in row[1:]]
            except ValueError as e:
                raise FormatError(f"{path}:{lineno}: non-numeric cell ({e})") from e
            if not all(np.isfinite(values)):
                raise FormatError(f"{path}:{lineno}: non-finite value")
            rows.append(values)
    if not rows:
        raise EmptyInput(f"{path}: no data rows")
    if len(set(ids)) != len(ids):
        dupes = [k for k, c in Counter(ids).items() if c > 1]
        raise DuplicateKey(f"{path}: duplicate ids {dupes[:5]}")
    return EmbeddingMatrix(values=np.array(rows, dtype=np.float64), sample_ids=tuple(ids))


def _load_embeddings_binary(path: Path) -> EmbeddingMatrix:
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise InputIoError(f"{path}: {e}") from e
    if len(raw) < 16 or raw[:8] != BINARY_MAGIC:
        raise FormatError(f"{path}: bad magic; not a binary-f64 embedding file")
    n, d = struct.unpack_from("<II", raw, 8)
    if n == 0:
        raise EmptyInput(f"{path}: zero rows")
    expected = 16 + n * d * 8
    if len(raw) != expected:
        raise FormatError(f"{path}: expected {expected} bytes for {n}x{d}, got {len(raw)}")
    values = np.frombuffer(raw, dtype="<f8", offset=16).reshape(n, d).astype(np.float64)
    if not np.all(np.isfinite(values)):
        raise FormatError(f"{path}: non-finite value")
    return EmbeddingMatrix(values=values, sample_ids=tuple(str(i) for i in range(n)))


def save_embeddings(matrix: EmbeddingMatrix, path, format: str = "csv") -> None:
    """Write a matrix in a format load_embeddings reads back bit-exactly."""
    path = Path(path)
    if format == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            for sid, row in zip(matrix.sample_ids, matrix.values):
                writer.writerow([sid] + [repr(float(v)) for v in row])
    elif format == "binary-f64":
        header = BINARY_MAGIC + struct.pack("<II", matrix.n_samples, matrix.n_features)
        path.write_bytes(header + np.ascontiguousarray(matrix.values, dtype="<f8").tobytes())
    else:
        raise FormatError(f"unknown embedding format {format!r}")


def load_annotations(path, id_column: str = "id") -> AnnotationTable:
    """Load a CSV annotation table keyed by a unique sample-id column."""
    path = Path(path)
    if not path.is_file():
        raise InputIoError(f"{path}: no such file")
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise InputIoError(f"{path}: {e}") from e
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInput(f"{path}: empty file") from None
        if id_column not in header:
            raise MissingColumn(f"{path}: header lacks id column {id_column!r}")
        if len(header) < 2:
            raise MissingColumn(f"{path}: need at least one label column besides {id_column!r}")
        id_idx = header.index(id_column)
        ids: list[str] = []
        cols: dict[str, list[str]] = {name: [] for i, name in enumerate(header) if i != id_idx}
        seen: set[str] = set()
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(f"{path}:{lineno}: ragged row ({len(row)} cells, expected {len(header)})")
            sid = row[id_idx]
            if sid in seen:
                raise DuplicateKey(f"{path}:{lineno}: duplicate id {sid!r}")
            seen.add(sid)
            ids.append(sid)
            for i, name in enumerate(header):
                if i != id_idx:
                    cols[name].append(row[i])
    if not ids:
        raise EmptyInput(f"{path}: no data rows")
    return AnnotationTable(sample_ids=tuple(ids), columns={k: tuple(v) for k, v in cols.items()})


def merge_categories(table: AnnotationTable, column: str, mapping: dict[str, str]) -> AnnotationTable:
    """Replace labels of one column per an old-label -> new-label map.

    Every old label must occur in the column; row count and order are
    preserved.
    """
    values = table.column(column)
    present = set(values)
    missing = sorted(set(mapping) - present)
    if missing:
        raise UnknownLabel(f"labels not in column {column!r}: {missing}")
    merged = tuple(mapping.get(v, v) for v in values)
    columns = dict(table.columns)
    columns[column] = merged
    return AnnotationTable(sample_ids=table.sample_ids, columns=columns)


def join(embeddings: EmbeddingMatrix, annotations: AnnotationTable, label_column: str) -> LabeledDataset:
    """Restrict both sides to their id intersection, in annotation order.

    Ids present on only one side are dropped and counted; a disjoint pair
    is an error.
    """
    annotations.column(label_column)
    emb_ids = set(embeddings.sample_ids)
    kept = [sid for sid in annotations.sample_ids if sid in emb_ids]
    if not kept:
        raise EmptyIntersection("embedding ids and annotation ids are disjoint")
    n_dropped = (len(emb_ids) - len(kept)) + (len(annotations) - len(kept))
    emb_index = {sid: i for i, sid in enumerate(embeddings.sample_ids)}
    rows = [emb_index[sid] for sid in kept]
    emb = EmbeddingMatrix(values=embeddings.values[rows].copy(), sample_ids=tuple(kept))
    return LabeledDataset(
        embeddings=emb,
        annotations=annotations.subset(kept),
        label_column=label_column,
        n_dropped=n_dropped,
    )


def bundled_annotations_path() -> Path:
    """Path of the packaged 3198-row artwork annotation fixture."""
    return Path(resources.files("manifoldkit").joinpath("data/annotations.csv"))
