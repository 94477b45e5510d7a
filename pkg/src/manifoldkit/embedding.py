"""Low-dimensional embedding result with provenance."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, InputIoError


@dataclass(frozen=True)
class Embedding2D:
    """n x m output coordinates plus what produced them."""

    coords: np.ndarray
    algorithm: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    sample_ids: tuple[str, ...] | None = None
    extras: dict = field(default_factory=dict)  # loss traces, stress history, chosen t

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64)
        if c.ndim != 2:
            raise FormatError(f"coordinates must be 2-D, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise FormatError("embedding contains NaN or Inf")
        ids = self.sample_ids
        if ids is None:
            ids = tuple(str(i) for i in range(c.shape[0]))
        else:
            ids = tuple(ids)
            if len(ids) != c.shape[0]:
                raise FormatError(f"{len(ids)} ids for {c.shape[0]} rows")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "sample_ids", ids)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def m(self) -> int:
        return self.coords.shape[1]

    def save_csv(self, path) -> None:
        """Write id,y1..ym rows; float values use repr so reloads are exact."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id"] + [f"y{j + 1}" for j in range(self.m)])
            for sid, row in zip(self.sample_ids, self.coords):
                writer.writerow([sid] + [repr(float(v)) for v in row])


def load_embedding_csv(path) -> Embedding2D:
    """Read an id,y1..ym CSV written by Embedding2D.save_csv."""
    path = Path(path)
    if not path.is_file():
        raise InputIoError(f"{path}: no such file")
    ids: list[str] = []
    rows: list[list[float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0] != "id":
            raise FormatError(f"{path}: expected header starting with 'id'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(f"{path}:{lineno}: ragged row")
            ids.append(row[0])
            try:
                rows.append([float(c) for c in row[1:]])
            except ValueError as e:
                raise FormatError(f"{path}:{lineno}: non-numeric cell ({e})") from e
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return Embedding2D(coords=np.array(rows), algorithm="loaded", sample_ids=tuple(ids))
