from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import torch

FORMAT_VERSION = 1


class ExportError(ValueError):
    """The file is not a valid spanning-set export."""


@dataclass(frozen=True)
class Factor:
    group: str
    n: int
    k: int
    l: int


@dataclass
class LoadedSpanningSet:
    factors: list[Factor]
    d_k: int
    d_l: int
    rows: int
    cols: int
    ordering: str
    diagrams: list[str]
    kinds: list[str]
    features: list[tuple[int, int] | None]
    # per element: (row, col, value) with 0-based indices, exactly as stored
    entries: list[list[tuple[int, int, int]]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def element(self, i: int, dtype: torch.dtype = torch.float64) -> torch.Tensor:
        """Element `i` as a sparse COO tensor of shape (rows, cols)."""
        triples = self.entries[i]
        if triples:
            index = torch.tensor([[r for r, _, _ in triples], [c for _, c, _ in triples]], dtype=torch.long)
            values = torch.tensor([v for _, _, v in triples], dtype=dtype)
        else:
            index = torch.zeros((2, 0), dtype=torch.long)
            values = torch.zeros(0, dtype=dtype)
        return torch.sparse_coo_tensor(index, values, (self.rows, self.cols), check_invariants=True).coalesce()

    def stacked(self, dtype: torch.dtype = torch.float64) -> torch.Tensor:
        """All elements as one sparse tensor of shape (len, rows, cols)."""
        idx, vals = [], []
        for e, triples in enumerate(self.entries):
            for r, c, v in triples:
                idx.append((e, r, c))
                vals.append(v)
        index = torch.tensor(idx, dtype=torch.long).T if idx else torch.zeros((3, 0), dtype=torch.long)
        values = torch.tensor(vals, dtype=dtype)
        return torch.sparse_coo_tensor(index, values, (len(self), self.rows, self.cols), check_invariants=True).coalesce()


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ExportError(msg)


def _parse(data: dict) -> LoadedSpanningSet:
    _require(isinstance(data, dict), "top level must be an object")
    version = data.get("format_version")
    _require(version == FORMAT_VERSION, f"unsupported format_version {version!r}")
    try:
        factors = [Factor(f["group"], int(f["n"]), int(f["k"]), int(f["l"])) for f in data["factors"]]
        d_k, d_l = int(data["d_k"]), int(data["d_l"])
        rows, cols = int(data["rows"]), int(data["cols"])
        raw = data["elements"]
    except (KeyError, TypeError) as e:
        raise ExportError(f"missing or malformed field: {e}") from e
    _require(len(factors) > 0, "no factors")
    expect_rows, expect_cols = d_l, d_k
    for f in factors:
        expect_rows *= f.n**f.l
        expect_cols *= f.n**f.k
    _require((rows, cols) == (expect_rows, expect_cols), f"shape {rows}x{cols} != {expect_rows}x{expect_cols}")

    diagrams, kinds, features, entries = [], [], [], []
    for i, e in enumerate(raw, start=1):
        triples = []
        for t in e["entries"]:
            _require(len(t) == 3 and all(isinstance(x, int) for x in t), f"element {i}: non-integer entry {t}")
            r, c, v = t
            _require(1 <= r <= rows and 1 <= c <= cols, f"element {i}: entry ({r}, {c}) out of range")
            _require(v != 0, f"element {i}: stored zero")
            triples.append((r - 1, c - 1, v))
        _require(len({(r, c) for r, c, _ in triples}) == len(triples), f"element {i}: repeated position")
        diagrams.append(e["diagram"])
        kinds.append(e["kind"])
        feat = e.get("feature")
        features.append(tuple(feat) if feat is not None else None)
        entries.append(triples)
    return LoadedSpanningSet(
        factors=factors,
        d_k=d_k,
        d_l=d_l,
        rows=rows,
        cols=cols,
        ordering=data.get("ordering", ""),
        diagrams=diagrams,
        kinds=kinds,
        features=features,
        entries=entries,
    )


def load(path: str | Path) -> LoadedSpanningSet:
    """Reads an export file; raises ExportError on malformed or unknown-version files."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ExportError(f"{path}: {e}") from e
    return _parse(data)
