"""Text file formats.

Dataset CSV
    Header row of variable names, an optional ``#cardinalities,c0,c1,...``
    line, then one row of integer states per sample.  Without the
    cardinality line each column's cardinality is ``max(max + 1, 2)``.

Edge list
    Optional ``# nodes N`` line, then ``parent child`` per line (0-based).
    Blank lines and other ``#`` lines are ignored.

Prior matrix
    ``n`` rows of ``n`` comma-separated decimals in ``[0, 1]``; ``R[i][m]`` is
    the belief in an edge ``m -> i``.

Network JSON
    ``{"cardinalities": [...], "parents": [[...], ...], "cpts": [[[...]]]}``.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import DataError, ValidationError
from .evalgen import GroundTruthBn
from .model import Dag, Dataset, PriorMatrix, pset_mask, pset_members

CARD_TAG = "#cardinalities"


def write_dataset_csv(path, dataset: Dataset) -> None:
    names = dataset.names or tuple(f"X{i}" for i in range(dataset.n))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        w.writerow([CARD_TAG, *dataset.cardinalities])
        w.writerows(dataset.data.tolist())


def read_dataset_csv(path) -> Dataset:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError("empty file", line=1)
    names = [x.strip() for x in rows[0]]
    n = len(names)
    cards = None
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not x.strip() for x in row):
            continue
        if row[0].strip() == CARD_TAG:
            if cards is not None or body:
                raise DataError("cardinality line must directly follow the header", lineno)
            try:
                cards = [int(x) for x in row[1:]]
            except ValueError:
                raise DataError("non-integer cardinality", lineno) from None
            if len(cards) != n:
                raise DataError(f"expected {n} cardinalities, got {len(cards)}", lineno)
            continue
        if len(row) != n:
            raise DataError(f"expected {n} fields, got {len(row)}", lineno)
        try:
            vals = [int(x) for x in row]
        except ValueError:
            raise DataError(f"non-integer state in {row}", lineno) from None
        if cards is not None:
            for col, v in enumerate(vals):
                if not 0 <= v < cards[col]:
                    raise DataError(f"state {v} in column {names[col]} outside "
                                    f"[0, {cards[col]})", lineno)
        elif min(vals) < 0:
            raise DataError("negative state", lineno)
        body.append(vals)
    data = np.array(body, dtype=np.int64).reshape(len(body), n)
    if cards is None:
        if not body:
            raise DataError("no data rows and no cardinality line", len(rows))
        cards = [max(2, int(c) + 1) for c in data.max(axis=0)]
    try:
        return Dataset(data, tuple(cards), tuple(names))
    except ValidationError as exc:
        raise DataError(str(exc)) from None


def write_edge_list(path, dag: Dag) -> None:
    lines = [f"# nodes {dag.n}"] + [f"{u} {v}" for u, v in sorted(dag.edges())]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path, n: int | None = None) -> Dag:
    edges = []
    declared = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "nodes":
                try:
                    declared = int(parts[1])
                except ValueError:
                    raise DataError("bad node count", lineno) from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"expected 'parent child', got {line!r}", lineno)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise DataError(f"non-integer node in {line!r}", lineno) from None
    if n is None:
        n = declared if declared is not None else 1 + max((max(e) for e in edges), default=0)
    elif declared is not None and declared != n:
        raise DataError(f"edge list declares {declared} nodes, expected {n}")
    try:
        return Dag.from_edges(n, edges)
    except ValidationError as exc:
        raise DataError(str(exc)) from None


def write_prior_csv(path, priors: PriorMatrix) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows([[repr(float(x)) for x in row] for row in priors.r])


def read_prior_csv(path, n: int) -> PriorMatrix:
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not x.strip() for x in row):
                continue
            if len(row) != n:
                raise DataError(f"prior row has {len(row)} entries, expected {n}", lineno)
            try:
                vals = [float(x) for x in row]
            except ValueError:
                raise DataError("non-numeric prior entry", lineno) from None
            if any(not 0.0 <= v <= 1.0 for v in vals):
                raise DataError("prior entries must lie in [0, 1]", lineno)
            rows.append(vals)
    if len(rows) != n:
        raise DataError(f"prior matrix has {len(rows)} rows, expected {n}")
    return PriorMatrix(np.array(rows))


def write_network_json(path, bn: GroundTruthBn) -> None:
    doc = {
        "cardinalities": list(bn.cardinalities),
        "parents": [list(pset_members(m)) for m in bn.dag.parents],
        "cpts": [cpt.tolist() for cpt in bn.cpts],
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def read_network_json(path) -> GroundTruthBn:
    doc = json.loads(Path(path).read_text())
    dag = Dag(tuple(pset_mask(p) for p in doc["parents"]))
    return GroundTruthBn(dag, tuple(doc["cardinalities"]),
                         tuple(np.array(c, dtype=float) for c in doc["cpts"]))
