"""Small shared helpers: float formatting, summary statistics, and the
CSV/JSON table writers every pipeline output goes through."""

import json
import math

import numpy as np


def fmt_float(x):
    """Shortest round-trip decimal form; NaN spelled ``nan``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def mean_and_stderr(values):
    """Sample mean and standard error; SE is 0 for a single value."""
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n == 0:
        raise ValueError("mean of nothing")
    mean = float(values.mean())
    if n == 1:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(n))


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (np.floating,)):
        return fmt_float(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows, metadata=None):
    """Write a table; ``metadata`` becomes one leading ``#`` line."""
    with open(path, "w", encoding="utf-8") as fh:
        if metadata:
            pairs = " ".join(f"{k}={_csv_cell(v)}" for k, v in metadata.items())
            fh.write(f"# {pairs}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(v) for v in row) + "\n")


def _json_cell(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    if isinstance(v, np.floating):
        f = float(v)
        return None if math.isnan(f) else f
    if isinstance(v, np.integer):
        return int(v)
    return v


def write_json(path, header, rows, metadata=None):
    doc = {
        "columns": list(header),
        "rows": [[_json_cell(v) for v in row] for row in rows],
    }
    if metadata:
        doc["metadata"] = {k: _json_cell(v) for k, v in metadata.items()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, allow_nan=False)
        fh.write("\n")


def write_table(path_base, fmt, header, rows, metadata=None):
    """Write ``<path_base>.csv`` or ``.json`` per ``fmt``; returns the path."""
    if fmt == "json":
        path = f"{path_base}.json"
        write_json(path, header, rows, metadata)
    else:
        path = f"{path_base}.csv"
        write_csv(path, header, rows, metadata)
    return path
