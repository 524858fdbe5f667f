"""CSV and metadata writers."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from ..errors import ConfigurationError
from .config import SimConfig

CCDF_HEADER = ["scheme", "strategy", "papr_db", "ccdf", "trials", "seed"]
BER_HEADER = ["scheme", "strategy", "ebn0_db", "bit_errors", "total_bits", "ber", "seed"]

__all__ = ["CCDF_HEADER", "BER_HEADER", "emit_outputs", "metadata_path", "plot_path"]


def metadata_path(output) -> Path:
    output = Path(output)
    return output.with_name(output.stem + ".meta.json")


def plot_path(output) -> Path:
    output = Path(output)
    return output.with_name(output.stem + ".plot.csv")


def _num(x: float) -> str:
    return format(float(x), ".12g")


def _write(path: Path, header, rows) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise ConfigurationError(f"{path}: cannot write output ({exc.strerror})") from None


def emit_outputs(result, cfg: SimConfig, experiment: str) -> list[Path]:
    """Write the result CSV, its ``.meta.json`` sidecar and optionally a wide plot-data CSV.

    Returns the written paths.
    """
    from .. import __version__

    out = Path(cfg.output)
    keys = list(result.curves if experiment == "papr" else result.points)
    if experiment == "papr":
        rows = []
        for scheme, strategy in keys:
            curve = result.curves[(scheme, strategy)]
            for t, p in zip(curve.thresholds_db, curve.probabilities):
                rows.append([scheme.value, strategy.value, _num(t), repr(float(p)), curve.trials, cfg.seed])
        _write(out, CCDF_HEADER, rows)
        abscissa = ("papr_db", list(result.curves[keys[0]].thresholds_db))
        columns = [[repr(float(p)) for p in result.curves[k].probabilities] for k in keys]
    elif experiment == "ber":
        rows = []
        for scheme, strategy in keys:
            for pt in result.points[(scheme, strategy)]:
                rows.append([scheme.value, strategy.value, _num(pt.ebn0_db), pt.bit_errors, pt.total_bits,
                             repr(pt.ber), cfg.seed])
        _write(out, BER_HEADER, rows)
        abscissa = ("ebn0_db", list(cfg.ebn0_grid_db))
        columns = [[repr(pt.ber) for pt in result.points[k]] for k in keys]
    else:
        raise ValueError(f"unknown experiment {experiment!r}")

    meta = {"artifact": "daftsafdma", "version": __version__, "experiment": experiment, "config": cfg.to_dict()}
    if experiment == "ber":
        meta["frames_used"] = {f"{s.value}/{t.value}": result.frames_used[(s, t)] for s, t in keys}
    written = [out, metadata_path(out)]
    try:
        metadata_path(out).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise ConfigurationError(f"{metadata_path(out)}: cannot write metadata ({exc.strerror})") from None
    if cfg.plot_data:
        header = [abscissa[0]] + [f"{s.value}/{t.value}" for s, t in keys]
        rows = [[_num(x)] + [col[i] for col in columns] for i, x in enumerate(abscissa[1])]
        _write(plot_path(out), header, rows)
        written.append(plot_path(out))
    return written
