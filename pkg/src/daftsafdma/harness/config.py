"""Experiment configuration: a JSON file plus command-line overrides."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
import json
import math
from pathlib import Path

from ..enums import PaprMode, Scheme, Strategy
from ..errors import ConfigurationError

__all__ = ["SimConfig", "parse_config", "load_config_file"]


@dataclass(frozen=True)
class SimConfig:
    """Fully resolved settings for a PAPR or BER run.

    Only ``n`` is required.  ``cpp_len=None`` resolves to ``l_max``.
    ``target_errors`` stops a BER point once that many bit errors are
    collected (``0`` disables early stopping); ``frames`` is always the upper bound.
    """

    n: int
    k_users: int = 4
    strategies: tuple = (Strategy.INTERLEAVED, Strategy.LOCALIZED)
    schemes: tuple = (Scheme.DAFT_S, Scheme.O_AFDMA)
    p_paths: int = 3
    alpha_max: int = 1
    l_max: int = 1
    cpp_len: int | None = None
    ebn0_grid_db: tuple = (0.0, 4.0, 8.0, 12.0)
    frames: int = 10_000
    seed: int = 0
    papr_mode: PaprMode = PaprMode.COMPOSITE
    oversample: int = 1
    output: str = "results.csv"
    target_errors: int = 500
    workers: int = 1
    batch_frames: int = 32
    offset_compensation: bool = True
    noiseless: bool = False
    thresholds_db: tuple = (0.0, 13.0, 0.1)
    plot_data: bool = False

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        try:
            set_("strategies", tuple(Strategy(s) for s in self.strategies))
            set_("schemes", tuple(Scheme(s) for s in self.schemes))
            set_("papr_mode", PaprMode(self.papr_mode))
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        set_("ebn0_grid_db", tuple(float(e) for e in self.ebn0_grid_db))
        set_("thresholds_db", tuple(float(t) for t in self.thresholds_db))
        if self.cpp_len is None:
            set_("cpp_len", self.l_max)
        checks = [
            ("n", self.n >= 1, "must be positive"),
            ("k_users", self.k_users >= 1 and self.n % self.k_users == 0, f"must divide n={self.n}"),
            ("strategies", len(self.strategies) > 0, "must not be empty"),
            ("schemes", len(self.schemes) > 0, "must not be empty"),
            ("p_paths", self.p_paths >= 1, "must be >= 1"),
            ("alpha_max", self.alpha_max >= 0, "must be >= 0"),
            ("l_max", 0 <= self.l_max < self.n, "must lie in [0, n)"),
            ("cpp_len", self.l_max <= self.cpp_len < self.n, f"must lie in [l_max={self.l_max}, n)"),
            ("frames", self.frames >= 1, "must be >= 1"),
            ("seed", 0 <= self.seed < 2**64, "must be an unsigned 64-bit integer"),
            ("oversample", self.oversample >= 1, "must be >= 1"),
            ("target_errors", self.target_errors >= 0, "must be >= 0"),
            ("workers", self.workers >= 1, "must be >= 1"),
            ("batch_frames", self.batch_frames >= 1, "must be >= 1"),
            ("thresholds_db", len(self.thresholds_db) == 3 and self.thresholds_db[2] > 0
             and self.thresholds_db[1] >= self.thresholds_db[0], "must be [start, stop, step] with step > 0"),
        ]
        for key, ok, why in checks:
            if not ok:
                raise ConfigurationError(f"{key}: {why}")

    @property
    def threshold_grid(self):
        import numpy as np

        start, stop, step = self.thresholds_db
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return np.round(start + step * np.arange(count), 10)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["strategies"] = [s.value for s in self.strategies]
        out["schemes"] = [s.value for s in self.schemes]
        out["papr_mode"] = self.papr_mode.value
        for key in ("ebn0_grid_db", "thresholds_db"):
            out[key] = list(out[key])
        return out

    @classmethod
    def from_dict(cls, data: dict, source: str = "config") -> "SimConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigurationError(f"{source}: unknown key(s) {', '.join(unknown)}")
        if "n" not in data:
            raise ConfigurationError(f"{source}: missing required key 'n'")
        for key, value in data.items():
            _check_type(key, value, source)
        return cls(**data)


_INT_KEYS = {"n", "k_users", "p_paths", "alpha_max", "l_max", "frames", "seed",
             "oversample", "target_errors", "workers", "batch_frames"}
_BOOL_KEYS = {"offset_compensation", "noiseless", "plot_data"}
_LIST_KEYS = {"strategies", "schemes", "ebn0_grid_db", "thresholds_db"}


def _check_type(key, value, source):
    if key in _INT_KEYS or (key == "cpp_len" and value is not None):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif key in _BOOL_KEYS:
        ok = isinstance(value, bool)
    elif key in _LIST_KEYS:
        ok = isinstance(value, (list, tuple))
    elif key in ("papr_mode", "output"):
        ok = isinstance(value, str)
    else:
        ok = True
    if not ok:
        raise ConfigurationError(f"{source}: key '{key}' has invalid value {value!r}")


def load_config_file(path) -> dict:
    """Read a JSON config; a metadata file written by a run is accepted too."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"{path}: cannot read config ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be an object")
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    return data


def parse_config(path=None, overrides: dict | None = None) -> SimConfig:
    """Merge a config file (optional) with overrides; ``None`` overrides are ignored."""
    data = load_config_file(path) if path is not None else {}
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return SimConfig.from_dict(data, source=str(path) if path is not None else "config")
