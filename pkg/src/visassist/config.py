"""Pipeline configuration: defaults, JSON overlay, validation."""
from __future__ import annotations

import dataclasses
import json
import numbers
from dataclasses import dataclass, fields
from pathlib import Path


class ConfigError(ValueError):
    """Raised for unreadable config files, unknown keys or invalid values."""


@dataclass(frozen=True)
class Config:
    # object discovery
    score_threshold: float = 0.35
    left_boundary: float = 1 / 3
    right_boundary: float = 2 / 3
    # reading order
    z_threshold: float = 1.75
    column_gap: float = 150.0
    column_gap_reference_width: float | None = None
    kmeans_max_iter: int = 100
    kmeans_tol: float = 1e-9
    # decoding
    beam_width: int = 3
    max_caption_len: int = 20
    length_normalize: bool = False
    # metrics
    bleu_smoothing: bool = False
    # news
    news_max_articles: int = 5
    news_timeout: float = 10.0
    news_total_budget: float = 60.0
    news_parallelism: int = 4
    # vocabulary files; None selects the bundled COCO labels / aliases
    vocabulary_path: str | None = None
    alias_path: str | None = None

    def __post_init__(self):
        problems = _validate(self)
        if problems:
            raise ConfigError("invalid config values: " + "; ".join(problems))

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    def effective_column_gap(self, image_width: float) -> float:
        """Column gap in pixels, optionally rescaled to ``image_width``."""
        if self.column_gap_reference_width is None:
            return self.column_gap
        return self.column_gap * image_width / self.column_gap_reference_width


_FLOATS = {
    "score_threshold", "left_boundary", "right_boundary", "z_threshold", "column_gap",
    "column_gap_reference_width", "kmeans_tol", "news_timeout", "news_total_budget",
}
_INTS = {"kmeans_max_iter", "beam_width", "max_caption_len", "news_max_articles", "news_parallelism"}
_BOOLS = {"length_normalize", "bleu_smoothing"}
_PATHS = {"vocabulary_path", "alias_path"}
_OPTIONAL = {"column_gap_reference_width", "vocabulary_path", "alias_path"}


def _validate(cfg: Config) -> list[str]:
    problems = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None and f.name in _OPTIONAL:
            continue
        if f.name in _BOOLS:
            ok = isinstance(v, bool)
        elif f.name in _INTS:
            ok = isinstance(v, numbers.Integral) and not isinstance(v, bool) and v >= 1
        elif f.name in _FLOATS:
            ok = isinstance(v, numbers.Real) and not isinstance(v, bool) and v >= 0
            ok = ok and (v > 0 or f.name == "kmeans_tol")
        else:
            ok = isinstance(v, str) and bool(v)
        if not ok:
            problems.append(f"{f.name}={v!r}")
    if not problems:
        if cfg.score_threshold > 1:
            problems.append(f"score_threshold={cfg.score_threshold!r} (must be <= 1)")
        if not 0 < cfg.left_boundary <= cfg.right_boundary < 1:
            problems.append(
                f"left_boundary={cfg.left_boundary!r}, right_boundary={cfg.right_boundary!r} "
                "(need 0 < left <= right < 1)"
            )
    return problems


def load_config(path=None) -> Config:
    """Defaults overlaid with the JSON object at ``path`` (if given)."""
    if path is None:
        return Config()
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(Config)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {', '.join(unknown)}")
    # JSON has no float/int distinction; accept 150 for column_gap
    for key in _FLOATS & raw.keys():
        if isinstance(raw[key], int) and not isinstance(raw[key], bool):
            raw[key] = float(raw[key])
    return Config(**raw)
