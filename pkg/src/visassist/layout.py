"""Reading-order reconstruction for OCR text blocks.

Pipeline: drop horizontal outliers by iterated z-scores of block centers,
count columns from gaps between sorted centers, cluster blocks into columns
with 1-D K-means, then read columns left to right and each column top to
bottom.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_positive, check_positive_int
from .config import Config
from .geometry import BoundingBox
from .numerics import iterative_zscore_mask, kmeans_1d


@dataclass(frozen=True)
class TextBlock:
    id: int
    text: str
    box: BoundingBox

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text.strip():
            raise ValueError(f"block {self.id}: text must be non-empty")

    @property
    def center_x(self) -> float:
        return self.box.center_x


@dataclass(frozen=True)
class LayoutDocument:
    image_width: float
    image_height: float
    blocks: tuple[TextBlock, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        check_positive(self.image_width, "image_width")
        check_positive(self.image_height, "image_height")
        seen = set()
        for b in self.blocks:
            if b.id in seen:
                raise ValueError(f"duplicate block id {b.id}")
            seen.add(b.id)
            if not b.box.fits_in(self.image_width, self.image_height):
                raise ValueError(f"block {b.id} lies outside the {self.image_width}x{self.image_height} image")

    @classmethod
    def from_dict(cls, data: dict) -> "LayoutDocument":
        blocks = [
            TextBlock(id=int(b["id"]), text=b["text"], box=BoundingBox.from_list(b["box"]))
            for b in data.get("blocks", [])
        ]
        return cls(data["image_width"], data["image_height"], blocks)

    @classmethod
    def load(cls, path) -> "LayoutDocument":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        return {
            "image_width": self.image_width,
            "image_height": self.image_height,
            "blocks": [{"id": b.id, "text": b.text, "box": b.box.to_list()} for b in self.blocks],
        }


@dataclass(frozen=True)
class OrderedText:
    lines: tuple[str, ...] = ()
    removed_outliers: tuple[int, ...] = ()
    column_count: int = 1
    block_order: tuple[int, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "lines": list(self.lines),
            "removed_outliers": list(self.removed_outliers),
            "column_count": self.column_count,
            "block_order": list(self.block_order),
        }


def block_center_x(block: TextBlock) -> float:
    return block.box.center_x


def remove_outliers(blocks, z_threshold: float = 1.75):
    """Split ``blocks`` into ``(kept, removed)`` by iterated center-x z-scores.

    Every block with ``|z| >= z_threshold`` is removed in a pass, and passes
    repeat over the survivors until one removes nothing. Both lists keep the
    input order.
    """
    blocks = list(blocks)
    mask, _ = iterative_zscore_mask([b.center_x for b in blocks], z_threshold)
    kept = [b for b, k in zip(blocks, mask) if k]
    removed = [b for b, k in zip(blocks, mask) if not k]
    return kept, removed


def count_columns(blocks, gap_threshold: float = 150.0) -> int:
    """1 + number of gaps between sorted centers strictly wider than ``gap_threshold``."""
    blocks = list(blocks)
    if not blocks:
        raise ValueError("count_columns needs at least one block")
    gap_threshold = check_positive(gap_threshold, "gap_threshold")
    centers = sorted(b.center_x for b in blocks)
    return 1 + sum(1 for a, b in zip(centers, centers[1:]) if b - a > gap_threshold)


def kmeans_columns(blocks, k: int, max_iter: int = 100, tol: float = 1e-9) -> dict[int, int]:
    """Map block id to column index; column 0 is the leftmost centroid."""
    blocks = list(blocks)
    k = check_positive_int(k, "k")
    if k > len(blocks):
        raise ValueError(f"cannot split {len(blocks)} blocks into {k} columns")
    model = kmeans_1d([b.center_x for b in blocks], k, max_iter=max_iter, tol=tol)
    return {b.id: col for b, col in zip(blocks, model.assignment)}


def _vertical_key(block: TextBlock):
    return (block.box.y_min, block.box.x_min, block.id)


def reading_order(doc: LayoutDocument, cfg: Config | None = None) -> OrderedText:
    cfg = cfg or Config()
    kept, removed = remove_outliers(doc.blocks, cfg.z_threshold)
    removed_ids = tuple(b.id for b in removed)
    if not kept:
        return OrderedText(removed_outliers=removed_ids)

    n_columns = count_columns(kept, cfg.effective_column_gap(doc.image_width))
    if n_columns == 1:
        ordered = sorted(kept, key=_vertical_key)
    else:
        column_of = kmeans_columns(kept, n_columns, cfg.kmeans_max_iter, cfg.kmeans_tol)
        ordered = sorted(kept, key=lambda b: (column_of[b.id], *_vertical_key(b)))
    return OrderedText(
        lines=tuple(b.text for b in ordered),
        removed_outliers=removed_ids,
        column_count=n_columns,
        block_order=tuple(b.id for b in ordered),
    )


def render_text(ot: OrderedText) -> str:
    """Newline-joined lines with a trailing newline; empty text for no lines."""
    if not ot.lines:
        return ""
    return "\n".join(ot.lines) + "\n"


class ReadingOrder(TransformerMixin, BaseEstimator):
    """Stateless transformer from :class:`LayoutDocument` to :class:`OrderedText`.

    ``transform`` accepts an iterable of documents (or JSON-style dicts) and
    returns a list of ordered texts, so it can sit at the end of a pipeline
    that produces OCR layouts. ``fit`` only validates parameters.
    """

    def __init__(self, z_threshold=1.75, column_gap=150.0, column_gap_reference_width=None,
                 max_iter=100, tol=1e-9):
        self.z_threshold = z_threshold
        self.column_gap = column_gap
        self.column_gap_reference_width = column_gap_reference_width
        self.max_iter = max_iter
        self.tol = tol

    def _config(self) -> Config:
        return Config(
            z_threshold=self.z_threshold,
            column_gap=float(self.column_gap),
            column_gap_reference_width=self.column_gap_reference_width,
            kmeans_max_iter=self.max_iter,
            kmeans_tol=self.tol,
        )

    def fit(self, X=None, y=None):
        self.config_ = self._config()
        return self

    def transform(self, X):
        cfg = getattr(self, "config_", None) or self._config()
        docs = [d if isinstance(d, LayoutDocument) else LayoutDocument.from_dict(d) for d in X]
        return [reading_order(d, cfg) for d in docs]
