"""Object discovery over detector output.

Detections for the requested class are kept when their score reaches the
threshold, each survivor is placed left / straight / right by the horizontal
center of its box, and the per-region counts are rendered as a short phrase
such as ``"1 chair on your left, 1 chair on your right"``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_positive, check_real, check_unit_interval
from .config import Config
from .geometry import BoundingBox
from .intent import Unresolved
from .vocabulary import ClassVocabulary

NOT_IN_CLASSES = "object does not exist in the available classes"


class Region(IntEnum):
    LEFT = 0
    STRAIGHT = 1
    RIGHT = 2

    @property
    def word(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class Detection:
    label: str
    score: float
    box: BoundingBox

    def __post_init__(self):
        check_unit_interval(self.score, "score")


@dataclass(frozen=True)
class DetectionDocument:
    image_width: float
    image_height: float
    detections: tuple[Detection, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "detections", tuple(self.detections))
        check_positive(self.image_width, "image_width")
        check_positive(self.image_height, "image_height")
        for i, d in enumerate(self.detections):
            if not d.box.fits_in(self.image_width, self.image_height):
                raise ValueError(f"detection {i} ({d.label}) lies outside the image")

    @classmethod
    def from_dict(cls, data: dict) -> "DetectionDocument":
        dets = [
            Detection(d["label"], d["score"], BoundingBox.from_list(d["box"]))
            for d in data.get("detections", [])
        ]
        return cls(data["image_width"], data["image_height"], dets)

    @classmethod
    def load(cls, path) -> "DetectionDocument":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        return {
            "image_width": self.image_width,
            "image_height": self.image_height,
            "detections": [
                {"label": d.label, "score": d.score, "box": d.box.to_list()} for d in self.detections
            ],
        }


@dataclass(frozen=True)
class DiscoveryResult:
    label: str
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        counts = {r: int(self.counts.get(r, 0)) for r in Region}
        if any(c < 0 for c in counts.values()):
            raise ValueError("region counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def filter_detections(doc: DetectionDocument, label: str, threshold: float = 0.35) -> list[Detection]:
    """Detections of ``label`` scoring at least ``threshold``, in input order."""
    threshold = check_unit_interval(threshold, "threshold")
    return [d for d in doc.detections if d.label == label and d.score >= threshold]


def locate(box: BoundingBox, image_width: float, left_boundary: float = 1 / 3,
           right_boundary: float = 2 / 3, origin: float = 0.0) -> Region:
    """Region of the box center relative to an image spanning ``[origin, origin + image_width]``.

    Centers exactly on a boundary belong to STRAIGHT.
    """
    image_width = check_positive(image_width, "image_width")
    # ratio form: c/W is correctly rounded, so an exact third compares equal to 1/3
    rel = (box.center_x - check_real(origin, "origin")) / image_width
    if rel < left_boundary:
        return Region.LEFT
    if rel > right_boundary:
        return Region.RIGHT
    return Region.STRAIGHT


def count_regions(detections, image_width: float, left_boundary: float = 1 / 3,
                  right_boundary: float = 2 / 3, label: str = "") -> DiscoveryResult:
    counts = dict.fromkeys(Region, 0)
    for d in detections:
        counts[locate(d.box, image_width, left_boundary, right_boundary)] += 1
    return DiscoveryResult(label, counts)


def render_discovery(result: DiscoveryResult) -> str:
    if result.total == 0:
        return f"{result.label} not found"
    return ", ".join(
        f"{n} {result.label} on your {region.word}" for region, n in sorted(result.counts.items()) if n
    )


_FRAGMENT = re.compile(r"^(\d+) (.+) on your (left|straight|right)$")


def parse_discovery(text: str) -> DiscoveryResult:
    """Inverse of :func:`render_discovery`."""
    if text.endswith(" not found"):
        return DiscoveryResult(text[: -len(" not found")])
    label = None
    counts = {}
    for frag in text.split(", "):
        m = _FRAGMENT.match(frag)
        if not m or (label is not None and m.group(2) != label):
            raise ValueError(f"not a discovery response: {text!r}")
        label = m.group(2)
        region = Region[m.group(3).upper()]
        if region in counts:
            raise ValueError(f"region repeated in {text!r}")
        counts[region] = int(m.group(1))
    return DiscoveryResult(label, counts)


def discover(doc: DetectionDocument, object_name, vocab: ClassVocabulary, cfg: Config | None = None) -> str:
    """Spoken response for a discovery query on one detector document."""
    cfg = cfg or Config()
    if isinstance(object_name, Unresolved) or object_name not in vocab:
        return NOT_IN_CLASSES
    survivors = filter_detections(doc, object_name, cfg.score_threshold)
    result = count_regions(survivors, doc.image_width, cfg.left_boundary, cfg.right_boundary, object_name)
    return render_discovery(result)


class ObjectLocator(TransformerMixin, BaseEstimator):
    """Transform detector documents into per-region counts for one class.

    Parameters
    ----------
    label : str
        Class to look for.
    score_threshold : float, default=0.35
    left_boundary, right_boundary : float
        Region cut points as fractions of the image width.

    ``transform`` returns an ``(n_documents, 3)`` list of LEFT/STRAIGHT/RIGHT
    counts; ``describe`` returns the rendered phrases instead.
    """

    def __init__(self, label="person", score_threshold=0.35, left_boundary=1 / 3, right_boundary=2 / 3):
        self.label = label
        self.score_threshold = score_threshold
        self.left_boundary = left_boundary
        self.right_boundary = right_boundary

    def fit(self, X=None, y=None):
        check_unit_interval(self.score_threshold, "score_threshold")
        if not 0 < self.left_boundary <= self.right_boundary < 1:
            raise ValueError("need 0 < left_boundary <= right_boundary < 1")
        return self

    def _results(self, X):
        self.fit()
        for doc in X:
            if not isinstance(doc, DetectionDocument):
                doc = DetectionDocument.from_dict(doc)
            kept = filter_detections(doc, self.label, self.score_threshold)
            yield count_regions(kept, doc.image_width, self.left_boundary, self.right_boundary, self.label)

    def transform(self, X):
        return [[r.counts[region] for region in Region] for r in self._results(X)]

    def describe(self, X) -> list[str]:
        return [render_discovery(r) for r in self._results(X)]
