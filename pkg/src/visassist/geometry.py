"""Axis-aligned pixel boxes used by both detector and OCR documents."""
from __future__ import annotations

from dataclasses import dataclass

from ._validation import check_real


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        for field in ("x_min", "y_min", "x_max", "y_max"):
            object.__setattr__(self, field, check_real(getattr(self, field), field))
        if not 0 <= self.x_min <= self.x_max:
            raise ValueError(f"invalid horizontal extent: x_min={self.x_min}, x_max={self.x_max}")
        if not 0 <= self.y_min <= self.y_max:
            raise ValueError(f"invalid vertical extent: y_min={self.y_min}, y_max={self.y_max}")

    @classmethod
    def from_list(cls, coords) -> "BoundingBox":
        if len(coords) != 4:
            raise ValueError(f"box must have 4 coordinates [x_min, y_min, x_max, y_max], got {len(coords)}")
        return cls(*coords)

    def to_list(self) -> list[float]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]

    @property
    def center_x(self) -> float:
        return (self.x_min + self.x_max) / 2

    def fits_in(self, width: float, height: float) -> bool:
        return self.x_max <= width and self.y_max <= height

    def shifted(self, dx: float = 0.0, dy: float = 0.0) -> "BoundingBox":
        return BoundingBox(self.x_min + dx, self.y_min + dy, self.x_max + dx, self.y_max + dy)
