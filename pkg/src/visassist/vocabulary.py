"""Object class vocabulary and the alias table that maps spoken names onto it."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

VOCABULARY_SIZE = 80


def _bundled(name: str) -> str:
    return resources.files("visassist").joinpath("data", name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class ClassVocabulary:
    """Ordered, unique list of the detector's 80 class labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != VOCABULARY_SIZE:
            raise ValueError(f"vocabulary must have {VOCABULARY_SIZE} labels, got {len(labels)}")
        if any(not isinstance(l, str) or not l.strip() for l in labels):
            raise ValueError("vocabulary labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValueError("vocabulary labels must be unique")

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @classmethod
    def from_text(cls, text: str) -> "ClassVocabulary":
        return cls(tuple(line.strip() for line in text.splitlines() if line.strip()))

    @classmethod
    def load(cls, path=None) -> "ClassVocabulary":
        """Read a newline-delimited label file; ``None`` gives the bundled COCO list."""
        if path is None:
            return cls.from_text(_bundled("coco_labels.txt"))
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class AliasTable:
    """Alias phrase -> canonical label, e.g. ``cellphone -> cell phone``."""

    mapping: dict

    def __post_init__(self):
        for k, v in self.mapping.items():
            if not isinstance(k, str) or not isinstance(v, str) or not k.strip() or not v.strip():
                raise ValueError(f"alias entries must map non-empty strings, got {k!r} -> {v!r}")

    def get(self, phrase: str, default=None):
        return self.mapping.get(phrase, default)

    def __len__(self) -> int:
        return len(self.mapping)

    def unknown_targets(self, vocab: ClassVocabulary) -> list[str]:
        return sorted({v for v in self.mapping.values() if v not in vocab})

    @classmethod
    def load(cls, path=None) -> "AliasTable":
        text = _bundled("aliases.json") if path is None else Path(path).read_text(encoding="utf-8")
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("alias file must hold a JSON object")
        return cls(dict(data))

    @classmethod
    def empty(cls) -> "AliasTable":
        return cls({})
