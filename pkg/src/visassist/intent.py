"""Rule-based parsing of transcribed voice commands.

The grammar is a short keyword cascade; the first matching rule wins:

1. ``news``                                    -> NEWS
2. ``read`` or ``text``                        -> READ
3. ``where is`` / ``where are`` / ``find`` / ``search`` -> DISCOVERY
4. ``in front of me`` / ``describe`` / ``what do you see`` -> SCENE
5. anything else                               -> UNKNOWN
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .vocabulary import AliasTable, ClassVocabulary

_PUNCT = re.compile(r"[^\w\s]|_")

DETERMINERS = frozenset({"the", "my", "a", "an"})
_DISCOVERY_TRIGGERS = (("where", "is"), ("where", "are"), ("wheres",), ("find",), ("search",))
_SCENE_PHRASES = (("in", "front", "of", "me"), ("describe",), ("what", "do", "you", "see"))


class IntentKind(str, Enum):
    SCENE = "scene"
    DISCOVERY = "discovery"
    READ = "read"
    NEWS = "news"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CommandText:
    raw: str
    tokens: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class Unresolved:
    """An object phrase that matched no vocabulary label or alias."""

    phrase: str


@dataclass(frozen=True)
class Intent:
    kind: IntentKind
    object_name: str | Unresolved | None = None

    def __post_init__(self):
        if (self.kind is IntentKind.DISCOVERY) != (self.object_name is not None):
            raise ValueError("object_name must be set exactly for discovery intents")

    @property
    def resolved(self) -> bool:
        return isinstance(self.object_name, str)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        if isinstance(self.object_name, Unresolved):
            out.update(object_name=self.object_name.phrase, resolved=False)
        elif self.object_name is not None:
            out.update(object_name=self.object_name, resolved=True)
        return out


def tokenize(text: str) -> tuple[str, ...]:
    return tuple(_PUNCT.sub("", text.lower()).split())


def normalize_command(raw: str) -> CommandText:
    """Lowercase, strip punctuation, split on whitespace."""
    return CommandText(raw=raw, tokens=tokenize(raw))


def _find(tokens, phrase) -> int:
    """Index just past the last occurrence of ``phrase`` in ``tokens``, or -1."""
    n = len(phrase)
    for i in range(len(tokens) - n, -1, -1):
        if tokens[i:i + n] == phrase:
            return i + n
    return -1


def _contains(tokens, phrases) -> bool:
    return any(_find(tokens, p) >= 0 for p in phrases)


def _candidate_tokens(tokens) -> tuple[str, ...]:
    dets = [i for i, t in enumerate(tokens) if t in DETERMINERS]
    if dets:
        return tokens[dets[-1] + 1:]
    ends = [_find(tokens, p) for p in _DISCOVERY_TRIGGERS]
    start = max(ends)
    if start < 0:
        return tokens
    rest = tokens[start:]
    if rest[:1] == ("for",):
        rest = rest[1:]
    return rest


def resolve_phrase(tokens, vocab: ClassVocabulary, aliases: AliasTable) -> str | None:
    """Longest contiguous span of ``tokens`` naming a label or alias (leftmost on ties)."""
    labels = {tokenize(l): l for l in vocab}
    alias_map = {tokenize(k): v for k, v in aliases.mapping.items()}
    tokens = tuple(tokens)
    for length in range(len(tokens), 0, -1):
        for i in range(len(tokens) - length + 1):
            span = tokens[i:i + length]
            if span in labels:
                return labels[span]
            if span in alias_map:
                return alias_map[span]
    return None


def extract_object_name(cmd: CommandText, vocab: ClassVocabulary, aliases: AliasTable) -> str | Unresolved:
    """Object requested by a discovery command.

    The candidate phrase is everything after the last of ``the/my/a/an``
    (or after the trigger word when no determiner is present). It is then
    matched against the vocabulary, going through the alias table.

    >>> vocab, aliases = ClassVocabulary.load(), AliasTable.load()
    >>> extract_object_name(normalize_command("where is my cellphone"), vocab, aliases)
    'cell phone'
    >>> extract_object_name(normalize_command("can you find the extension box"), vocab, aliases)
    Unresolved(phrase='extension box')
    """
    candidate = _candidate_tokens(cmd.tokens)
    label = resolve_phrase(candidate, vocab, aliases)
    if label is None:
        return Unresolved(" ".join(candidate))
    return label


def classify(tokens) -> IntentKind:
    tokens = tuple(tokens)
    if "news" in tokens:
        return IntentKind.NEWS
    if "read" in tokens or "text" in tokens:
        return IntentKind.READ
    if _contains(tokens, _DISCOVERY_TRIGGERS):
        return IntentKind.DISCOVERY
    if _contains(tokens, _SCENE_PHRASES):
        return IntentKind.SCENE
    return IntentKind.UNKNOWN


def parse_command(cmd, vocab: ClassVocabulary, aliases: AliasTable | None = None) -> Intent:
    if isinstance(cmd, str):
        cmd = normalize_command(cmd)
    if not len(vocab):
        raise ValueError("vocabulary must not be empty")
    aliases = aliases if aliases is not None else AliasTable.empty()
    kind = classify(cmd.tokens)
    if kind is IntentKind.DISCOVERY:
        return Intent(kind, extract_object_name(cmd, vocab, aliases))
    return Intent(kind)
