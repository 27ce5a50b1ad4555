"""Route a transcribed command to the module that answers it."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .config import Config
from .discovery import DetectionDocument, discover
from .intent import IntentKind, parse_command
from .layout import LayoutDocument, reading_order, render_text
from .news import HttpProvider, collect_headlines, load_sources, render_briefing
from .vocabulary import AliasTable, ClassVocabulary

REPROMPT = "Sorry, I did not understand the command. Please give the command again."
SCENE_UNAVAILABLE = (
    "Scene description needs an image captioning model, which is not configured. "
    "Caption decoding can be exercised with the decode command and a token scorer."
)


class MissingInputError(ValueError):
    """The command needs a document that was not supplied."""


@dataclass(frozen=True)
class Response:
    text: str
    module: str
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"text": self.text, "module": self.module, "diagnostics": self.diagnostics}


@dataclass
class Inputs:
    detections: DetectionDocument | None = None
    layout: LayoutDocument | None = None
    sources: object = None  # path to a sources file, or a list of NewsSource
    provider: object = None
    news_out: object = None


def dispatch(command: str, inputs: Inputs | None = None, cfg: Config | None = None,
             vocab: ClassVocabulary | None = None, aliases: AliasTable | None = None) -> Response:
    cfg = cfg or Config()
    inputs = inputs or Inputs()
    vocab = vocab or ClassVocabulary.load(cfg.vocabulary_path)
    aliases = aliases if aliases is not None else AliasTable.load(cfg.alias_path)
    intent = parse_command(command, vocab, aliases)

    if intent.kind is IntentKind.DISCOVERY:
        diag = intent.to_dict()
        # an unknown class is answered without looking at any image
        if intent.resolved and inputs.detections is None:
            raise MissingInputError("object discovery needs a detections document (--detections)")
        return Response(discover(inputs.detections, intent.object_name, vocab, cfg), "discovery", diag)

    if intent.kind is IntentKind.READ:
        if inputs.layout is None:
            raise MissingInputError("reading needs a layout document (--layout)")
        ordered = reading_order(inputs.layout, cfg)
        diag = {"column_count": ordered.column_count, "removed_outliers": list(ordered.removed_outliers)}
        text = render_text(ordered) or "no text found"
        return Response(text, "reading", diag)

    if intent.kind is IntentKind.NEWS:
        if inputs.sources is None:
            raise MissingInputError("news needs a sources file (--sources)")
        sources = inputs.sources
        if not isinstance(sources, list):
            sources = load_sources(sources)
        results = collect_headlines(sources, inputs.provider or HttpProvider(), cfg)
        text = render_briefing(results)
        if inputs.news_out is not None:
            Path(inputs.news_out).write_text(text, encoding="utf-8")
        failed = [r.source.name for r in results if r.errors]
        return Response(text, "news", {"failed_sources": failed})

    if intent.kind is IntentKind.SCENE:
        return Response(SCENE_UNAVAILABLE, "scene", {"capability": "caption-request"})

    return Response(REPROMPT, "unknown", {})
