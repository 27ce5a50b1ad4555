"""Decision pipelines for a voice-driven visual assistant.

Command parsing, object discovery over detector output, reading order for
OCR blocks, headline aggregation, caption decoding and text metrics.
"""
__version__ = "0.1.0"

from .config import Config, ConfigError, load_config
from .discovery import (
    Detection,
    DetectionDocument,
    DiscoveryResult,
    ObjectLocator,
    Region,
    discover,
    filter_detections,
    locate,
    render_discovery,
)
from .geometry import BoundingBox
from .intent import Intent, IntentKind, Unresolved, extract_object_name, normalize_command, parse_command
from .layout import LayoutDocument, OrderedText, ReadingOrder, TextBlock, reading_order, render_text
from .metrics import bleu, cosine_similarity
from .numerics import KMeans1D, ZScoreOutlierRemover, kmeans_1d, zscores
from .vocabulary import AliasTable, ClassVocabulary

__all__ = [
    "AliasTable", "BoundingBox", "ClassVocabulary", "Config", "ConfigError", "Detection",
    "DetectionDocument", "DiscoveryResult", "Intent", "IntentKind", "KMeans1D", "LayoutDocument",
    "ObjectLocator", "OrderedText", "ReadingOrder", "Region", "TextBlock", "Unresolved",
    "ZScoreOutlierRemover", "bleu", "cosine_similarity", "discover", "extract_object_name",
    "filter_detections", "kmeans_1d", "load_config", "locate", "normalize_command", "parse_command",
    "reading_order", "render_discovery", "render_text", "zscores",
]
