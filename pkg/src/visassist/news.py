"""Headline aggregation from RSS feeds with a landing-page fallback.

Sources come from a JSON list of ``{"name", "rss", "url"}`` objects. Each
source is read from its RSS feed when it has one; undated items are dropped
and the rest sorted newest first. Sources without a feed, or whose feed
fails, fall back to scraping anchor texts from the site's landing page.
Every source is capped at five headlines and failures stay local to the
source that caused them.
"""
from __future__ import annotations

import hashlib
import json
import logging
import urllib.request
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from html.parser import HTMLParser
from pathlib import Path
from typing import Protocol

from .config import Config

log = logging.getLogger(__name__)

MAX_ARTICLES = 5
MIN_HEADLINE_TOKENS = 4
NO_NEWS = "no news available"
USER_AGENT = "visassist-news/0.1"


class FetchError(Exception):
    """A URL could not be retrieved."""


class SourcesError(ValueError):
    """The sources file is unreadable or invalid."""


@dataclass(frozen=True)
class NewsSource:
    name: str
    rss_url: str | None = None
    site_url: str | None = None

    def __post_init__(self):
        if not self.name:
            raise SourcesError("source name must be non-empty")
        if not self.rss_url and not self.site_url:
            raise SourcesError(f"source {self.name!r} needs an rss or url entry")


@dataclass(frozen=True)
class Article:
    title: str
    source_name: str
    published: datetime | None = None


@dataclass
class SourceResult:
    source: NewsSource
    articles: list[Article] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    via: str = ""

    @property
    def failed(self) -> bool:
        return not self.articles and bool(self.errors)


class ContentProvider(Protocol):
    def fetch(self, url: str, timeout: float) -> bytes: ...


class HttpProvider:
    """Plain HTTP(S) GET via urllib."""

    def fetch(self, url: str, timeout: float) -> bytes:
        req = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
        try:
            with urllib.request.urlopen(req, timeout=timeout) as resp:
                return resp.read()
        except Exception as exc:  # urllib raises a wide range of errors
            raise FetchError(f"{url}: {exc}") from exc


def fixture_key(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()


class FixtureProvider:
    """Serves recorded responses from ``directory/<sha256(url)>``; a missing file is a fetch failure."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def path_for(self, url: str) -> Path:
        return self.directory / fixture_key(url)

    def store(self, url: str, content: bytes | str) -> Path:
        if isinstance(content, str):
            content = content.encode("utf-8")
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(url)
        path.write_bytes(content)
        return path

    def fetch(self, url: str, timeout: float) -> bytes:
        try:
            return self.path_for(url).read_bytes()
        except OSError as exc:
            raise FetchError(f"{url}: no fixture ({exc.strerror})") from exc


def load_sources(path) -> list[NewsSource]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SourcesError(f"cannot read sources file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise SourcesError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n  {line}") from exc
    if not isinstance(data, list):
        raise SourcesError(f"{path}: expected a JSON array of sources")
    sources = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise SourcesError(f"{path}: source #{i} must be an object with a string 'name'")
        try:
            sources.append(NewsSource(entry["name"], entry.get("rss"), entry.get("url")))
        except SourcesError as exc:
            raise SourcesError(f"{path}: source #{i}: {exc}") from exc
    return sources


def _parse_date(text: str | None) -> datetime | None:
    if not text or not text.strip():
        return None
    try:
        dt = parsedate_to_datetime(text.strip())
    except (TypeError, ValueError, IndexError):
        return None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def parse_rss(content: bytes, source_name: str, limit: int = MAX_ARTICLES) -> list[Article]:
    """Dated ``channel/item`` titles, newest first, at most ``limit``."""
    try:
        root = ET.fromstring(content)
    except ET.ParseError as exc:
        raise ValueError(f"malformed feed: {exc}") from exc
    channel = root.find("channel")
    if root.tag != "rss" or channel is None:
        raise ValueError(f"not an RSS 2.0 document (root <{root.tag}>)")
    articles = []
    for item in channel.findall("item"):
        title = " ".join((item.findtext("title") or "").split())
        published = _parse_date(item.findtext("pubDate"))
        if title and published is not None:
            articles.append(Article(title, source_name, published))
    # stable sort keeps feed order among equal timestamps
    articles.sort(key=lambda a: a.published, reverse=True)
    return articles[:limit]


def fetch_rss(src: NewsSource, provider: ContentProvider, timeout: float = 10.0,
              limit: int = MAX_ARTICLES) -> list[Article]:
    if not src.rss_url:
        raise ValueError(f"source {src.name!r} has no RSS feed")
    return parse_rss(provider.fetch(src.rss_url, timeout), src.name, limit)


class _AnchorText(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.anchors = []
        self._depth = 0
        self._buf = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            if self._depth == 0:
                self._buf = []
            self._depth += 1

    def handle_endtag(self, tag):
        if tag == "a" and self._depth:
            self._depth -= 1
            if self._depth == 0:
                self.anchors.append(" ".join("".join(self._buf).split()))

    def handle_data(self, data):
        if self._depth:
            self._buf.append(data)


def extract_headlines(html: str, limit: int = MAX_ARTICLES) -> list[str]:
    """Anchor texts of at least four words, de-duplicated, in document order."""
    parser = _AnchorText()
    parser.feed(html)
    parser.close()
    out = []
    for text in parser.anchors:
        if len(text.split()) >= MIN_HEADLINE_TOKENS and text not in out:
            out.append(text)
            if len(out) == limit:
                break
    return out


def fetch_fallback(src: NewsSource, provider: ContentProvider, timeout: float = 10.0,
                   limit: int = MAX_ARTICLES) -> list[Article]:
    if not src.site_url:
        raise ValueError(f"source {src.name!r} has no site url")
    content = provider.fetch(src.site_url, timeout)
    html = content.decode("utf-8", errors="replace")
    return [Article(title, src.name) for title in extract_headlines(html, limit)]


def collect_source(src: NewsSource, provider: ContentProvider, timeout: float = 10.0,
                   limit: int = MAX_ARTICLES) -> SourceResult:
    result = SourceResult(src)
    if src.rss_url:
        try:
            result.articles = fetch_rss(src, provider, timeout, limit)
            result.via = "rss"
            return result
        except (FetchError, ValueError) as exc:
            result.errors.append(f"rss: {exc}")
    if src.site_url:
        try:
            result.articles = fetch_fallback(src, provider, timeout, limit)
            result.via = "site"
        except FetchError as exc:
            result.errors.append(f"site: {exc}")
    for err in result.errors:
        log.warning("news source %s: %s", src.name, err)
    return result


def collect_headlines(sources, provider: ContentProvider, cfg: Config | None = None) -> list[SourceResult]:
    """Fetch all sources concurrently; results follow the input order."""
    cfg = cfg or Config()
    sources = list(sources)
    if not sources:
        return []
    pool = ThreadPoolExecutor(max_workers=cfg.news_parallelism)
    try:
        futures = [
            pool.submit(collect_source, s, provider, cfg.news_timeout, cfg.news_max_articles)
            for s in sources
        ]
        wait(futures, timeout=cfg.news_total_budget)
        results = []
        for src, fut in zip(sources, futures):
            if not fut.done():
                fut.cancel()
                results.append(SourceResult(src, errors=[f"timed out after {cfg.news_total_budget}s budget"]))
            elif fut.exception() is not None:
                results.append(SourceResult(src, errors=[f"unexpected error: {fut.exception()}"]))
            else:
                results.append(fut.result())
        return results
    finally:
        pool.shutdown(wait=False, cancel_futures=True)


def render_briefing(results) -> str:
    """One section per source: its name, then a headline per line."""
    results = list(results)
    if not any(r.articles for r in results):
        failed = sum(1 for r in results if r.errors)
        if failed:
            return f"{NO_NEWS}: {failed} of {len(results)} sources could not be reached\n"
        return f"{NO_NEWS}\n"
    sections = []
    for r in results:
        lines = [r.source.name]
        lines += [a.title for a in r.articles] or ["no headlines available"]
        sections.append("\n".join(lines))
    return "\n\n".join(sections) + "\n"


def compile_briefing(sources, provider: ContentProvider, output_path=None, cfg: Config | None = None) -> str:
    """Collect, render and (when ``output_path`` is given) write the briefing text."""
    text = render_briefing(collect_headlines(sources, provider, cfg))
    if output_path is not None:
        Path(output_path).write_text(text, encoding="utf-8")
    return text
