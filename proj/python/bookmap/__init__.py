"""Python bindings for the bookmap folksonomy engine."""

from ._core import (
    BookmapError,
    ClickEvent,
    ModeStats,
    Session,
    SessionStats,
    Store,
    apply_drag,
    build_cloud,
    build_context,
    canonicalize_url,
    classify_click,
    compute_stats,
    normalize_tag,
    recommend_tags,
    related_tags,
    render_report,
    replay_journal,
    sessionize,
    similar_resources,
)

__all__ = [
    "BookmapError",
    "ClickEvent",
    "ModeStats",
    "Session",
    "SessionStats",
    "Store",
    "apply_drag",
    "build_cloud",
    "build_context",
    "canonicalize_url",
    "classify_click",
    "compute_stats",
    "normalize_tag",
    "recommend_tags",
    "related_tags",
    "render_report",
    "replay_journal",
    "sessionize",
    "similar_resources",
]
