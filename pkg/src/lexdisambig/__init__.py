"""Lexical disambiguation of natural-language questions for closed-domain QA."""

from importlib import resources
from pathlib import Path

from .kb import KnowledgeBase, load_kb, validate_kb
from .tags import PosTag
from .wsd import ResolutionReport, ResolutionStatus, resolve_question

__all__ = [
    "KnowledgeBase",
    "PosTag",
    "ResolutionReport",
    "ResolutionStatus",
    "bundled_kb_dir",
    "load_kb",
    "resolve_question",
    "validate_kb",
]


def bundled_kb_dir(name: str = "university") -> Path:
    """Path of a knowledge base shipped with the package."""
    return Path(str(resources.files(__name__) / "fixtures" / name))
