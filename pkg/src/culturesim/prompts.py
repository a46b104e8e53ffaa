"""Built-in prompt and personality library, plus file-backed registries.

The built-in texts are reproduced character for character from the study
this package reimplements (including the curly apostrophes and the odd
grammar of some instructions), because wording changes measurably shift
what the models produce.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Mapping

INITIALIZATION_PROMPTS: dict[str, str] = {
    "TellMeAStory": "Tell me a story",
    "KidStory": (
        "Imagine that you are telling a story to your kid. What would that "
        "story be? Just output the story, nothing else."
    ),
}

TRANSFORMATION_PROMPTS: dict[str, str] = {
    "CombineTwo": (
        "You will receive stories. Pick the two stories you prefer, and "
        "create a story that is combination of these two stories. Just "
        "output your story, don’t write anything else."
    ),
    "MinorChanges": (
        "You will receive a list of one or more stories. Create a new story "
        "by making some minor changes to one of those stories. Just output "
        "one story, do not output anything else."
    ),
    "Repeat": (
        "You will receive stories. Select only one of these stories, and "
        "repeat it. Just output the story, don’t write anything else."
    ),
    "MaximizeDifference": (
        "You will receive stories. Create a story that is as different as "
        "possible from the stories you received. Just output your story, "
        "nothing else."
    ),
    "RetellKidStory": (
        "Here is one or more stories you were told as a kid. It is now your "
        "turn to tell a story at your kid. Tell that story. Write only one "
        "story. Do not output anything else."
    ),
}

PERSONALITIES: dict[str, str] = {
    "Creative": "For what follows, pretend that you are a very creative person.",
    "NotCreative": "For what follows, pretend that you are not a very creative person.",
}

DEFAULT_INITIALIZATION = "TellMeAStory"
DEFAULT_TRANSFORMATION = "CombineTwo"

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


def valid_name(name: str) -> bool:
    """True for names safe to use as file stems and folder names."""
    return bool(_NAME_RE.match(name)) and ".." not in name


class TextRegistry:
    """Named texts: built-ins merged with an optional directory of .txt files.

    Files are looked up as ``<directory>/<name>.txt`` and shadow built-ins
    of the same name.  The directory is re-read on every access so that
    texts added by other processes become visible immediately.
    """

    def __init__(
        self, builtins: Mapping[str, str], directory: str | Path | None = None
    ) -> None:
        self._builtins = dict(builtins)
        self.directory = Path(directory) if directory is not None else None

    def _directory_names(self) -> list[str]:
        if self.directory is None or not self.directory.is_dir():
            return []
        return sorted(p.stem for p in self.directory.glob("*.txt"))

    def names(self) -> list[str]:
        return sorted(set(self._builtins) | set(self._directory_names()))

    def __contains__(self, name: str) -> bool:
        return name in self.names()

    def get(self, name: str) -> str:
        if self.directory is not None:
            candidate = self.directory / f"{name}.txt"
            if valid_name(name) and candidate.is_file():
                return candidate.read_text(encoding="utf-8")
        try:
            return self._builtins[name]
        except KeyError:
            raise KeyError(f"unknown text {name!r}; known: {', '.join(self.names())}") from None

    def add(self, name: str, text: str) -> Path:
        """Persist ``text`` under ``name`` in the registry directory."""
        if self.directory is None:
            raise ValueError("registry has no directory to write to")
        if not valid_name(name):
            raise ValueError(f"invalid name {name!r}")
        if not text:
            raise ValueError("text must be non-empty")
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / f"{name}.txt"
        path.write_text(text, encoding="utf-8")
        return path

    def resolve(self, ref: str) -> str:
        """Interpret ``ref`` as a registry name, else as a path to a file."""
        try:
            return self.get(ref)
        except KeyError:
            path = Path(ref)
            if path.is_file():
                return path.read_text(encoding="utf-8")
            raise


def initialization_registry(directory: str | Path | None = None) -> TextRegistry:
    return TextRegistry(INITIALIZATION_PROMPTS, directory)


def transformation_registry(directory: str | Path | None = None) -> TextRegistry:
    return TextRegistry(TRANSFORMATION_PROMPTS, directory)


def personality_registry(directory: str | Path | None = None) -> TextRegistry:
    return TextRegistry(PERSONALITIES, directory)
