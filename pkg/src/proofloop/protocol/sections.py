"""Section grammar for agent documents.

A recognized section starts at a line ``## NAME`` or ``### NAME`` outside a
fenced code block. Names compare case-insensitively with spaces, hyphens and
underscores interchangeable, so ``## Trace-Back To`` and ``## TRACE_BACK_TO``
are the same section. A header may carry its value inline
(``## Verdict: ACCEPT``). The body runs to the next header of level 1-3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_HEADER = re.compile(r"^(#{1,6})[ \t]+(.*?)[ \t#]*$")
_FENCE = re.compile(r"^[ \t]{0,3}(`{3,}|~{3,})")
_SEP = re.compile(r"[\s_\-]+")
_EMPHASIS = re.compile(r"[*`]")


def normalize_name(text: str) -> str:
    text = _EMPHASIS.sub("", text).strip().rstrip(":").strip()
    return _SEP.sub("_", text).upper()


def as_text(document) -> str:
    if document is None:
        return ""
    if isinstance(document, (bytes, bytearray)):
        return bytes(document).decode("utf-8", errors="replace")
    return str(document)


def iter_unfenced(text: str):
    """Yield ``(line, fenced)`` pairs; fence marker lines count as fenced."""
    fence: str | None = None
    for line in text.splitlines():
        m = _FENCE.match(line)
        if fence is None:
            if m:
                fence = m.group(1)
                yield line, True
                continue
            yield line, False
        else:
            if m and m.group(1)[0] == fence[0] and len(m.group(1)) >= len(fence):
                fence = None
            yield line, True


def strip_fenced(text: str) -> str:
    return "\n".join(line for line, fenced in iter_unfenced(text) if not fenced)


@dataclass
class Section:
    name: str
    level: int
    body: str
    line: int
    end: int = -1


def split_sections(document) -> list[Section]:
    text = as_text(document)
    sections: list[Section] = []
    current: Section | None = None
    buf: list[str] = []

    def close(end: int):
        if current is not None:
            current.body = "\n".join(buf)
            current.end = end
            sections.append(current)

    i = -1
    for i, (line, fenced) in enumerate(iter_unfenced(text)):
        m = None if fenced else _HEADER.match(line)
        if m and len(m.group(1)) <= 3:
            close(i)
            buf = []
            current = None
            if len(m.group(1)) in (2, 3):
                title = m.group(2)
                name, sep, inline = title.partition(":")
                current = Section(normalize_name(name), len(m.group(1)), "", i)
                if sep and inline.strip():
                    buf.append(inline.strip())
            continue
        if current is not None:
            buf.append(line)
    close(i + 1)
    return sections


class SectionIndex:
    """First-wins lookup over a document's sections."""

    def __init__(self, document):
        self.sections = split_sections(document)
        self._first: dict[str, Section] = {}
        self.duplicates: list[str] = []
        for s in self.sections:
            if s.name in self._first:
                self.duplicates.append(s.name)
            else:
                self._first[s.name] = s

    def get(self, *names: str) -> Section | None:
        for n in names:
            if n in self._first:
                return self._first[n]
        return None

    def body(self, *names: str) -> str | None:
        s = self.get(*names)
        return s.body if s is not None else None

    def __contains__(self, name: str) -> bool:
        return name in self._first


def first_line(body: str | None) -> str:
    if body is None:
        return ""
    for line in body.splitlines():
        if line.strip():
            return line.strip()
    return ""


_TOKEN = re.compile(r"^([A-Za-z][A-Za-z _\-]*?)(?:[ \t]*[:=]?[ \t]*(\d+))?$")


def parse_token(line: str) -> tuple[str, int | None] | None:
    """Split ``"TRACE_BACK_TO 4"`` into ``("TRACE_BACK_TO", 4)``.

    Returns None when the line is not a bare token (possibly followed by an
    integer). Emphasis markers and trailing punctuation are ignored.
    """
    cleaned = _EMPHASIS.sub("", line).strip().rstrip(".;,!").strip()
    m = _TOKEN.match(cleaned)
    if not m:
        return None
    num = int(m.group(2)) if m.group(2) is not None else None
    return normalize_name(m.group(1)), num


_BULLET = re.compile(r"^[ \t]*(?:[-*+]|\d+[.)])[ \t]+(.*)$")


def parse_bullets(body: str | None) -> list[str]:
    """Bullet items, with wrapped continuation lines joined by a space."""
    items: list[str] = []
    open_item = False
    for line in (body or "").splitlines():
        m = _BULLET.match(line)
        if m:
            items.append(m.group(1).strip())
            open_item = True
        elif not line.strip():
            open_item = False
        elif open_item:
            items[-1] = f"{items[-1]} {line.strip()}".strip()
    return [i for i in items if i]
