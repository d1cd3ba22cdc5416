"""A small line-oriented language for tangle diagrams and braid closures.

Tangle programs look like::

    # evaluation cap on an up strand and a down strand
    object: V^ V_v
    slice: cap@0

Interval tokens are ``LABEL^`` (up), ``LABEL_v`` (down), ``LABEL#^`` and
``LABEL#v`` (shaded).  One generator per ``slice:`` line:

    id | cap@i | cup@i | cup(TOKEN)@i | x+@i | x-@i | h+(n)@i | h-(n)@i

``cup@i`` opens an unshaded up/down pair of the default label; ``cup(TOKEN)@i``
names the left end explicitly.  Braid closures are written
``braid 3: s1 s2^-1 s1 ; close``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .tangles import BoundaryError, Diagram, DiagramError, Interval, Slice, braid_closure

__all__ = [
    "ParseError",
    "TangleSource",
    "parse_tangle",
    "parse_braid",
    "parse_link",
    "format_diagram",
    "load_source",
]


class ParseError(ValueError):
    """Any problem in a program, located by 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class TangleSource:
    text: str
    origin: str = "<inline>"


def load_source(arg: str) -> TangleSource:
    """A file path if one exists, otherwise the argument itself as program text."""
    p = Path(arg)
    try:
        if p.is_file():
            data = p.read_bytes()
            return TangleSource(_decode(data), str(p))
    except OSError:
        pass
    return TangleSource(arg.replace("\\n", "\n"), "<inline>")


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data[: exc.start].count(b"\n") + 1
        col = exc.start - (data.rfind(b"\n", 0, exc.start) + 1) + 1
        raise ParseError("input is not valid UTF-8", line, col) from None


_IDENT = r"[A-Za-z][A-Za-z0-9]*"
_TOKEN_RE = re.compile(rf"^({_IDENT})(\^|_v|#\^|#v)$")
_SLICE_RE = re.compile(
    rf"^(?:(id)|(cap|x\+|x-)@(\d+)|cup(?:\(([^)]*)\))?@(\d+)|(h\+|h-)\((\d+)\)@(\d+))$"
)
_BRAID_RE = re.compile(r"^braid\s+(\d+)\s*:(.*?);\s*close\s*$", re.S)
MAX_STRANDS = 64
_LETTER_RE = re.compile(r"^s(\d+)(\^-1|\^1|\^\+1)?$")


def _token(text: str, line: int, col: int, labels: Iterable[str] | None) -> Interval:
    m = _TOKEN_RE.match(text)
    if not m:
        raise ParseError(f"bad interval token {text!r}", line, col)
    label, mark = m.groups()
    if labels is not None and label not in labels:
        raise ParseError(f"unknown label {label!r}", line, col)
    return Interval(label, mark.endswith("^"), mark.startswith("#"))


def _fields(rest: str, offset: int):
    """Whitespace-separated words with their 1-based columns."""
    for m in re.finditer(r"\S+", rest):
        yield m.group(0), offset + m.start() + 1


def parse_tangle(
    src: TangleSource | str | bytes,
    labels: Iterable[str] | None = ("V",),
    default_label: str = "V",
) -> Diagram:
    """Parse a tangle program; boundary checks run as each slice is read."""
    text = src.text if isinstance(src, TangleSource) else _decode(src)
    labels = None if labels is None else set(labels)
    source: tuple = ()
    have_object = False
    slices: list[Slice] = []
    obj: tuple = ()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        body = raw.replace("\r", "")
        if not body.strip() or body.lstrip().startswith("#"):
            continue
        indent = len(body) - len(body.lstrip())
        stripped = body.strip()
        key, sep, rest = stripped.partition(":")
        if not sep:
            raise ParseError(f"expected 'object:' or 'slice:', found {stripped[:20]!r}", lineno, indent + 1)
        key = key.strip()
        offset = indent + len(stripped) - len(rest)
        if key == "object":
            if have_object or slices:
                raise ParseError("the object line must come first and appear once", lineno, indent + 1)
            have_object = True
            source = tuple(_token(w, lineno, c, labels) for w, c in _fields(rest, offset))
            obj = source
        elif key == "slice":
            words = list(_fields(rest, offset))
            if len(words) != 1:
                col = words[1][1] if len(words) > 1 else offset + 1
                raise ParseError("exactly one generator per slice line", lineno, col)
            word, col = words[0]
            s = _slice(word, lineno, col, labels, default_label)
            try:
                obj = s.apply(obj, len(slices))
            except BoundaryError as exc:
                raise ParseError(str(exc), lineno, col) from None
            slices.append(s)
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, indent + 1)
    return Diagram(source, slices)


def _slice(word: str, line: int, col: int, labels, default_label: str) -> Slice:
    m = _SLICE_RE.match(word)
    if not m:
        raise ParseError(f"unrecognized generator {word!r}", line, col)
    ident, kind, pos, cup_tok, cup_pos, hkind, hn, hpos = m.groups()
    try:
        if ident:
            return Slice("id")
        if kind:
            return Slice(kind, int(pos))
        if cup_pos is not None:
            if cup_tok is None:
                if labels is not None and default_label not in labels:
                    raise ParseError(f"unknown label {default_label!r}", line, col)
                left = Interval(default_label, True, False)
            else:
                left = _token(cup_tok.strip(), line, col + 4, labels)
            return Slice("cup", int(cup_pos), cup_left=left)
        return Slice(hkind, int(hpos), n=int(hn))
    except DiagramError as exc:
        raise ParseError(str(exc), line, col) from None


def parse_braid(text: str | bytes, label: str = "V") -> Diagram:
    """``braid n: s1 s2^-1 ... ; close`` as the trace closure of upward strands."""
    text = _decode(text)
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    line0 = text[:lead].count("\n") + 1
    m = _BRAID_RE.match(stripped)
    if not m:
        raise ParseError("expected 'braid <n>: <letters> ; close'", line0, 1)
    n = int(m.group(1))
    if not 1 <= n <= MAX_STRANDS:
        raise ParseError(f"a braid needs between 1 and {MAX_STRANDS} strands", line0, m.start(1) + 1)
    word = []
    base = m.start(2)
    for lm in re.finditer(r"\S+", m.group(2)):
        tok = lm.group(0)
        pos = base + lm.start()
        line = line0 + stripped[:pos].count("\n")
        col = pos - (stripped.rfind("\n", 0, pos) + 1) + 1
        lt = _LETTER_RE.match(tok)
        if not lt:
            raise ParseError(f"bad braid letter {tok!r}", line, col)
        k = int(lt.group(1))
        if not 1 <= k < n:
            raise ParseError(f"generator s{k} out of range for {n} strands", line, col)
        word.append(-k if lt.group(2) == "^-1" else k)
    return braid_closure(n, word, label)


def parse_link(src: TangleSource | str | bytes, labels: Iterable[str] | None = ("V",)) -> Diagram:
    """Either form: a braid closure or a tangle program."""
    text = src.text if isinstance(src, TangleSource) else _decode(src)
    if text.lstrip().startswith("braid"):
        return parse_braid(text)
    return parse_tangle(text, labels)


def format_diagram(d: Diagram) -> str:
    """Program text that parses back to ``d``."""
    lines = []
    if d.source:
        lines.append("object: " + " ".join(iv.token for iv in d.source))
    for s in d.slices:
        if s.kind == "cup":
            lines.append(f"slice: cup({s.cup_left.token})@{s.pos}")
        else:
            lines.append(f"slice: {s.text()}")
    return "\n".join(lines) + "\n"
