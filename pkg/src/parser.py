"""Readers for shift definition files and block-code files."""

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import InputError
from .shift import Alphabet, ForbiddenWords, LabeledGraph, Subshift, VertexShift, Word

logger = logging.getLogger(__name__)

EDGE_PATTERN = re.compile(r"^(\S+)\s+-(\S+)->\s+(\S+)$")
CODE_PATTERN = re.compile(r"^(.*?)\s*->\s*(\S+)$")
SECTIONS = ("forbidden", "matrix", "graph")


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _parse_word(alphabet: Alphabet, text: str, line: int) -> Word:
    try:
        return alphabet.parse_word(text)
    except InputError as e:
        raise InputError(e.detail, line=line) from None


def parse_shift(text: str, name: str = "shift") -> Subshift:
    """Parse a shift definition.

    Format::

        name: golden            (optional)
        alphabet: 0 1
        forbidden: 11           (or ``matrix:`` / ``graph:`` followed by rows / edges)
    """
    alphabet: Optional[Alphabet] = None
    section: Optional[str] = None
    section_line = 0
    forbidden: List[Word] = []
    rows: List[List[int]] = []
    edges: List[Tuple[str, int, str]] = []
    states: List[str] = []

    for number, line in _content_lines(text):
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if sep and key in ("name", "alphabet", *SECTIONS):
            value = value.strip()
            if key == "name":
                name = value or name
            elif key == "alphabet":
                if alphabet is not None:
                    raise InputError("alphabet declared twice", line=number)
                try:
                    alphabet = Alphabet(value.split())
                except InputError as e:
                    raise InputError(e.detail, line=number) from None
            else:
                if alphabet is None:
                    raise InputError(f"'{key}:' section before 'alphabet:'", line=number)
                if section is not None:
                    raise InputError(f"second presentation section '{key}:' (already have '{section}:')", line=number)
                section, section_line = key, number
                if key == "forbidden":
                    for token in value.split():
                        word = _parse_word(alphabet, token, number)
                        if not word:
                            raise InputError("forbidden words must be nonempty", line=number)
                        if word in forbidden:
                            raise InputError(f"duplicate forbidden word {token!r}", line=number)
                        forbidden.append(word)
                elif value:
                    raise InputError(f"'{key}:' takes its entries on the following lines", line=number)
            continue

        if section == "forbidden":
            for token in line.split():
                word = _parse_word(alphabet, token, number)
                if word in forbidden:
                    raise InputError(f"duplicate forbidden word {token!r}", line=number)
                forbidden.append(word)
        elif section == "matrix":
            entries = line.split() if any(c.isspace() for c in line) else list(line)
            try:
                row = [int(v) for v in entries]
            except ValueError:
                raise InputError(f"matrix row {line!r} must contain only 0 and 1", line=number) from None
            if any(v not in (0, 1) for v in row):
                raise InputError(f"matrix row {line!r} must contain only 0 and 1", line=number)
            if len(row) != len(alphabet):
                raise InputError(f"matrix row has {len(row)} entries, expected {len(alphabet)}", line=number)
            rows.append(row)
        elif section == "graph":
            match = EDGE_PATTERN.match(line)
            if not match:
                raise InputError(f"edge {line!r} must look like 'p -a-> q'", line=number)
            source, token, target = match.groups()
            try:
                label = alphabet.index(token)
            except InputError as e:
                raise InputError(e.detail, line=number) from None
            edge = (source, label, target)
            if edge in edges:
                raise InputError(f"duplicate edge {line!r}", line=number)
            edges.append(edge)
            for state in (source, target):
                if state not in states:
                    states.append(state)
        else:
            raise InputError(f"unexpected line {line!r}", line=number)

    if alphabet is None:
        raise InputError("missing 'alphabet:' line")
    if section is None:
        raise InputError("missing presentation: expected 'forbidden:', 'matrix:' or 'graph:'")

    try:
        if section == "forbidden":
            shift: Subshift = ForbiddenWords(name, alphabet, forbidden)
        elif section == "matrix":
            if len(rows) != len(alphabet):
                raise InputError(f"matrix has {len(rows)} rows, expected {len(alphabet)}", line=section_line)
            shift = VertexShift(name, alphabet, rows)
        else:
            if not edges:
                raise InputError("graph has no edges", line=section_line)
            shift = LabeledGraph(name, alphabet, states, edges)
    except InputError as e:
        if e.line is None:
            raise InputError(e.detail, line=section_line) from None
        raise
    return shift


def load_shift(path: str) -> Subshift:
    file = Path(path)
    try:
        text = file.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"shift file {path} not found") from None
    except UnicodeDecodeError as e:
        raise InputError(f"shift file {path} is not valid UTF-8 (byte {e.start})") from None
    except OSError as e:
        raise InputError(f"cannot read shift file {path}: {e}") from None
    shift = parse_shift(text, name=file.stem)
    logger.info("Loaded %s shift %s from %s", shift.kind, shift.name, path)
    return shift


def parse_block_code(text: str) -> Tuple[int, Dict[str, str], Dict[str, int]]:
    """Parse ``window: m`` followed by ``word -> symbol`` lines.

    Returns the window, the raw table and the line number of each entry; the
    tokens are resolved against the shifts by the conjugacy module.
    """
    window: Optional[int] = None
    table: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for number, line in _content_lines(text):
        key, sep, value = line.partition(":")
        if sep and key.strip().lower() == "window":
            if window is not None:
                raise InputError("window declared twice", line=number)
            try:
                window = int(value.strip())
            except ValueError:
                raise InputError(f"window {value.strip()!r} is not an integer", line=number) from None
            if window < 1:
                raise InputError("window must be at least 1", line=number)
            continue
        if window is None:
            raise InputError("missing 'window:' line before table entries", line=number)
        match = CODE_PATTERN.match(line)
        if not match:
            raise InputError(f"entry {line!r} must look like 'word -> symbol'", line=number)
        word, symbol = match.group(1).strip(), match.group(2)
        if word in table:
            raise InputError(f"duplicate entry for {word!r}", line=number)
        table[word] = symbol
        lines[word] = number
    if window is None:
        raise InputError("missing 'window:' line")
    return window, table, lines


def load_block_code_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"block code file {path} not found") from None
    except UnicodeDecodeError as e:
        raise InputError(f"block code file {path} is not valid UTF-8 (byte {e.start})") from None
    except OSError as e:
        raise InputError(f"cannot read block code file {path}: {e}") from None
