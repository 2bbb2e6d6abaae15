"""Readers and writers for truth-table and A-set files.

Truth-table file: first line ``n=<int>``, second line either 2^n characters
over {0,1} in position order (position 0 first) or a hex literal with ``0x``
prefix, most-significant nibble first (its binary expansion, padded to 2^n
bits, is read in the same position order).

A-set file: one log n-bit label per line (most significant coordinate first);
blank lines and ``#`` comments are skipped.
"""

import logging
import re
from pathlib import Path

from models.bits import BitString, BooleanFunction

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")


def parse_truth_table(text: str) -> BooleanFunction:
    """Parse truth-table file contents.

    Raises:
        ValueError: If the header or body is malformed or has the wrong length.

    Examples:
        >>> parse_truth_table("n=2\\n0110\\n").to_table()
        '0110'
        >>> parse_truth_table("n=2\\n0x6\\n").to_table()
        '0110'
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) != 2:
        raise ValueError(f"Truth table needs exactly 2 non-empty lines, got {len(lines)}")

    match = _HEADER.match(lines[0])
    if not match:
        raise ValueError(f"Malformed header {lines[0]!r}; expected 'n=<int>'")
    n = int(match.group(1))
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    size = 1 << n

    body = lines[1]
    if body.lower().startswith("0x"):
        try:
            value = int(body[2:], 16)
        except ValueError as e:
            raise ValueError(f"Malformed hex truth table {body!r}") from e
        if value >> size:
            raise ValueError(f"Hex truth table {body!r} does not fit in {size} bits")
        body = format(value, f"0{size}b")

    if len(body) != size:
        raise ValueError(f"Truth table body has {len(body)} characters, expected {size}")
    return BooleanFunction(n, BitString.from_table(body))


def format_truth_table(f: BooleanFunction, as_hex: bool = False) -> str:
    """Render ``f`` in the truth-table file format."""
    body = f.to_table()
    if as_hex:
        body = f"0x{int(body, 2):0{(len(body) + 3) // 4}x}"
    return f"n={f.n}\n{body}\n"


def load_truth_table(path: str | Path) -> BooleanFunction:
    """Load a truth-table file.

    Raises:
        FileNotFoundError: If the file doesn't exist.
        ValueError: If the contents are malformed.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Truth table file not found: {path}")
    try:
        f = parse_truth_table(path.read_text(encoding="utf-8"))
    except ValueError as e:
        logger.error(f"Failed to parse truth table {path}: {e}")
        raise
    logger.info(f"Loaded truth table with n={f.n} from {path}")
    return f


def save_truth_table(f: BooleanFunction, path: str | Path, as_hex: bool = False) -> None:
    Path(path).write_text(format_truth_table(f, as_hex=as_hex), encoding="utf-8")


def parse_a_set(text: str, m: int | None = None) -> set[BitString]:
    """Parse an A-set file body into labels of a common length.

    Raises:
        ValueError: If a line is not binary or lengths disagree.
    """
    members: set[BitString] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            y = BitString.from_label(line)
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from e
        if m is None:
            m = y.length
        if y.length != m:
            raise ValueError(f"line {lineno}: expected {m} bits, got {y.length}")
        members.add(y)
    return members


def load_a_set(path: str | Path, m: int | None = None) -> set[BitString]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"A-set file not found: {path}")
    members = parse_a_set(path.read_text(encoding="utf-8"), m=m)
    if not members:
        logger.warning(f"A-set file {path} has no members")
    return members
