"""Plain-text formats for graphs, partitions, demands and solver traces.

Edge lists start with a line `n m`, followed by `m` lines `u v` of 0-based ids.
Partitions are two lines `A: id id ...` and `B: id id ...`.
Demand files hold one line `a b` per vertex.
"""

import json
import logging
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Any

from inpart.graph.core import DemandFunctions, Graph, GraphFormatError, Partition

__all__ = [
    "read_edge_list",
    "parse_edge_list",
    "format_edge_list",
    "write_edge_list",
    "read_partition",
    "parse_partition",
    "format_partition",
    "write_partition",
    "read_demands",
    "write_trace",
]

logger = logging.getLogger("inpart")


def _content_lines(text: str) -> list[list[str]]:
    """Whitespace-split lines, ignoring blank lines and `#` comments."""
    lines = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    return lines


def _ints(tokens: list[str], *, where: str) -> list[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError as e:
        raise GraphFormatError(f"{where}: expected integers, got {' '.join(tokens)!r}") from e


def parse_edge_list(text: str) -> Graph:
    lines = _content_lines(text)
    if not lines:
        raise GraphFormatError("empty edge list")
    header = _ints(lines[0], where="header")
    if len(header) != 2:
        raise GraphFormatError(f"header needs to be `n m`, got {' '.join(lines[0])!r}")
    n, m = header
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(lines) - 1}")

    edges = []
    for lineno, tokens in enumerate(lines[1:], start=2):
        edge = _ints(tokens, where=f"edge line {lineno}")
        if len(edge) != 2:
            raise GraphFormatError(f"edge line {lineno} needs two endpoints")
        edges.append((edge[0], edge[1]))

    # `from_edges` rejects self-loops and duplicates in either orientation
    return Graph.from_edges(n, edges)


def read_edge_list(path: Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(g: Graph) -> str:
    return "".join([f"{g.n} {g.m}\n", *(f"{u} {v}\n" for u, v in g.edges())])


def _write_atomically(path: Path, text: str) -> None:
    # Write under an intermediate name first to prevent half-written files
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    try:
        tmp_path.write_text(text)
    except Exception:
        tmp_path.unlink(missing_ok=True)
        raise
    tmp_path.rename(path)


def write_edge_list(g: Graph, path: Path) -> None:
    _write_atomically(path, format_edge_list(g))
    logger.debug(f"wrote graph with {g.n} vertices and {g.m} edges to {path}")


def parse_partition(text: str, n: int) -> Partition:
    sides: dict[str, list[int]] = {}
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line:
            continue
        label, sep, rest = line.partition(":")
        label = label.strip()
        if not sep or label not in ("A", "B") or label in sides:
            raise GraphFormatError(f"unexpected partition line {raw_line!r}")
        sides[label] = _ints(rest.split(), where=f"side {label}")

    if set(sides) != {"A", "B"}:
        raise GraphFormatError("a partition file needs one `A:` and one `B:` line")
    listed = sides["A"] + sides["B"]
    if sorted(listed) != list(range(n)):
        raise GraphFormatError(
            f"every vertex of 0..{n - 1} needs to appear on exactly one side"
        )
    return Partition.from_side_a(n, sides["A"])


def read_partition(path: Path, n: int) -> Partition:
    return parse_partition(Path(path).read_text(), n)


def format_partition(p: Partition) -> str:
    a = " ".join(map(str, sorted(p.side_a)))
    b = " ".join(map(str, sorted(p.side_b)))
    return f"A: {a}\nB: {b}\n"


def write_partition(p: Partition, path: Path) -> None:
    _write_atomically(path, format_partition(p))


def read_demands(path: Path, n: int) -> DemandFunctions:
    lines = _content_lines(Path(path).read_text())
    if len(lines) != n:
        raise GraphFormatError(f"expected {n} demand lines, found {len(lines)}")
    pairs = [_ints(tokens, where=f"demand line {i + 1}") for i, tokens in enumerate(lines)]
    if any(len(pair) != 2 for pair in pairs):
        raise GraphFormatError("every demand line needs to be `a b`")
    return DemandFunctions(a=tuple(p[0] for p in pairs), b=tuple(p[1] for p in pairs))


def write_trace(records: Iterable[Mapping[str, Any]], path: Path) -> None:
    """Writes one JSON object per line."""
    _write_atomically(
        path, "".join(json.dumps(dict(record)) + "\n" for record in records)
    )
