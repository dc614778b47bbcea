import json
from pathlib import Path

import pytest

from inpart.graph.core import DemandFunctions, Graph, GraphFormatError, Partition
from inpart.graph.io import (
    format_edge_list,
    format_partition,
    parse_edge_list,
    parse_partition,
    read_demands,
    read_edge_list,
    read_partition,
    write_edge_list,
    write_partition,
    write_trace,
)


def test_parse_edge_list_skips_comments_and_blank_lines() -> None:
    g = parse_edge_list("# a path\n4 3\n\n0 1\n1 2  # middle\n2 3\n")
    assert g.n == 4
    assert list(g.edges()) == [(0, 1), (1, 2), (2, 3)]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# nothing but a comment\n",
        "3\n0 1\n",
        "3 2\n0 1\n",
        "3 1\n0 1\n1 2\n",
        "3 2\n0 1\n1 0\n",
        "3 1\n1 1\n",
        "3 1\n0 3\n",
        "3 1\n0 x\n",
        "3 1\n0 1 2\n",
    ],
)
def test_malformed_edge_lists_are_rejected(text: str) -> None:
    with pytest.raises(GraphFormatError):
        parse_edge_list(text)


def test_edge_list_files(tmp_path: Path, c9_13: Graph) -> None:
    path = tmp_path / "graphs" / "c9.txt"
    write_edge_list(c9_13, path)
    assert path.read_text().splitlines()[0] == "9 18"
    assert read_edge_list(path) == c9_13
    assert not path.with_suffix(".txt.tmp").exists()


def test_format_edge_list_of_empty_graph() -> None:
    assert format_edge_list(Graph.from_edges(3, [])) == "3 0\n"


def test_partition_text() -> None:
    p = Partition.from_side_a(5, [3, 0])
    assert format_partition(p) == "A: 0 3\nB: 1 2 4\n"
    assert parse_partition("B: 4 2 1\nA: 3 0\n", 5) == p


@pytest.mark.parametrize(
    "text",
    [
        "A: 0 1\n",
        "A: 0 1\nB: 2\n",
        "A: 0 1\nB: 1 2 3\n",
        "A: 0 1\nB: 2 3\nA: 0\n",
        "A: 0 1\nC: 2 3\n",
        "A: 0 1 B: 2 3\n",
        "A: 0 one\nB: 2 3\n",
    ],
)
def test_malformed_partitions_are_rejected(text: str) -> None:
    with pytest.raises(GraphFormatError):
        parse_partition(text, 4)


def test_partition_files(tmp_path: Path) -> None:
    p = Partition.from_side_a(6, [1, 2, 5])
    write_partition(p, tmp_path / "p.txt")
    assert read_partition(tmp_path / "p.txt", 6) == p


def test_read_demands(tmp_path: Path) -> None:
    path = tmp_path / "demands.txt"
    path.write_text("2 2\n3 1\n# last one\n1 1\n")
    assert read_demands(path, 3) == DemandFunctions(a=(2, 3, 1), b=(2, 1, 1))
    with pytest.raises(GraphFormatError):
        read_demands(path, 4)
    path.write_text("2 2\n3\n1 1\n")
    with pytest.raises(GraphFormatError):
        read_demands(path, 3)


def test_write_trace(tmp_path: Path) -> None:
    records = [{"kind": "absorb", "x": 3, "w": 10}, {"kind": "shed_pair", "y": 1}]
    write_trace(records, tmp_path / "trace.jsonl")
    lines = (tmp_path / "trace.jsonl").read_text().splitlines()
    assert [json.loads(line) for line in lines] == records
