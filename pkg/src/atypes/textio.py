"""Line-oriented text format for A-types.

::

    ATYPE 1
    NODES 3
    0 INPUT
    1 NAND
    2 NAND
    ARROWS 4
    0 1
    0 1
    1 2
    1 2
    INPUT_ORDER 0
    OUTPUT_ORDER 2
    DELAY 2
"""

from __future__ import annotations

from pathlib import Path

from .graph import AType, ATypeGraph, NodeKind, validate

__all__ = ["ParseError", "serialize", "parse", "load", "dump"]


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def serialize(atype: AType) -> str:
    g = atype.graph
    lines = ["ATYPE 1", f"NODES {g.size}"]
    lines += [f"{i} {k.value}" for i, k in enumerate(g.kinds)]
    lines.append(f"ARROWS {len(g.arrows)}")
    lines += [f"{s} {t}" for s, t in g.arrows]
    lines.append("INPUT_ORDER " + " ".join(map(str, g.input_order)))
    lines.append("OUTPUT_ORDER " + " ".join(map(str, g.output_order)))
    lines.append(f"DELAY {atype.delay}")
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int, what: str) -> int:
    if not tok.isdigit():
        raise ParseError(lineno, f"expected a non-negative decimal {what}, got {tok!r}")
    return int(tok)


def parse(text: str, check: bool = True) -> AType:
    """Parse the text format.

    With ``check=False`` the graph is returned even if it breaks A-type
    invariants (the ``validate`` command needs this); structural errors
    always raise :class:`ParseError`.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    cursor = 0

    def next_line(expect: str) -> tuple[int, list[str]]:
        nonlocal cursor
        if cursor >= len(lines):
            raise ParseError(cursor + 1, f"unexpected end of input, expected {expect}")
        cursor += 1
        return cursor, lines[cursor - 1].split(" ")

    lineno, toks = next_line("header")
    if toks != ["ATYPE", "1"]:
        raise ParseError(lineno, "missing 'ATYPE 1' header")

    lineno, toks = next_line("NODES")
    if len(toks) != 2 or toks[0] != "NODES":
        raise ParseError(lineno, f"expected 'NODES <count>', got {lines[lineno - 1]!r}")
    n_nodes = _int(toks[1], lineno, "node count")
    kinds: list[NodeKind] = []
    node_line: dict[int, int] = {}
    for i in range(n_nodes):
        lineno, toks = next_line("node line")
        if len(toks) != 2:
            raise ParseError(lineno, "expected '<id> <INPUT|NAND|DELAY>'")
        node = _int(toks[0], lineno, "node id")
        if node != i:
            raise ParseError(lineno, f"node ids must be dense and ascending; expected {i}, got {node}")
        try:
            kinds.append(NodeKind(toks[1]))
        except ValueError:
            raise ParseError(lineno, f"unknown node kind {toks[1]!r}") from None
        node_line[node] = lineno

    lineno, toks = next_line("ARROWS")
    if len(toks) != 2 or toks[0] != "ARROWS":
        raise ParseError(lineno, f"expected 'ARROWS <count>', got {lines[lineno - 1]!r}")
    n_arrows = _int(toks[1], lineno, "arrow count")
    arrows: list[tuple[int, int]] = []
    arrow_line: list[int] = []
    for _ in range(n_arrows):
        lineno, toks = next_line("arrow line")
        if len(toks) != 2:
            raise ParseError(lineno, "expected '<src> <dst>'")
        s, t = _int(toks[0], lineno, "source id"), _int(toks[1], lineno, "target id")
        for end in (s, t):
            if end >= n_nodes:
                raise ParseError(lineno, f"arrow references undeclared node {end}")
        arrows.append((s, t))
        arrow_line.append(lineno)

    orders: dict[str, tuple[int, ...]] = {}
    for key in ("INPUT_ORDER", "OUTPUT_ORDER"):
        lineno, toks = next_line(key)
        if toks[0] != key:
            raise ParseError(lineno, f"expected {key}, got {toks[0]!r}")
        ids = tuple(_int(tok, lineno, "node id") for tok in toks[1:])
        for node in ids:
            if node >= n_nodes:
                raise ParseError(lineno, f"{key} references undeclared node {node}")
        orders[key] = ids
        node_line.setdefault(-1 if key == "INPUT_ORDER" else -2, lineno)

    lineno, toks = next_line("DELAY")
    if len(toks) != 2 or toks[0] != "DELAY":
        raise ParseError(lineno, f"expected 'DELAY <moments>', got {lines[lineno - 1]!r}")
    delay = _int(toks[1], lineno, "delay")
    if cursor < len(lines):
        raise ParseError(cursor + 1, f"unexpected trailing content {lines[cursor]!r}")

    graph = ATypeGraph(tuple(kinds), tuple(arrows), orders["INPUT_ORDER"], orders["OUTPUT_ORDER"])
    if check:
        problems = validate(graph)
        if problems:
            first = problems[0]
            if first.arrow is not None:
                where = arrow_line[first.arrow]
            elif first.node is not None:
                where = node_line[first.node]
            else:
                where = node_line[-1] if first.code == "no-inputs" else node_line[-2]
            raise ParseError(where, f"invariant violated: {first}")
    return AType(graph, delay)


def load(path: str | Path, check: bool = True) -> AType:
    return parse(Path(path).read_text(), check=check)


def dump(atype: AType, path: str | Path) -> None:
    Path(path).write_text(serialize(atype))
