"""Hand-built A-types for standard small functions.

These are the textbook constructions (AND, XOR, identity, multiplexer,
sliding-window carry) plus the two worked examples used to illustrate the
mutation and crossover operators.  Node ids follow a left-to-right reading
of each circuit.
"""

from __future__ import annotations

from .graph import AType, ATypeGraph, build_graph

I, N, D = "INPUT", "NAND", "DELAY"


def and_gate() -> AType:
    """a AND b as NAND(NAND(a,b), NAND(a,b)); delay 2."""
    g = build_graph([I, I, N, N, N], [[], [], [0, 1], [0, 1], [2, 3]], [0, 1], [4])
    return AType(g, 2)


def staggered_nand() -> AType:
    """Two inputs, a delayed copy of the first and a NAND feeding one output; delay 2."""
    g = build_graph([I, I, D, N, N], [[], [], [0], [0, 1], [2, 3]], [0, 1], [4])
    return AType(g, 2)


def xor_gate() -> AType:
    """Columnwise exclusive-or with every input-output path of length 3."""
    g = build_graph(
        [I, I, D, D, N, N, N, N],
        [[], [], [0], [1], [0, 1], [2, 4], [3, 4], [5, 6]],
        [0, 1],
        [7],
    )
    return AType(g, 3)


def identity(n: int = 1) -> AType:
    """n parallel double-NAND chains; delay 2."""
    kinds = [I] * n + [N] * (2 * n)
    sources: list[list[int]] = [[] for _ in range(n)]
    sources += [[i, i] for i in range(n)]
    sources += [[n + i, n + i] for i in range(n)]
    return AType(build_graph(kinds, sources, range(n), range(2 * n, 3 * n)), 2)


def multiplexer2() -> AType:
    """2-multiplexer; inputs (s0, x0, x1); delay 3."""
    g = build_graph(
        [I, I, I, N, D, D, D, N, N, N],
        # 3: not s0   4: x0   5: s0   6: x1   7,8: nands   9: output
        [[], [], [], [0, 0], [1], [0], [2], [3, 4], [5, 6], [7, 8]],
        [0, 1, 2],
        [9],
    )
    return AType(g, 3)


def multiplexer3() -> AType:
    """3-multiplexer; inputs (s1, s0, x0, x1, x2) with s1 most significant; delay 6.

    A 2-multiplexer on (s0, x0, x1) is combined with x2 under s1, the s1 and
    x2 paths padded with delay nodes so every route has length 6.
    """
    s1, s0, x0, x1, x2 = range(5)
    kinds = [I] * 5
    sources: list[list[int]] = [[] for _ in range(5)]

    def add(kind: str, srcs: list[int]) -> int:
        kinds.append(kind)
        sources.append(srcs)
        return len(kinds) - 1

    not_s0 = add(N, [s0, s0])
    d_x0 = add(D, [x0])
    d_s0 = add(D, [s0])
    d_x1 = add(D, [x1])
    h = add(N, [not_s0, d_x0])
    i = add(N, [d_s0, d_x1])
    mux01 = add(N, [h, i])
    c = add(D, [s1])
    d = add(D, [x2])
    e = add(D, [c])
    f = add(D, [d])
    g = add(D, [e])
    hh = add(D, [f])
    not_s1 = add(N, [g, g])
    j = add(D, [mux01])
    k = add(D, [g])
    ll = add(D, [hh])
    m = add(N, [not_s1, j])
    nn = add(N, [k, ll])
    out = add(N, [m, nn])
    return AType(build_graph(kinds, sources, [s1, s0, x0, x1, x2], [out]), 6)


def carry2() -> AType:
    """2-carry; outputs (y0, y1) = (input 3 moments ago, input 2 moments ago); delay 3."""
    g = build_graph([I, N, D, N, N], [[], [0, 0], [1], [2, 2], [1, 1]], [0], [3, 4])
    return AType(g, 3)


def carry3() -> AType:
    """3-carry; delay 4."""
    g = build_graph(
        [I, N, D, D, N, N, N],
        [[], [0, 0], [1], [2], [3, 3], [2, 2], [1, 1]],
        [0],
        [4, 5, 6],
    )
    return AType(g, 4)


def mutation_parent() -> ATypeGraph:
    """The seven-node parent of the mutation walkthrough.

    0, 1 inputs; 2 delay(0); 3 nand(1, 4); 4 nand(2, 5); 5 nand(2, 3);
    6 output nand(4, 5).
    """
    return build_graph(
        [I, I, D, N, N, N, N],
        [[], [], [0], [1, 4], [2, 5], [2, 3], [4, 5]],
        [0, 1],
        [6],
    )


def crossover_mother() -> ATypeGraph:
    """Seven-node mother of the crossover walkthrough (acceptor {3})."""
    return build_graph(
        [I, N, N, N, D, N, N],
        [[], [0, 3], [0, 0], [2, 5], [3], [4, 4], [4, 5]],
        [0],
        [6],
    )


def crossover_father() -> ATypeGraph:
    """Eight-node father of the crossover walkthrough (donor {1..6})."""
    return build_graph(
        [I, N, N, N, N, N, N, N],
        [[], [0, 2], [3, 3], [4, 4], [2, 2], [0, 3], [0, 4], [5, 6]],
        [0],
        [7],
    )


GOLDEN = {
    "and": and_gate,
    "xor": xor_gate,
    "identity1": lambda: identity(1),
    "identity2": lambda: identity(2),
    "multiplexer2": multiplexer2,
    "multiplexer3": multiplexer3,
    "carry2": carry2,
    "carry3": carry3,
}
