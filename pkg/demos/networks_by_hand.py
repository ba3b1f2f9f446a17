"""Walk through a few hand-built A-types: simulate them, read their text
form and check them against the functions they compute.

    python demos/networks_by_hand.py
"""

import numpy as np

from atypes import figures, run, run_clamped, serialize
from atypes.tasks import carry, identity, multiplexer, verify_exact


def show(title, atype):
    print(f"== {title}: {atype.size} nodes, delay {atype.delay}")


# A two-input NAND fed partly through a delay node: the output at moment t
# depends on inputs from different moments.
stag = figures.staggered_nand()
show("staggered nand", stag)
print("inputs  11;01;10 ->", run(stag, [[1, 1], [0, 1], [1, 0]], 3).ravel().tolist())

# The smallest identity: two NANDs in a row.  Its text form is what the
# CLI reads and writes.
ident = figures.identity(1)
show("1-identity", ident)
print(serialize(ident))

# Clamped inputs settle; the output is read from the delay on.
for x in ([0], [1]):
    print(f"clamped {x} ->", run_clamped(ident, x, 5).ravel().tolist())

# The 3-multiplexer routes data pin x_s to the output, s given in binary.
mux = figures.multiplexer3()
show("3-multiplexer", mux)
for sel, data in (([0, 0], [1, 0, 0]), ([0, 1], [1, 0, 0]), ([1, 0], [0, 0, 1])):
    out = run_clamped(mux, sel + data, 1)[0, 0]
    print(f"  select {sel} data {data} -> {out}")

# The 3-carry emits a sliding window of the last three input bits.
car = figures.carry3()
show("3-carry", car)
bits = np.array([[1], [0], [1], [1], [0], [0]], np.uint8)
print("  input ", bits.ravel().tolist())
for row in run(car, bits, 4):
    print("  window", row.tolist())

rng = np.random.default_rng(0)
for name, atype, concept in (
    ("1-identity", ident, identity(1)),
    ("3-multiplexer", mux, multiplexer(3)),
    ("3-carry", car, carry(3)),
):
    print(f"{name} exact: {verify_exact(atype, concept, rng)}")
