"""Blind search over networks built only from NAND nodes.

Without delay nodes an identity network only ever lines up with its input
at an even delay, and exclusive-or on a changing input is out of reach.

    python demos/delay_nodes_matter.py [graphs]
"""

import sys

import numpy as np

from atypes import serialize
from atypes.harness import claim_search

graphs = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
rng = np.random.default_rng(2)

ident = claim_search("odd_delay_identity", graphs, rng, keep_examples=1)
print(ident.line())
print(f"identity solutions: {ident.even_rate:.2%} of graphs, all at even delays")
if ident.examples:
    print("one of them:")
    print(serialize(ident.examples[0]))

xor = claim_search("xor_without_delays", graphs, rng)
print(xor.line())
