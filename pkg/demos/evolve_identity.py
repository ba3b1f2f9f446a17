"""Evolve a 2-identity with each search algorithm on the same training set,
then print the first solution found.

    python demos/evolve_identity.py [seed]
"""

import sys

from atypes import serialize
from atypes.harness import AlgoPlan, run_trial

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
cap = 200_000

solution = None
for algo in ("genetic", "mutation_only", "headless_chicken", "blind"):
    record, result = run_trial("identity", 2, AlgoPlan(algo, algo), seed, cap, timing=True)
    status = f"solved, {record.solution_size} nodes, delay {record.solution_delay}" if record.solved else "unsolved"
    print(f"{algo:>17}: {record.attempts:>7} attempts, {record.wall_ms} ms, {status}")
    if solution is None and record.solved:
        solution = result.solution

if solution is not None:
    print()
    print(serialize(solution))
