"""Compare the compiled and pure-Python partition-refinement kernels.

    python benchmarks/bench_refine.py [--states N] [--repeat R]
"""
import argparse
import random
import sys
from time import perf_counter

from procsplit import _refine_py
from procsplit.equivalence import block_ids
from procsplit.multiactions import MultiAction
from procsplit.reo import compose, parse_topology
from procsplit.semantics import LTS, explore

try:
    from procsplit import _refine_ext
except ImportError:
    _refine_ext = None


def random_lts(n, out_degree, labels, seed):
    rng = random.Random(seed)
    names = [MultiAction.of(f"l{i}") for i in range(labels)]
    transitions = {(s, rng.choice(names), rng.randrange(n))
                   for s in range(n) for _ in range(out_degree)}
    return LTS.build(n, 0, sorted(transitions, key=lambda t: (t[0], str(t[1]), t[2])), [])


def path_lts(n):
    """Linear path ending in a terminating state: refinement needs n rounds."""
    a = MultiAction.of("a")
    return LTS.build(n, 0, [(i, a, i + 1) for i in range(n - 1)], [n - 1])


def chain_lts(length):
    """Connector of ``length`` FIFOs in sequence (2**length states)."""
    nodes = ["a"] + [f"x{i}" for i in range(1, length)] + ["b"]
    text = "".join(f"fifo {s} -> {t}\n" for s, t in zip(nodes, nodes[1:]))
    return explore(compose(parse_topology(text + "boundary a, b\n")))


def timed(kernel, lts, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = perf_counter()
        ids = block_ids(lts, kernel=kernel)
        best = min(best, perf_counter() - start)
    return best, len(set(ids))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if _refine_ext is None:
        print("compiled kernel not built; only the Python kernel is available")

    cases = [
        (f"random n={args.states} deg=3", random_lts(args.states, 3, 2, 1)),
        ("random n=2000 deg=5", random_lts(2000, 5, 3, 2)),
        ("path n=2000", path_lts(2000)),
        ("fifo chain x4", chain_lts(4)),
    ]
    print(f"{'case':28} {'states':>7} {'blocks':>7} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    for name, lts in cases:
        t_py, blocks = timed(_refine_py.refine, lts, args.repeat)
        if _refine_ext is not None:
            t_c, blocks_c = timed(_refine_ext.refine, lts, args.repeat)
            assert blocks_c == blocks
            extra = f"{t_c:9.4f} {t_py / t_c:7.1f}x"
        else:
            extra = f"{'-':>9} {'-':>8}"
        print(f"{name:28} {lts.num_states:7} {blocks:7} {t_py:9.4f} {extra}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
