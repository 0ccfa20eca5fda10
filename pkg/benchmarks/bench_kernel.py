"""Benchmark the pure-Python kernel against the compiled twin.

Runs the two hottest workloads - the exhaustive weak-2-linkage sweep and an
oracle-style escape sweep - through both backends and checks that they
return identical results.

    python3 benchmarks/bench_kernel.py
"""

import itertools
import time

from escape3x3 import _kernel_py
from escape3x3.grid import full_grid
from escape3x3.kernel import desc_for
from escape3x3.model import contract_for
from escape3x3.oracle import oracle_solve
from escape3x3.terminals import LemmaId, enumerate_configs

try:
    from escape3x3 import _kernel_cy
except ImportError:
    _kernel_cy = None


def w2l_sweep(impl):
    desc = desc_for(full_grid())
    n = len(desc.vertices)
    mask = (1 << len(desc.edges)) - 1
    results = []
    for tup in itertools.product(range(n), repeat=4):
        pairs = ((tup[0], tup[1]), (tup[2], tup[3]))
        results.append(impl.find_trail_system(desc.adj, pairs, mask, 0))
    return results


def pack_sweep(impl):
    """Pack three trails for every 6-tuple over a vertex sample."""
    desc = desc_for(full_grid())
    mask = (1 << len(desc.edges)) - 1
    sample = (0, 2, 4, 6, 8)
    results = []
    for tup in itertools.product(sample, repeat=4):
        pairs = ((tup[0], tup[1]), (tup[2], tup[3]), (1, 7))
        results.append(impl.find_trail_system(desc.adj, pairs, mask, 0))
    return results


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


def main():
    backends = [("python", _kernel_py)]
    if _kernel_cy is not None:
        backends.append(("cython", _kernel_cy))
    print(f"{'workload':<18} " + " ".join(f"{name:>10}" for name, _ in backends))
    for label, workload in (("w2l-sweep", w2l_sweep), ("pack-sweep", pack_sweep)):
        outputs = []
        times = []
        for _, impl in backends:
            out, elapsed = timed(workload, impl)
            outputs.append(out)
            times.append(elapsed)
        assert all(o == outputs[0] for o in outputs), "backends disagree"
        row = " ".join(f"{t:>9.3f}s" for t in times)
        print(f"{label:<18} {row}")
    if len(backends) == 2:
        print("backends agree on every witness")

    # end-to-end: full oracle existence sweep over the five-terminal family
    grid = full_grid()
    contract = contract_for(LemmaId.HEAVY5)
    start = time.perf_counter()
    assert all(
        oracle_solve(grid, cfg, contract) is not None
        for cfg in enumerate_configs(LemmaId.HEAVY5)
    )
    print(f"oracle five-terminal sweep (active backend): {time.perf_counter()-start:.3f}s")


if __name__ == "__main__":
    main()
