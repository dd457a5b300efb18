"""Time the compiled kernels against the numpy / plain-Python paths.

    python benchmarks/bench_kernels.py [--repeat 3]

The compiled side needs numba (CODECLASS_NUMBA unset or 1). Each case also
checks that both paths return the same answer.
"""
import argparse
import time

import numpy as np

from codeclass import _kernels as K
from codeclass._accel import USE_NUMBA, py_func
from codeclass.covrad import parity_check
from codeclass.dfs import BudgetProblem
from codeclass.extend import ExtensionTask
from codeclass.k2 import code_from_multiplicities
from codeclass.linear_code import LinearCode


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def case_codewords(rng):
    G = np.hstack([np.eye(5, dtype=np.int64), rng.integers(0, 5, (5, 16))])
    fast = lambda: K.weight_distribution(K.codeword_table(G, 5))
    slow = lambda: K.weight_distribution_numpy(K.codeword_table_numpy(G, 5))
    return "codewords [21,5] + weights", fast, slow, np.array_equal


def case_extension(rng):
    task = ExtensionTask(code_from_multiplicities(0, (3,) * 6), 14)
    prob = BudgetProblem.build(task.redundancy, 5, 13)
    prefix = np.zeros(0, dtype=np.int64)
    args = (5, prob.same_class, prefix, K.MODE_COUNT, True)
    H, S = prob.masks()
    fast = lambda: K.budget_dfs(H, S, *args)[1]
    slow = lambda: K.budget_dfs_numpy(prob.hits, prob.budget, *args)[1]
    return "budget DFS [18,2,15] -> d=14, whole tree", fast, slow, lambda a, b: a == b


def case_covrad(rng):
    G = np.hstack([np.eye(4, dtype=np.int64), rng.integers(0, 5, (4, 6))])
    H = parity_check(LinearCode(G, 5))
    fast = lambda: K.coset_leader_sweep(H, 5)
    slow = lambda: py_func(K.coset_leader_sweep)(H, 5)
    return "coset-leader sweep [10,4] (5^6 syndromes)", fast, slow, lambda a, b: a == b


CASES = [case_codewords, case_extension, case_covrad]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    if not USE_NUMBA:
        print("numba disabled: both columns run the fallback path")
    rng = np.random.default_rng(args.seed)
    print(f"{'case':<44}{'numba s':>10}{'fallback s':>12}{'speedup':>9}")
    for make in CASES:
        name, fast, slow, same = make(rng)
        fast()  # compile outside the timing
        tf, a = best_of(fast, args.repeat)
        ts, b = best_of(slow, args.repeat)
        if not same(a, b):
            raise SystemExit(f"{name}: paths disagree ({a!r} vs {b!r})")
        print(f"{name:<44}{tf:>10.4f}{ts:>12.4f}{ts / tf:>8.1f}x")


if __name__ == "__main__":
    main()
