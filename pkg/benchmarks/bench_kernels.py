"""Compare the numba kernels against the pure-numpy fallback.

Each benchmark runs in a fresh subprocess so the POLYPRIME_NO_NUMBA
switch is honored at import time.  Usage: python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from polyprime import _kernels, arith

out = {}

base = arith.sieve_primes(10 ** 4).primes
start = time.time()
for _ in range(3):
    _kernels.sieve_segment(10 ** 7, 10 ** 7 + 10 ** 6, base)
out["sieve_segment"] = (time.time() - start) / 3

from polyprime.stephens import _mobius_phi_tables
mobius, phi = _mobius_phi_tables(2000 * 500)
_kernels.y_oracle(8, 1, 1, 100, 100, mobius, phi)  # warm up jit
start = time.time()
_kernels.y_oracle(8, 2, 3, 2000, 500, mobius, phi)
out["y_oracle"] = time.time() - start

primes = arith.sieve_primes(2 * 10 ** 5).primes
primes = primes[primes > 2]
spf = _kernels.smallest_prime_factor(2 * 10 ** 5)
_kernels.subgroup_scan(primes[:100], spf, 2, 1, [3], [1])  # warm up jit
start = time.time()
_kernels.subgroup_scan(primes, spf, 2, 1, [3], [1])
out["subgroup_scan"] = time.time() - start

json.dump(out, sys.stdout)
"""


def run(no_numba: bool) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["POLYPRIME_NO_NUMBA"] = "1"
    else:
        env.pop("POLYPRIME_NO_NUMBA", None)
    proc = subprocess.run([sys.executable, "-c", WORKER], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main() -> None:
    numba_times = run(no_numba=False)
    numpy_times = run(no_numba=True)
    print(f"{'kernel':<16}{'numba (s)':>12}{'fallback (s)':>14}{'speedup':>10}")
    for name in numba_times:
        a, b = numba_times[name], numpy_times[name]
        print(f"{name:<16}{a:>12.4f}{b:>14.4f}{b / a:>10.1f}x")


if __name__ == "__main__":
    main()
