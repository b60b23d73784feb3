"""Hot numeric inner loops.

Each kernel has a numba ``@njit`` implementation and a pure-numpy fallback.
The fallback is selected by setting ``POLYPRIME_NO_NUMBA=1`` in the
environment (or automatically when numba is unavailable).  Both paths
compute bit-identical integer results; ``benchmarks/bench_kernels.py``
compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("POLYPRIME_NO_NUMBA", "") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


# ---------------------------------------------------------------------------
# segmented sieve
# ---------------------------------------------------------------------------

def _sieve_segment_numpy(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Primality flags for the half-open range [lo, hi)."""
    flags = np.ones(hi - lo, dtype=np.bool_)
    if lo <= 1:
        flags[: min(2 - lo, hi - lo)] = False
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        flags[start - lo :: p] = False
        if lo <= p < hi:
            flags[p - lo] = True
    return flags


@njit(cache=True)
def _sieve_segment_numba(lo, hi, base_primes):  # pragma: no cover - jit
    n = hi - lo
    flags = np.ones(n, dtype=np.bool_)
    if lo <= 1:
        top = 2 - lo
        if top > n:
            top = n
        for k in range(top):
            flags[k] = False
    for idx in range(base_primes.shape[0]):
        p = base_primes[idx]
        if p * p >= hi:
            break
        start = p * p
        if start < lo:
            start = ((lo + p - 1) // p) * p
        for m in range(start, hi, p):
            flags[m - lo] = False
        if lo <= p < hi:
            flags[p - lo] = True
    return flags


def sieve_segment(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    if USE_NUMBA:
        return _sieve_segment_numba(np.int64(lo), np.int64(hi), base_primes)
    return _sieve_segment_numpy(lo, hi, base_primes)


# ---------------------------------------------------------------------------
# truncated double-sum oracle for Y_{m,n}
# ---------------------------------------------------------------------------

def _y_oracle_numpy(nu, m, n, i_max, j_max, mobius, phi):
    j = np.arange(1, j_max + 1, dtype=np.int64)
    mu_j = mobius[1 : j_max + 1].astype(np.float64)
    keep = mu_j != 0
    j = j[keep]
    mu_j = mu_j[keep]
    i = np.arange(m, i_max + 1, m, dtype=np.int64)
    ij = i[:, None] * j[None, :]
    mask = ij % (m * n) == 0
    terms = np.zeros(ij.shape, dtype=np.float64)
    iw = (1.0 / i.astype(np.float64) ** (nu + 1))[:, None]
    np.divide(
        mu_j[None, :] * iw,
        j[None, :].astype(np.float64) * phi[ij].astype(np.float64),
        out=terms,
        where=mask,
    )
    terms[~mask] = 0.0
    return float(terms.sum())


@njit(cache=True)
def _y_oracle_numba(nu, m, n, i_max, j_max, mobius, phi):  # pragma: no cover
    total = 0.0
    mn = m * n
    for i in range(m, i_max + 1, m):
        iw = 1.0 / float(i) ** (nu + 1)
        for j in range(1, j_max + 1):
            mu = mobius[j]
            if mu == 0:
                continue
            ij = i * j
            if ij % mn != 0:
                continue
            total += mu * iw / (j * float(phi[ij]))
    return total


def y_oracle(nu, m, n, i_max, j_max, mobius, phi):
    """Partial double sum over i <= i_max (m | i), squarefree j <= j_max
    with mn | ij, of mu(j) / (i^(nu+1) * j * phi(i*j))."""
    if USE_NUMBA:
        return _y_oracle_numba(
            np.int64(nu), np.int64(m), np.int64(n),
            np.int64(i_max), np.int64(j_max), mobius, phi,
        )
    return _y_oracle_numpy(nu, m, n, i_max, j_max, mobius, phi)


# ---------------------------------------------------------------------------
# empirical subgroup scan
# ---------------------------------------------------------------------------
#
# For each odd prime p in `primes`, reduce a = a_num/a_den and the b's mod p,
# compute the index [F_p^* : <a mod p>], and test whether every b lies in the
# subgroup generated by a.  Output per prime:
#   index[k] = 0  if p divides some numerator/denominator (bad reduction),
#   index[k] = i  otherwise, where i = (p-1) / ord_p(a);
#   member[k]     True iff all b's are in <a mod p>.

def _scan_python(primes, spf, a_num, a_den, b_nums, b_dens):
    nb = len(b_nums)
    index = np.zeros(len(primes), dtype=np.int64)
    member = np.zeros(len(primes), dtype=np.bool_)
    for k, p in enumerate(primes):
        p = int(p)
        if a_num % p == 0 or a_den % p == 0:
            continue
        bad = False
        bmods = []
        for t in range(nb):
            if b_nums[t] % p == 0 or b_dens[t] % p == 0:
                bad = True
                break
            bmods.append(b_nums[t] % p * pow(int(b_dens[t]), p - 2, p) % p)
        if bad:
            continue
        a = a_num % p * pow(int(a_den), p - 2, p) % p
        order = p - 1
        m = p - 1
        while m > 1:
            q = int(spf[m])
            while order % q == 0 and pow(a, order // q, p) == 1:
                order //= q
            while m % q == 0:
                m //= q
        index[k] = (p - 1) // order
        ok = True
        for b in bmods:
            if pow(b, order, p) != 1:
                ok = False
                break
        member[k] = ok
    return index, member


@njit(cache=True)
def _powmod(base, exp, mod):  # pragma: no cover - jit
    result = 1
    base %= mod
    while exp > 0:
        if exp & 1:
            result = result * base % mod
        base = base * base % mod
        exp >>= 1
    return result


@njit(cache=True)
def _scan_numba(primes, spf, a_num, a_den, b_nums, b_dens):  # pragma: no cover
    npr = primes.shape[0]
    nb = b_nums.shape[0]
    index = np.zeros(npr, dtype=np.int64)
    member = np.zeros(npr, dtype=np.bool_)
    bmods = np.zeros(nb, dtype=np.int64)
    for k in range(npr):
        p = primes[k]
        if a_num % p == 0 or a_den % p == 0:
            continue
        bad = False
        for t in range(nb):
            if b_nums[t] % p == 0 or b_dens[t] % p == 0:
                bad = True
                break
            bmods[t] = b_nums[t] % p * _powmod(b_dens[t], p - 2, p) % p
        if bad:
            continue
        a = a_num % p * _powmod(a_den, p - 2, p) % p
        order = p - 1
        m = p - 1
        while m > 1:
            q = spf[m]
            while order % q == 0 and _powmod(a, order // q, p) == 1:
                order //= q
            while m % q == 0:
                m //= q
        index[k] = (p - 1) // order
        ok = True
        for t in range(nb):
            if _powmod(bmods[t], order, p) != 1:
                ok = False
                break
        member[k] = ok
    return index, member


def subgroup_scan(primes, spf, a_num, a_den, b_nums, b_dens):
    primes = np.asarray(primes, dtype=np.int64)
    b_nums = np.asarray(b_nums, dtype=np.int64)
    b_dens = np.asarray(b_dens, dtype=np.int64)
    if USE_NUMBA:
        return _scan_numba(primes, spf, np.int64(a_num), np.int64(a_den),
                           b_nums, b_dens)
    return _scan_python(primes, spf, int(a_num), int(a_den),
                        [int(b) for b in b_nums], [int(b) for b in b_dens])


def smallest_prime_factor(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n, for 0 <= n <= limit."""
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, int(limit ** 0.5) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            sl[sl == np.arange(p * p, limit + 1, p)] = p
    return spf
