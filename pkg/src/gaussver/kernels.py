"""Hot loops: subset enumeration, witness backtracking, exchange scans.

Each kernel has a numba implementation and a numpy/pure-Python one with the
same results, bit for bit. The backend is chosen per call; the default comes
from the ``GAUSSVER_BACKEND`` environment variable (``numba`` or ``numpy``)
and falls back to numpy when numba cannot be imported.
"""

from __future__ import annotations

import os
from itertools import chain, combinations, islice
from math import gcd

import numpy as np

from .errors import ArithmeticOverflow, TooLarge

try:
    import numba
    from numba import njit, types
    from numba.typed import Dict

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")

# status codes shared with the numba kernels
FOUND, EXHAUSTED, OUT_OF_BUDGET, OVERFLOW = 0, 1, 2, 3

_LIM = 1 << 31


def default_backend() -> str:
    name = os.environ.get("GAUSSVER_BACKEND", "numba").strip().lower()
    if name not in BACKENDS:
        raise ValueError(f"GAUSSVER_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


def _resolve(backend: str | None) -> str:
    b = default_backend() if backend is None else backend
    if b not in BACKENDS:
        raise ValueError(f"unknown backend {b!r}")
    if b == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return b


def product_base(G: np.ndarray, d: int) -> int:
    """Radix for encoding products of d rows of G; raises TooLarge if the
    codes would not fit in int64."""
    top = np.sort(G, axis=0)[::-1][:d].sum(axis=0) if len(G) else np.zeros(G.shape[1], np.int64)
    base = max(int(top.max(initial=0)) + 1, 2)
    if base ** G.shape[1] >= 2**63:
        raise TooLarge(f"products of {d} generators cannot be keyed in 64 bits")
    return base


def decode(keys: np.ndarray, base: int, d: int) -> np.ndarray:
    out = np.empty((len(keys), d), dtype=np.int64)
    k = np.asarray(keys, dtype=np.int64).copy()
    for c in range(d - 1, -1, -1):
        out[:, c] = k % base
        k //= base
    return out


# --------------------------------------------------------------------------
# pure-Python / numpy implementations
# --------------------------------------------------------------------------


def _py_reduce(vec: list[int], basis: list[list[int]], pivots: list[int]) -> tuple[int, list[int]]:
    """Reduce vec against an echelon basis; returns (pivot, reduced) with
    pivot -1 when vec lies in the span."""
    out = list(vec)
    d = len(out)
    for row, p in zip(basis, pivots):
        c = out[p]
        if c:
            a = row[p]
            g = gcd(a, c)
            a //= g
            c //= g
            if abs(a) >= _LIM or abs(c) >= _LIM:
                raise ArithmeticOverflow("echelon multiplier exceeds 31 bits")
            out = [a * x - c * y for x, y in zip(out, row)]
            g = 0
            for x in out:
                g = gcd(g, x)
            if g > 1:
                out = [x // g for x in out]
            if any(abs(x) >= _LIM for x in out):
                raise ArithmeticOverflow("echelon entry exceeds 31 bits")
    for t in range(d):
        if out[t]:
            return t, out
    return -1, out


def _np_batched_det(A: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of square int64 matrices (Bareiss)."""
    A = A.astype(np.int64, copy=True)
    N, d, _ = A.shape
    if N == 0:
        return np.zeros(0, dtype=np.int64)
    if d == 0:
        return np.ones(N, dtype=np.int64)
    # every intermediate is a minor; products pair two minors
    norms2 = (A.astype(np.float64) ** 2).sum(axis=1)
    had2 = np.prod(norms2, axis=1).max()
    if had2 * had2 >= 2.0**62:
        raise ArithmeticOverflow("Hadamard bound too large for 64-bit Bareiss")
    rows = np.arange(N)
    sign = np.ones(N, dtype=np.int64)
    prev = np.ones(N, dtype=np.int64)
    alive = np.ones(N, dtype=bool)
    for k in range(d - 1):
        nz = A[:, k:, k] != 0
        alive &= nz.any(axis=1)
        p = nz.argmax(axis=1) + k
        swap = p != k
        if swap.any():
            rk = A[rows, k].copy()
            A[rows, k] = A[rows, p]
            A[rows, p] = rk
            sign[swap] = -sign[swap]
        akk = np.where(alive, A[:, k, k], 1)
        sub = akk[:, None, None] * A[:, k + 1:, k + 1:] - A[:, k + 1:, k:k + 1] * A[:, k:k + 1, k + 1:]
        A[:, k + 1:, k + 1:] = sub // prev[:, None, None]
        prev = akk
    return np.where(alive, sign * A[:, d - 1, d - 1], 0)


def _np_enumerate_unit(G: np.ndarray, d: int, first: int, base: int, chunk: int = 1 << 17):
    n = G.shape[0]
    weights = base ** np.arange(d - 1, -1, -1, dtype=np.int64)
    seen: dict[int, np.ndarray] = {}
    order: list[int] = []
    nonsingular = 0
    visited = 0
    it = (
        (first,) + rest
        for rest in combinations(range(first + 1, n), d - 1)
    )
    while True:
        block = np.fromiter(chain.from_iterable(islice(it, chunk)), dtype=np.int64)
        if not block.size:
            break
        idx = block.reshape(-1, d)
        visited += len(idx)
        mats = G[idx]  # (N, d_subset, d_vars)
        det = _np_batched_det(mats)
        ok = det != 0
        nonsingular += int(ok.sum())
        if not ok.any():
            continue
        sel = idx[ok]
        keys = mats[ok].sum(axis=1) @ weights
        uk, pos = np.unique(keys, return_index=True)
        # restore lex (first-seen) order within the chunk
        for j in np.argsort(pos, kind="stable").tolist():
            k = int(uk[j])
            if k not in seen:
                seen[k] = sel[pos[j]].copy()
                order.append(k)
    keys = np.array(order, dtype=np.int64)
    subs = np.array([seen[k] for k in order], dtype=np.int64).reshape(-1, d)
    return keys, subs, nonsingular, visited


def _np_witness_search(G: np.ndarray, budget: np.ndarray, node_limit: int):
    # mirrors _nb_witness_search step for step, so node counts agree
    n, d = G.shape
    rows = G.tolist()
    fail = np.full(d, -1, np.int64)
    nxt = [0] * d
    rem = [[int(b) for b in budget]] + [None] * d
    basis: list[list[int]] = []
    pivots: list[int] = []
    nodes = 0
    k = 0
    while True:
        i = nxt[k]
        if i > n - (d - k):
            if k == 0:
                return EXHAUSTED, fail, nodes
            k -= 1
            basis.pop()
            pivots.pop()
            continue
        nxt[k] = i + 1
        left = d - k - 1
        nb = [a - b for a, b in zip(rem[k], rows[i])]
        if min(nb) < 0 or max(nb) > left:
            continue
        if left:
            tail = G[i + 1:]
            nbv = np.array(nb)
            fits = tail[(tail <= nbv).all(axis=1)]
            if (fits.sum(axis=0) < nbv).any():
                continue
        piv, red = _py_reduce(rows[i], basis, pivots)
        if piv < 0:
            continue
        nodes += 1
        if nodes > node_limit:
            return OUT_OF_BUDGET, fail, nodes - 1
        if left == 0:
            out = np.array([nxt[t] - 1 for t in range(k)] + [i], dtype=np.int64)
            return FOUND, out, nodes
        basis.append(red)
        pivots.append(piv)
        rem[k + 1] = nb
        k += 1
        nxt[k] = i + 1


def _bitset(keys: np.ndarray, base: int, d: int) -> np.ndarray:
    """Packed membership bitmap over all codes, or an empty array when the
    code space exceeds 2**30 bits (lookups then fall back to binary search)."""
    space = base ** d
    if space > 2**30:
        return np.zeros(0, dtype=np.uint8)
    packed = np.zeros((space + 7) >> 3, dtype=np.uint8)
    np.bitwise_or.at(packed, keys >> 3, (1 << (keys & 7)).astype(np.uint8))
    return packed


def _np_jmask(arr: np.ndarray, keys: np.ndarray, base: int, bitset: np.ndarray) -> np.ndarray:
    n, d = arr.shape
    w = base ** np.arange(d - 1, -1, -1, dtype=np.int64)
    asc = keys[::-1]
    masks = np.zeros((n, d), dtype=np.int64)
    for i in range(d):
        has_i = arr[:, i] > 0
        for j in range(d):
            if j == i:
                continue
            ok = has_i & (arr[:, j] + 1 < base)
            nk = keys - w[i] + w[j]
            if bitset.size:
                safe = np.where(ok, nk, 0)
                hit = ok & (((bitset[safe >> 3] >> (safe & 7)) & 1) == 1)
            else:
                pos = np.minimum(np.searchsorted(asc, nk), n - 1)
                hit = ok & (asc[pos] == nk)
            masks[hit, i] |= np.int64(1) << j
    return masks


def _np_first_violation(arr: np.ndarray, masks: np.ndarray, v_order: np.ndarray):
    n, d = arr.shape
    bits = np.int64(1) << np.arange(d, dtype=np.int64)
    for pos, v in enumerate(v_order.tolist()):
        vv = arr[v]
        gain = ((arr < vv) * bits).sum(axis=1)
        viol = (arr > vv) & ((masks & gain[:, None]) == 0)
        hit = viol.any(axis=1)
        if hit.any():
            u = int(hit.argmax())
            return pos, u, int(viol[u].argmax())
    return -1, -1, -1


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _nb_gcd(a, b):
        a = abs(a)
        b = abs(b)
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True, nogil=True)
    def _nb_reduce(vec, basis, pivots, k, out):
        """Returns pivot of the reduced vector in ``out``, -1 if dependent,
        -2 on overflow."""
        d = vec.shape[0]
        for t in range(d):
            out[t] = vec[t]
        for j in range(k):
            p = pivots[j]
            c = out[p]
            if c != 0:
                a = basis[j, p]
                g = _nb_gcd(a, c)
                a //= g
                c //= g
                if abs(a) >= _LIM or abs(c) >= _LIM:
                    return -2
                g = 0
                for t in range(d):
                    out[t] = a * out[t] - c * basis[j, t]
                    g = _nb_gcd(g, out[t])
                if g > 1:
                    for t in range(d):
                        out[t] //= g
                for t in range(d):
                    if abs(out[t]) >= _LIM:
                        return -2
        for t in range(d):
            if out[t] != 0:
                return t
        return -1

    @njit(cache=True, nogil=True)
    def _nb_enumerate_unit(G, d, first, base):
        n, nv = G.shape
        idx = np.zeros(d, np.int64)
        basis = np.zeros((d, nv), np.int64)
        pivots = np.zeros(d, np.int64)
        psum = np.zeros((d + 1, nv), np.int64)
        tmp = np.zeros(nv, np.int64)
        w = np.ones(nv, np.int64)
        for c in range(nv - 2, -1, -1):
            w[c] = w[c + 1] * base
        seen = Dict.empty(key_type=types.int64, value_type=types.int64)
        cap = 64
        keys = np.zeros(cap, np.int64)
        subs = np.zeros((cap, d), np.int64)
        nkeys = 0
        nonsingular = 0
        visited = 0
        k = 0
        idx[0] = first
        while True:
            i = idx[k]
            if (k == 0 and i > first) or i > n - (d - k):
                if k == 0:
                    break
                k -= 1
                idx[k] += 1
                continue
            visited += 1
            piv = _nb_reduce(G[i], basis, pivots, k, tmp)
            if piv == -2:
                return keys[:0], subs[:0], -1, visited
            if piv < 0:
                idx[k] += 1
                continue
            for t in range(nv):
                basis[k, t] = tmp[t]
                psum[k + 1, t] = psum[k, t] + G[i, t]
            pivots[k] = piv
            if k == d - 1:
                nonsingular += 1
                key = 0
                for t in range(nv):
                    key += psum[d, t] * w[t]
                if key not in seen:
                    if nkeys == cap:
                        cap *= 2
                        nk = np.zeros(cap, np.int64)
                        ns = np.zeros((cap, d), np.int64)
                        nk[:nkeys] = keys[:nkeys]
                        ns[:nkeys] = subs[:nkeys]
                        keys = nk
                        subs = ns
                    seen[key] = nkeys
                    keys[nkeys] = key
                    for t in range(d):
                        subs[nkeys, t] = idx[t]
                    nkeys += 1
                idx[k] += 1
                continue
            k += 1
            idx[k] = i + 1
        return keys[:nkeys].copy(), subs[:nkeys].copy(), nonsingular, visited

    @njit(cache=True, nogil=True)
    def _nb_witness_search(G, budget, node_limit):
        n, d = G.shape
        idx = np.zeros(d, np.int64)
        basis = np.zeros((d, d), np.int64)
        pivots = np.zeros(d, np.int64)
        rem = np.zeros((d + 1, d), np.int64)
        nb = np.zeros(d, np.int64)
        tmp = np.zeros(d, np.int64)
        cnt = np.zeros(d, np.int64)
        fail = np.full(d, -1, np.int64)
        for t in range(d):
            rem[0, t] = budget[t]
        nodes = 0
        k = 0
        idx[0] = 0
        while True:
            i = idx[k]
            if i > n - (d - k):
                if k == 0:
                    return EXHAUSTED, fail, nodes
                k -= 1
                continue
            idx[k] = i + 1
            left = d - k - 1
            ok = True
            for t in range(d):
                nb[t] = rem[k, t] - G[i, t]
                if nb[t] < 0 or nb[t] > left:
                    ok = False
                    break
            if not ok:
                continue
            if left > 0:
                for t in range(d):
                    cnt[t] = 0
                for j in range(i + 1, n):
                    fits = True
                    for t in range(d):
                        if G[j, t] > nb[t]:
                            fits = False
                            break
                    if fits:
                        for t in range(d):
                            cnt[t] += G[j, t]
                for t in range(d):
                    if cnt[t] < nb[t]:
                        ok = False
                        break
                if not ok:
                    continue
            piv = _nb_reduce(G[i], basis, pivots, k, tmp)
            if piv == -2:
                return OVERFLOW, fail, nodes
            if piv < 0:
                continue
            nodes += 1
            if nodes > node_limit:
                return OUT_OF_BUDGET, fail, nodes - 1
            # idx[k] already points past i; remember i itself
            if left == 0:
                out = np.zeros(d, np.int64)
                for t in range(k):
                    out[t] = idx[t] - 1
                out[k] = i
                return FOUND, out, nodes
            for t in range(d):
                basis[k, t] = tmp[t]
                rem[k + 1, t] = nb[t]
            pivots[k] = piv
            k += 1
            idx[k] = i + 1

    @njit(cache=True, nogil=True)
    def _nb_find_desc(keys, k):
        lo = 0
        hi = keys.shape[0]
        while lo < hi:
            mid = (lo + hi) // 2
            if keys[mid] > k:
                lo = mid + 1
            else:
                hi = mid
        return lo < keys.shape[0] and keys[lo] == k

    @njit(cache=True, nogil=True)
    def _nb_jmask(arr, keys, base, bitset):
        n, d = arr.shape
        w = np.ones(d, np.int64)
        for c in range(d - 2, -1, -1):
            w[c] = w[c + 1] * base
        dense = bitset.shape[0] > 0
        masks = np.zeros((n, d), np.int64)
        for u in range(n):
            for i in range(d):
                if arr[u, i] == 0:
                    continue
                m = 0
                for j in range(d):
                    if j != i and arr[u, j] + 1 < base:
                        k = keys[u] - w[i] + w[j]
                        if dense:
                            hit = (bitset[k >> 3] >> (k & 7)) & 1
                        else:
                            hit = _nb_find_desc(keys, k)
                        if hit:
                            m |= 1 << j
                masks[u, i] = m
        return masks

    @njit(cache=True, nogil=True)
    def _nb_first_violation(arr, masks, v_order):
        n, d = arr.shape
        for pos in range(v_order.shape[0]):
            v = v_order[pos]
            for u in range(n):
                gain = 0
                for j in range(d):
                    if arr[u, j] < arr[v, j]:
                        gain |= 1 << j
                for i in range(d):
                    if arr[u, i] > arr[v, i] and (masks[u, i] & gain) == 0:
                        return pos, u, i
        return -1, -1, -1


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------


def enumerate_unit(G: np.ndarray, d: int, first: int, base: int, backend: str | None = None):
    """Nonsingular d-subsets of the rows of ``G`` whose smallest index is
    ``first``, visited in lexicographic order.

    Returns ``(keys, subsets, n_nonsingular, n_visited)``: the distinct
    product codes in first-seen order and, for each, the first subset
    producing it.
    """
    G = np.ascontiguousarray(G, dtype=np.int64)
    if _resolve(backend) == "numba":
        keys, subs, nonsing, visited = _nb_enumerate_unit(G, d, first, base)
        if nonsing < 0:
            raise ArithmeticOverflow("echelon entries exceeded 31 bits during enumeration")
        return keys, subs, int(nonsing), int(visited)
    return _np_enumerate_unit(G, d, first, base)


def witness_search_kernel(G: np.ndarray, budget: np.ndarray, node_limit: int, backend: str | None = None):
    """Backtracking for d distinct rows of ``G`` (d = number of columns) that
    sum to ``budget`` and are linearly independent.

    Returns ``(status, row_indices, nodes)``.
    """
    G = np.ascontiguousarray(G, dtype=np.int64)
    budget = np.ascontiguousarray(budget, dtype=np.int64)
    if _resolve(backend) == "numba":
        status, rows, nodes = _nb_witness_search(G, budget, node_limit)
    else:
        status, rows, nodes = _np_witness_search(G, budget, node_limit)
    if status == OVERFLOW:
        raise ArithmeticOverflow("echelon entries exceeded 31 bits during witness search")
    return int(status), rows, int(nodes)


def exchange_masks(arr: np.ndarray, keys: np.ndarray, base: int, backend: str | None = None) -> np.ndarray:
    """Bit j of ``masks[u, i]`` is set when ``x_j * u / x_i`` is in the set."""
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    keys = np.ascontiguousarray(keys, dtype=np.int64)
    if arr.shape[1] > 62:
        raise TooLarge("exchange masks support at most 62 variables")
    bitset = _bitset(keys, base, arr.shape[1])
    if _resolve(backend) == "numba":
        return _nb_jmask(arr, keys, base, bitset)
    return _np_jmask(arr, keys, base, bitset)


def first_violation(arr: np.ndarray, masks: np.ndarray, v_order: np.ndarray, backend: str | None = None):
    """First ``(position in v_order, u, i)`` violating the exchange axiom,
    scanning v in the given order, then u, then i; ``(-1, -1, -1)`` if none."""
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    v_order = np.ascontiguousarray(v_order, dtype=np.int64)
    if _resolve(backend) == "numba":
        pos, u, i = _nb_first_violation(arr, masks, v_order)
    else:
        pos, u, i = _np_first_violation(arr, masks, v_order)
    return int(pos), int(u), int(i)


def warmup(backend: str | None = None) -> None:
    """Trigger JIT compilation on tiny inputs so later timings exclude it."""
    if _resolve(backend) != "numba":
        return
    G = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1]], dtype=np.int64)
    enumerate_unit(G, 3, 0, 4, "numba")
    witness_search_kernel(G, np.array([2, 2, 2]), 10, "numba")
    keys = np.array([5, 3, 1], dtype=np.int64)
    m = exchange_masks(G, keys, 2, "numba")
    first_violation(G, m, np.arange(3), "numba")


__all__ = [
    "BACKENDS",
    "HAVE_NUMBA",
    "default_backend",
    "product_base",
    "decode",
    "enumerate_unit",
    "witness_search_kernel",
    "exchange_masks",
    "first_violation",
    "warmup",
]
