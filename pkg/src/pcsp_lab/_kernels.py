"""Hot loops of the polymorphism checks.

Each kernel has a numba implementation and a pure-numpy one with identical
results.  The numba path is used when numba imports and the environment
variable ``PCSP_LAB_DISABLE_NUMBA`` is not set; ``BACKEND`` records the choice.
"""

import numpy as np

from ._config import numba_disabled

try:
    if numba_disabled():
        raise ImportError("disabled by PCSP_LAB_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

_CHUNK = 1 << 16


def output_weights(k: int) -> np.ndarray:
    """Bit weights turning a k-bit output row into its code (first coordinate MSB)."""
    return (1 << np.arange(k - 1, -1, -1)).astype(np.int64)


# -- sequence check: f applied to every m-tuple of columns ---------------------

def _first_bad_sequence_numpy(table, cols, m, bmask):
    k, r = cols.shape
    total = r ** m
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    radix = r ** np.arange(m - 1, -1, -1, dtype=np.int64)
    ow = output_weights(k)
    for lo in range(0, total, _CHUNK):
        seq = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        digits = (seq[:, None] // radix[None, :]) % r  # (c, m)
        bits = cols[:, digits]  # (k, c, m)
        idx = (bits << shifts).sum(axis=2)  # (k, c)
        out = table[idx].astype(np.int64)
        code = (out * ow[:, None]).sum(axis=0)
        bad = np.flatnonzero(~bmask[code])
        if bad.size:
            return int(seq[bad[0]])
    return -1


# -- block check: 2-block-symmetric table over pairs of row-sum vectors --------

def _first_bad_pair_numpy(g, P1, P2, bmask):
    n1, k = P1.shape
    n2 = P2.shape[0]
    ow = output_weights(k)
    step = max(1, _CHUNK // max(n2, 1))
    for lo in range(0, n1, step):
        u = P1[lo:lo + step]
        out = g[u[:, None, :], P2[None, :, :]].astype(np.int64)  # (c, n2, k)
        code = out @ ow
        bad = np.flatnonzero(~bmask[code].ravel())
        if bad.size:
            return int(lo * n2 + bad[0])
    return -1


def _pair_cells_numpy(P1, P2, width):
    cells = P1[:, None, :] * width + P2[None, :, :]
    return cells.reshape(-1, P1.shape[1])


if HAVE_NUMBA:
    @njit(cache=True)
    def _first_bad_sequence_numba(table, cols, m, bmask):
        k, r = cols.shape
        acc = np.zeros((m + 1, k), dtype=np.int64)
        digit = np.zeros(m, dtype=np.int64)
        level = 0
        seq = 0
        while True:
            # descend, filling levels below with the current digits
            while level < m:
                c = digit[level]
                for p in range(k):
                    acc[level + 1, p] = acc[level, p] * 2 + cols[p, c]
                level += 1
            code = 0
            for p in range(k):
                code = code * 2 + table[acc[m, p]]
            if not bmask[code]:
                return seq
            seq += 1
            # odometer increment
            level = m - 1
            while level >= 0 and digit[level] == r - 1:
                digit[level] = 0
                level -= 1
            if level < 0:
                return -1
            digit[level] += 1

    @njit(cache=True)
    def _first_bad_pair_numba(g, P1, P2, bmask):
        n1, k = P1.shape
        n2 = P2.shape[0]
        for i in range(n1):
            for j in range(n2):
                code = 0
                for p in range(k):
                    code = code * 2 + g[P1[i, p], P2[j, p]]
                if not bmask[code]:
                    return i * n2 + j
        return -1

    @njit(cache=True)
    def _pair_cells_numba(P1, P2, width):
        n1, k = P1.shape
        n2 = P2.shape[0]
        out = np.empty((n1 * n2, k), dtype=np.int64)
        for i in range(n1):
            for j in range(n2):
                for p in range(k):
                    out[i * n2 + j, p] = P1[i, p] * width + P2[j, p]
        return out


def first_bad_sequence(table, cols, m, bmask, backend=None):
    """Index (mixed radix over columns) of the first m-column sequence whose
    row-wise image under ``table`` is outside ``bmask``; -1 if none."""
    table = np.ascontiguousarray(table, dtype=np.uint8)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    bmask = np.ascontiguousarray(bmask, dtype=np.bool_)
    if cols.shape[1] == 0:
        return -1
    if (backend or BACKEND) == "numba":
        return int(_first_bad_sequence_numba(table, cols, int(m), bmask))
    return _first_bad_sequence_numpy(table, cols, int(m), bmask)


def first_bad_pair(g, P1, P2, bmask, backend=None):
    g = np.ascontiguousarray(g, dtype=np.uint8)
    P1 = np.ascontiguousarray(P1, dtype=np.int64)
    P2 = np.ascontiguousarray(P2, dtype=np.int64)
    bmask = np.ascontiguousarray(bmask, dtype=np.bool_)
    if len(P1) == 0 or len(P2) == 0:
        return -1
    if (backend or BACKEND) == "numba":
        return int(_first_bad_pair_numba(g, P1, P2, bmask))
    return _first_bad_pair_numpy(g, P1, P2, bmask)


def pair_cells(P1, P2, width, backend=None):
    P1 = np.ascontiguousarray(P1, dtype=np.int64)
    P2 = np.ascontiguousarray(P2, dtype=np.int64)
    if (backend or BACKEND) == "numba":
        return _pair_cells_numba(P1, P2, int(width))
    return _pair_cells_numpy(P1, P2, int(width))


def available_backends():
    return ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
