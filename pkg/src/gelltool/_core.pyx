# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels; same contracts as ``_fallback``.

``det_int`` runs Bareiss in 64-bit storage with 128-bit products whenever
the Hadamard bound of the input is below 2**62 (every Bareiss intermediate
is a minor, so nothing can overflow); otherwise it falls back to Python
integers.
"""

cimport cython
from libc.stdlib cimport malloc, free

cdef extern from *:
    ctypedef long long i128 "__int128"

cdef object _LIMIT = 1 << 124
cdef object _I64_MAX = (1 << 63) - 1


cdef bint _fits_fast(list a, Py_ssize_t n):
    cdef Py_ssize_t i, j
    cdef object norm2, prod = 1, x
    for i in range(n):
        norm2 = 0
        for j in range(n):
            x = a[i][j]
            if x > _I64_MAX or -x > _I64_MAX:
                return False
            norm2 += x * x
        prod *= norm2
        if prod >= _LIMIT:
            return False
    return True


@cython.cdivision(True)
cdef long long _det_fast(list a, Py_ssize_t n):
    cdef long long *m = <long long *> malloc(n * n * sizeof(long long))
    cdef Py_ssize_t i, j, k, r
    cdef long long prev = 1, pivot, rik, tmp, result
    cdef int sign = 1
    if m == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            for j in range(n):
                m[i * n + j] = a[i][j]
        for k in range(n - 1):
            if m[k * n + k] == 0:
                r = -1
                for i in range(k + 1, n):
                    if m[i * n + k] != 0:
                        r = i
                        break
                if r < 0:
                    return 0
                for j in range(n):
                    tmp = m[k * n + j]
                    m[k * n + j] = m[r * n + j]
                    m[r * n + j] = tmp
                sign = -sign
            pivot = m[k * n + k]
            for i in range(k + 1, n):
                rik = m[i * n + k]
                for j in range(k + 1, n):
                    m[i * n + j] = <long long> (
                        (<i128> m[i * n + j] * pivot - <i128> rik * m[k * n + j])
                        // prev)
                m[i * n + k] = 0
            prev = pivot
        result = m[n * n - 1]
        return sign * result
    finally:
        free(m)


cdef object _det_obj(list a, Py_ssize_t n):
    cdef list m = [list(r) for r in a]
    cdef list rk, ri
    cdef Py_ssize_t i, j, k
    cdef int sign = 1
    cdef object prev = 1, pivot, rik
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            rik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pivot - rik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_int(a):
    cdef list rows = list(a)
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return 1
    if _fits_fast(rows, n):
        return _det_fast(rows, n)
    return _det_obj(rows, n)


def matmul(a, b):
    cdef list A = list(a), B = list(b), out = [], acc, bk, row
    cdef Py_ssize_t n = len(B), cols, k, j
    cdef object x
    cols = len(B[0]) if n else 0
    for row in A:
        acc = [0] * cols
        for k in range(n):
            x = row[k]
            if x:
                bk = B[k]
                for j in range(cols):
                    acc[j] += x * bk[j]
        out.append(acc)
    return out


def minors(a, rows, cols):
    cdef list out = [], line, sub
    cdef tuple s, t
    for s in rows:
        line = []
        for t in cols:
            sub = [[a[i][j] for j in t] for i in s]
            line.append(det_int(sub))
        out.append(line)
    return out


cdef tuple _pick_pivot(list d, Py_ssize_t t, Py_ssize_t m, Py_ssize_t n):
    cdef object best = None, x, ax
    cdef Py_ssize_t bi = -1, bj = -1, i, j
    cdef list row
    for i in range(t, m):
        row = d[i]
        for j in range(t, n):
            x = row[j]
            if x:
                ax = -x if x < 0 else x
                if best is None or ax < best:
                    best = ax
                    bi = i
                    bj = j
    return bi, bj


def snf(a):
    cdef list d = [list(r) for r in a]
    cdef Py_ssize_t m = len(d), n, t, i, j, pi, pj, bad
    cdef list u, v, di, dt, ui, ut, row
    cdef object p, q, x
    cdef bint clean
    n = len(d[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    for t in range(min(m, n)):
        while True:
            pi, pj = _pick_pivot(d, t, m, n)
            if pi < 0:
                return u, d, v
            if pi != t:
                d[t], d[pi] = d[pi], d[t]
                u[t], u[pi] = u[pi], u[t]
            if pj != t:
                for row in d:
                    row[t], row[pj] = row[pj], row[t]
                for row in v:
                    row[t], row[pj] = row[pj], row[t]
            p = d[t][t]
            clean = True
            dt = d[t]
            ut = u[t]
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    q = x // p
                    di = d[i]
                    ui = u[i]
                    for j in range(t, n):
                        di[j] -= q * dt[j]
                    for j in range(m):
                        ui[j] -= q * ut[j]
                    if di[t]:
                        clean = False
            for j in range(t + 1, n):
                x = dt[j]
                if x:
                    q = x // p
                    for row in d:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                    if dt[j]:
                        clean = False
            if not clean:
                continue
            bad = -1
            for i in range(t + 1, m):
                di = d[i]
                for j in range(t + 1, n):
                    if di[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            di = d[bad]
            for j in range(t, n):
                dt[j] += di[j]
            ui = u[bad]
            for j in range(m):
                ut[j] += ui[j]
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v
