"""Pure-Python integer kernels.

Matrices are lists of row lists holding Python ints. Every function here has
a twin in ``_core.pyx`` with the same signature and the same results; the
compiled one is preferred when it imports.
"""


def matmul(a, b):
    n = len(b)
    cols = len(b[0]) if n else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(n):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    acc[j] += x * bk[j]
        out.append(acc)
    return out


def det_int(a):
    """Bareiss fraction-free elimination; ``a`` is not modified."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
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


def minors(a, rows, cols):
    """All minors ``det a[S, T]`` for S in ``rows``, T in ``cols`` (index tuples)."""
    out = []
    for s in rows:
        line = []
        for t in cols:
            line.append(det_int([[a[i][j] for j in t] for i in s]))
        out.append(line)
    return out


def _pick_pivot(d, t, m, n):
    best = None
    bi = bj = -1
    for i in range(t, m):
        row = d[i]
        for j in range(t, n):
            x = row[j]
            if x:
                ax = -x if x < 0 else x
                if best is None or ax < best:
                    best, bi, bj = ax, i, j
    return bi, bj


def snf(a):
    """Smith normal form: returns (U, D, V) with U·a·V = D.

    Pivot: smallest nonzero absolute value in the active block, ties broken
    by lowest (row, col).
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(r) for r in a]
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
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    q = x // p
                    di, dt = d[i], d[t]
                    ui, ut = u[i], u[t]
                    for j in range(t, n):
                        di[j] -= q * dt[j]
                    for j in range(m):
                        ui[j] -= q * ut[j]
                    if di[t]:
                        clean = False
            dt = d[t]
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
            # pull the offending row into the pivot row and reduce again
            di, dt = d[bad], d[t]
            for j in range(t, n):
                dt[j] += di[j]
            ui, ut = u[bad], u[t]
            for j in range(m):
                ut[j] += ui[j]
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v
