"""Small dense LP kernels for the feasibility subroutine.

The partial-vector LP has very few variables (the strategy coefficients plus
one slack) and many rows, so it is solved through its dual in standard form:
``min b.u  s.t.  A^T u = c, u >= 0``.  The dual tableau has only ``d + 1``
rows, which keeps every pivot cheap.  Primal values are read back from the
reduced costs of the artificial columns.
"""

import numpy as np
from numba import njit

INSIDE = 0
ABOVE = 1
BELOW = 2
FREE = 3

# kernel status codes
FEASIBLE = 0
INFEASIBLE = 1
LOW_SLACK = 2
NUMERIC = 3

_OPTIMAL = 0
_UNBOUNDED = 1
_ITER_LIMIT = 2

PIVOT_TOL = 1e-10
COST_TOL = 1e-10
FEAS_TOL = 1e-7
_BLAND_AFTER = 64


@njit(cache=True)
def _pivot(T, r, c):
    T[r, :] /= T[r, c]
    for i in range(T.shape[0]):
        if i != r:
            f = T[i, c]
            if f != 0.0:
                T[i, :] -= f * T[r, :]


@njit(cache=True)
def _simplex(T, basis, n_enter, max_iter):
    """Minimise over a tableau whose last row holds reduced costs."""
    nrow = T.shape[0] - 1
    rhs = T.shape[1] - 1
    for it in range(max_iter):
        c = -1
        if it < _BLAND_AFTER:
            best = -COST_TOL
            for j in range(n_enter):
                if T[nrow, j] < best:
                    best = T[nrow, j]
                    c = j
        else:
            for j in range(n_enter):
                if T[nrow, j] < -COST_TOL:
                    c = j
                    break
        if c < 0:
            return _OPTIMAL
        r = -1
        best_ratio = np.inf
        for i in range(nrow):
            a = T[i, c]
            if a > PIVOT_TOL:
                ratio = T[i, rhs] / a
                if r < 0 or ratio < best_ratio - 1e-12 or (
                    ratio <= best_ratio + 1e-12 and basis[i] < basis[r]
                ):
                    best_ratio = ratio
                    r = i
        if r < 0:
            return _UNBOUNDED
        _pivot(T, r, c)
        basis[r] = c
    return _ITER_LIMIT


@njit(cache=True)
def solve_max_le(A, b, c):
    """Maximise ``c.z`` subject to ``A z <= b`` with ``z`` free.

    Returns ``(status, z)`` where status is 0 (optimal), 1 (primal
    infeasible), 2 (iteration limit).  The caller guarantees the primal is
    bounded whenever it is feasible.
    """
    R, k = A.shape
    ncol = R + k
    T = np.zeros((k + 1, ncol + 1))
    for i in range(k):
        sgn = 1.0 if c[i] >= 0.0 else -1.0
        for j in range(R):
            T[i, j] = sgn * A[j, i]
        T[i, R + i] = 1.0
        T[i, ncol] = sgn * c[i]
    basis = np.empty(k, np.int64)
    for i in range(k):
        basis[i] = R + i
    # phase 1: minimise the sum of artificials
    for j in range(R):
        s = 0.0
        for i in range(k):
            s += T[i, j]
        T[k, j] = -s
    s = 0.0
    for i in range(k):
        s += T[i, ncol]
    T[k, ncol] = -s
    max_iter = 50 * (ncol + 1)
    st = _simplex(T, basis, R, max_iter)
    z = np.zeros(k)
    if st != _OPTIMAL:
        return 2, z
    if -T[k, ncol] > 1e-9:
        # dual infeasible: primal infeasible or unbounded
        return 1, z
    # drive zero-level artificials out of the basis where possible
    for i in range(k):
        if basis[i] >= R:
            best = PIVOT_TOL
            col = -1
            for j in range(R):
                if abs(T[i, j]) > best:
                    best = abs(T[i, j])
                    col = j
            if col >= 0:
                _pivot(T, i, col)
                basis[i] = col
    # phase 2: minimise b.u
    for j in range(ncol):
        cj = b[j] if j < R else 0.0
        acc = 0.0
        for i in range(k):
            bi = basis[i]
            if bi < R:
                acc += b[bi] * T[i, j]
        T[k, j] = cj - acc
    acc = 0.0
    for i in range(k):
        bi = basis[i]
        if bi < R:
            acc += b[bi] * T[i, ncol]
    T[k, ncol] = -acc
    st = _simplex(T, basis, R, max_iter)
    if st == _UNBOUNDED:
        return 1, z
    if st != _OPTIMAL:
        return 2, z
    for i in range(k):
        sgn = 1.0 if c[i] >= 0.0 else -1.0
        z[i] = -sgn * T[k, R + i]
    return 0, z


@njit(cache=True)
def _build_rows(X, y, t, tags):
    m, d = X.shape
    k = d + 1
    R = 2
    for j in range(m):
        if tags[j] == INSIDE:
            R += 2
        elif tags[j] != FREE:
            R += 1
    A = np.zeros((R, k))
    b = np.zeros(R)
    r = 0
    for j in range(m):
        g = tags[j]
        if g == INSIDE:
            for q in range(d):
                A[r, q] = X[j, q]
                A[r + 1, q] = -X[j, q]
            b[r] = y[j] + t[j]
            b[r + 1] = t[j] - y[j]
            r += 2
        elif g == ABOVE:
            for q in range(d):
                A[r, q] = -X[j, q]
            A[r, d] = 1.0
            b[r] = -y[j] - t[j]
            r += 1
        elif g == BELOW:
            for q in range(d):
                A[r, q] = X[j, q]
            A[r, d] = 1.0
            b[r] = y[j] - t[j]
            r += 1
    # 0 <= s <= 1
    A[r, d] = 1.0
    b[r] = 1.0
    A[r + 1, d] = -1.0
    b[r + 1] = 0.0
    return A, b


@njit(cache=True)
def pvf_kernel(X, y, t, tags, sigma):
    """Maximum-slack LP for one tag vector.

    Returns ``(status, h, slack)``; ``status`` is one of FEASIBLE,
    INFEASIBLE, LOW_SLACK (feasible only with slack below ``sigma``) or
    NUMERIC (solver trouble, including a failed residual re-check).
    """
    d = X.shape[1]
    A, b = _build_rows(X, y, t, tags)
    c = np.zeros(d + 1)
    c[d] = 1.0
    st, z = solve_max_le(A, b, c)
    h = z[:d].copy()
    if st == 1:
        return INFEASIBLE, h, 0.0
    if st != 0:
        return NUMERIC, h, 0.0
    s = z[d]
    for r in range(A.shape[0]):
        lhs = 0.0
        for q in range(d + 1):
            lhs += A[r, q] * z[q]
        if lhs - b[r] > FEAS_TOL * (1.0 + abs(b[r])):
            return NUMERIC, h, s
    if s < sigma:
        return LOW_SLACK, h, s
    return FEASIBLE, h, s


CAP_EXCEEDED = 4


@njit(cache=True)
def enumerate_cells(X, y, t, sigma, cap):
    """Grow the feasible prefix vectors one user at a time.

    Level ``j`` holds every feasible tag vector over the first ``j`` users
    (later users FREE), kept in lexicographic order.  Each candidate
    extension is decided by :func:`pvf_kernel` unless the parent's witness
    settles it:

    * the parent witness already satisfies the new tag (with margin), or
    * the tube of user ``j`` is unreachable from the parent cell and the
      witness lies on one side of it; by convexity the other side is then
      unreachable too.

    Returns ``(status, cells, witnesses, level_sizes)``.
    """
    m, d = X.shape
    sizes = np.zeros(m + 1, np.int64)
    cells = np.full((1, m), FREE, np.int8)
    wits = np.zeros((1, d))
    sizes[0] = 1
    for j in range(m):
        n_par = cells.shape[0]
        new_cells = np.empty((3 * n_par, m), np.int8)
        new_wits = np.empty((3 * n_par, d))
        cnt = 0
        tmp = np.empty(m, np.int8)
        tj = t[j]
        for p in range(n_par):
            w = wits[p]
            r = -y[j]
            for q in range(d):
                r += X[j, q] * w[q]
            if abs(r) <= tj:
                side = INSIDE
            elif r > tj:
                side = ABOVE
            else:
                side = BELOW
            inside_ok = False
            for alpha in range(3):
                ok = False
                reuse = False
                if alpha == INSIDE:
                    reuse = side == INSIDE
                elif alpha == ABOVE:
                    reuse = r >= tj + sigma
                    if not reuse and side == BELOW and not inside_ok:
                        continue
                else:
                    reuse = r <= -tj - sigma
                    if not reuse and side == ABOVE and not inside_ok:
                        continue
                if cnt >= cap:
                    return CAP_EXCEEDED, new_cells[:cnt], new_wits[:cnt], sizes
                if reuse:
                    ok = True
                    new_wits[cnt] = w
                else:
                    for q in range(m):
                        tmp[q] = cells[p, q]
                    tmp[j] = alpha
                    st, h, s = pvf_kernel(X, y, t, tmp, sigma)
                    if st == NUMERIC:
                        return NUMERIC, new_cells[:cnt], new_wits[:cnt], sizes
                    if st == FEASIBLE:
                        ok = True
                        new_wits[cnt] = h
                if ok:
                    for q in range(m):
                        new_cells[cnt, q] = cells[p, q]
                    new_cells[cnt, j] = alpha
                    cnt += 1
                    if alpha == INSIDE:
                        inside_ok = True
        cells = new_cells[:cnt].copy()
        wits = new_wits[:cnt].copy()
        sizes[j + 1] = cnt
    return FEASIBLE, cells, wits, sizes
