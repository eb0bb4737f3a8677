"""Optimal linear assignment by shortest augmenting paths (O(n^3)).

Solves min-cost assignment on an n_rows x n_cols cost matrix with
n_rows <= n_cols, assigning every row to a distinct column. Two variants:
a numba scalar kernel and a numpy-vectorized fallback with identical
tie-breaking, selected per call through topiccov._accel.use_numba().
"""

from __future__ import annotations

import numpy as np

from . import _accel


def _solve_lsap_py(cost):
    n_rows, n_cols = cost.shape
    u = np.zeros(n_rows)
    v = np.zeros(n_cols)
    col4row = np.full(n_rows, -1, dtype=np.int64)
    row4col = np.full(n_cols, -1, dtype=np.int64)
    shortest = np.empty(n_cols)
    path = np.empty(n_cols, dtype=np.int64)
    visited_row = np.empty(n_rows, dtype=np.bool_)
    visited_col = np.empty(n_cols, dtype=np.bool_)
    remaining = np.empty(n_cols, dtype=np.int64)
    for cur_row in range(n_rows):
        for j in range(n_cols):
            shortest[j] = np.inf
            path[j] = -1
            visited_col[j] = False
            remaining[j] = j
        for i in range(n_rows):
            visited_row[i] = False
        num_remaining = n_cols
        min_val = 0.0
        i = cur_row
        sink = -1
        while sink == -1:
            visited_row[i] = True
            index = -1
            lowest = np.inf
            for it in range(num_remaining):
                j = remaining[it]
                r = min_val + cost[i, j] - u[i] - v[j]
                if r < shortest[j]:
                    path[j] = i
                    shortest[j] = r
                if shortest[j] < lowest or (shortest[j] == lowest and row4col[j] == -1):
                    lowest = shortest[j]
                    index = it
            min_val = lowest
            j = remaining[index]
            if row4col[j] == -1:
                sink = j
            else:
                i = row4col[j]
            visited_col[j] = True
            num_remaining -= 1
            remaining[index] = remaining[num_remaining]
        u[cur_row] += min_val
        for ip in range(n_rows):
            if visited_row[ip] and ip != cur_row:
                u[ip] += min_val - shortest[col4row[ip]]
        for j in range(n_cols):
            if visited_col[j]:
                v[j] -= min_val - shortest[j]
        j = sink
        while True:
            i = path[j]
            row4col[j] = i
            tmp = col4row[i]
            col4row[i] = j
            j = tmp
            if i == cur_row:
                break
    return col4row


def _solve_lsap_numpy(cost):
    n_rows, n_cols = cost.shape
    u = np.zeros(n_rows)
    v = np.zeros(n_cols)
    col4row = np.full(n_rows, -1, dtype=np.int64)
    row4col = np.full(n_cols, -1, dtype=np.int64)
    for cur_row in range(n_rows):
        shortest = np.full(n_cols, np.inf)
        path = np.full(n_cols, -1, dtype=np.int64)
        visited_row = np.zeros(n_rows, dtype=bool)
        visited_col = np.zeros(n_cols, dtype=bool)
        remaining = np.arange(n_cols, dtype=np.int64)
        num_remaining = n_cols
        min_val = 0.0
        i = cur_row
        sink = -1
        while sink == -1:
            visited_row[i] = True
            rem = remaining[:num_remaining]
            r = min_val + cost[i, rem] - u[i] - v[rem]
            better = r < shortest[rem]
            upd = rem[better]
            shortest[upd] = r[better]
            path[upd] = i
            vals = shortest[rem]
            lowest = vals.min()
            # match the scalar scan's tie rule: the last unassigned column
            # attaining the minimum wins, else the first attaining column
            mins = np.nonzero(vals == lowest)[0]
            open_mins = mins[row4col[rem[mins]] == -1]
            index = int(open_mins[-1]) if open_mins.size else int(mins[0])
            min_val = lowest
            j = int(rem[index])
            if row4col[j] == -1:
                sink = j
            else:
                i = int(row4col[j])
            visited_col[j] = True
            num_remaining -= 1
            remaining[index] = remaining[num_remaining]
        u[cur_row] += min_val
        rows = np.nonzero(visited_row)[0]
        rows = rows[rows != cur_row]
        u[rows] += min_val - shortest[col4row[rows]]
        cols = np.nonzero(visited_col)[0]
        v[cols] -= min_val - shortest[cols]
        j = sink
        while True:
            i = int(path[j])
            row4col[j] = i
            col4row[i], j = j, int(col4row[i])
            if i == cur_row:
                break
    return col4row


_solve_lsap_njit = _accel.compile_kernel(_solve_lsap_py)


def solve_lsap(cost: np.ndarray) -> np.ndarray:
    """Column index assigned to each row; cost must have n_rows <= n_cols."""
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.size == 0:
        raise ValueError("cost matrix must be 2-D and non-empty")
    if cost.shape[0] > cost.shape[1]:
        raise ValueError("solve_lsap expects n_rows <= n_cols")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    if _accel.use_numba():
        return _solve_lsap_njit(cost)
    return _solve_lsap_numpy(cost)
