"""Reference Tabu search kernel for the placement QAP (numpy).

The compiled ``_tabu`` extension mirrors this module move for move; both
evaluate candidate moves in ``(facility, location)`` order and break ties on
the lowest pair, so they return identical results for identical inputs.

Facilities ``0..n_real-1`` are circuit qubits; the rest are zero-flow fillers
so that a move onto an unused location is an ordinary exchange.
"""

import time

import numpy as np


def qap_cost(flow, dist, perm):
    perm = np.asarray(perm, dtype=np.int64)
    return int((flow * dist[np.ix_(perm, perm)]).sum())


def _swap_deltas(flow_f, dist, perm):
    # cost change of exchanging the locations of facilities r and s, all pairs
    dp = dist[np.ix_(perm, perm)].astype(np.float64)
    a = flow_f @ dp
    diag = np.diagonal(a)
    delta = 2.0 * (a + a.T - diag[:, None] - diag[None, :]) + 4.0 * flow_f * dp
    return np.rint(delta).astype(np.int64)


def tabu_search(flow, dist, perm0, n_real, max_iters, tenure, deadline=0.0, check=False):
    """Run one Tabu search from ``perm0``.

    Returns ``(best_perm, best_cost, history)`` where ``history[i]`` is the
    best cost after iteration ``i + 1``.
    """
    flow = np.ascontiguousarray(flow, dtype=np.int64)
    dist = np.ascontiguousarray(dist, dtype=np.int64)
    flow_f = flow.astype(np.float64)
    perm = np.array(perm0, dtype=np.int64)
    m = perm.shape[0]
    inv = np.empty(m, dtype=np.int64)
    inv[perm] = np.arange(m)

    cost = qap_cost(flow, dist, perm)
    best_cost = cost
    best_perm = perm.copy()
    tabu = np.zeros((m, m), dtype=np.int64)
    history = []

    rows = np.arange(n_real)[:, None]
    big = np.iinfo(np.int64).max
    for it in range(1, max_iters + 1):
        if deadline and time.perf_counter() > deadline:
            break
        delta = _swap_deltas(flow_f, dist, perm)
        # reindex columns from partner facility to its location
        grid = delta[:n_real, inv]
        partner = inv[None, :]
        valid = partner > rows
        forbidden = (tabu[:n_real, :] > it) & (tabu[partner, perm[:n_real, None]] > it)
        aspire = cost + grid < best_cost
        allowed = valid & (~forbidden | aspire)
        if not allowed.any():
            break
        masked = np.where(allowed, grid, big)
        flat = int(np.argmin(masked))
        r, loc = divmod(flat, m)
        s = int(inv[loc])
        pr, ps = int(perm[r]), int(perm[s])
        tabu[r, pr] = it + tenure
        tabu[s, ps] = it + tenure
        perm[r], perm[s] = ps, pr
        inv[ps], inv[pr] = r, s
        cost += int(grid[r, loc])
        if check:
            assert cost == qap_cost(flow, dist, perm), "incremental delta diverged"
        if cost < best_cost:
            best_cost = cost
            best_perm = perm.copy()
        history.append(best_cost)
    return best_perm, best_cost, np.array(history, dtype=np.int64)
