"""Compiled inner loops for per-source shortest-path centrality.

CSR layout: indptr (n+1), indices/weights (2m, both directions of each
undirected edge). Kernels run sources serially in index order so float
accumulation is bit-stable between runs.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _heap_push(heap_d, heap_v, hn, d, v):
    heap_d[hn] = d
    heap_v[hn] = v
    j = hn
    while j > 0:
        p = (j - 1) >> 1
        if heap_d[p] <= heap_d[j]:
            break
        heap_d[p], heap_d[j] = heap_d[j], heap_d[p]
        heap_v[p], heap_v[j] = heap_v[j], heap_v[p]
        j = p
    return hn + 1


@njit(cache=True)
def _heap_pop(heap_d, heap_v, hn):
    d = heap_d[0]
    v = heap_v[0]
    hn -= 1
    heap_d[0] = heap_d[hn]
    heap_v[0] = heap_v[hn]
    i = 0
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < hn and heap_d[l] < heap_d[m]:
            m = l
        if r < hn and heap_d[r] < heap_d[m]:
            m = r
        if m == i:
            break
        heap_d[i], heap_d[m] = heap_d[m], heap_d[i]
        heap_v[i], heap_v[m] = heap_v[m], heap_v[i]
        i = m
    return d, v, hn


@njit(cache=True)
def betweenness_csr(indptr, indices, weights):
    """Accumulated pair dependencies per node, each unordered pair counted
    once (the symmetric double count is halved at the end)."""
    n = indptr.shape[0] - 1
    nnz = indices.shape[0]
    bc = np.zeros(n, np.float64)
    dist = np.empty(n, np.float64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    settled = np.empty(n, np.uint8)
    order = np.empty(n, np.int64)
    # predecessors of v live in v's adjacency slots: indptr[v] .. +pred_cnt[v]
    pred_flat = np.empty(nnz, np.int64)
    pred_cnt = np.empty(n, np.int64)
    cap = nnz + 1
    heap_d = np.empty(cap, np.float64)
    heap_v = np.empty(cap, np.int64)

    for s in range(n):
        for i in range(n):
            dist[i] = np.inf
            sigma[i] = 0.0
            delta[i] = 0.0
            settled[i] = 0
            pred_cnt[i] = 0
        dist[s] = 0.0
        sigma[s] = 1.0
        hn = _heap_push(heap_d, heap_v, 0, 0.0, s)
        n_order = 0
        while hn > 0:
            d, u, hn = _heap_pop(heap_d, heap_v, hn)
            if settled[u] == 1:
                continue
            settled[u] = 1
            order[n_order] = u
            n_order += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = d + weights[e]
                if nd < dist[v]:
                    dist[v] = nd
                    sigma[v] = sigma[u]
                    pred_flat[indptr[v]] = u
                    pred_cnt[v] = 1
                    hn = _heap_push(heap_d, heap_v, hn, nd, v)
                elif nd == dist[v] and settled[v] == 0:
                    sigma[v] += sigma[u]
                    pred_flat[indptr[v] + pred_cnt[v]] = u
                    pred_cnt[v] += 1
        for i in range(n_order - 1, 0, -1):
            w = order[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            for j in range(pred_cnt[w]):
                u = pred_flat[indptr[w] + j]
                delta[u] += sigma[u] * coeff
            bc[w] += delta[w]
    return bc * 0.5


@njit(cache=True)
def closeness_sums_csr(indptr, indices, weights):
    """Per source: sum of shortest-path distances to reached nodes and the
    reached-node count (including the source itself)."""
    n = indptr.shape[0] - 1
    nnz = indices.shape[0]
    sums = np.zeros(n, np.float64)
    reach = np.zeros(n, np.int64)
    dist = np.empty(n, np.float64)
    settled = np.empty(n, np.uint8)
    cap = nnz + 1
    heap_d = np.empty(cap, np.float64)
    heap_v = np.empty(cap, np.int64)

    for s in range(n):
        for i in range(n):
            dist[i] = np.inf
            settled[i] = 0
        dist[s] = 0.0
        hn = _heap_push(heap_d, heap_v, 0, 0.0, s)
        total = 0.0
        count = 0
        while hn > 0:
            d, u, hn = _heap_pop(heap_d, heap_v, hn)
            if settled[u] == 1:
                continue
            settled[u] = 1
            total += d
            count += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = d + weights[e]
                if nd < dist[v]:
                    dist[v] = nd
                    hn = _heap_push(heap_d, heap_v, hn, nd, v)
        sums[s] = total
        reach[s] = count
    return sums, reach
