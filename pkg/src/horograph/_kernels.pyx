# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. ``horograph._pure`` mirrors every function here."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdint cimport uint64_t, int64_t, int32_t
from libcpp.vector cimport vector

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t M2 = 0x94D049BB133111EBULL
cdef double TO_UNIT = 1.0 / 9007199254740992.0
cdef uint64_t TAG_EDGE = 1


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * M1
    z = (z ^ (z >> 27)) * M2
    return z ^ (z >> 31)


cdef inline double edge_uniform(uint64_t seed, uint64_t i, uint64_t j, uint64_t k) nogil:
    cdef uint64_t s = seed
    s = mix64((s ^ TAG_EDGE) + GOLDEN)
    s = mix64((s ^ i) + GOLDEN)
    s = mix64((s ^ j) + GOLDEN)
    s = mix64((s ^ k) + GOLDEN)
    return <double>(s >> 11) * TO_UNIT


def edge_uniforms(uint64_t seed, const int64_t[::1] u, const int64_t[::1] v, const int64_t[::1] band):
    cdef Py_ssize_t t, m = u.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for t in range(m):
            o[t] = edge_uniform(seed, <uint64_t>u[t], <uint64_t>v[t], <uint64_t>band[t])
    return out


def sample_band_edges(const double[::1] xs, const double[::1] ys,
                      const int64_t[::1] order, const int64_t[::1] cell_start,
                      const int64_t[::1] cell_of, Py_ssize_t ncx, Py_ssize_t ncy,
                      const double[::1] radii, const double[::1] probs, uint64_t seed):
    """Keyed Bernoulli draw for every pair within ``radii[-1]``.

    Returns ``(u, v, band)`` of accepted pairs, ``u < v``, bands 1-based,
    in unspecified order.
    """
    cdef Py_ssize_t nb = radii.shape[0]
    cdef double rmax = radii[nb - 1]
    cdef vector[int64_t] ou, ov, ob
    cdef Py_ssize_t a, ia, c, cx, cy, dx, dy, nxc, nyc, nc, b, ib, k
    cdef int64_t i, j, lo, hi
    cdef double d, ddx, ddy
    with nogil:
        for a in range(order.shape[0]):
            i = order[a]
            c = cell_of[i]
            cx = c % ncx
            cy = c // ncx
            for dy in range(-1, 2):
                nyc = cy + dy
                if nyc < 0 or nyc >= ncy:
                    continue
                for dx in range(-1, 2):
                    nxc = cx + dx
                    if nxc < 0 or nxc >= ncx:
                        continue
                    nc = nyc * ncx + nxc
                    for b in range(cell_start[nc], cell_start[nc + 1]):
                        j = order[b]
                        if j <= i:
                            continue
                        ddx = xs[i] - xs[j]
                        ddy = ys[i] - ys[j]
                        d = sqrt(ddx * ddx + ddy * ddy)
                        if d > rmax:
                            continue
                        k = 0
                        while radii[k] < d:
                            k += 1
                        if probs[k] <= 0.0:
                            continue
                        if edge_uniform(seed, <uint64_t>i, <uint64_t>j, <uint64_t>(k + 1)) < probs[k]:
                            ou.push_back(i)
                            ov.push_back(j)
                            ob.push_back(k + 1)
    m = ou.size()
    U = np.empty(m, dtype=np.int64)
    V = np.empty(m, dtype=np.int64)
    B = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] Uv = U, Vv = V, Bv = B
    cdef Py_ssize_t t
    for t in range(<Py_ssize_t>m):
        Uv[t] = ou[t]
        Vv[t] = ov[t]
        Bv[t] = ob[t]
    return U, V, B


def annulus_pairs(const double[::1] xs, const double[::1] ys,
                  const int64_t[::1] order, const int64_t[::1] cell_start,
                  const int64_t[::1] cell_of, Py_ssize_t ncx, Py_ssize_t ncy,
                  double r_lo, double r_hi):
    cdef vector[int64_t] ou, ov
    cdef Py_ssize_t a, c, cx, cy, dx, dy, nxc, nyc, nc, b
    cdef int64_t i, j
    cdef double d, ddx, ddy
    with nogil:
        for a in range(order.shape[0]):
            i = order[a]
            c = cell_of[i]
            cx = c % ncx
            cy = c // ncx
            for dy in range(-1, 2):
                nyc = cy + dy
                if nyc < 0 or nyc >= ncy:
                    continue
                for dx in range(-1, 2):
                    nxc = cx + dx
                    if nxc < 0 or nxc >= ncx:
                        continue
                    nc = nyc * ncx + nxc
                    for b in range(cell_start[nc], cell_start[nc + 1]):
                        j = order[b]
                        if j <= i:
                            continue
                        ddx = xs[i] - xs[j]
                        ddy = ys[i] - ys[j]
                        d = sqrt(ddx * ddx + ddy * ddy)
                        if d > r_lo and d <= r_hi:
                            ou.push_back(i)
                            ov.push_back(j)
    m = ou.size()
    U = np.empty(m, dtype=np.int64)
    V = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] Uv = U, Vv = V
    cdef Py_ssize_t t
    for t in range(<Py_ssize_t>m):
        Uv[t] = ou[t]
        Vv[t] = ov[t]
    return U, V


def normalized_laplacian_apply(const int64_t[::1] indptr, const int32_t[::1] indices,
                               const double[::1] inv_sqrt_deg, const double[::1] v):
    cdef Py_ssize_t n = v.shape[0], i, p
    cdef double acc
    out = np.empty(n, dtype=np.float64)
    y = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out, yv = y
    with nogil:
        for i in range(n):
            yv[i] = inv_sqrt_deg[i] * v[i]
        for i in range(n):
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                acc = acc + yv[indices[p]]
            o[i] = v[i] - inv_sqrt_deg[i] * acc
    return out


def triangle_counts(const int64_t[::1] indptr, const int32_t[::1] indices):
    """Triangles through each vertex via sorted-list intersection."""
    cdef Py_ssize_t n = indptr.shape[0] - 1, i, p, q, r, qe, re
    cdef int32_t j
    cdef int64_t cnt
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    with nogil:
        for i in range(n):
            cnt = 0
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                if j <= i:
                    continue
                # common neighbours k > j of i and j
                q = p + 1
                qe = indptr[i + 1]
                r = indptr[j]
                re = indptr[j + 1]
                while q < qe and r < re:
                    if indices[q] < indices[r]:
                        q += 1
                    elif indices[q] > indices[r]:
                        r += 1
                    else:
                        if indices[q] > j:
                            o[i] += 1
                            o[j] += 1
                            o[indices[q]] += 1
                        q += 1
                        r += 1
    return out


cdef inline bint lex_less(uint64_t a, uint64_t b) nogil:
    # sorted-tuple lexicographic order on vertex bitmasks
    cdef uint64_t diff = a ^ b, low
    if diff == 0:
        return False
    low = diff & (~diff + 1)
    if a & low:
        return (b & ~((low << 1) - 1)) != 0
    return (a & ~((low << 1) - 1)) == 0


cdef inline int popcount(uint64_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def cut_search(const uint64_t[::1] adj, const int64_t[::1] deg, int mode):
    """Exhaustive subset search by Gray code.

    ``mode`` 0: conductance, subsets containing vertex 0, excluding V.
    ``mode`` 1: expansion, nonempty subsets with 2|A| <= n.
    Returns ``(numerator, denominator, mask)`` of the lexicographically
    smallest minimizer.
    """
    cdef Py_ssize_t n = adj.shape[0]
    cdef int64_t total = 0, vol, bnd, den, best_num = -1, best_den = 1
    cdef uint64_t S, best_mask = 0, g, prev, bit, free_bits
    cdef uint64_t steps, t
    cdef int v, size, shift
    cdef Py_ssize_t i
    for i in range(n):
        total += deg[i]
    if mode == 0:
        shift = 1
        S = 1
        vol = deg[0]
        bnd = deg[0]
        size = 1
        steps = (<uint64_t>1) << (n - 1)
    else:
        shift = 0
        S = 0
        vol = 0
        bnd = 0
        size = 0
        steps = (<uint64_t>1) << n
    with nogil:
        prev = 0
        for t in range(steps):
            if t > 0:
                g = t ^ (t >> 1)
                bit = g ^ prev
                prev = g
                v = 0
                while (bit >> v) != 1:
                    v += 1
                v += shift
                if S & ((<uint64_t>1) << v):
                    S &= ~((<uint64_t>1) << v)
                    bnd -= deg[v] - 2 * popcount(adj[v] & S)
                    vol -= deg[v]
                    size -= 1
                else:
                    bnd += deg[v] - 2 * popcount(adj[v] & S)
                    S |= (<uint64_t>1) << v
                    vol += deg[v]
                    size += 1
            if mode == 0:
                if size == n:
                    continue
                den = vol if vol < total - vol else total - vol
            else:
                if size == 0 or 2 * size > n:
                    continue
                den = size
            if den <= 0:
                continue
            if best_num < 0 or bnd * best_den < best_num * den or (
                    bnd * best_den == best_num * den and lex_less(S, best_mask)):
                best_num = bnd
                best_den = den
                best_mask = S
    return best_num, best_den, best_mask
