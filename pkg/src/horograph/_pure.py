"""numpy/scipy implementations of the compiled kernels (same signatures)."""

import numpy as np
import scipy.sparse as sp

from .rng import TAG_EDGE, keyed_uniform_array

_BLOCK = 1 << 20  # pair-block budget per broadcast


def edge_uniforms(seed, u, v, band):
    return keyed_uniform_array(seed, TAG_EDGE, u, v, band)


def _cell_blocks(xs, ys, order, cell_start, cell_of, ncx, ncy):
    """Yield ``(i_idx, j_idx)`` index blocks covering every pair once per
    neighbouring cell pair (both orders), restricted later to ``i < j``."""
    n_cells = ncx * ncy
    for c in range(n_cells):
        a0, a1 = cell_start[c], cell_start[c + 1]
        if a0 == a1:
            continue
        cx, cy = c % ncx, c // ncx
        nbr = []
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                nx_, ny_ = cx + dx, cy + dy
                if 0 <= nx_ < ncx and 0 <= ny_ < ncy:
                    nc = ny_ * ncx + nx_
                    nbr.append(order[cell_start[nc]:cell_start[nc + 1]])
        js = np.concatenate(nbr)
        if len(js) == 0:
            continue
        rows = max(1, _BLOCK // len(js))
        for s in range(a0, a1, rows):
            yield order[s:min(a1, s + rows)], js


def _block_distances(xs, ys, ii, js):
    I = np.repeat(ii, len(js))
    J = np.tile(js, len(ii))
    keep = J > I
    I, J = I[keep], J[keep]
    dx = xs[I] - xs[J]
    dy = ys[I] - ys[J]
    return I, J, np.sqrt(dx * dx + dy * dy)


def sample_band_edges(xs, ys, order, cell_start, cell_of, ncx, ncy, radii, probs, seed):
    radii = np.asarray(radii)
    probs = np.asarray(probs)
    rmax = radii[-1]
    out_u, out_v, out_b = [], [], []
    for ii, js in _cell_blocks(xs, ys, order, cell_start, cell_of, ncx, ncy):
        I, J, d = _block_distances(xs, ys, ii, js)
        sel = d <= rmax
        I, J, d = I[sel], J[sel], d[sel]
        k = np.searchsorted(radii, d, side="left")
        p = probs[k]
        live = p > 0
        I, J, k, p = I[live], J[live], k[live], p[live]
        u = keyed_uniform_array(seed, TAG_EDGE, I, J, k + 1)
        acc = u < p
        out_u.append(I[acc])
        out_v.append(J[acc])
        out_b.append(k[acc] + 1)
    if not out_u:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy(), e.copy()
    return (np.concatenate(out_u).astype(np.int64),
            np.concatenate(out_v).astype(np.int64),
            np.concatenate(out_b).astype(np.int64))


def annulus_pairs(xs, ys, order, cell_start, cell_of, ncx, ncy, r_lo, r_hi):
    out_u, out_v = [], []
    for ii, js in _cell_blocks(xs, ys, order, cell_start, cell_of, ncx, ncy):
        I, J, d = _block_distances(xs, ys, ii, js)
        sel = (d > r_lo) & (d <= r_hi)
        out_u.append(I[sel])
        out_v.append(J[sel])
    if not out_u:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy()
    return np.concatenate(out_u).astype(np.int64), np.concatenate(out_v).astype(np.int64)


def _csr(indptr, indices):
    n = len(indptr) - 1
    data = np.ones(len(indices))
    return sp.csr_matrix((data, indices, indptr), shape=(n, n))


def normalized_laplacian_apply(indptr, indices, inv_sqrt_deg, v):
    A = _csr(indptr, indices)
    return v - inv_sqrt_deg * (A @ (inv_sqrt_deg * v))


def triangle_counts(indptr, indices):
    A = _csr(indptr, indices).astype(np.int64)
    return np.asarray(A.multiply(A @ A).sum(axis=1)).ravel() // 2


def _lex_key(mask, n):
    return tuple(i for i in range(n) if (mask >> i) & 1)


def cut_search(adj, deg, mode):
    n = len(adj)
    deg = np.asarray(deg, dtype=np.int64)
    total = int(deg.sum())
    # edge list from the bitmask adjacency
    us, vs = [], []
    for i in range(n):
        a = int(adj[i])
        for j in range(i + 1, n):
            if (a >> j) & 1:
                us.append(i)
                vs.append(j)
    us = np.array(us, dtype=np.int64)
    vs = np.array(vs, dtype=np.int64)
    bits = np.arange(n, dtype=np.uint64)
    if mode == 0:
        lo, hi = 0, 1 << (n - 1)
    else:
        lo, hi = 1, 1 << n
    best = None  # (num, den, mask)
    chunk = 1 << 15
    for start in range(lo, hi, chunk):
        t = np.arange(start, min(hi, start + chunk), dtype=np.uint64)
        masks = (t << np.uint64(1)) | np.uint64(1) if mode == 0 else t
        member = ((masks[:, None] >> bits[None, :]) & np.uint64(1)).astype(np.int64)
        size = member.sum(axis=1)
        vol = member @ deg
        bnd = (member[:, us] ^ member[:, vs]).sum(axis=1) if len(us) else np.zeros(len(t), np.int64)
        if mode == 0:
            den = np.minimum(vol, total - vol)
            ok = (size < n) & (den > 0)
        else:
            den = size
            ok = (size > 0) & (2 * size <= n)
        if not ok.any():
            continue
        masks, bnd, den = masks[ok], bnd[ok], den[ok]
        # exact minimum by cross-multiplication
        ratio = bnd / den
        near = np.nonzero(ratio <= ratio.min() * (1 + 1e-9))[0]
        idx = near[0]
        for c in near[1:]:
            if bnd[c] * den[idx] < bnd[idx] * den[c]:
                idx = c
        num0, den0 = int(bnd[idx]), int(den[idx])
        ties = np.nonzero(bnd * den0 == num0 * den)[0]
        cand = min((int(masks[c]) for c in ties), key=lambda m: _lex_key(m, n))
        if best is None or num0 * best[1] < best[0] * den0 or (
                num0 * best[1] == best[0] * den0 and _lex_key(cand, n) < _lex_key(best[2], n)):
            best = (num0, den0, cand)
    return best
