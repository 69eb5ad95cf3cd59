"""Hot numeric kernels: numba-jitted loops with pure-numpy fallbacks.

Two code paths exist for every kernel.  The jitted path is the default; the
vectorized numpy path is selected by setting the environment variable
``COOPBC_NO_NUMBA`` to a truthy value (or automatically when numba is not
installed).  Both paths accumulate floating sums symbol-by-symbol in the
same order, so decode decisions (argmin/argmax with first-index ties) are
bit-identical across paths.

Kernels:
  * corner_scan      - per-joint mutual-information triples for the grid oracle
  * decode_map_int   - integer-penalty nearest codeword (erasure/flip channels)
  * decode_map_float - log-score nearest codeword over per-trial candidate sets
  * decode_sq        - squared-distance nearest codeword (Gaussian channels)
  * decode_sq_restricted
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("COOPBC_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by COOPBC_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

USING_NUMBA = HAVE_NUMBA and not _DISABLED


# ---------------------------------------------------------------------------
# oracle corner scan
# ---------------------------------------------------------------------------

def corner_scan_numpy(p_u, t_combos, trans1, trans2):
    """Mutual-information triples for every conditional-row combination.

    Inputs: p_u is a fixed cloud law of length m; t_combos has shape (J, m)
    with t_combos[j, u] = P(X=0 | U=u) for binary X; trans1/trans2 are the
    (2, n_y) channel matrices.  Returns three length-J arrays in nats:
    I(X;Y1|U), I(U;Y2), I(X;Y1).
    """
    t = np.asarray(t_combos, dtype=np.float64)
    p_u = np.asarray(p_u, dtype=np.float64)

    def xlogx(a):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(a > 0.0, a * np.log(a), 0.0)

    h_rows1 = -xlogx(trans1).sum(axis=1)  # per-input conditional output entropies
    h_rows2 = -xlogx(trans2).sum(axis=1)

    # channel 1, conditioned on U
    py1_u = t[:, :, None] * trans1[0] + (1.0 - t)[:, :, None] * trans1[1]  # (J, m, y1)
    h_y1_u = -xlogx(py1_u).sum(axis=2)
    h_y1_xu = t * h_rows1[0] + (1.0 - t) * h_rows1[1]
    i_x_y1_u = (h_y1_u - h_y1_xu) @ p_u

    # channel 1, marginal input
    px0 = t @ p_u
    py1 = px0[:, None] * trans1[0] + (1.0 - px0)[:, None] * trans1[1]
    i_x_y1 = -xlogx(py1).sum(axis=1) - (px0 * h_rows1[0] + (1.0 - px0) * h_rows1[1])

    # channel 2, from U
    py2_u = t[:, :, None] * trans2[0] + (1.0 - t)[:, :, None] * trans2[1]  # (J, m, y2)
    h_y2_u = (-xlogx(py2_u).sum(axis=2)) @ p_u
    py2 = np.einsum("jmy,m->jy", py2_u, p_u)
    i_u_y2 = -xlogx(py2).sum(axis=1) - h_y2_u

    clip = lambda a: np.maximum(a, 0.0)
    return clip(i_x_y1_u), clip(i_u_y2), clip(i_x_y1)


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _corner_scan_nb(p_u, t_combos, trans1, trans2):
        n_j, m = t_combos.shape
        n_y1 = trans1.shape[1]
        n_y2 = trans2.shape[1]
        h_rows1 = np.zeros(2)
        h_rows2 = np.zeros(2)
        for x in range(2):
            for y in range(n_y1):
                v = trans1[x, y]
                if v > 0.0:
                    h_rows1[x] -= v * np.log(v)
            for y in range(n_y2):
                v = trans2[x, y]
                if v > 0.0:
                    h_rows2[x] -= v * np.log(v)
        out_a = np.empty(n_j)
        out_b = np.empty(n_j)
        out_c = np.empty(n_j)
        py2 = np.empty(n_y2)
        for j in range(n_j):
            i_x_y1_u = 0.0
            h_y2_u = 0.0
            px0 = 0.0
            for y in range(n_y2):
                py2[y] = 0.0
            for u in range(m):
                t = t_combos[j, u]
                w = p_u[u]
                px0 += w * t
                if w == 0.0:
                    continue
                h_y1_u = 0.0
                for y in range(n_y1):
                    v = t * trans1[0, y] + (1.0 - t) * trans1[1, y]
                    if v > 0.0:
                        h_y1_u -= v * np.log(v)
                i_x_y1_u += w * (h_y1_u - (t * h_rows1[0] + (1.0 - t) * h_rows1[1]))
                for y in range(n_y2):
                    v = t * trans2[0, y] + (1.0 - t) * trans2[1, y]
                    py2[y] += w * v
                    if v > 0.0:
                        h_y2_u -= w * v * np.log(v)
            h_y2 = 0.0
            for y in range(n_y2):
                if py2[y] > 0.0:
                    h_y2 -= py2[y] * np.log(py2[y])
            h_y1 = 0.0
            for y in range(n_y1):
                v = px0 * trans1[0, y] + (1.0 - px0) * trans1[1, y]
                if v > 0.0:
                    h_y1 -= v * np.log(v)
            i_x_y1 = h_y1 - (px0 * h_rows1[0] + (1.0 - px0) * h_rows1[1])
            a = i_x_y1_u
            b = h_y2 - h_y2_u
            out_a[j] = a if a > 0.0 else 0.0
            out_b[j] = b if b > 0.0 else 0.0
            out_c[j] = i_x_y1 if i_x_y1 > 0.0 else 0.0
        return out_a, out_b, out_c

    def corner_scan_numba(p_u, t_combos, trans1, trans2):
        return _corner_scan_nb(
            np.ascontiguousarray(p_u, dtype=np.float64),
            np.ascontiguousarray(t_combos, dtype=np.float64),
            np.ascontiguousarray(trans1, dtype=np.float64),
            np.ascontiguousarray(trans2, dtype=np.float64),
        )

else:
    corner_scan_numba = None

corner_scan = corner_scan_numba if USING_NUMBA else corner_scan_numpy


# ---------------------------------------------------------------------------
# codeword decoding
# ---------------------------------------------------------------------------

def decode_map_int_numpy(codebook, penalty, ys):
    """Index of the first minimum-penalty codeword for each received word.

    codebook: (M, n) small ints; penalty: (n_x, n_y) int64 per-symbol costs;
    ys: (T, n) small ints.  Scores accumulate over symbols left to right.
    """
    n = codebook.shape[1]
    out = np.empty(ys.shape[0], dtype=np.int64)
    for t in range(ys.shape[0]):
        acc = np.zeros(codebook.shape[0], dtype=np.int64)
        y = ys[t]
        for i in range(n):
            acc += penalty[codebook[:, i], y[i]]
        out[t] = np.argmin(acc)
    return out


def decode_map_float_numpy(codebook, logscore, ys, cand_flat, cand_start, cand_count, cand_of):
    """First-maximum log-score candidate per trial, over restricted candidate sets.

    Candidate lists are stored flattened: trial t searches
    cand_flat[cand_start[b] : cand_start[b] + cand_count[b]] for b = cand_of[t].
    Returns the chosen codeword index (a value from cand_flat) per trial.
    """
    n = codebook.shape[1]
    out = np.empty(ys.shape[0], dtype=np.int64)
    for t in range(ys.shape[0]):
        b = cand_of[t]
        cands = cand_flat[cand_start[b] : cand_start[b] + cand_count[b]]
        acc = np.zeros(cands.shape[0], dtype=np.float64)
        y = ys[t]
        sub = codebook[cands]
        for i in range(n):
            acc += logscore[sub[:, i], y[i]]
        out[t] = cands[np.argmax(acc)]
    return out


def decode_sq_numpy(codebook, scale, ys):
    """First-minimum squared-distance codeword per trial: sum (y - scale*c)^2."""
    n = codebook.shape[1]
    out = np.empty(ys.shape[0], dtype=np.int64)
    for t in range(ys.shape[0]):
        acc = np.zeros(codebook.shape[0], dtype=np.float64)
        y = ys[t]
        for i in range(n):
            d = y[i] - scale * codebook[:, i]
            acc += d * d
        out[t] = np.argmin(acc)
    return out


def decode_sq_restricted_numpy(codebook, scale, ys, cand_flat, cand_start, cand_count, cand_of):
    n = codebook.shape[1]
    out = np.empty(ys.shape[0], dtype=np.int64)
    for t in range(ys.shape[0]):
        b = cand_of[t]
        cands = cand_flat[cand_start[b] : cand_start[b] + cand_count[b]]
        acc = np.zeros(cands.shape[0], dtype=np.float64)
        y = ys[t]
        sub = codebook[cands]
        for i in range(n):
            d = y[i] - scale * sub[:, i]
            acc += d * d
        out[t] = cands[np.argmin(acc)]
    return out


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _decode_map_int_nb(codebook, penalty, ys):
        n_trials, n = ys.shape
        n_cw = codebook.shape[0]
        out = np.empty(n_trials, dtype=np.int64)
        for t in range(n_trials):
            best = np.int64(0)
            best_score = np.int64(2**62)
            for c in range(n_cw):
                s = np.int64(0)
                for i in range(n):
                    s += penalty[codebook[c, i], ys[t, i]]
                if s < best_score:
                    best_score = s
                    best = c
            out[t] = best
        return out

    @njit(cache=True, nogil=True)
    def _decode_map_float_nb(codebook, logscore, ys, cand_flat, cand_start, cand_count, cand_of):
        n_trials, n = ys.shape
        out = np.empty(n_trials, dtype=np.int64)
        for t in range(n_trials):
            b = cand_of[t]
            best = cand_flat[cand_start[b]]
            best_score = -np.inf
            for k in range(cand_count[b]):
                c = cand_flat[cand_start[b] + k]
                s = 0.0
                for i in range(n):
                    s += logscore[codebook[c, i], ys[t, i]]
                if s > best_score:
                    best_score = s
                    best = c
            out[t] = best
        return out

    @njit(cache=True, nogil=True)
    def _decode_sq_nb(codebook, scale, ys):
        n_trials, n = ys.shape
        n_cw = codebook.shape[0]
        out = np.empty(n_trials, dtype=np.int64)
        for t in range(n_trials):
            best = np.int64(0)
            best_score = np.inf
            for c in range(n_cw):
                s = 0.0
                for i in range(n):
                    d = ys[t, i] - scale * codebook[c, i]
                    s += d * d
                if s < best_score:
                    best_score = s
                    best = c
            out[t] = best
        return out

    @njit(cache=True, nogil=True)
    def _decode_sq_restricted_nb(codebook, scale, ys, cand_flat, cand_start, cand_count, cand_of):
        n_trials, n = ys.shape
        out = np.empty(n_trials, dtype=np.int64)
        for t in range(n_trials):
            b = cand_of[t]
            best = cand_flat[cand_start[b]]
            best_score = np.inf
            for k in range(cand_count[b]):
                c = cand_flat[cand_start[b] + k]
                s = 0.0
                for i in range(n):
                    d = ys[t, i] - scale * codebook[c, i]
                    s += d * d
                if s < best_score:
                    best_score = s
                    best = c
            out[t] = best
        return out

    def decode_map_int_numba(codebook, penalty, ys):
        return _decode_map_int_nb(
            np.ascontiguousarray(codebook, dtype=np.int8),
            np.ascontiguousarray(penalty, dtype=np.int64),
            np.ascontiguousarray(ys, dtype=np.int8),
        )

    def decode_map_float_numba(codebook, logscore, ys, cand_flat, cand_start, cand_count, cand_of):
        return _decode_map_float_nb(
            np.ascontiguousarray(codebook, dtype=np.int8),
            np.ascontiguousarray(logscore, dtype=np.float64),
            np.ascontiguousarray(ys, dtype=np.int8),
            np.ascontiguousarray(cand_flat, dtype=np.int64),
            np.ascontiguousarray(cand_start, dtype=np.int64),
            np.ascontiguousarray(cand_count, dtype=np.int64),
            np.ascontiguousarray(cand_of, dtype=np.int64),
        )

    def decode_sq_numba(codebook, scale, ys):
        return _decode_sq_nb(
            np.ascontiguousarray(codebook, dtype=np.float64),
            float(scale),
            np.ascontiguousarray(ys, dtype=np.float64),
        )

    def decode_sq_restricted_numba(codebook, scale, ys, cand_flat, cand_start, cand_count, cand_of):
        return _decode_sq_restricted_nb(
            np.ascontiguousarray(codebook, dtype=np.float64),
            float(scale),
            np.ascontiguousarray(ys, dtype=np.float64),
            np.ascontiguousarray(cand_flat, dtype=np.int64),
            np.ascontiguousarray(cand_start, dtype=np.int64),
            np.ascontiguousarray(cand_count, dtype=np.int64),
            np.ascontiguousarray(cand_of, dtype=np.int64),
        )

else:
    decode_map_int_numba = None
    decode_map_float_numba = None
    decode_sq_numba = None
    decode_sq_restricted_numba = None

if USING_NUMBA:
    decode_map_int = decode_map_int_numba
    decode_map_float = decode_map_float_numba
    decode_sq = decode_sq_numba
    decode_sq_restricted = decode_sq_restricted_numba
else:
    decode_map_int = decode_map_int_numpy
    decode_map_float = decode_map_float_numpy
    decode_sq = decode_sq_numpy
    decode_sq_restricted = decode_sq_restricted_numpy
