# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled SISO kernels; exact twins of the NumPy implementations."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, log1p, INFINITY

cnp.import_array()

BACKEND = "compiled"

# Exchanged extrinsics saturate here; the bound is far beyond any
# decision-relevant magnitude and keeps the iterative fixed point stable.
cdef double EXTRINSIC_CLAMP = 60.0
cdef double TINY = 1e-300


cdef inline double maxstar(double a, double b) noexcept nogil:
    if a == -INFINITY:
        return b
    if b == -INFINITY:
        return a
    if a < b:
        a, b = b, a
    return a + log1p(exp(b - a))


def inner_siso(slot_ll, prior_llr, tables):
    """One pass over the accumulator-PPM trellis (see the NumPy twin)."""
    cdef double[:, ::1] sll = slot_ll
    cdef double[::1] prior = prior_llr
    cdef int[::1] slot0 = tables.slot_from_zero
    cdef int[::1] slot1 = tables.slot_from_one
    cdef int[::1] par = tables.parity
    cdef int n_sym = sll.shape[0]
    cdef int order = sll.shape[1]
    cdef int m = tables.bits_per_symbol

    out = np.empty(n_sym * m, dtype=np.float64)
    cdef double[::1] ext = out
    g_store = np.empty((n_sym, 2, order), dtype=np.float64)
    cdef double[:, :, ::1] g = g_store
    s_store = np.empty((n_sym, 4), dtype=np.float64)
    cdef double[:, ::1] s = s_store
    alpha_store = np.empty((n_sym, 2), dtype=np.float64)
    cdef double[:, ::1] alpha = alpha_store

    cdef double[::1] w = np.empty(order, dtype=np.float64)
    cdef double[::1] e = np.empty(order, dtype=np.float64)
    cdef double[::1] p_one = np.empty(m, dtype=np.float64)
    cdef double[::1] p_zero = np.empty(m, dtype=np.float64)

    cdef int k, i, p, u, size, bit, base_idx
    cdef double l, shift, f0, f1, a0, a1, n0, n1, norm
    cdef double b0, b1, j, app, s00, s01, s10, s11

    with nogil:
        a0 = 1.0
        a1 = 0.0
        for k in range(n_sym):
            base_idx = k * m
            # prior weights over the 2^m input values, max-normalized
            w[0] = 1.0
            for p in range(m):
                i = m - 1 - p
                l = prior[base_idx + i]
                shift = l if l > 0.0 else 0.0
                f0 = exp(-shift)
                f1 = exp(l - shift)
                size = 1 << p
                for u in range(size):
                    w[u + size] = w[u] * f1
                    w[u] = w[u] * f0
            # slot emission weights, max-normalized
            shift = sll[k, 0]
            for u in range(1, order):
                if sll[k, u] > shift:
                    shift = sll[k, u]
            for u in range(order):
                e[u] = exp(sll[k, u] - shift)
            # section weights and 2x2 state-transition sums
            s00 = 0.0
            s01 = 0.0
            s10 = 0.0
            s11 = 0.0
            for u in range(order):
                f0 = w[u] * e[slot0[u]]
                f1 = w[u] * e[slot1[u]]
                g[k, 0, u] = f0
                g[k, 1, u] = f1
                if par[u] == 0:
                    s00 += f0
                    s11 += f1
                else:
                    s01 += f0
                    s10 += f1
            s[k, 0] = s00
            s[k, 1] = s01
            s[k, 2] = s10
            s[k, 3] = s11
            alpha[k, 0] = a0
            alpha[k, 1] = a1
            n0 = a0 * s00 + a1 * s10
            n1 = a0 * s01 + a1 * s11
            norm = n0 + n1
            a0 = n0 / norm
            a1 = n1 / norm

        b0 = 0.5
        b1 = 0.5
        for k in range(n_sym - 1, -1, -1):
            base_idx = k * m
            for i in range(m):
                p_one[i] = 0.0
                p_zero[i] = 0.0
            a0 = alpha[k, 0]
            a1 = alpha[k, 1]
            for u in range(order):
                if par[u] == 0:
                    j = a0 * g[k, 0, u] * b0 + a1 * g[k, 1, u] * b1
                else:
                    j = a0 * g[k, 0, u] * b1 + a1 * g[k, 1, u] * b0
                for i in range(m):
                    if (u >> (m - 1 - i)) & 1:
                        p_one[i] += j
                    else:
                        p_zero[i] += j
            for i in range(m):
                app = log(p_one[i] + TINY) - log(p_zero[i] + TINY)
                app = app - prior[base_idx + i]
                if app > EXTRINSIC_CLAMP:
                    app = EXTRINSIC_CLAMP
                elif app < -EXTRINSIC_CLAMP:
                    app = -EXTRINSIC_CLAMP
                ext[base_idx + i] = app
            n0 = s[k, 0] * b0 + s[k, 1] * b1
            n1 = s[k, 2] * b0 + s[k, 3] * b1
            norm = n0 + n1
            b0 = n0 / norm
            b1 = n1 / norm

    return out


def outer_siso(channel_llr, trellis):
    """One pass over the 4-state outer trellis (see the NumPy twin)."""
    llr = np.ascontiguousarray(channel_llr, dtype=np.float64)
    cdef double[:, ::1] lc = llr
    cdef int[:, ::1] next_state = trellis.next_state
    cdef int[:, :, ::1] outputs = trellis.outputs
    cdef int n_steps = lc.shape[0]

    ext_out = np.empty((n_steps, 3), dtype=np.float64)
    cdef double[:, ::1] ext = ext_out
    app_out = np.empty(n_steps, dtype=np.float64)
    cdef double[::1] app = app_out

    alpha_store = np.full((n_steps + 1, 4), -INFINITY, dtype=np.float64)
    cdef double[:, ::1] alpha = alpha_store
    beta_store = np.full((n_steps + 1, 4), -INFINITY, dtype=np.float64)
    cdef double[:, ::1] beta = beta_store

    cdef int k, st, u, t, j
    cdef double g, top, v0, v1, combined
    cdef double[4] nxt
    cdef double[8] section

    alpha[0, 0] = 0.0
    beta[n_steps, 0] = 0.0

    with nogil:
        for k in range(n_steps):
            for st in range(4):
                nxt[st] = -INFINITY
            for st in range(4):
                if alpha[k, st] == -INFINITY:
                    continue
                for u in range(2):
                    g = (outputs[st, u, 0] * lc[k, 0]
                         + outputs[st, u, 1] * lc[k, 1]
                         + outputs[st, u, 2] * lc[k, 2])
                    t = next_state[st, u]
                    nxt[t] = maxstar(nxt[t], alpha[k, st] + g)
            top = nxt[0]
            for st in range(1, 4):
                if nxt[st] > top:
                    top = nxt[st]
            for st in range(4):
                alpha[k + 1, st] = nxt[st] - top

        for k in range(n_steps - 1, -1, -1):
            for st in range(4):
                nxt[st] = -INFINITY
            for st in range(4):
                for u in range(2):
                    g = (outputs[st, u, 0] * lc[k, 0]
                         + outputs[st, u, 1] * lc[k, 1]
                         + outputs[st, u, 2] * lc[k, 2])
                    t = next_state[st, u]
                    if beta[k + 1, t] != -INFINITY:
                        nxt[st] = maxstar(nxt[st], g + beta[k + 1, t])
            top = nxt[0]
            for st in range(1, 4):
                if nxt[st] > top:
                    top = nxt[st]
            for st in range(4):
                beta[k, st] = nxt[st] - top

        for k in range(n_steps):
            for st in range(4):
                for u in range(2):
                    g = (outputs[st, u, 0] * lc[k, 0]
                         + outputs[st, u, 1] * lc[k, 1]
                         + outputs[st, u, 2] * lc[k, 2])
                    section[st * 2 + u] = (
                        alpha[k, st] + g + beta[k + 1, next_state[st, u]]
                    )
            for j in range(3):
                v0 = -INFINITY
                v1 = -INFINITY
                for st in range(4):
                    for u in range(2):
                        combined = section[st * 2 + u]
                        if outputs[st, u, j] == 1:
                            v1 = maxstar(v1, combined)
                        else:
                            v0 = maxstar(v0, combined)
                combined = v1 - v0 - lc[k, j]
                if combined > EXTRINSIC_CLAMP:
                    combined = EXTRINSIC_CLAMP
                elif combined < -EXTRINSIC_CLAMP:
                    combined = -EXTRINSIC_CLAMP
                ext[k, j] = combined
            v0 = -INFINITY
            v1 = -INFINITY
            for st in range(4):
                v0 = maxstar(v0, section[st * 2])
                v1 = maxstar(v1, section[st * 2 + 1])
            app[k] = v1 - v0

    return ext_out, app_out
