"""Pure-NumPy SISO kernels; the fallback when the compiled twin is absent.

Both kernels implement exact log-MAP: marginalizations are exact
log-sum-exp reductions, carried out on max-normalized linear-domain
weights (inner) and with logaddexp (outer).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

# Exchanged extrinsics saturate here; the bound is far beyond any
# decision-relevant magnitude and keeps the iterative fixed point stable.
EXTRINSIC_CLAMP = 60.0
_TINY = 1e-300


def inner_siso(slot_ll: np.ndarray, prior_llr: np.ndarray, tables) -> np.ndarray:
    """One pass over the accumulator-PPM trellis.

    slot_ll: (n_symbols, M) slot log-likelihood ratios.
    prior_llr: (15120,) prior LLRs on the accumulator input bits.
    Returns extrinsic LLRs on those bits, same shape as prior_llr.
    """
    n_sym, order = slot_ll.shape
    m = tables.bits_per_symbol
    priors = prior_llr.reshape(n_sym, m)

    log_w = priors @ tables.bit_matrix.T  # (n_sym, M)
    log_w -= np.sum(np.maximum(priors, 0.0), axis=1, keepdims=True)
    weights = np.exp(log_w)
    emission = np.exp(slot_ll - slot_ll.max(axis=1, keepdims=True))

    g_zero = weights * emission[:, tables.slot_from_zero]
    g_one = weights * emission[:, tables.slot_from_one]

    par1 = tables.parity.astype(float)
    par0 = 1.0 - par1
    # 2x2 section sums: s[k, a, b] = total weight from state a to state b.
    s = np.empty((n_sym, 2, 2))
    s[:, 0, 0] = g_zero @ par0
    s[:, 0, 1] = g_zero @ par1
    s[:, 1, 0] = g_one @ par1
    s[:, 1, 1] = g_one @ par0

    alpha = np.empty((n_sym, 2))
    a0, a1 = 1.0, 0.0  # accumulator starts in state zero
    for k in range(n_sym):
        alpha[k, 0], alpha[k, 1] = a0, a1
        n0 = a0 * s[k, 0, 0] + a1 * s[k, 1, 0]
        n1 = a0 * s[k, 0, 1] + a1 * s[k, 1, 1]
        norm = n0 + n1
        a0, a1 = n0 / norm, n1 / norm

    beta_next = np.empty((n_sym, 2))
    b0, b1 = 0.5, 0.5  # accumulator is not terminated
    for k in range(n_sym - 1, -1, -1):
        beta_next[k, 0], beta_next[k, 1] = b0, b1
        p0 = s[k, 0, 0] * b0 + s[k, 0, 1] * b1
        p1 = s[k, 1, 0] * b0 + s[k, 1, 1] * b1
        norm = p0 + p1
        b0, b1 = p0 / norm, p1 / norm

    bn_par = np.take(beta_next, tables.parity, axis=1)  # (n_sym, M)
    bn_flip = np.take(beta_next, 1 - tables.parity, axis=1)
    joint = (
        alpha[:, 0:1] * g_zero * bn_par + alpha[:, 1:2] * g_one * bn_flip
    )
    p_one = joint @ tables.bit_matrix  # (n_sym, m)
    p_zero = joint @ (1.0 - tables.bit_matrix)
    app = np.log(p_one + _TINY) - np.log(p_zero + _TINY)
    extrinsic = app - priors
    np.clip(extrinsic, -EXTRINSIC_CLAMP, EXTRINSIC_CLAMP, out=extrinsic)
    return extrinsic.ravel()


def outer_siso(channel_llr: np.ndarray, trellis) -> tuple[np.ndarray, np.ndarray]:
    """One pass over the 4-state outer convolutional trellis.

    channel_llr: (K, 3) LLRs on the mother-code outputs, zero where
    punctured. Returns (extrinsic (K, 3), info-bit APP (K,)).
    """
    n_steps = channel_llr.shape[0]
    outputs = trellis.outputs  # (4, 2, 3)
    next_state = trellis.next_state  # (4, 2)

    gamma = np.einsum("kj,suj->ksu", channel_llr, outputs)  # (K, 4, 2)

    neg_inf = -np.inf
    alpha = np.full((n_steps + 1, 4), neg_inf)
    alpha[0, 0] = 0.0
    for k in range(n_steps):
        nxt = np.full(4, neg_inf)
        g = gamma[k]
        a = alpha[k]
        for s in range(4):
            if a[s] == neg_inf:
                continue
            for u in range(2):
                t = next_state[s, u]
                nxt[t] = np.logaddexp(nxt[t], a[s] + g[s, u])
        alpha[k + 1] = nxt - nxt.max()

    beta = np.full((n_steps + 1, 4), neg_inf)
    beta[n_steps, 0] = 0.0  # termination bits drive the encoder to zero
    for k in range(n_steps - 1, -1, -1):
        g = gamma[k]
        b = beta[k + 1]
        cur = np.logaddexp(
            g[:, 0] + b[next_state[:, 0]], g[:, 1] + b[next_state[:, 1]]
        )
        beta[k] = cur - cur.max()

    combined = alpha[:-1, :, None] + gamma + np.take(beta[1:], next_state, axis=1)

    flat = combined.reshape(n_steps, 8)
    out_flat = outputs.reshape(8, 3)
    extrinsic = np.empty((n_steps, 3))
    for j in range(3):
        ones = out_flat[:, j] == 1
        val1 = _logsumexp_masked(flat, ones)
        val0 = _logsumexp_masked(flat, ~ones)
        extrinsic[:, j] = np.clip(
            val1 - val0 - channel_llr[:, j], -EXTRINSIC_CLAMP, EXTRINSIC_CLAMP
        )

    input_one = np.tile(np.array([False, True]), 4)
    app_info = _logsumexp_masked(flat, input_one) - _logsumexp_masked(flat, ~input_one)
    return extrinsic, app_info


def _logsumexp_masked(flat: np.ndarray, mask: np.ndarray) -> np.ndarray:
    vals = np.where(mask[None, :], flat, -np.inf)
    top = vals.max(axis=1)
    safe = np.where(np.isfinite(top), top, 0.0)
    with np.errstate(divide="ignore"):
        return safe + np.log(np.sum(np.exp(vals - safe[:, None]), axis=1))
