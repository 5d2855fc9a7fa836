"""Pure-numpy fallback kernels.

These carry the authoritative algorithm notes for both backends.

Counter-based generator
-----------------------
All randomness derives from the 64-bit finalizer of SplitMix64,

    finalize(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
                 z ^= z >> 27; z *= 0x94D049BB133111EB;
                 z ^= z >> 31                       (mod 2**64 throughout)

with a per-stream key

    key = finalize(finalize(master_seed ^ G) + finalize(stream_id ^ SALT))

and the i-th 64-bit word of a stream defined as

    word(i) = finalize(key + i * G),   G = 0x9E3779B97F4A7C15.

Uniform doubles take the top 53 bits, ``(word >> 11) * 2**-53``. Gaussian
variates use the Marsaglia polar method: attempt j consumes the two words at
counters (2j, 2j+1); with v = 2u - 1 the attempt is accepted iff
0 < v1^2 + v2^2 < 1 and then yields the pair (v1*m, v2*m),
m = sqrt(-2 ln s / s). Thus every output is a pure function of
(master_seed, stream_id, counter), independent of scheduling.

Eigensolver
-----------
Cyclic Jacobi for complex Hermitian matrices: sweeps visit pairs (p, q) in
row-cyclic order and annihilate a_pq with the unitary rotation

    J[p,p] = c, J[p,q] = s*u, J[q,p] = -s*conj(u), J[q,q] = c,
    u = a_pq/|a_pq|, tau = (a_pp - a_qq)/(2|a_pq|),
    t = -sign(tau)/(|tau| + hypot(1, tau)), c = 1/sqrt(1+t^2), s = t*c,

which updates the diagonal exactly as a_pp - t|a_pq| and a_qq + t|a_pq|.
Convergence: off-diagonal Frobenius norm <= rel_tol * ||A||_F (input norm),
hard sweep cap after which the matrix is flagged unconverged. This module
applies the rotations in lockstep across a whole batch; per-matrix masks
keep converged members and zero pivots fixed, so each matrix sees exactly
the rotation sequence the sequential (numba) kernel would apply.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0


def _finalize_vec(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def raw_block(key, start, n):
    c = np.arange(int(start), int(start) + int(n), dtype=np.uint64)
    return _finalize_vec(np.uint64(key) + c * _GOLDEN)


def gaussian_block(key, attempt_start, n):
    """Vectorized polar rejection; consumption order matches the scalar loop."""
    n = int(n)
    out = np.empty(n, dtype=np.float64)
    filled = 0
    j = int(attempt_start)
    used = 0
    while filled < n:
        need_pairs = (n - filled + 1) // 2
        block = max(64, int(need_pairs / 0.78) + 16)
        words = raw_block(key, 2 * j, 2 * block)
        u = (words >> np.uint64(11)).astype(np.float64) * _INV_2_53
        v = 2.0 * u - 1.0
        v1 = v[0::2]
        v2 = v[1::2]
        s = v1 * v1 + v2 * v2
        idx = np.nonzero((s > 0.0) & (s < 1.0))[0]
        if idx.size >= need_pairs:
            take = idx[:need_pairs]
            consumed = int(take[-1]) + 1
        else:
            take = idx
            consumed = block
        if take.size:
            st = s[take]
            m = np.sqrt(-2.0 * np.log(st) / st)
            pair_vals = np.empty(2 * take.size, dtype=np.float64)
            pair_vals[0::2] = v1[take] * m
            pair_vals[1::2] = v2[take] * m
            k = min(pair_vals.size, n - filled)
            out[filled:filled + k] = pair_vals[:k]
            filled += k
        j += consumed
        used += consumed
    return out, used


def eigh_batch(stack, compute_vectors, rel_tol, max_sweeps):
    """Lockstep batched Jacobi; same contract as the numba kernel."""
    b, d, _ = stack.shape
    a = stack
    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    thresh = rel_tol * fro
    if compute_vectors:
        vecs = np.broadcast_to(np.eye(d, dtype=np.complex128), (b, d, d)).copy()
    else:
        vecs = np.empty((0, d, d), dtype=np.complex128)
    sweeps = np.zeros(b, dtype=np.int64)
    eye_off = ~np.eye(d, dtype=bool)

    def offnorm():
        return np.sqrt(np.sum(np.abs(a[:, eye_off]) ** 2, axis=1))

    converged = offnorm() <= thresh
    while True:
        active_sweep = ~converged & (sweeps < max_sweeps)
        if not active_sweep.any():
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[:, p, q].copy()
                r = np.abs(apq)
                act = active_sweep & (r > 0.0)
                if not act.any():
                    continue
                r_safe = np.where(r > 0.0, r, 1.0)
                u = np.where(act, apq / r_safe, 1.0 + 0.0j)
                alpha = a[:, p, p].real.copy()
                beta = a[:, q, q].real.copy()
                tau = (alpha - beta) / (2.0 * r_safe)
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                t = -sgn / (np.abs(tau) + np.hypot(1.0, tau))
                t = np.where(act, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                su = (s * u)[:, None]
                suc = (s * np.conj(u))[:, None]
                cc = c[:, None]
                colp = a[:, :, p].copy()
                colq = a[:, :, q].copy()
                newp = cc * colp - suc * colq
                newq = su * colp + cc * colq
                a[:, :, p] = newp
                a[:, :, q] = newq
                a[:, p, :] = np.conj(newp)
                a[:, q, :] = np.conj(newq)
                a[:, p, p] = alpha - t * r
                a[:, q, q] = beta + t * r
                a[:, p, q] = np.where(act, 0.0j, apq)
                a[:, q, p] = np.conj(a[:, p, q])
                if compute_vectors:
                    vp = vecs[:, :, p].copy()
                    vq = vecs[:, :, q].copy()
                    vecs[:, :, p] = cc * vp - suc * vq
                    vecs[:, :, q] = su * vp + cc * vq
        sweeps[active_sweep] += 1
        converged = converged | (offnorm() <= thresh)
    ok = offnorm() <= thresh
    raw = np.einsum("bii->bi", a).real
    order = np.argsort(raw, axis=1)
    w = np.take_along_axis(raw, order, axis=1)
    if compute_vectors:
        vecs = np.take_along_axis(vecs, order[:, None, :], axis=2)
    return w, vecs, sweeps, ok


def matmul(x, y):
    return x @ y
