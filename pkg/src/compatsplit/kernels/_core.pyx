# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernels (Cython).

Same contract as kernels.pure: flat row-major lists of residues in [0, p).
General p runs on int64 buffers with chunked reduction (no overflow up to
p = 2^31 - 1); F_2 runs on uint64-packed rows.
"""

import array as _array

from cpython cimport array

BACKEND = "compiled"

cdef extern from *:
    int __builtin_ctzll(unsigned long long)


cdef inline long long _modp(long long x, long long p):
    x %= p
    if x < 0:
        x += p
    return x


# ---------------------------------------------------------------- packing

cdef array.array _ZQ = _array.array('Q', [0])
cdef array.array _Zq = _array.array('q', [0])


cdef array.array _pack2(Py_ssize_t rows, Py_ssize_t cols, object a, Py_ssize_t words):
    cdef array.array src = _array.array('q', a)
    cdef long long[::1] sv = src
    cdef array.array out = _ZQ * (rows * words if rows * words else 1)
    cdef unsigned long long[::1] ov = out
    cdef Py_ssize_t i, j
    for i in range(rows * words):
        ov[i] = 0
    for i in range(rows):
        for j in range(cols):
            if sv[i * cols + j]:
                ov[i * words + (j >> 6)] |= (<unsigned long long>1) << (j & 63)
    return out


cdef list _unpack2(Py_ssize_t rows, Py_ssize_t cols, unsigned long long[::1] bits,
                   Py_ssize_t words):
    cdef array.array out = _Zq * (rows * cols if rows * cols else 1)
    cdef long long[::1] ov = out
    cdef Py_ssize_t i, j
    for i in range(rows * cols):
        ov[i] = 0
    for i in range(rows):
        for j in range(cols):
            if bits[i * words + (j >> 6)] & ((<unsigned long long>1) << (j & 63)):
                ov[i * cols + j] = 1
    if rows * cols == 0:
        return []
    return out.tolist()


# ---------------------------------------------------------------- mat_mul

def mat_mul(long long p, Py_ssize_t m, Py_ssize_t n, Py_ssize_t k, a, b):
    """Product of a (m x n) and b (n x k) mod p, flat row-major."""
    if m == 0 or k == 0:
        return []
    if n == 0:
        return [0] * (m * k)
    if p == 2:
        return _mat_mul2(m, n, k, a, b)
    cdef array.array aa = _array.array('q', a)
    cdef array.array bb = _array.array('q', b)
    cdef array.array cc = _Zq * (m * k)
    cdef long long[::1] av = aa
    cdef long long[::1] bv = bb
    cdef long long[::1] cv = cc
    cdef Py_ssize_t i, j, t
    cdef long long aij, cnt, chunk
    chunk = ((<long long>1) << 62) // ((p - 1) * (p - 1))
    if chunk < 1:
        chunk = 1
    for i in range(m * k):
        cv[i] = 0
    for i in range(m):
        cnt = 0
        for j in range(n):
            aij = av[i * n + j]
            if aij:
                for t in range(k):
                    cv[i * k + t] += aij * bv[j * k + t]
                cnt += 1
                if cnt >= chunk:
                    for t in range(k):
                        cv[i * k + t] %= p
                    cnt = 0
        for t in range(k):
            cv[i * k + t] = _modp(cv[i * k + t], p)
    return cc.tolist()


cdef list _mat_mul2(Py_ssize_t m, Py_ssize_t n, Py_ssize_t k, a, b):
    cdef Py_ssize_t wa = (n + 63) >> 6
    cdef Py_ssize_t wb = (k + 63) >> 6
    cdef array.array pa = _pack2(m, n, a, wa)
    cdef array.array pb = _pack2(n, k, b, wb)
    cdef array.array pc = _ZQ * (m * wb if m * wb else 1)
    cdef unsigned long long[::1] avv = pa
    cdef unsigned long long[::1] bvv = pb
    cdef unsigned long long[::1] cvv = pc
    cdef Py_ssize_t i, w, t, j
    cdef unsigned long long x
    for i in range(m * wb):
        cvv[i] = 0
    for i in range(m):
        for w in range(wa):
            x = avv[i * wa + w]
            while x:
                j = (w << 6) + __builtin_ctzll(x)
                x &= x - 1
                for t in range(wb):
                    cvv[i * wb + t] ^= bvv[j * wb + t]
    return _unpack2(m, k, cvv, wb)


# ---------------------------------------------------------------- rref

def rref(long long p, Py_ssize_t rows, Py_ssize_t cols, a):
    """Reduced row echelon form mod p -> (flat rref, pivot columns)."""
    if rows == 0 or cols == 0:
        return list(a), []
    if p == 2:
        return _rref2(rows, cols, a)
    cdef array.array aa = _array.array('q', a)
    cdef long long[::1] m = aa
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef long long inv, f, piv
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if m[i * cols + c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(cols):
                m[r * cols + j], m[pr * cols + j] = m[pr * cols + j], m[r * cols + j]
        piv = m[r * cols + c]
        if piv != 1:
            inv = pow(piv, -1, p)
            for j in range(c, cols):
                m[r * cols + j] = m[r * cols + j] * inv % p
        for i in range(rows):
            if i != r:
                f = m[i * cols + c]
                if f:
                    for j in range(c, cols):
                        m[i * cols + j] = _modp(m[i * cols + j] - f * m[r * cols + j], p)
        pivots.append(c)
        r += 1
    return aa.tolist(), pivots


cdef tuple _rref2(Py_ssize_t rows, Py_ssize_t cols, a):
    cdef Py_ssize_t words = (cols + 63) >> 6
    cdef array.array pa = _pack2(rows, cols, a, words)
    cdef unsigned long long[::1] bits = pa
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, w, pr, t
    cdef unsigned long long mask, tmp
    for c in range(cols):
        if r == rows:
            break
        w = c >> 6
        mask = (<unsigned long long>1) << (c & 63)
        pr = -1
        for i in range(r, rows):
            if bits[i * words + w] & mask:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for t in range(words):
                tmp = bits[r * words + t]
                bits[r * words + t] = bits[pr * words + t]
                bits[pr * words + t] = tmp
        for i in range(rows):
            if i != r and (bits[i * words + w] & mask):
                for t in range(w, words):
                    bits[i * words + t] ^= bits[r * words + t]
        pivots.append(c)
        r += 1
    return _unpack2(rows, cols, bits, words), pivots


# ---------------------------------------------------------------- kron_sum

def kron_sum(long long p, Py_ssize_t sr, Py_ssize_t sc, Py_ssize_t br, Py_ssize_t bc, terms):
    """sum_i S_i (x) B_i mod p; S_i sr x sc, B_i br x bc, flat result."""
    cdef Py_ssize_t out_rows = sr * br
    cdef Py_ssize_t out_cols = sc * bc
    if out_rows == 0 or out_cols == 0:
        return []
    if p == 2:
        return _kron_sum2(sr, sc, br, bc, terms)
    cdef array.array cc = _Zq * (out_rows * out_cols)
    cdef long long[::1] cv = cc
    cdef array.array sa, ba
    cdef long long[::1] sv, bv
    cdef Py_ssize_t si, sj, bi, bj, cbase, bbase
    cdef long long v, nterm, chunk
    chunk = ((<long long>1) << 62) // ((p - 1) * (p - 1))
    if chunk < 1:
        chunk = 1
    cdef Py_ssize_t i
    for i in range(out_rows * out_cols):
        cv[i] = 0
    nterm = 0
    for s, b in terms:
        sa = _array.array('q', s)
        ba = _array.array('q', b)
        sv = sa
        bv = ba
        for si in range(sr):
            for sj in range(sc):
                v = sv[si * sc + sj]
                if v:
                    for bi in range(br):
                        cbase = (si * br + bi) * out_cols + sj * bc
                        bbase = bi * bc
                        for bj in range(bc):
                            cv[cbase + bj] += v * bv[bbase + bj]
        nterm += 1
        if nterm >= chunk:
            for i in range(out_rows * out_cols):
                cv[i] %= p
            nterm = 0
    for i in range(out_rows * out_cols):
        cv[i] = _modp(cv[i], p)
    return cc.tolist()


cdef list _kron_sum2(Py_ssize_t sr, Py_ssize_t sc, Py_ssize_t br, Py_ssize_t bc, terms):
    cdef Py_ssize_t out_rows = sr * br
    cdef Py_ssize_t out_cols = sc * bc
    # one spare word so shifted words never need a bounds check
    cdef Py_ssize_t words = ((out_cols + 63) >> 6) + 1
    cdef array.array acc = _ZQ * (out_rows * words)
    cdef unsigned long long[::1] av = acc
    cdef Py_ssize_t wb = (bc + 63) >> 6
    cdef array.array pb
    cdef unsigned long long[::1] bv
    cdef array.array sa
    cdef long long[::1] sv
    cdef Py_ssize_t si, sj, bi, t, obase, q, i
    cdef long long shift, rsh
    cdef unsigned long long w
    for i in range(out_rows * words):
        av[i] = 0
    for s, b in terms:
        sa = _array.array('q', s)
        sv = sa
        pb = _pack2(br, bc, b, wb)
        bv = pb
        for si in range(sr):
            for sj in range(sc):
                if sv[si * sc + sj]:
                    shift = sj * bc
                    q = shift >> 6
                    rsh = shift & 63
                    for bi in range(br):
                        obase = (si * br + bi) * words
                        for t in range(wb):
                            w = bv[bi * wb + t]
                            if w:
                                av[obase + q + t] ^= w << rsh
                                if rsh:
                                    av[obase + q + t + 1] ^= w >> (64 - rsh)
    return _unpack2(out_rows, out_cols, av, words)
