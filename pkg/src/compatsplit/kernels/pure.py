"""Pure-Python arithmetic kernels.

Hot loops of the whole engine: mod-p matrix multiply, reduced row echelon
form, and Kronecker-sum assembly.  Matrices are flat row-major lists of
residues in [0, p).  Over F_2 every function switches to a bitset
representation (one Python int per row) which is dramatically faster than
element loops.
"""

BACKEND = "pure"


def _rows_to_bits(rows, cols, a):
    out = []
    for i in range(rows):
        acc = 0
        base = i * cols
        for j in range(cols):
            if a[base + j]:
                acc |= 1 << j
        out.append(acc)
    return out


def _bits_to_flat(rows, cols, bits):
    out = [0] * (rows * cols)
    for i, word in enumerate(bits):
        base = i * cols
        while word:
            lsb = word & -word
            out[base + lsb.bit_length() - 1] = 1
            word ^= lsb
    return out


def mat_mul(p, m, n, k, a, b):
    """Product of a (m*n flat) and b (n*k flat) mod p, as a flat m*k list."""
    if m == 0 or k == 0:
        return []
    if n == 0:
        return [0] * (m * k)
    if p == 2:
        brows = _rows_to_bits(n, k, b)
        out = []
        for i in range(m):
            acc = 0
            base = i * n
            for j in range(n):
                if a[base + j]:
                    acc ^= brows[j]
            out.append(acc)
        return _bits_to_flat(m, k, out)
    c = [0] * (m * k)
    for i in range(m):
        abase = i * n
        cbase = i * k
        for j in range(n):
            aij = a[abase + j]
            if aij:
                bbase = j * k
                for t in range(k):
                    c[cbase + t] += aij * b[bbase + t]
        for t in range(k):
            c[cbase + t] %= p
    return c


def rref(p, rows, cols, a):
    """Reduced row echelon form mod p.

    Returns (flat rref, pivot column list).  Deterministic: leftmost pivot
    column first, first nonzero row from the top as pivot row.
    """
    if p == 2:
        return _rref2(rows, cols, a)
    mat = [list(a[i * cols:(i + 1) * cols]) for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if mat[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        row = mat[r]
        inv = pow(row[c], -1, p)
        if inv != 1:
            for j in range(c, cols):
                row[j] = row[j] * inv % p
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                ri = mat[i]
                for j in range(c, cols):
                    ri[j] = (ri[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
    flat = []
    for row in mat:
        flat.extend(row)
    return flat, pivots


def _rref2(rows, cols, a):
    bits = _rows_to_bits(rows, cols, a)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        mask = 1 << c
        pr = -1
        for i in range(r, rows):
            if bits[i] & mask:
                pr = i
                break
        if pr < 0:
            continue
        bits[r], bits[pr] = bits[pr], bits[r]
        row = bits[r]
        for i in range(rows):
            if i != r and bits[i] & mask:
                bits[i] ^= row
        pivots.append(c)
        r += 1
    return _bits_to_flat(rows, cols, bits), pivots


def kron_sum(p, sr, sc, br, bc, terms):
    """Sum of Kronecker products: sum_i S_i (x) B_i mod p.

    terms: list of (s_flat, b_flat) with every S_i of shape sr x sc and
    every B_i of shape br x bc.  Result shape (sr*br) x (sc*bc), flat.
    """
    out_rows = sr * br
    out_cols = sc * bc
    if out_rows == 0 or out_cols == 0:
        return []
    if p == 2:
        acc = [0] * out_rows
        for s, b in terms:
            bbits = _rows_to_bits(br, bc, b)
            for si in range(sr):
                sbase = si * sc
                obase = si * br
                for sj in range(sc):
                    if s[sbase + sj]:
                        shift = sj * bc
                        for bi in range(br):
                            acc[obase + bi] ^= bbits[bi] << shift
        return _bits_to_flat(out_rows, out_cols, acc)
    c = [0] * (out_rows * out_cols)
    for s, b in terms:
        for si in range(sr):
            sbase = si * sc
            for sj in range(sc):
                sv = s[sbase + sj]
                if sv:
                    for bi in range(br):
                        cbase = (si * br + bi) * out_cols + sj * bc
                        bbase = bi * bc
                        for bj in range(bc):
                            c[cbase + bj] += sv * b[bbase + bj]
    for i in range(len(c)):
        c[i] %= p
    return c
