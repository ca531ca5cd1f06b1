# cython: language_level=3
"""Compiled twins of rhpp._kernels._pure (64-bit arithmetic; callers guard overflow)."""

DEF MAXLEN = 64


cdef void _rec(int i, int l, long long remaining, long long lo, long long hi,
               long long* entries, long long* y, long long* z, list out):
    cdef int slots_after = l - i - 1
    cdef long long n, first_n, last_n, t
    if slots_after == 0:
        if remaining < 2:
            return
        first_n = remaining
        last_n = remaining
    else:
        first_n = 2
        last_n = remaining - 2 * slots_after
    n = first_n
    while n <= last_n:
        entries[i] = n
        if i == 0:
            y[1] = n
            z[1] = 1
        else:
            y[i + 1] = n * y[i] - y[i - 1]
            z[i + 1] = n * z[i] - (z[i - 1] if i >= 2 else 0)
        if slots_after == 0:
            t = z[l] + y[l - 1] - y[l]
            if lo <= t <= hi:
                out.append(tuple([entries[k] for k in range(l)]))
        else:
            _rec(i + 1, l, remaining - n, lo, hi, entries, y, z, out)
        n += 1


def scan_budget(int l, long long total, long long lo, long long hi):
    cdef long long entries[MAXLEN]
    cdef long long y[MAXLEN + 1]
    cdef long long z[MAXLEN + 1]
    cdef list out = []
    if l < 1 or total < 2 * l:
        return out
    if l > MAXLEN:
        raise ValueError("length exceeds compiled kernel capacity")
    y[0] = 1
    z[0] = 0
    _rec(0, l, total, lo, hi, entries, y, z, out)
    return out


cdef inline void _v3(long long x, int* v, int* chi):
    cdef int k = 0
    while x % 3 == 0:
        x //= 3
        k += 1
    v[0] = k
    chi[0] = 1 if x % 3 == 1 else -1


def eps3_chain(entries):
    cdef long long prev_y = 0, y = 1, tmp, n
    cdef int v, chi, prev_v = 0, prev_chi = 1
    cdef int c_par, c_chi, d_par = 0, d_chi = 1, s, eps = 1
    cdef bint first = True
    for obj in entries:
        n = obj
        tmp = n * y - prev_y
        prev_y = y
        y = tmp
        _v3(y, &v, &chi)
        c_par = (v - prev_v) & 1
        c_chi = -chi * prev_chi
        prev_v = v
        prev_chi = chi
        if first:
            d_par = c_par
            d_chi = c_chi
            first = False
            continue
        s = -1 if (d_par and c_par) else 1
        if c_par:
            s *= d_chi
        if d_par:
            s *= c_chi
        eps *= s
        d_par ^= c_par
        d_chi *= c_chi
    return eps
