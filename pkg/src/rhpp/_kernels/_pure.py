"""Pure-Python kernels; reference semantics for the compiled twins in _ckernels.pyx."""


def scan_budget(l, total, lo, hi):
    """Strings of length ``l`` (entries >= 2) with entry sum ``total`` whose
    ``q1 + ql - q`` lies in ``[lo, hi]``.  Returned in lexicographic order."""
    out = []
    if l < 1 or total < 2 * l:
        return out
    entries = [0] * l
    # y: dets of prefixes; z: dets of prefixes with the first entry dropped
    y = [0] * (l + 1)
    z = [0] * (l + 1)
    y[0] = 1

    def rec(i, remaining):
        slots_after = l - i - 1
        top = remaining - 2 * slots_after
        if slots_after == 0:
            choices = (remaining,) if remaining >= 2 else ()
        else:
            choices = range(2, top + 1)
        for n in choices:
            entries[i] = n
            if i == 0:
                y[1] = n
                z[1] = 1
            else:
                y[i + 1] = n * y[i] - y[i - 1]
                z[i + 1] = n * z[i] - (z[i - 1] if i >= 2 else 0)
            if slots_after == 0:
                q = y[l]
                q1 = z[l]
                ql = y[l - 1]
                t = q1 + ql - q
                if lo <= t <= hi:
                    out.append(tuple(entries))
            else:
                rec(i + 1, remaining - n)

    rec(0, total)
    return out


def _v3(x):
    v = 0
    while x % 3 == 0:
        x //= 3
        v += 1
    return v, (1 if x % 3 == 1 else -1)


def eps3_chain(entries):
    """epsilon_3 of the chain lattice, via its Gram-Schmidt diagonal -y_j/y_{j-1}."""
    eps = 1
    d_par, d_chi = 0, 1
    prev_y, y = 0, 1
    prev_v, prev_chi = 0, 1
    first = True
    for n in entries:
        prev_y, y = y, n * y - prev_y
        v, chi = _v3(y)
        c_par = (v - prev_v) & 1
        c_chi = -chi * prev_chi  # chi(-1) = -1 at p = 3
        prev_v, prev_chi = v, chi
        if first:
            d_par, d_chi = c_par, c_chi
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
