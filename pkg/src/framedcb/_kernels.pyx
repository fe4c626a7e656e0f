# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the functions in ``_kernels_py``.

Laurent-polynomial kernels keep Python integers for coefficients (they may
grow without bound) and gain from typed loops. The modular kernels work in
``unsigned long long`` with a 128-bit product, so they accept any prime below
``2**63``.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    typedef unsigned long long fcb_u64;
    static inline fcb_u64 fcb_mulmod(fcb_u64 a, fcb_u64 b, fcb_u64 p) {
        return (fcb_u64)(((unsigned __int128)a * b) % p);
    }
    """
    ctypedef unsigned long long fcb_u64
    fcb_u64 fcb_mulmod(fcb_u64 a, fcb_u64 b, fcb_u64 p) nogil


cdef inline fcb_u64 _powmod(fcb_u64 base, fcb_u64 e, fcb_u64 p) nogil:
    cdef fcb_u64 r = 1 % p
    base %= p
    while e:
        if e & 1:
            r = fcb_mulmod(r, base, p)
        base = fcb_mulmod(base, base, p)
        e >>= 1
    return r


def lp_add(dict a, dict b):
    if len(a) < len(b):
        a, b = b, a
    cdef dict out = dict(a)
    cdef object s
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def lp_scale(dict a, object c, long shift):
    """Return ``c * v**shift * a``."""
    if not c:
        return {}
    cdef dict out = {}
    cdef long e
    for ek, x in a.items():
        e = ek
        out[e + shift] = x * c
    return out


def lp_mul(dict a, dict b):
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    cdef list ea = list(a.keys()), ca = list(a.values())
    cdef list eb = list(b.keys()), cb = list(b.values())
    cdef Py_ssize_t i, j, na = len(ea), nb = len(eb)
    cdef long e, ebj
    cdef dict out = {}
    cdef object y, prev
    for j in range(nb):
        ebj = eb[j]
        y = cb[j]
        for i in range(na):
            e = <long>ea[i] + ebj
            prev = out.get(e)
            if prev is None:
                out[e] = ca[i] * y
            else:
                out[e] = prev + ca[i] * y
    return {k: v for k, v in out.items() if v}


def lp_addmul_into(dict acc, dict a, dict b, long shift):
    """In place ``acc += v**shift * a * b``; zero entries are left for the caller to prune."""
    cdef long s, e
    cdef object prev
    for eb, cb in b.items():
        s = <long>eb + shift
        for ea, ca in a.items():
            e = <long>ea + s
            prev = acc.get(e)
            acc[e] = ca * cb if prev is None else prev + ca * cb


def lp_eval_mod(dict a, object x, object xinv, object p):
    """Evaluate at ``v = x`` modulo the prime ``p`` (``xinv`` is ``x**-1 mod p``)."""
    cdef fcb_u64 pp = p, xx = x % p, xi = xinv % p, total = 0, term, cc
    cdef long e
    for ek, c in a.items():
        e = ek
        cc = c % p
        if e >= 0:
            term = fcb_mulmod(cc, _powmod(xx, <fcb_u64>e, pp), pp)
        else:
            term = fcb_mulmod(cc, _powmod(xi, <fcb_u64>(-e), pp), pp)
        total = (total + term) % pp
    return total


def echelon_mod_p(list rows, object p):
    """Row-reduce a dense matrix over GF(p); same contract as the Python version."""
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0:
        return [], []
    cdef Py_ssize_t ncols = len(rows[0])
    cdef fcb_u64 pp = p
    cdef fcb_u64* work = <fcb_u64*>malloc(sizeof(fcb_u64) * (nrows * ncols + ncols + 1))
    cdef fcb_u64* r = <fcb_u64*>malloc(sizeof(fcb_u64) * (ncols + 1))
    cdef Py_ssize_t* pcols = <Py_ssize_t*>malloc(sizeof(Py_ssize_t) * (nrows + 1))
    if work == NULL or r == NULL or pcols == NULL:
        free(work); free(r); free(pcols)
        raise MemoryError()
    cdef Py_ssize_t npiv = 0, idx, j, k, col
    cdef fcb_u64 f, inv, y
    cdef fcb_u64* prow
    pivot_rows = []
    pivot_cols = []
    try:
        for idx in range(nrows):
            row = rows[idx]
            for j in range(ncols):
                r[j] = <fcb_u64>(row[j] % p)
            for k in range(npiv):
                prow = work + k * ncols
                f = r[pcols[k]]
                if f:
                    for j in range(ncols):
                        y = fcb_mulmod(f, prow[j], pp)
                        r[j] = (r[j] + pp - y) % pp
            col = -1
            for j in range(ncols):
                if r[j]:
                    col = j
                    break
            if col < 0:
                continue
            inv = _powmod(r[col], pp - 2, pp)
            for j in range(ncols):
                r[j] = fcb_mulmod(r[j], inv, pp)
            for k in range(npiv):
                prow = work + k * ncols
                f = prow[col]
                if f:
                    for j in range(ncols):
                        y = fcb_mulmod(f, r[j], pp)
                        prow[j] = (prow[j] + pp - y) % pp
            prow = work + npiv * ncols
            for j in range(ncols):
                prow[j] = r[j]
            pcols[npiv] = col
            npiv += 1
            pivot_rows.append(idx)
            pivot_cols.append(col)
    finally:
        free(work)
        free(r)
        free(pcols)
    return pivot_rows, pivot_cols


def poly_mul(tuple a, tuple b):
    """Dense product of ascending coefficient tuples."""
    if not a or not b:
        return ()
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef list out = [0] * (na + nb - 1)
    cdef object x
    for i in range(na):
        x = a[i]
        if x:
            for j in range(nb):
                out[i + j] += x * b[j]
    cdef Py_ssize_t n = len(out)
    while n and not out[n - 1]:
        n -= 1
    return tuple(out[:n])
