"""Pure-Python hot kernels.

Laurent polynomials are passed around as plain ``dict[int, int]`` maps from
exponent to nonzero coefficient. The compiled module ``_kernels`` exposes the
same functions with the same signatures; ``framedcb._backend`` picks one.
"""

from __future__ import annotations


def lp_add(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def lp_scale(a: dict, c: int, shift: int) -> dict:
    """Return ``c * v**shift * a``."""
    if not c:
        return {}
    return {e + shift: x * c for e, x in a.items()}


def lp_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = ea + eb
            out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def lp_addmul_into(acc: dict, a: dict, b: dict, shift: int) -> None:
    """In place ``acc += v**shift * a * b``; zero entries are left for the caller to prune."""
    get = acc.get
    for eb, cb in b.items():
        s = eb + shift
        for ea, ca in a.items():
            e = ea + s
            acc[e] = get(e, 0) + ca * cb


def lp_eval_mod(a: dict, x: int, xinv: int, p: int) -> int:
    """Evaluate at ``v = x`` modulo the prime ``p`` (``xinv`` is ``x**-1 mod p``)."""
    total = 0
    for e, c in a.items():
        if e >= 0:
            total += c * pow(x, e, p)
        else:
            total += c * pow(xinv, -e, p)
    return total % p


def echelon_mod_p(rows: list, p: int) -> tuple:
    """Row-reduce a dense matrix over GF(p).

    Returns ``(pivot_rows, pivot_cols)``: the indices of an independent set of
    rows (in order of selection) and the column where each one was pivoted.
    """
    work: list = []
    pivot_rows: list = []
    pivot_cols: list = []
    for idx, row in enumerate(rows):
        r = [x % p for x in row]
        for (prow, pcol) in zip(work, pivot_cols):
            f = r[pcol]
            if f:
                r = [(x - f * y) % p for x, y in zip(r, prow)]
        col = -1
        for j, x in enumerate(r):
            if x:
                col = j
                break
        if col < 0:
            continue
        inv = pow(r[col], p - 2, p)
        r = [(x * inv) % p for x in r]
        # Keep earlier pivot rows reduced at the new pivot column.
        for k, prow in enumerate(work):
            f = prow[col]
            if f:
                work[k] = [(x - f * y) % p for x, y in zip(prow, r)]
        work.append(r)
        pivot_rows.append(idx)
        pivot_cols.append(col)
    return pivot_rows, pivot_cols


def poly_mul(a: tuple, b: tuple) -> tuple:
    """Dense product of ascending coefficient tuples."""
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and not out[-1]:
        out.pop()
    return tuple(out)
