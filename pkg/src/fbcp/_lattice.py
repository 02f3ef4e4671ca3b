"""Integer row lattices: Hermite normal form, reduction and solving."""

from __future__ import annotations


def hnf(rows: list[list[int]], ncols: int):
    """Row-style Hermite normal form.

    Returns ``(H, U, pivots)`` with ``U * A == H``; ``H`` keeps only the
    nonzero rows, ``pivots`` lists their pivot columns and ``U`` has one row
    per input row (the trailing rows of ``U`` span the left kernel).
    """
    a = [list(r) for r in rows]
    m = len(a)
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivots = []
    top = 0
    for col in range(ncols):
        if top >= m:
            break
        while True:
            live = [r for r in range(top, m) if a[r][col] != 0]
            if not live:
                break
            best = min(live, key=lambda r: (abs(a[r][col]), r))
            a[top], a[best] = a[best], a[top]
            u[top], u[best] = u[best], u[top]
            done = True
            for r in range(top + 1, m):
                if a[r][col]:
                    q = a[r][col] // a[top][col]
                    a[r] = [x - q * y for x, y in zip(a[r], a[top])]
                    u[r] = [x - q * y for x, y in zip(u[r], u[top])]
                    if a[r][col]:
                        done = False
            if done:
                break
        if a[top][col] == 0:
            continue
        if a[top][col] < 0:
            a[top] = [-x for x in a[top]]
            u[top] = [-x for x in u[top]]
        p = a[top][col]
        for r in range(top):
            q = a[r][col] // p
            if q:
                a[r] = [x - q * y for x, y in zip(a[r], a[top])]
                u[r] = [x - q * y for x, y in zip(u[r], u[top])]
        pivots.append(col)
        top += 1
    return a[:top], u, pivots


def reduce_vector(h: list[list[int]], pivots: list[int], v: list[int]) -> list[int]:
    """Canonical representative of ``v`` modulo the row lattice of ``h``."""
    v = list(v)
    for row, c in zip(h, pivots):
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return v


def solve(rows: list[list[int]], target: list[int]):
    """Integer solution of ``sum c_i rows[i] == target``.

    Returns ``(particular, kernel_rows)`` or ``None`` when no solution
    exists; ``kernel_rows`` span every homogeneous solution.
    """
    m = len(rows)
    ncols = len(target)
    h, u, pivots = hnf(rows, ncols)
    v = list(target)
    coeffs = [0] * len(h)
    for i, (row, c) in enumerate(zip(h, pivots)):
        if v[c] % row[c]:
            return None
        q = v[c] // row[c]
        coeffs[i] = q
        v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        return None
    particular = [0] * m
    for i, q in enumerate(coeffs):
        if q:
            particular = [x + q * y for x, y in zip(particular, u[i])]
    return particular, u[len(h):]


def lex_min_abs(particular: list[int], kernel_rows: list[list[int]]) -> list[int]:
    """Lexicographically least ``(|c_1|, |c_2|, ...)`` over ``particular + kernel``.

    Exact ties in absolute values prefer the lexicographically larger
    signed vector, so positive coefficients win.
    """
    kh, _, kp = hnf(kernel_rows, len(particular)) if kernel_rows else ([], None, [])
    best = None

    def walk(p, rows, piv, start):
        nonlocal best
        n = len(p)
        if start == n:
            key = (tuple(abs(x) for x in p), tuple(-x for x in p))
            if best is None or key < best[0]:
                best = (key, list(p))
            return
        if rows and piv[0] == start:
            g = rows[0][start]
            r = p[start] % g
            options = {r, r - g}
            lo = min(abs(o) for o in options)
            for val in sorted(options, reverse=True):
                if abs(val) != lo:
                    continue
                q = (val - p[start]) // g
                np_ = [x + q * y for x, y in zip(p, rows[0])]
                walk(np_, rows[1:], piv[1:], start + 1)
        else:
            walk(p, rows, piv, start + 1)

    walk(list(particular), [list(r) for r in kh], list(kp), 0)
    return best[1]
