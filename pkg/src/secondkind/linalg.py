"""Exact linear algebra over Q for the antidifferentiation solves."""

from __future__ import annotations

from fractions import Fraction

Q = Fraction


def solve_sparse(columns: dict, rhs: dict, column_order: list):
    """Sparse variant of solve_exact with Markowitz-style pivoting.

    Same contract as solve_exact; intended for the larger antidifferentiation
    blocks where the dense sweep is too slow.  The canonical solution again
    sets every non-pivot variable to zero; to keep that canonical choice
    aligned with the dense solver, pivots prefer the earliest column in
    column_order among those of minimal fill score.
    """
    col_pos = {ck: i for i, ck in enumerate(column_order)}
    rows: dict = {}
    for ck, col in columns.items():
        for rk, val in col.items():
            if val:
                rows.setdefault(rk, {})[ck] = val
    b = {rk: v for rk, v in rhs.items() if v}
    for rk in b:
        rows.setdefault(rk, {})

    col_rows: dict = {}
    for rk, row in rows.items():
        for ck in row:
            col_rows.setdefault(ck, set()).add(rk)

    sol: dict = {}
    eliminated_rows: set = set()
    pivots: list = []

    active_rows = set(rows)
    while True:
        best = None
        for rk in active_rows:
            row = rows[rk]
            if not row:
                continue
            rlen = len(row)
            for ck in row:
                score = (rlen - 1) * (len(col_rows[ck]) - 1)
                key = (score, col_pos[ck], rk)
                if best is None or key < best[0]:
                    best = (key, rk, ck)
        if best is None:
            break
        _, prk, pck = best
        prow = rows[prk]
        pval = prow[pck]
        prow = {ck: v / pval for ck, v in prow.items()}
        rows[prk] = prow
        b[prk] = b.get(prk, Q(0)) / pval
        for rk in list(col_rows[pck]):
            if rk == prk:
                continue
            row = rows[rk]
            f = row.get(pck)
            if not f:
                continue
            for ck, v in prow.items():
                nv = row.get(ck, Q(0)) - f * v
                if nv:
                    row[ck] = nv
                    col_rows[ck].add(rk)
                else:
                    row.pop(ck, None)
                    col_rows[ck].discard(rk)
            nb = b.get(rk, Q(0)) - f * b.get(prk, Q(0))
            if nb:
                b[rk] = nb
            else:
                b.pop(rk, None)
        pivots.append((prk, pck))
        active_rows.discard(prk)
        eliminated_rows.add(prk)
        for ck in list(prow):
            col_rows[ck].discard(prk)

    for rk in active_rows:
        if rows[rk]:
            raise AssertionError("unpivoted nonempty row survived elimination")
        if b.get(rk):
            return None

    # back substitution: rows were fully reduced against each other already
    # except for pivot rows still containing other pivot columns; resolve in
    # reverse elimination order with free variables at zero.
    value: dict = {}
    for prk, pck in reversed(pivots):
        acc = b.get(prk, Q(0))
        for ck, v in rows[prk].items():
            if ck == pck:
                continue
            xv = value.get(ck)
            if xv:
                acc -= v * xv
        if acc:
            value[pck] = acc
    return value


def solve_exact(columns: dict, rhs: dict, column_order: list):
    """Solve A x = rhs over Q for sparse column data.

    columns maps a column key to {row key: Fraction}; rhs maps row keys to
    Fractions.  Returns {column key: Fraction} for the canonical particular
    solution (free variables set to zero, pivots chosen greedily in
    column_order), or None when the system is inconsistent.
    """
    row_keys = sorted(set(k for col in columns.values() for k in col) | set(rhs))
    row_index = {k: i for i, k in enumerate(row_keys)}
    nrows = len(row_keys)
    ncols = len(column_order)
    dense = [[Q(0)] * (ncols + 1) for _ in range(nrows)]
    for j, ck in enumerate(column_order):
        for rk, val in columns.get(ck, {}).items():
            dense[row_index[rk]][j] = val
    for rk, val in rhs.items():
        dense[row_index[rk]][ncols] = val

    piv_rows: list[int] = []
    piv_cols: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if dense[i][c]), None)
        if piv is None:
            continue
        dense[r], dense[piv] = dense[piv], dense[r]
        pv = dense[r][c]
        dense[r] = [x / pv for x in dense[r]]
        for i in range(nrows):
            if i != r and dense[i][c]:
                f = dense[i][c]
                dense[i] = [x - f * y for x, y in zip(dense[i], dense[r])]
        piv_rows.append(r)
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if dense[i][ncols]:
            return None
    sol = {}
    for row, col in zip(piv_rows, piv_cols):
        if dense[row][ncols]:
            sol[column_order[col]] = dense[row][ncols]
    return sol
