"""Exact sparse Gaussian elimination over the Gaussian rationals.

Rows are dicts column->GaussianRational; no floating point anywhere.
"""

from .paramfield import GaussianRational, ZERO, ONE


def eliminate(rows, ncols):
    """Forward-eliminate sparse rows in place; returns list of pivot columns."""
    work = [dict(r) for r in rows if r]
    pivots = []
    pivot_rows = []
    for col in range(ncols):
        pr = None
        for idx, r in enumerate(work):
            if col in r:
                pr = idx
                break
        if pr is None:
            continue
        row = work.pop(pr)
        inv = row[col].inverse()
        row = {c: v * inv for c, v in row.items()}
        nxt = []
        for r in work:
            if col in r:
                f = r[col]
                out = {}
                for c, v in r.items():
                    if c == col:
                        continue
                    w = v - f * row.get(c, ZERO)
                    if not w.is_zero():
                        out[c] = w
                for c, v in row.items():
                    if c != col and c not in r:
                        w = -f * v
                        if not w.is_zero():
                            out[c] = w
                if out:
                    nxt.append(out)
            else:
                nxt.append(r)
        work = nxt
        pivots.append(col)
        pivot_rows.append(row)
        if not work:
            break
    return pivots, pivot_rows


def rank(rows, ncols):
    pivots, _ = eliminate(rows, ncols)
    return len(pivots)


def nullspace(rows, ncols):
    """Basis of the exact nullspace of the sparse row system.

    Returns a list of dicts column->GaussianRational, one per free column,
    each normalized so the free column has coefficient 1.
    """
    pivots, prows = eliminate(rows, ncols)
    # back-substitute to reduced echelon form
    piv_of_col = {c: i for i, c in enumerate(pivots)}
    for i in range(len(prows) - 1, -1, -1):
        row = prows[i]
        for c in list(row.keys()):
            j = piv_of_col.get(c)
            if j is None or j <= i:
                continue
            f = row[c]
            other = prows[j]
            for cc, v in other.items():
                if cc == pivots[j]:
                    continue
                w = row.get(cc, ZERO) - f * v
                if w.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = w
            row.pop(c, None)
        prows[i] = row
    free = [c for c in range(ncols) if c not in piv_of_col]
    basis = []
    for fc in free:
        vec = {fc: ONE}
        for i, pc in enumerate(pivots):
            v = prows[i].get(fc)
            if v is not None:
                vec[pc] = -v
        basis.append(vec)
    return basis


def solve_in_span(columns, target, ncols_hint=None):
    """Solve sum_j c_j * columns[j] == target exactly.

    columns and target are dicts key->GaussianRational over an arbitrary key
    space.  Returns the coefficient list, or None if the system is
    inconsistent.  Raises ValueError if the solution is not unique.
    """
    keys = {}
    for col in columns:
        for k in col:
            keys.setdefault(k, len(keys))
    for k in target:
        keys.setdefault(k, len(keys))
    m = len(columns)
    rows = []
    for k, ridx in keys.items():
        row = {}
        for j, col in enumerate(columns):
            v = col.get(k)
            if v is not None and not v.is_zero():
                row[j] = v
        t = target.get(k)
        if t is not None and not t.is_zero():
            row[m] = t
        if row:
            rows.append(row)
    if not rows:
        return [ZERO] * m
    pivots, prows = eliminate(rows, m + 1)
    if m in pivots:
        return None  # inconsistent
    if len(pivots) < m:
        raise ValueError("solution not unique: rank %d < %d" % (len(pivots), m))
    # back substitution: columns are 0..m-1 pivots in order
    sol = [ZERO] * m
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        acc = prows[i].get(m, ZERO)
        for cc, v in prows[i].items():
            if cc != m and cc != c:
                acc = acc - v * sol[cc]
        sol[c] = acc
    return sol
