"""Exact row reduction, kernels and linear solving.

Two engines share one canonical output convention:

* dense lists of scalars, for matrices over CycloScalar or raw rationals;
* sparse dict-of-column rows over raw rationals, for the wide, mostly
  empty constraint systems that turn up when cutting out harmonic spaces.

Reduced row echelon form is unique for a given row space, so every routine
returns the same matrix no matter how the input rows were ordered.  Kernel
bases use the standard free-column construction read off the echelon form,
which is therefore just as canonical.  Scalars only need +, -, *, inverse
and an exact zero test; CycloScalar and the rational type both qualify.
"""

from __future__ import annotations

from .errors import DomainError
from .scalars import QQ_ONE, QQ_ZERO, CycloScalar


def _inv(x):
    if isinstance(x, CycloScalar):
        return x.inv()
    return 1 / x


# ---------------------------------------------------------------------------
# dense engine


def rref(rows):
    """Canonical reduced row echelon form.

    Returns (echelon_rows, pivot_columns) with zero rows dropped, pivots
    monic, and every pivot column cleared above and below.
    """
    mat = [list(r) for r in rows]
    m = len(mat)
    n = len(mat[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        k = None
        for i in range(r, m):
            if mat[i][c]:
                k = i
                break
        if k is None:
            continue
        mat[r], mat[k] = mat[k], mat[r]
        piv = mat[r][c]
        if piv != 1:
            inv = _inv(piv)
            mat[r] = [a * inv for a in mat[r]]
        row_r = mat[r]
        for i in range(m):
            if i == r:
                continue
            f = mat[i][c]
            if f:
                mat[i] = [a - f * b if b else a for a, b in zip(mat[i], row_r)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return mat[:r], pivots


def rref_with_transform(rows):
    """Like rref, but also returns T with T @ rows = echelon (kept rows only)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    mat = [list(r) for r in rows]
    tr = [[QQ_ONE if i == j else QQ_ZERO for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        k = None
        for i in range(r, m):
            if mat[i][c]:
                k = i
                break
        if k is None:
            continue
        mat[r], mat[k] = mat[k], mat[r]
        tr[r], tr[k] = tr[k], tr[r]
        piv = mat[r][c]
        if piv != 1:
            inv = _inv(piv)
            mat[r] = [a * inv for a in mat[r]]
            tr[r] = [a * inv for a in tr[r]]
        row_r, tr_r = mat[r], tr[r]
        for i in range(m):
            if i == r:
                continue
            f = mat[i][c]
            if f:
                mat[i] = [a - f * b if b else a for a, b in zip(mat[i], row_r)]
                tr[i] = [a - f * b if b else a for a, b in zip(tr[i], tr_r)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return mat[:r], pivots, tr[:r]


def rank(rows) -> int:
    return len(rref(rows)[0])


def kernel_from_rref(ech, pivots, ncols, one=QQ_ONE):
    """Right-kernel basis from an echelon form: one vector per free column,
    with a `one` at the free column and minus the echelon entries at pivots.
    Canonical because the echelon form is."""
    pivset = set(pivots)
    zero = one - one
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [zero] * ncols
        v[j] = one
        for i, p in enumerate(pivots):
            e = ech[i][j]
            if e:
                v[p] = -e
        basis.append(v)
    return basis


def kernel_basis(rows, ncols, one=QQ_ONE):
    if not rows:
        zero = one - one
        return [[one if i == j else zero for j in range(ncols)] for i in range(ncols)]
    ech, piv = rref(rows)
    return kernel_from_rref(ech, piv, ncols, one)


class SpanSolver:
    """Membership and coordinates for the row span of a fixed matrix.

    express(v) returns coefficients c with sum(c_i * rows_i) == v, or None
    when v is outside the span.  Coordinates refer to the original rows;
    when those are dependent one valid solution is returned.
    """

    __slots__ = ("rows", "ech", "pivots", "transform", "ncols")

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        self.ech, self.pivots, self.transform = rref_with_transform(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _coords_in_echelon(self, vec):
        coeffs = [vec[p] for p in self.pivots]
        residual = list(vec)
        for i, c in enumerate(coeffs):
            if c:
                row = self.ech[i]
                residual = [a - c * b if b else a for a, b in zip(residual, row)]
        if any(residual):
            return None
        return coeffs

    def contains(self, vec) -> bool:
        return self._coords_in_echelon(vec) is not None

    def express(self, vec):
        coeffs = self._coords_in_echelon(vec)
        if coeffs is None:
            return None
        m = len(self.rows)
        out = [QQ_ZERO] * m
        some = None
        for c, trow in zip(coeffs, self.transform):
            if c:
                for j in range(m):
                    if trow[j]:
                        out[j] = out[j] + c * trow[j]
                        some = out[j]
        if some is not None and isinstance(some, CycloScalar):
            out = [CycloScalar.coerce(x) for x in out]
        return out


# ---------------------------------------------------------------------------
# matrix helpers (square, dense)


def identity_matrix(n, one=QQ_ONE):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    bt = [[b[i][j] for i in range(k)] for j in range(m)]
    out = []
    for row in a:
        orow = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            if acc is None:
                acc = row[0] - row[0]
            orow.append(acc)
        out.append(orow)
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        acc = None
        for x, y in zip(row, v):
            if x and y:
                acc = x * y if acc is None else acc + x * y
        if acc is None:
            acc = row[0] - row[0]
        out.append(acc)
    return out


def mat_eq(a, b) -> bool:
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if x != y:
                return False
    return True


def mat_inv(a):
    n = len(a)
    aug = [list(row) + list(ident) for row, ident in
           zip(a, identity_matrix(n, _one_like(a)))]
    ech, piv = rref(aug)
    if piv != list(range(n)):
        raise DomainError("matrix is singular")
    return [row[n:] for row in ech]


def _one_like(a):
    x = a[0][0]
    if isinstance(x, CycloScalar):
        return CycloScalar.rational(1)
    return QQ_ONE


def det(a):
    n = len(a)
    mat = [list(r) for r in a]
    one = _one_like(a)
    result = one
    sign = 1
    for c in range(n):
        k = None
        for i in range(c, n):
            if mat[i][c]:
                k = i
                break
        if k is None:
            return one - one
        if k != c:
            mat[c], mat[k] = mat[k], mat[c]
            sign = -sign
        piv = mat[c][c]
        result = result * piv
        inv = _inv(piv)
        row_c = [x * inv for x in mat[c]]
        mat[c] = row_c
        for i in range(c + 1, n):
            f = mat[i][c]
            if f:
                mat[i] = [a2 - f * b2 if b2 else a2 for a2, b2 in zip(mat[i], row_c)]
    if sign < 0:
        result = -result
    return result


# ---------------------------------------------------------------------------
# sparse engine over raw rationals

# Rows are dicts {column: rational}; zero entries are absent.  Used for the
# wide annihilator systems in the harmonics layer, where each constraint row
# touches only a handful of monomials.  Pivot rows are chosen shortest-first
# to limit fill-in; the final full reduction makes the result canonical.


def sparse_rref(rows, ncols):
    """Canonical reduced echelon form of sparse rational rows.

    Returns (echelon_rows, pivots) where echelon_rows are dicts and
    echelon_rows[i] has a 1 at pivots[i].
    """
    # shortest rows first keeps fill-in down; ties by lead column
    work = sorted((dict(r) for r in rows if r),
                  key=lambda r: (len(r), min(r)), reverse=True)
    ech = []        # echelon rows, admission order; support ⊆ [pivot, ncols)
    ech_piv = []
    piv_of_col = {}
    while work:
        row = _sparse_reduce(work.pop(), ech, piv_of_col)
        if not row:
            continue
        lead = min(row)
        if row[lead] != 1:
            inv = 1 / row[lead]
            row = {c: v * inv for c, v in row.items()}
        piv_of_col[lead] = len(ech)
        ech.append(row)
        ech_piv.append(lead)
    # backward pass in descending pivot order: rows reduced so far contribute
    # only non-pivot columns, so one sweep over the recorded hits suffices
    order = sorted(range(len(ech)), key=lambda i: ech_piv[i])
    for idx in range(len(order) - 1, -1, -1):
        i = order[idx]
        hits = sorted(c for c in ech[i] if c != ech_piv[i] and c in piv_of_col)
        if not hits:
            continue
        acc = dict(ech[i])
        for c in hits:
            f = acc.get(c)
            if f:
                _sparse_axpy(acc, -f, ech[piv_of_col[c]])
        ech[i] = acc
    ech_sorted = [ech[i] for i in order]
    piv_sorted = [ech_piv[i] for i in order]
    return ech_sorted, piv_sorted


def _sparse_reduce(row, ech, piv_of_col):
    """Eliminate the row's lead against admitted pivots until it stops being
    a pivot column; entries at later pivot columns may remain (the backward
    pass clears those)."""
    row = dict(row)
    while row:
        lead = min(row)
        j = piv_of_col.get(lead)
        if j is None:
            return row
        _sparse_axpy(row, -row[lead], ech[j])
    return row


def _sparse_axpy(row, f, other):
    for c, v in other.items():
        cur = row.get(c)
        if cur is None:
            nv = f * v
            if nv:
                row[c] = nv
        else:
            nv = cur + f * v
            if nv:
                row[c] = nv
            else:
                del row[c]


def sparse_kernel(ech, pivots, ncols):
    """Right-kernel basis (dense rational vectors) from a sparse echelon form."""
    pivset = set(pivots)
    col_entries = {}
    for i, row in enumerate(ech):
        for c, v in row.items():
            if c not in pivset:
                col_entries.setdefault(c, []).append((i, v))
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [QQ_ZERO] * ncols
        v[j] = QQ_ONE
        for i, val in col_entries.get(j, ()):
            v[pivots[i]] = -val
        basis.append(v)
    return basis
