import random

import pytest

from reflharm.errors import DomainError
from reflharm.linalg import (
    SpanSolver,
    det,
    identity_matrix,
    kernel_basis,
    mat_eq,
    mat_inv,
    mat_mul,
    mat_vec,
    rank,
    rref,
    sparse_kernel,
    sparse_rref,
)
from reflharm.scalars import QQ, CycloScalar


def rand_matrix(rng, m, n, density=1.0, span=6):
    return [[QQ(rng.randint(-span, span)) if rng.random() < density else QQ(0)
             for _ in range(n)] for _ in range(m)]


def test_rref_known_example():
    ech, piv = rref([[QQ(0), QQ(2), QQ(4)], [QQ(1), QQ(1), QQ(1)]])
    assert piv == [0, 1]
    assert ech == [[QQ(1), QQ(0), QQ(-1)], [QQ(0), QQ(1), QQ(2)]]


def test_rref_is_canonical_under_row_shuffle():
    rng = random.Random(4)
    for _ in range(25):
        m, n = rng.randint(1, 6), rng.randint(1, 7)
        mat = rand_matrix(rng, m, n, density=0.7)
        ech1, piv1 = rref(mat)
        shuffled = mat[:]
        rng.shuffle(shuffled)
        # mixing rows changes nothing either
        if len(shuffled) >= 2:
            shuffled[0] = [a + b for a, b in zip(shuffled[0], shuffled[1])]
        ech2, piv2 = rref(shuffled)
        assert piv1 == piv2
        assert ech1 == ech2


def test_kernel_vectors_annihilated():
    rng = random.Random(9)
    for _ in range(25):
        m, n = rng.randint(1, 5), rng.randint(1, 8)
        mat = rand_matrix(rng, m, n, density=0.6)
        ker = kernel_basis(mat, n)
        assert len(ker) == n - rank(mat)
        for v in ker:
            assert all(not x for x in mat_vec(mat, v))


def test_kernel_of_nothing_is_identity():
    assert kernel_basis([], 3) == identity_matrix(3)


def test_span_solver_roundtrip():
    rng = random.Random(17)
    for _ in range(25):
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        mat = rand_matrix(rng, m, n)
        solver = SpanSolver(mat)
        coeffs = [QQ(rng.randint(-3, 3)) for _ in range(m)]
        target = [sum((c * row[j] for c, row in zip(coeffs, mat)), QQ(0))
                  for j in range(n)]
        got = solver.express(target)
        assert got is not None
        rebuilt = [sum((c * row[j] for c, row in zip(got, mat)), QQ(0))
                   for j in range(n)]
        assert rebuilt == target
        assert solver.contains(target)


def test_span_solver_rejects_outside_vector():
    solver = SpanSolver([[QQ(1), QQ(0), QQ(0)], [QQ(0), QQ(1), QQ(0)]])
    assert solver.express([QQ(0), QQ(0), QQ(1)]) is None
    assert not solver.contains([QQ(1), QQ(1), QQ(1)])


def test_matrix_inverse():
    rng = random.Random(23)
    found = 0
    while found < 10:
        n = rng.randint(1, 4)
        a = rand_matrix(rng, n, n)
        if not det(a):
            continue
        found += 1
        inv = mat_inv(a)
        assert mat_eq(mat_mul(a, inv), identity_matrix(n))
        assert mat_eq(mat_mul(inv, a), identity_matrix(n))


def test_singular_inverse_rejected():
    with pytest.raises(DomainError):
        mat_inv([[QQ(1), QQ(2)], [QQ(2), QQ(4)]])


def test_det_values_and_multiplicativity():
    assert det([[QQ(2)]]) == 2
    assert det([[QQ(1), QQ(2)], [QQ(3), QQ(4)]]) == -2
    rng = random.Random(3)
    for _ in range(15):
        n = rng.randint(1, 4)
        a = rand_matrix(rng, n, n)
        b = rand_matrix(rng, n, n)
        assert det(mat_mul(a, b)) == det(a) * det(b)


def test_det_and_rref_over_cyclotomics():
    i = CycloScalar.root_of_unity(4)
    one = CycloScalar.rational(1)
    zero = CycloScalar.rational(0)
    rot = [[zero, -one], [one, zero]]          # rotation by i as a real pair
    assert det(rot) == 1
    diag = [[i, zero], [zero, i.conj()]]
    assert det(diag) == 1
    ech, piv = rref([[i, one], [zero, one]])
    assert piv == [0, 1]
    assert ech[0][0] == 1 and ech[1][1] == 1
    inv = mat_inv(diag)
    assert mat_eq(mat_mul(diag, inv), identity_matrix(2, one))


def test_sparse_matches_dense_rref():
    rng = random.Random(41)
    for _ in range(20):
        m, n = rng.randint(1, 8), rng.randint(1, 10)
        mat = rand_matrix(rng, m, n, density=0.35)
        ech_d, piv_d = rref(mat)
        rows_s = [{j: v for j, v in enumerate(row) if v} for row in mat]
        ech_s, piv_s = sparse_rref(rows_s, n)
        assert piv_s == piv_d
        dense_back = [[row.get(j, QQ(0)) for j in range(n)] for row in ech_s]
        assert dense_back == ech_d
        ker_d = kernel_basis(mat, n)
        ker_s = sparse_kernel(ech_s, piv_s, n)
        assert ker_s == ker_d


def test_sparse_rref_empty_and_zero_rows():
    ech, piv = sparse_rref([{}, {}], 4)
    assert ech == [] and piv == []
    ech, piv = sparse_rref([{2: QQ(5)}], 4)
    assert piv == [2]
    assert ech == [{2: QQ(1)}]
