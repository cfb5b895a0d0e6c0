# tests/unit/test_zlinalg.py

import itertools

import numpy as np
import pytest

from app.core.errors import RelationOutsideSpan
from app.operations.zlinalg import (
    DENSE_FILL,
    SparseIntMatrix,
    cokernel_invariants,
    crt_idempotent,
    kernel_mod_n,
    quotient_invariants,
    quotient_module,
    smith_normal_form,
    solve_mod_n,
)


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


# ---------------------------------------------
# Sparse matrices
# ---------------------------------------------

def test_sparse_entries_are_summed_and_pruned() -> None:
    m = SparseIntMatrix.from_entries(2, 2, [(0, 0, 3), (0, 0, -3), (1, 1, 2), (1, 1, 2)])
    assert m.entry_list() == [(1, 1, 4)]
    assert m.to_dense() == [[0, 0], [0, 4]]


def test_sparse_entry_out_of_range() -> None:
    with pytest.raises(ValueError):
        SparseIntMatrix.from_entries(2, 2, [(2, 0, 1)])


def test_sparse_matvec_and_transpose() -> None:
    m = SparseIntMatrix.from_dense([[1, 2, 0], [0, 0, 5]])
    assert m.matvec([1, 1, 1]) == [3, 5]
    assert m.matvec([1, 1, 1], modulus=4) == [3, 1]
    assert m.transpose().to_dense() == [[1, 0], [2, 0], [0, 5]]
    assert m.density == pytest.approx(0.5)


# ---------------------------------------------
# Smith normal form
# ---------------------------------------------

@pytest.mark.parametrize(
    "matrix, factors",
    [
        ([[2, 0], [0, 3]], [1, 6]),
        ([[2, 4], [6, 8]], [2, 4]),
        ([[0, 0], [0, 0]], []),
        ([[4]], [4]),
        ([[2, 0, 0], [0, 2, 0]], [2, 2]),
    ],
    ids=["coprime_diagonal", "two_by_two", "zero", "scalar", "wide"],
)
def test_smith_factors(matrix, factors) -> None:
    assert smith_normal_form(matrix).factors == factors


def test_smith_transforms_diagonalize(fake_matrix) -> None:
    for _ in range(5):
        a = fake_matrix(3, 4)
        res = smith_normal_form(a, with_transforms=True)
        d = _matmul(_matmul(res.U, a), res.V)
        for i, row in enumerate(d):
            for j, value in enumerate(row):
                expected = res.factors[i] if i == j and i < res.rank else 0
                assert value == expected, f"U·A·V is not the Smith form of {a}"
        for x, y in zip(res.factors, res.factors[1:]):
            assert y % x == 0


def test_cokernel_invariants() -> None:
    inv = cokernel_invariants([[2, 0], [0, 4], [0, 0]])
    assert inv.factors == [2, 4]
    assert inv.rank == 1


def test_smith_accepts_sparse() -> None:
    m = SparseIntMatrix.from_dense([[6, 0], [0, 4]])
    assert smith_normal_form(m).factors == [2, 12]


# ---------------------------------------------
# Z/n
# ---------------------------------------------

def test_kernel_mod_prime_power() -> None:
    assert kernel_mod_n([[2]], 4) == [[2]]


def test_kernel_vectors_solve_system(fake_matrix) -> None:
    for n in (6, 12, 8):
        a = fake_matrix(2, 4)
        kernel = kernel_mod_n(a, n)
        for v in kernel:
            assert all(x % n == 0 for x in np.asarray(a) @ np.asarray(v)), f"{v} is not in the kernel mod {n}"


def test_kernel_size_matches_brute_force() -> None:
    """The span of the returned generators is the whole solution set."""
    a = [[1, 2, 3]]
    n = 6
    kernel = kernel_mod_n(a, n)
    brute = {
        (x, y, z)
        for x in range(n)
        for y in range(n)
        for z in range(n)
        if (x + 2 * y + 3 * z) % n == 0
    }
    span = {(0, 0, 0)}
    for v in kernel:
        span |= {tuple((s[i] + k * v[i]) % n for i in range(3)) for s in span for k in range(n)}
    assert span == brute


def test_kernel_with_no_rows() -> None:
    assert sorted(kernel_mod_n(np.zeros((0, 2), dtype=int), 5, cols=2)) == [[0, 1], [1, 0]]


def test_kernel_rejects_small_modulus() -> None:
    with pytest.raises(ValueError):
        kernel_mod_n([[1]], 1)


def _span(gens, n: int) -> set[tuple[int, ...]]:
    span = {tuple(0 for _ in gens[0])} if gens else set()
    for v in gens:
        span |= {tuple((s[i] + k * v[i]) % n for i in range(len(v))) for s in span for k in range(n)}
    return span


def test_sparse_kernel_matches_brute_force() -> None:
    m = SparseIntMatrix.from_entries(3, 6, [(0, 0, 1), (0, 3, 2), (1, 1, 2), (2, 2, 1), (2, 4, 3)])
    assert m.density <= DENSE_FILL
    n = 4
    kernel = kernel_mod_n(m, n)
    brute = {x for x in itertools.product(range(n), repeat=6) if not any(m.matvec(x, modulus=n))}
    assert _span(kernel, n) == brute


@pytest.mark.parametrize("n", [12, 8, 15])
def test_sparse_and_dense_kernels_agree(n) -> None:
    """A chain of alternating unit and non-unit entries, eliminated sparsely."""
    entries = []
    for i in range(7):
        entries += [(i, i, 1 if i % 2 == 0 else 2), (i, i + 1, -1 if i % 3 else 3)]
    m = SparseIntMatrix.from_entries(7, 8, entries)
    sparse = kernel_mod_n(m, n)
    dense = kernel_mod_n(m.to_dense(), n)
    for v in sparse:
        assert not any(m.matvec(v, modulus=n)), f"{v} is not in the kernel mod {n}"
    columns = np.array(sparse).T if sparse else np.zeros((8, 0), dtype=int)
    for v in dense:
        assert solve_mod_n(columns, v, n) is not None, f"{v} is missing from the sparse kernel mod {n}"


def test_filled_sparse_matrix_goes_dense(fake_matrix) -> None:
    a = fake_matrix(3, 4, low=1, high=6)
    m = SparseIntMatrix.from_dense(a)
    assert m.density > DENSE_FILL
    for v in kernel_mod_n(m, 12):
        assert all(x % 12 == 0 for x in np.asarray(a) @ np.asarray(v))
    assert len(kernel_mod_n(m, 12)) == len(kernel_mod_n(a, 12))


def test_solve_mod_n(fake_vector) -> None:
    a = [[1, 2], [3, 4]]
    for _ in range(5):
        b = fake_vector(2, 10)
        x = solve_mod_n(a, b, 10)
        if x is not None:
            assert [(1 * x[0] + 2 * x[1]) % 10, (3 * x[0] + 4 * x[1]) % 10] == [v % 10 for v in b]
    assert solve_mod_n([[2]], [1], 4) is None
    assert solve_mod_n([[2]], [2], 4) in ([1], [3])


def test_crt_idempotent() -> None:
    e = crt_idempotent(12, 4)
    assert e % 4 == 1 and e % 3 == 0


# ---------------------------------------------
# Subquotients
# ---------------------------------------------

@pytest.mark.parametrize(
    "gens, rels, n, factors",
    [
        ([[1]], [[2]], 4, [2]),
        ([[1, 0], [0, 1]], [], 6, [6, 6]),
        ([[2, 0], [0, 3]], [], 6, [6]),
        ([[1, 0], [0, 1]], [[1, 1]], 4, [4]),
        ([[1, 0], [0, 1]], [[2, 0], [0, 2]], 4, [2, 2]),
    ],
    ids=["cyclic", "free_rank_two", "torsion_parts", "diagonal_relation", "mod_two"],
)
def test_quotient_invariants(gens, rels, n, factors) -> None:
    inv = quotient_invariants(gens, rels, n, dim=len(gens[0]))
    assert inv.factors == factors, f"Expected {factors}, got {inv.factors}"


def test_coordinates_reconstruct_vectors() -> None:
    mod = quotient_module([[1, 0], [0, 1]], [[2, 0]], 4)
    assert mod.invariants.factors == [2, 4]
    for v in ([1, 0], [0, 1], [3, 2], [2, 0]):
        coords = mod.coordinates(v)
        rebuilt = [0, 0]
        for coeff, rep in zip(coords, mod.representatives):
            rebuilt = [(r + coeff * x) % 4 for r, x in zip(rebuilt, rep)]
        assert mod.is_zero([(a - b) % 4 for a, b in zip(v, rebuilt)])
    assert mod.is_zero([2, 0])
    assert not mod.is_zero([0, 2])


def test_relation_outside_span() -> None:
    with pytest.raises(RelationOutsideSpan):
        quotient_module([[1, 0]], [[0, 1]], 5)
