from fractions import Fraction

from backend.origami import linalg


def test_rank_and_determinant():
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.determinant([[2, 1], [1, 1]]) == 1
    assert linalg.determinant([[1, 2], [2, 4]]) == 0


def test_solve():
    assert linalg.solve([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    assert linalg.solve([[1, 1], [2, 2]], [1, 2]) is None


def test_nullspace_parametrisation():
    free, basis = linalg.nullspace_parametrisation([[1, -1, 0]], 3)
    assert free == [1, 2]
    assert basis[0] == [1, 0]


def test_affine_parametrisation_inconsistent():
    assert linalg.affine_parametrisation([[1, 1], [1, 1]], [1, 2], 2) is None


def test_solution_lattice_index():
    assert linalg.solution_lattice_index([[Fraction(1)], [Fraction(1)]]) == 1
    assert linalg.solution_lattice_index([[Fraction(1, 2)], [Fraction(1)]]) == 2
    assert linalg.solution_lattice_index([]) == 1
