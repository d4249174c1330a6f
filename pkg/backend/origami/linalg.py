from fractions import Fraction

Matrix = list[list[Fraction]]


def to_fractions(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows) -> tuple[Matrix, list[int]]:
    """
    Reduced row echelon form over the rationals, pivots chosen left to right.

    Args:
        rows: Matrix entries (anything Fraction accepts).

    Returns:
        tuple[Matrix, list[int]]: Non-zero rows of the reduced matrix and their pivot columns.
    """
    matrix = to_fractions(rows)
    if not matrix:
        return [], []
    n_cols = len(matrix[0])
    pivots = []
    rank = 0
    for col in range(n_cols):
        pivot_row = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot_row is None:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        lead = matrix[rank][col]
        matrix[rank] = [x / lead for x in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != 0:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(matrix):
            break
    return matrix[:rank], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def determinant(rows) -> Fraction:
    matrix = to_fractions(rows)
    size = len(matrix)
    det = Fraction(1)
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if matrix[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            matrix[col], matrix[pivot_row] = matrix[pivot_row], matrix[col]
            det = -det
        det *= matrix[col][col]
        for r in range(col + 1, size):
            factor = matrix[r][col] / matrix[col][col]
            if factor:
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[col])]
    return det


def solve(rows, rhs) -> list[Fraction] | None:
    """Unique solution of a square system, None if singular."""
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    n = len(rows[0]) if rows else 0
    if len(pivots) != n or (pivots and pivots[-1] == n):
        return None
    return [reduced[k][n] for k in range(n)]


def nullspace_parametrisation(rows, n_cols: int) -> tuple[list[int], Matrix]:
    """
    Express solutions of ``rows @ x = 0`` through the free (non-pivot) coordinates.

    Returns:
        tuple[list[int], Matrix]: Free column indices, and a matrix B with one row per
            original coordinate such that x = B @ x_free.
    """
    reduced, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = [[Fraction(0)] * len(free) for _ in range(n_cols)]
    for k, col in enumerate(free):
        basis[col][k] = Fraction(1)
    for row, pivot in zip(reduced, pivots):
        for k, col in enumerate(free):
            basis[pivot][k] = -row[col]
    return free, basis


def dot(a, b) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def affine_parametrisation(rows, rhs, n_cols: int) -> tuple[list[Fraction], list[int], Matrix] | None:
    """
    Solutions of ``rows @ x = rhs`` as x = x0 + B @ x_free; None when the system is inconsistent.
    """
    if not rows:
        free, basis = nullspace_parametrisation([], n_cols)
        return [Fraction(0)] * n_cols, free, basis
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == n_cols:
        return None
    free, basis = nullspace_parametrisation([row[:n_cols] for row in reduced], n_cols)
    origin = [Fraction(0)] * n_cols
    for row, pivot in zip(reduced, pivots):
        origin[pivot] = row[n_cols]
    return origin, free, basis


def affine_rank(points) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in points[1:]])


def solution_lattice_index(basis: Matrix) -> int:
    """
    Index in Z^free of the free coordinates whose image ``basis @ x_free`` is integral.

    Computed as the order of the subgroup of (Q/Z)^n generated by the columns of ``basis``.
    """
    if not basis or not basis[0]:
        return 1
    columns = [tuple(row[k] % 1 for row in basis) for k in range(len(basis[0]))]
    zero = tuple(Fraction(0) for _ in basis)
    group = {zero}
    frontier = [zero]
    while frontier:
        element = frontier.pop()
        for column in columns:
            moved = tuple((a + b) % 1 for a, b in zip(element, column))
            if moved not in group:
                group.add(moved)
                frontier.append(moved)
    return len(group)
