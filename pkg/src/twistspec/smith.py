"""Exact integer linear algebra on lists of Python ints.

Python integers never overflow, so nothing here needs overflow checks.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

IntMatrix = list[list[int]]


def _eye(k: int) -> IntMatrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _as_int_matrix(M) -> IntMatrix:
    rows = [[int(x) for x in row] for row in M]
    for row, orig in zip(rows, M):
        for x, y in zip(row, orig):
            if x != y:
                raise ValueError("matrix entries must be integers")
    return rows


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def smith_normal_form(M) -> tuple[IntMatrix, list[int], IntMatrix]:
    """Return ``(U, d, V)`` with ``U @ M @ V == diag(d)`` for a square matrix.

    ``U`` and ``V`` are unimodular, ``d[i] >= 0`` and ``d[i] | d[i+1]``.
    """
    A = _as_int_matrix(M)
    k = len(A)
    if any(len(row) != k for row in A):
        raise ValueError("square matrix expected")
    U, V = _eye(k), _eye(k)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for X in (A, V):
            for row in X:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        for X in (A, U):
            X[dst] = [x + c * y for x, y in zip(X[dst], X[src])]

    def add_col(src, dst, c):
        for X in (A, V):
            for row in X:
                row[dst] += c * row[src]

    for t in range(k):
        # pivot: smallest nonzero |entry| in the trailing block
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, k) for j in range(t, k) if A[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            done = True
            for i in range(t + 1, k):
                q = A[i][t] // p
                if q:
                    add_row(t, i, -q)
                if A[i][t]:
                    done = False
            for j in range(t + 1, k):
                q = A[t][j] // p
                if q:
                    add_col(t, j, -q)
                if A[t][j]:
                    done = False
            if not done:
                continue
            # pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, k) for j in range(t + 1, k) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    d = [A[i][i] for i in range(k)]
    return U, d, V


def det_bareiss(M) -> int:
    """Exact determinant by fraction-free elimination."""
    A = _as_int_matrix(M)
    k = len(A)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for t in range(k - 1):
        if A[t][t] == 0:
            swap = next((i for i in range(t + 1, k) if A[i][t]), None)
            if swap is None:
                return 0
            A[t], A[swap] = A[swap], A[t]
            sign = -sign
        for i in range(t + 1, k):
            for j in range(t + 1, k):
                A[i][j] = (A[i][j] * A[t][t] - A[i][t] * A[t][j]) // prev
        prev = A[t][t]
    return sign * A[k - 1][k - 1]


def kernel_lattice(coeffs: Sequence[int], modulus: int) -> IntMatrix:
    """Column generators of ``{x in Z^g : coeffs . x = 0 mod modulus}``.

    The result is a g x g matrix of full rank whose determinant has absolute
    value equal to the index of the kernel.
    """
    c = [int(x) % modulus for x in coeffs]
    g = len(c)
    if modulus < 1:
        raise ValueError("modulus must be positive")
    # column operations V with c @ V = (h, 0, ..., 0)
    V = _eye(g)
    row = list(c)
    for j in range(1, g):
        while row[j]:
            q = row[0] // row[j] if row[j] else 0
            row[0] -= q * row[j]
            for r in V:
                r[0] -= q * r[j]
            row[0], row[j] = row[j], row[0]
            for r in V:
                r[0], r[j] = r[j], r[0]
    h = abs(row[0])
    scale = modulus // gcd(h, modulus) if h else 1
    for r in V:
        r[0] *= scale
    return V


def solve_linear_congruence(k: int, a: int, d: int) -> list[int]:
    """All ``b`` in ``0..d-1`` with ``k * b = a (mod d)``."""
    return [b for b in range(d) if (k * b - a) % d == 0]
