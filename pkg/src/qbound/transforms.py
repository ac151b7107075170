"""Exact 4-ary Kravchuk polynomials, (split) MacWilliams and shadow
transforms, and the multinomial weights of the quadruple-index machinery.

Everything here is exact integer / rational arithmetic (``fractions.Fraction``).
Floats appear in an output only when they appear in the input.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial


def kravchuk(i: int, k: int, n: int, q: int = 4) -> int:
    """K_i(k, n) for the Hamming scheme H(n, q), exact.

    K_i(k, n) = sum_{j=0}^{i} (-1)^j (q-1)^{i-j} C(k, j) C(n-k, i-j).

    The summation starts at j = 0; K_0 == 1 for every k.
    """
    if not (0 <= i <= n and 0 <= k <= n):
        raise ValueError(f"kravchuk indices out of range: i={i}, k={k}, n={n}")
    return sum(
        (-1) ** j * (q - 1) ** (i - j) * comb(k, j) * comb(n - k, i - j)
        for j in range(i + 1)
    )


def kravchuk_table(n: int, q: int = 4) -> list[list[int]]:
    """(n+1) x (n+1) table T[i][k] = K_i(k, n)."""
    return [[kravchuk(i, k, n, q) for k in range(n + 1)] for i in range(n + 1)]


def gamma(i: int, j: int, t: int, p: int, n: int) -> int:
    """Number of ordered pairs (alpha, beta) of n-fold Pauli strings in a
    fixed quadruple class:  2^{t-p} 3^{i+j-t} * multinomial(n; p, t-p, i-t, j-t).

    Returns 0 for index tuples outside the valid domain
    0 <= p <= t <= min(i, j), i + j <= n + t.
    """
    if not (0 <= p <= t <= min(i, j) and i + j <= n + t):
        return 0
    parts = (p, t - p, i - t, j - t)
    rest = n - sum(parts)
    if rest < 0:
        return 0
    multi = factorial(n)
    for a in parts:
        multi //= factorial(a)
    multi //= factorial(rest)
    return 2 ** (t - p) * 3 ** (i + j - t) * multi


def macwilliams_split(grid, M, n: int, c: int):
    """Split MacWilliams transform of an (n+1) x (c+1) enumerator grid:

        B[i][j] = (M / 2^{n+c}) * sum_{u,v} K_i(u, n) K_j(v, c) A[u][v]

    Exact when the grid entries are ints/Fractions; float grids give floats.
    """
    _check_shape(grid, n, c)
    Kn = kravchuk_table(n)
    Kc = kravchuk_table(c)
    scale = Fraction(M, 2 ** (n + c))
    out = []
    for i in range(n + 1):
        row = []
        for j in range(c + 1):
            acc = 0
            for u in range(n + 1):
                for v in range(c + 1):
                    acc += Kn[i][u] * Kc[j][v] * grid[u][v]
            row.append(_scaled(acc, scale))
        out.append(row)
    return out


def shadow_transform_split(grid, n: int, c: int):
    """Signed (shadow) transform of an (n+1) x (c+1) enumerator grid:

        Sh[i][j] = sum_{u,v} (-1)^{u+v} K_i(u, n) K_j(v, c) A[u][v]

    Unscaled; a code-level shadow enumerator is M/2^{n+c} (or M^2/2^{n+c})
    times this, depending on whether Tr(P Phat) vanishes.
    """
    _check_shape(grid, n, c)
    Kn = kravchuk_table(n)
    Kc = kravchuk_table(c)
    out = []
    for i in range(n + 1):
        row = []
        for j in range(c + 1):
            acc = 0
            for u in range(n + 1):
                for v in range(c + 1):
                    acc += (-1) ** (u + v) * Kn[i][u] * Kc[j][v] * grid[u][v]
            row.append(acc)
        out.append(row)
    return out


def macwilliams_vector(vec, M, n: int):
    """Unsplit MacWilliams transform: B_j = (M/2^n) sum_i K_j(i, n) A_i."""
    grid = [[a] for a in vec]
    return [row[0] for row in macwilliams_split(grid, M, n, 0)]


def shadow_vector(vec, n: int):
    """Unsplit signed transform: Sh_j = sum_i (-1)^i K_j(i, n) A_i."""
    grid = [[a] for a in vec]
    return [row[0] for row in shadow_transform_split(grid, n, 0)]


def _scaled(value, scale: Fraction):
    if isinstance(value, float):
        return float(scale) * value
    out = scale * value
    if isinstance(out, Fraction) and out.denominator == 1:
        return int(out)
    return out


def _check_shape(grid, n: int, c: int) -> None:
    if len(grid) != n + 1 or any(len(row) != c + 1 for row in grid):
        raise ValueError(
            f"grid shape mismatch: expected {(n + 1)}x{(c + 1)}, "
            f"got {len(grid)}x{len(grid[0]) if grid else 0}"
        )
