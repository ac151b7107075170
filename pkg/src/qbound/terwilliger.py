"""Quadruple-index pair-relation machinery for the Hamming scheme H(n, 4).

The 0/1 matrices M_{i,j}^{t,p} classify ordered pairs of n-fold Pauli letter
strings by (wt(alpha), wt(beta), |Supp(alpha) & Supp(beta)|,
#{positions with alpha == beta != I}).  The algebra they generate
block-diagonalizes into one symmetric block per pair (a, k) with
0 <= a <= k <= n+a-k, of dimension n+a-2k+1; ``blocks_from_quadstats``
applies that isomorphism so that positive semidefiniteness can be checked
block by block instead of at size 4^n.

Explicit M matrices are exposed only as a small-n test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .transforms import gamma

_EXPLICIT_N_CAP = 3


def valid_tuples(n: int) -> list[tuple[int, int, int, int]]:
    """All (i, j, t, p) with 0 <= p <= t <= min(i, j) and i+j <= n+t,
    in lexicographic order.  This ordering is the canonical variable order
    for solver variables and problem-file export."""
    out = []
    for i in range(n + 1):
        for j in range(n + 1):
            for t in range(min(i, j) + 1):
                if i + j > n + t:
                    continue
                for p in range(t + 1):
                    out.append((i, j, t, p))
    return out


def block_shapes(n: int) -> list[tuple[int, int, int]]:
    """(a, k, dim) for every block of the block-diagonal decomposition."""
    out = []
    for a in range(n + 1):
        for k in range(a, n + 1):
            dim = n + a - 2 * k + 1
            if dim < 1:
                break
            out.append((a, k, dim))
    return out


@dataclass
class QuadStats:
    """Map (i, j, t, p) -> value on the valid tuple domain.

    ``kind`` tags raw triple counts (sigma/mu/nu/eta) versus their
    normalized forms (x/u/v/y).
    """

    n: int
    values: dict[tuple[int, int, int, int], object]
    kind: str = ""

    @classmethod
    def from_flat(cls, n: int, flat: np.ndarray, kind: str = "") -> "QuadStats":
        base = n + 1
        values = {}
        domain = set(valid_tuples(n))
        for idx in np.nonzero(flat)[0]:
            i, rem = divmod(int(idx), base**3)
            j, rem = divmod(rem, base**2)
            t, p = divmod(rem, base)
            key = (i, j, t, p)
            if key not in domain:
                raise ValueError(f"count on invalid tuple {key}")
            values[key] = int(flat[idx])
        return cls(n, values, kind)

    def get(self, key: tuple[int, int, int, int]):
        return self.values.get(key, 0)

    def total(self):
        return sum(self.values.values())

    def normalized(self, set_size: int, kind: str = "") -> "QuadStats":
        """Divide each count by set_size * gamma_{i,j}^{t,p}, exactly."""
        out = {}
        for (i, j, t, p), v in self.values.items():
            g = gamma(i, j, t, p, self.n)
            if g == 0:
                raise ValueError(f"nonzero count on gamma-null tuple {(i, j, t, p)}")
            out[(i, j, t, p)] = Fraction(v, set_size * g)
        return QuadStats(self.n, out, kind)


@dataclass
class BlockFamily:
    """One symmetric matrix per (a, k) block of the decomposition."""

    n: int
    blocks: dict[tuple[int, int], np.ndarray]

    def min_eigenvalue(self) -> float:
        return min(float(np.linalg.eigvalsh(b)[0]) for b in self.blocks.values())

    def is_psd(self, tol: float = 1e-8) -> bool:
        return self.min_eigenvalue() >= -tol

    def eigenvalues(self) -> np.ndarray:
        return np.sort(np.concatenate([np.linalg.eigvalsh(b) for b in self.blocks.values()]))


def _comb(a: int, b: int) -> int:
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def beta_coeff(i: int, j: int, k: int, m: int, t: int) -> int:
    """Quadruple-binomial sum entering the block-diagonalization weights."""
    total = 0
    for u in range(m + 1):
        term = (
            _comb(u, t)
            * _comb(m - 2 * k, m - k - u)
            * _comb(m - k - u, i - u)
            * _comb(m - k - u, j - u)
        )
        if term:
            total += (-1) ** ((t - u) % 2) * term
    return total


def alpha_coeff(i: int, j: int, p: int, t: int, a: int, k: int, n: int) -> float:
    """Block-diagonalization weight alpha(i, j, p, t, a, k) at q = 4.

    Exact integers throughout; the lone irrational factor 3^{(i+j)/2 - t}
    is applied last (positive real root when i+j is odd).
    """
    if not (0 <= a <= k <= n + a - k):
        return 0.0
    if i < k or j < k or i > n + a - k or j > n + a - k:
        return 0.0
    b = beta_coeff(i - a, j - a, k - a, n - a, t - a)
    if b == 0:
        return 0.0
    s = 0
    for g in range(p + 1):
        c1 = _comb(a, g)
        c2 = _comb(t - a, p - g)
        if c1 == 0 or c2 == 0:
            continue
        s += (-1) ** ((a - g) % 2) * c1 * c2 * 2 ** (t - a - p + g)
    if s == 0:
        return 0.0
    half = i + j - 2 * t
    return float(b * s) * 3.0 ** (half / 2.0)


def block_coefficient_map(n: int) -> dict[tuple[int, int], dict[tuple[int, int, int, int], np.ndarray]]:
    """For each (a, k) block, the per-tuple coefficient matrices C with
    block(q) = sum_tuple q[tuple] * C[tuple]; C is symmetrized so that
    symmetric inputs give exactly symmetric blocks.

    Entries carry the extra row/column normalization
    C(n+a-2k, i-k)^{-1/2} on top of ``alpha_coeff``.  The unnormalized
    weights give blocks that are only diagonally congruent to the algebra
    images (same PSD verdicts, different spectra); the normalized form is
    the *-isomorphism, so eigenvalue sets match the 4^n-dimensional matrix.
    """
    tuples = valid_tuples(n)
    out: dict[tuple[int, int], dict[tuple[int, int, int, int], np.ndarray]] = {}
    for a, k, dim in block_shapes(n):
        norm = [1.0 / comb(n + a - 2 * k, r) ** 0.5 for r in range(dim)]
        coeffs: dict[tuple[int, int, int, int], np.ndarray] = {}
        for (i, j, t, p) in tuples:
            if i < k or j < k or i > n + a - k or j > n + a - k:
                continue
            val = alpha_coeff(i, j, p, t, a, k, n)
            if val == 0.0:
                continue
            val *= norm[i - k] * norm[j - k]
            mat = coeffs.setdefault((i, j, t, p), np.zeros((dim, dim)))
            mat[i - k, j - k] += val / 2.0
            mat[j - k, i - k] += val / 2.0
        out[(a, k)] = coeffs
    return out


def blocks_from_quadstats(q: QuadStats, coeff_map=None, asym_tol: float = 1e-9) -> BlockFamily:
    """Apply the block-diagonal isomorphism to a quadruple-index map.

    The input must be (i <-> j)-symmetric; the off-symmetry of the raw
    unsymmetrized image is checked against ``asym_tol`` as an internal
    consistency guard.
    """
    n = q.n
    if coeff_map is None:
        coeff_map = block_coefficient_map(n)
    blocks = {}
    for (a, k), coeffs in coeff_map.items():
        dim = n + a - 2 * k + 1
        raw = np.zeros((dim, dim))
        for key, mat in coeffs.items():
            v = q.get(key)
            if v:
                raw += float(v) * mat
        # coefficient matrices are pre-symmetrized; verify the input was too
        scale = max(1.0, float(np.abs(raw).max()))
        asym = _symmetry_defect(q, a, k, n)
        if asym > asym_tol * max(1.0, scale):
            raise ValueError(f"block ({a},{k}) asymmetry {asym} exceeds tolerance")
        blocks[(a, k)] = raw
    return BlockFamily(n, blocks)


def _symmetry_defect(q: QuadStats, a: int, k: int, n: int) -> float:
    worst = 0.0
    for (i, j, t, p), v in q.values.items():
        if i < k or j < k or i > n + a - k or j > n + a - k:
            continue
        w = q.get((j, i, t, p))
        worst = max(worst, abs(float(v) - float(w)))
    return worst


# ---------------------------------------------------------------------------
# explicit small-n oracle
# ---------------------------------------------------------------------------


def enumerate_letter_masks(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(x, z) masks of all 4^n Pauli letter strings, canonical index order:
    qubit q is the base-4 digit q with letter order I, X, Y, Z."""
    idx = np.arange(4**n, dtype=np.int64)
    xs = np.zeros(4**n, dtype=np.uint64)
    zs = np.zeros(4**n, dtype=np.uint64)
    for qbit in range(n):
        digit = (idx // 4**qbit) % 4
        xs |= ((digit == 1) | (digit == 2)).astype(np.uint64) << np.uint64(qbit)
        zs |= ((digit == 2) | (digit == 3)).astype(np.uint64) << np.uint64(qbit)
    return xs, zs


def build_M_explicit(n: int, i: int, j: int, t: int, p: int) -> np.ndarray:
    """Explicit 4^n x 4^n 0/1 pair-relation matrix (test oracle, n <= 3)."""
    if n > _EXPLICIT_N_CAP:
        raise ValueError(f"explicit matrices are capped at n <= {_EXPLICIT_N_CAP}")
    xs, zs = enumerate_letter_masks(n)
    supp = xs | zs
    w = np.bitwise_count(supp).astype(np.int64)
    sb = supp[:, None]
    sc = supp[None, :]
    tt = np.bitwise_count(sb & sc).astype(np.int64)
    prod_supp = (xs[:, None] ^ xs[None, :]) | (zs[:, None] ^ zs[None, :])
    pp = np.bitwise_count(sb & ~prod_supp).astype(np.int64)
    mat = (w[:, None] == i) & (w[None, :] == j) & (tt == t) & (pp == p)
    return mat.astype(np.int8)


def assemble_full_matrix(q: QuadStats) -> np.ndarray:
    """sum_tuple q[tuple] * M_tuple at explicit scale (test oracle, n <= 3)."""
    n = q.n
    out = np.zeros((4**n, 4**n))
    for key, v in q.values.items():
        if v:
            out = out + float(v) * build_M_explicit(n, *key)
    return out


def bose_mesner_generator(n: int, k: int) -> np.ndarray:
    """sum over i+j-t-p = k of M_{i,j}^{t,p}: the distance-k adjacency
    matrix of H(n, 4) (test oracle, n <= 3)."""
    out = np.zeros((4**n, 4**n), dtype=np.int8)
    for (i, j, t, p) in valid_tuples(n):
        if i + j - t - p == k:
            out += build_M_explicit(n, i, j, t, p)
    return out
