"""Exact arithmetic on the n-fold Pauli group.

Operators are stored as ``i^k * prod_j X_j^{x_j} Z_j^{z_j}`` with the
convention Y = i X Z, so every phase is an exact power of i.  Bit j of the
``xbits``/``zbits`` masks is qubit j, and qubit 0 is the leftmost letter of
the string form ("XZZXI" has X on qubit 0).

Groups are kept in symplectic reduced form (pivot order: x-block columns
first, then z-block), which makes membership-with-sign an O(g*m) reduction
instead of an enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .terwilliger import QuadStats

DEFAULT_SET_CAP = 2**24
DEFAULT_COSET_QUBIT_CAP = 12

_PREFIX_TO_PHASE = {"+": 0, "": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}
_PHASE_TO_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DimensionMismatchError(ValueError):
    """Operands act on different qubit counts."""


class GroupStructureError(ValueError):
    """Generator set violates a requested group property."""


class CapacityError(RuntimeError):
    """A requested enumeration exceeds the configured size cap."""


@dataclass(frozen=True)
class PauliOperator:
    """An element of the m-qubit Pauli group P^m, with exact phase."""

    m: int
    phase_exp: int
    xbits: int
    zbits: int

    def __post_init__(self):
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)
        mask = (1 << self.m) - 1
        if self.xbits & ~mask or self.zbits & ~mask:
            raise ValueError("bit mask wider than qubit count")

    # -- basic queries ------------------------------------------------

    @property
    def support(self) -> int:
        return self.xbits | self.zbits

    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.xbits | self.zbits).bit_count()

    def is_identity_letters(self) -> bool:
        return self.xbits == 0 and self.zbits == 0

    def phase(self) -> complex:
        return 1j**self.phase_exp

    def phase_stripped(self) -> "PauliOperator":
        """phi(P): drop the phase, keeping the Hermitian letter form.

        The letter form I/X/Y/Z has X^x Z^z phase equal to the number of
        Y letters (Y = i X Z).
        """
        y_count = (self.xbits & self.zbits).bit_count()
        return PauliOperator(self.m, y_count % 4, self.xbits, self.zbits)

    def dagger(self) -> "PauliOperator":
        k = (-self.phase_exp + 2 * (self.xbits & self.zbits).bit_count()) % 4
        return PauliOperator(self.m, k, self.xbits, self.zbits)

    def is_hermitian(self) -> bool:
        return self.dagger() == self

    # -- algebra ------------------------------------------------------

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return mul(self, other)

    def negate(self) -> "PauliOperator":
        return PauliOperator(self.m, self.phase_exp + 2, self.xbits, self.zbits)

    def tensor_identity(self, extra: int) -> "PauliOperator":
        """P tensor I^{extra} (identities appended on the high qubits)."""
        return PauliOperator(self.m + extra, self.phase_exp, self.xbits, self.zbits)

    # -- text and dense forms -----------------------------------------

    @classmethod
    def identity(cls, m: int) -> "PauliOperator":
        return cls(m, 0, 0, 0)

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Parse "<sign><letters>" with sign in {+, -, +i, -i} (optional)."""
        text = text.strip()
        split = 0
        while split < len(text) and text[split] in "+-i":
            split += 1
        prefix, letters = text[:split], text[split:]
        # A bare "i" prefix would be consumed from "I..." strings; letters
        # win when the whole text is letters.
        if prefix and all(ch in "IXYZ" for ch in text):
            prefix, letters = "", text
        if prefix not in _PREFIX_TO_PHASE:
            raise ValueError(f"bad sign prefix {prefix!r} in {text!r}")
        if not letters or any(ch not in _LETTER_TO_BITS for ch in letters):
            raise ValueError(f"bad Pauli letters in {text!r}")
        phase = _PREFIX_TO_PHASE[prefix]
        x = z = 0
        for q, ch in enumerate(letters):
            xb, zb = _LETTER_TO_BITS[ch]
            x |= xb << q
            z |= zb << q
            if ch == "Y":
                phase += 1
        return cls(len(letters), phase % 4, x, z)

    def __str__(self) -> str:
        letters = []
        y_count = 0
        for q in range(self.m):
            bits = ((self.xbits >> q) & 1, (self.zbits >> q) & 1)
            letters.append(_BITS_TO_LETTER[bits])
            if bits == (1, 1):
                y_count += 1
        prefix = _PHASE_TO_PREFIX[(self.phase_exp - y_count) % 4]
        return prefix + "".join(letters)

    def letters(self) -> str:
        return str(self.phase_stripped())[1:]

    def to_matrix(self) -> np.ndarray:
        """Dense 2^m x 2^m matrix; qubit 0 is the leftmost Kronecker factor."""
        y_count = (self.xbits & self.zbits).bit_count()
        letter_phase = 1j ** ((self.phase_exp - y_count) % 4)
        out = np.array([[letter_phase]], dtype=complex)
        for ch in self.letters():
            out = np.kron(out, _SINGLE_QUBIT[ch])
        return out

    def key(self) -> tuple[int, int, int]:
        return (self.phase_exp, self.xbits, self.zbits)


def mul(P: PauliOperator, Q: PauliOperator) -> PauliOperator:
    """Exact product PQ (Z^z X^x = (-1)^{z.x} X^x Z^z reordering)."""
    if P.m != Q.m:
        raise DimensionMismatchError(f"qubit counts differ: {P.m} vs {Q.m}")
    phase = P.phase_exp + Q.phase_exp + 2 * (P.zbits & Q.xbits).bit_count()
    return PauliOperator(P.m, phase % 4, P.xbits ^ Q.xbits, P.zbits ^ Q.zbits)


def commutes(P: PauliOperator, Q: PauliOperator) -> bool:
    """True iff the symplectic inner product sum(x_P z_Q + z_P x_Q) is even."""
    if P.m != Q.m:
        raise DimensionMismatchError(f"qubit counts differ: {P.m} vs {Q.m}")
    return ((P.xbits & Q.zbits).bit_count() + (P.zbits & Q.xbits).bit_count()) % 2 == 0


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


def _pivot(x: int, z: int, column_order: Sequence[int] | None, m: int) -> int:
    """Index of the leading column of (x|z) in the given column order.

    Columns 0..m-1 are x-bits, m..2m-1 are z-bits; default order is
    x-block first then z-block.  Returns 2m when the vector is zero.
    """
    vec = x | (z << m)
    if column_order is None:
        if vec == 0:
            return 2 * m
        return (vec & -vec).bit_length() - 1
    for rank, col in enumerate(column_order):
        if (vec >> col) & 1:
            return rank
    return 2 * m


def _column_bit(P: PauliOperator, col: int, m: int) -> int:
    if col < m:
        return (P.xbits >> col) & 1
    return (P.zbits >> (col - m)) & 1


@dataclass(frozen=True)
class PauliGroup:
    """Pauli subgroup in canonical symplectic reduced generator form.

    ``identity_phases`` lists the phase exponents k with i^k I in the group
    ({0} for stabilizer groups).  The order modulo global phase is
    2^{len(generators)}.
    """

    m: int
    generators: tuple[PauliOperator, ...]
    identity_phases: frozenset[int]
    abelian: bool
    stabilizer: bool

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def order(self) -> int:
        return 2**self.num_generators

    def member_sign(self, P: PauliOperator) -> complex | None:
        return member_sign(self, P)

    def contains(self, P: PauliOperator) -> bool:
        return self.member_sign(P) == 1

    def contains_letters(self, P: PauliOperator) -> bool:
        """Membership of phi(P) in phi(group)."""
        return self.member_sign(P) is not None

    def elements(self) -> list[PauliOperator]:
        """All 2^g elements (one per subset of generators; exact phases)."""
        if self.num_generators > 22:
            raise CapacityError(f"group too large to enumerate: 2^{self.num_generators}")
        out = [PauliOperator.identity(self.m)]
        for g in self.generators:
            out.extend(mul(e, g) for e in out)
        return out

    def element_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(phase_exp, xbits, zbits) arrays of all elements, vectorized."""
        if self.m > 62:
            raise CapacityError("bit-array path supports at most 62 qubits")
        if self.num_generators > 24:
            raise CapacityError(f"group too large to enumerate: 2^{self.num_generators}")
        ph = np.zeros(1, dtype=np.int64)
        xs = np.zeros(1, dtype=np.uint64)
        zs = np.zeros(1, dtype=np.uint64)
        for g in self.generators:
            gx = np.uint64(g.xbits)
            gz = np.uint64(g.zbits)
            cross = np.bitwise_count(zs & gx).astype(np.int64)
            ph2 = (ph + g.phase_exp + 2 * cross) % 4
            ph = np.concatenate([ph, ph2])
            xs = np.concatenate([xs, xs ^ gx])
            zs = np.concatenate([zs, zs ^ gz])
        return ph, xs, zs

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliGroup):
            return NotImplemented
        return (
            self.m == other.m
            and self.generators == other.generators
            and self.identity_phases == other.identity_phases
        )

    def __hash__(self):
        return hash((self.m, self.generators, self.identity_phases))


def group_close(
    generators: Iterable[PauliOperator],
    require_stabilizer: bool = False,
    require_abelian: bool = False,
    column_order: Sequence[int] | None = None,
) -> PauliGroup:
    """Close a generator list into canonical reduced form.

    Raises GroupStructureError when ``require_stabilizer`` is set and the
    closure contains -I, or when ``require_abelian``/``require_stabilizer``
    is set and two input generators anticommute (the diagnostic names the
    offending pair).
    """
    gens = list(generators)
    m = gens[0].m if gens else 0
    for g in gens:
        if g.m != m:
            raise DimensionMismatchError("generators act on different qubit counts")

    if require_stabilizer or require_abelian:
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                if not commutes(gens[a], gens[b]):
                    raise GroupStructureError(
                        f"generators {a} ({gens[a]}) and {b} ({gens[b]}) anticommute"
                    )

    rows: list[PauliOperator] = []
    identity_phases = {0}
    for g in gens:
        r = g
        for row in rows:
            pv = _pivot(row.xbits, row.zbits, column_order, m)
            col = column_order[pv] if column_order is not None else pv
            if _column_bit(r, col, m):
                r = mul(r, row)
        if r.is_identity_letters():
            if r.phase_exp:
                identity_phases.add(r.phase_exp)
            continue
        # back-reduce existing rows against the new pivot
        ppos = _pivot(r.xbits, r.zbits, column_order, m)
        col = column_order[ppos] if column_order is not None else ppos
        rows = [mul(row, r) if _column_bit(row, col, m) else row for row in rows]
        rows.append(r)
        rows.sort(key=lambda p: _pivot(p.xbits, p.zbits, column_order, m))

    if 1 in identity_phases or 3 in identity_phases:
        identity_phases = {0, 1, 2, 3}
    if require_stabilizer and 2 in identity_phases:
        raise GroupStructureError("closure contains -I (generated by a dependent subset)")

    abelian = all(
        commutes(rows[a], rows[b]) for a in range(len(rows)) for b in range(a + 1, len(rows))
    )
    if not abelian:
        # anticommuting members generate -I via the commutator
        identity_phases = identity_phases | {2}
    stabilizer = abelian and identity_phases == {0}
    if require_stabilizer and not stabilizer:
        raise GroupStructureError("closure is not a stabilizer group")
    return PauliGroup(m, tuple(rows), frozenset(identity_phases), abelian, stabilizer)


def member_sign(G: PauliGroup, P: PauliOperator) -> complex | None:
    """Phase lambda with lambda^-1 P in G exactly, else None.

    Works by symplectic reduction against the canonical generators; no
    enumeration.
    """
    if P.m != G.m:
        raise DimensionMismatchError(f"qubit counts differ: {P.m} vs {G.m}")
    member = PauliOperator.identity(G.m)
    r = P
    for row in G.generators:
        pv = _pivot(row.xbits, row.zbits, None, G.m)
        col = pv  # canonical groups use the default column order
        if _column_bit(r, col, G.m):
            r = mul(r, row)
            member = mul(member, row)
    if not r.is_identity_letters():
        return None
    # P * member == i^a I, and member^-1 is a group element
    lam = 1j**r.phase_exp
    return lam


def isotropic_subgroup(S: PauliGroup, c: int) -> PauliGroup:
    """{alpha in P^n : alpha tensor I^c in S} for S on n+c qubits."""
    if c < 0 or c > S.m:
        raise ValueError(f"invalid receiver-qubit count c={c} for m={S.m}")
    n = S.m - c
    if c == 0:
        return S
    m = S.m
    # eliminate the trailing-c-qubit columns first
    order = (
        [n + q for q in range(c)]
        + [m + n + q for q in range(c)]
        + [q for q in range(n)]
        + [m + q for q in range(n)]
    )
    reduced = group_close(S.generators, column_order=order)
    tail_mask = ((1 << c) - 1) << n
    kept = []
    for g in reduced.generators:
        if g.xbits & tail_mask or g.zbits & tail_mask:
            continue
        kept.append(PauliOperator(n, g.phase_exp, g.xbits, g.zbits))
    return group_close(kept)


# ---------------------------------------------------------------------------
# explicit operator sets
# ---------------------------------------------------------------------------


class PauliSet:
    """Deduplicated operator set, phase-stripped unless ``signed`` is set.

    Bulk data lives in numpy mask arrays so that enumerators and triple
    statistics stay vectorized.  Insertion order of first occurrences is
    preserved.
    """

    def __init__(self, ops: Iterable[PauliOperator], signed: bool = False, cap: int = DEFAULT_SET_CAP):
        ops = list(ops)
        if not ops:
            raise ValueError("empty operator set")
        m = ops[0].m
        if m > 62:
            raise CapacityError("PauliSet supports at most 62 qubits")
        seen = set()
        kept = []
        for p in ops:
            if p.m != m:
                raise DimensionMismatchError("set elements act on different qubit counts")
            q = p if signed else p.phase_stripped()
            k = q.key() if signed else (q.xbits, q.zbits)
            if k not in seen:
                seen.add(k)
                kept.append(q)
        if len(kept) > cap:
            raise CapacityError(f"set size {len(kept)} exceeds cap {cap}")
        self.m = m
        self.signed = signed
        self.ops = tuple(kept)
        self.xs = np.array([p.xbits for p in kept], dtype=np.uint64)
        self.zs = np.array([p.zbits for p in kept], dtype=np.uint64)
        self.phases = np.array([p.phase_exp for p in kept], dtype=np.int64)

    @classmethod
    def from_strings(cls, texts: Iterable[str], signed: bool = False) -> "PauliSet":
        return cls([PauliOperator.from_string(t) for t in texts], signed=signed)

    @classmethod
    def from_group(cls, G: PauliGroup, signed: bool = False) -> "PauliSet":
        ph, xs, zs = G.element_arrays()
        ops = [
            PauliOperator(G.m, int(p), int(x), int(z))
            for p, x, z in zip(ph, xs, zs)
        ]
        return cls(ops, signed=signed)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __contains__(self, P: PauliOperator) -> bool:
        q = P if self.signed else P.phase_stripped()
        k = q.key() if self.signed else (q.xbits, q.zbits)
        keys = (
            {(p.phase_exp, p.xbits, p.zbits) for p in self.ops}
            if self.signed
            else {(p.xbits, p.zbits) for p in self.ops}
        )
        return k in keys

    def letters_keyset(self) -> set[tuple[int, int]]:
        return {(p.xbits, p.zbits) for p in self.ops}


def coset_set(W: PauliSet, G: PauliGroup, cap_qubits: int = DEFAULT_COSET_QUBIT_CAP,
              cap: int = DEFAULT_SET_CAP) -> PauliSet:
    """Explicit phase-stripped set phi(W * G)."""
    if W.m != G.m:
        raise DimensionMismatchError(f"qubit counts differ: {W.m} vs {G.m}")
    if W.m > cap_qubits:
        raise CapacityError(f"coset expansion on {W.m} qubits exceeds cap {cap_qubits}")
    _, gx, gz = G.element_arrays()
    if len(W) * len(gx) > cap:
        raise CapacityError(f"coset size {len(W) * len(gx)} exceeds cap {cap}")
    xs = (W.xs[:, None] ^ gx[None, :]).ravel()
    zs = (W.zs[:, None] ^ gz[None, :]).ravel()
    ops = [PauliOperator(W.m, 0, int(x), int(z)).phase_stripped() for x, z in zip(xs, zs)]
    return PauliSet(ops, signed=False, cap=cap)


def weight_enumerator(T: PauliSet) -> list[int]:
    """W_i = #{alpha in T : wt(alpha) = i}, i = 0..m."""
    w = np.bitwise_count(T.xs | T.zs).astype(np.int64)
    counts = np.bincount(w, minlength=T.m + 1)
    return [int(c) for c in counts]


def distance_enumerator(T: PauliSet) -> list[Fraction]:
    """W'_i = |{(alpha, beta) in T^2 : wt(phi(alpha)phi(beta)) = i}| / |T|."""
    if len(T) == 0:
        raise ValueError("distance enumerator of an empty set")
    counts = np.zeros(T.m + 1, dtype=np.int64)
    chunk = max(1, 2**22 // max(1, len(T)))
    for lo in range(0, len(T), chunk):
        hi = min(len(T), lo + chunk)
        dx = T.xs[lo:hi, None] ^ T.xs[None, :]
        dz = T.zs[lo:hi, None] ^ T.zs[None, :]
        w = np.bitwise_count(dx | dz)
        counts += np.bincount(w.ravel().astype(np.int64), minlength=T.m + 1)[: T.m + 1]
    return [Fraction(int(cnt), len(T)) for cnt in counts]


def split_distance_enumerator(T: PauliSet, n: int, c: int) -> list[list[Fraction]]:
    """Distance enumerator refined by (weight on first n, weight on last c)."""
    if T.m != n + c:
        raise DimensionMismatchError(f"set on {T.m} qubits, expected {n + c}")
    head = np.uint64((1 << n) - 1)
    counts = np.zeros((n + 1) * (c + 1), dtype=np.int64)
    chunk = max(1, 2**22 // max(1, len(T)))
    for lo in range(0, len(T), chunk):
        hi = min(len(T), lo + chunk)
        dx = T.xs[lo:hi, None] ^ T.xs[None, :]
        dz = T.zs[lo:hi, None] ^ T.zs[None, :]
        supp = dx | dz
        wn = np.bitwise_count(supp & head).astype(np.int64)
        wc = np.bitwise_count(supp & ~head).astype(np.int64)
        counts += np.bincount((wn * (c + 1) + wc).ravel(), minlength=len(counts))
    return [
        [Fraction(int(counts[i * (c + 1) + j]), len(T)) for j in range(c + 1)]
        for i in range(n + 1)
    ]


# ---------------------------------------------------------------------------
# triple statistics for the quadruple-index machinery
# ---------------------------------------------------------------------------


def _pair_histogram(xs: np.ndarray, zs: np.ndarray, n: int, out: np.ndarray) -> None:
    """Accumulate quadruple-class counts over ordered pairs of a letter set."""
    supp = xs | zs
    w = np.bitwise_count(supp).astype(np.int64)
    base = n + 1
    k = len(xs)
    chunk = max(1, 2**21 // max(1, k))
    for lo in range(0, k, chunk):
        hi = min(k, lo + chunk)
        sb = supp[lo:hi, None]
        sc = supp[None, :]
        t = np.bitwise_count(sb & sc).astype(np.int64)
        prod_supp = (xs[lo:hi, None] ^ xs[None, :]) | (zs[lo:hi, None] ^ zs[None, :])
        p = np.bitwise_count(sb & ~prod_supp).astype(np.int64)
        key = ((w[lo:hi, None] * base + w[None, :]) * base + t) * base + p
        out += np.bincount(key.ravel(), minlength=len(out))


def _triple_counts(outer: PauliSet, inner: PauliSet, n: int) -> np.ndarray:
    flat = np.zeros((n + 1) ** 4, dtype=np.int64)
    for ax, az in zip(outer.xs, outer.zs):
        _pair_histogram(inner.xs ^ ax, inner.zs ^ az, n, flat)
    return flat


def triple_statistics(
    T1: PauliSet, T2: PauliSet | None = None, warn_not_subset: bool = True
) -> tuple[QuadStats, QuadStats, QuadStats, QuadStats]:
    """Raw triple distance-relation counts (sigma, mu, nu, eta).

    sigma counts (alpha, beta, gamma) in T1^3 with wt(alpha beta) = i,
    wt(alpha gamma) = j, |Supp(alpha beta) ^ Supp(alpha gamma)| = t and
    |Supp(alpha beta) \\ Supp(beta gamma)| = p; mu, nu, eta replace the
    memberships by T1 x T2 x T2, T2 x T1 x T1 and T2^3.
    """
    if T2 is None:
        T2 = T1
    if T1.m != T2.m:
        raise DimensionMismatchError(f"qubit counts differ: {T1.m} vs {T2.m}")
    n = T1.m
    if warn_not_subset and not T1.letters_keyset() <= T2.letters_keyset():
        import warnings

        warnings.warn("triple_statistics: T1 is not a subset of T2", stacklevel=2)
    sigma = _triple_counts(T1, T1, n)
    eta = sigma if T2 is T1 else _triple_counts(T2, T2, n)
    mu = sigma if T2 is T1 else _triple_counts(T1, T2, n)
    nu = sigma if T2 is T1 else _triple_counts(T2, T1, n)
    return (
        QuadStats.from_flat(n, sigma, "sigma"),
        QuadStats.from_flat(n, mu, "mu"),
        QuadStats.from_flat(n, nu, "nu"),
        QuadStats.from_flat(n, eta, "eta"),
    )


def sigma_y_all(m: int) -> PauliOperator:
    """sigma_y^{tensor m} = i^m X^m Z^m."""
    mask = (1 << m) - 1
    return PauliOperator(m, m % 4, mask, mask)
