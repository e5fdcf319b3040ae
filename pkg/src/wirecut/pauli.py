"""Binary-symplectic algebra for n-qubit Pauli strings.

A Pauli string on n qubits is stored as two n-bit masks (``zbits``,
``xbits``); bit q-1 refers to qubit q.  The represented operator is the
hermitian tensor product of single-qubit letters

    (z, x) = (0,0) -> I, (0,1) -> X, (1,1) -> Y, (1,0) -> Z,

i.e. the phase (-i)^(z.x) of the Z^z X^x product is absorbed so every
string has eigenvalues +-1.  Products are tracked with their exact phase
(a fourth root of unity); commutation is the symplectic inner product
over GF(2).  Dense realizations back all of this as an oracle for small n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceLimitError

MAX_QUBITS = 16
MAX_DENSE_QUBITS = 10

_LETTERS = "IXYZ"
# letter -> (z, x)
_LETTER_BITS = {"I": (0, 0), "X": (0, 1), "Y": (1, 1), "Z": (1, 0)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}

_DENSE_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Immutable n-qubit Pauli string in binary-symplectic form."""

    n: int
    zbits: int
    xbits: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ResourceLimitError(f"qubit count {self.n} outside 1..{MAX_QUBITS}")
        mask = (1 << self.n) - 1
        if self.zbits & ~mask or self.xbits & ~mask:
            raise InvalidInputError("bit masks exceed qubit count")
        if self.zbits < 0 or self.xbits < 0:
            raise InvalidInputError("bit masks must be nonnegative")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse text form, e.g. "XZI"; leftmost letter is qubit 1."""
        if not label or any(ch not in _LETTER_BITS for ch in label):
            raise InvalidInputError(f"invalid Pauli label {label!r}")
        z = x = 0
        for q, ch in enumerate(label):  # qubit q+1 -> bit q
            lz, lx = _LETTER_BITS[ch]
            z |= lz << q
            x |= lx << q
        return cls(len(label), z, x)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @property
    def label(self) -> str:
        return "".join(
            _BITS_LETTER[((self.zbits >> q) & 1, (self.xbits >> q) & 1)]
            for q in range(self.n)
        )

    @property
    def is_identity(self) -> bool:
        return self.zbits == 0 and self.xbits == 0

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return (self.zbits | self.xbits).bit_count()

    def bit_vector(self) -> tuple[int, ...]:
        """The 2n-bit vector (z_1..z_n, x_1..x_n)."""
        return tuple((self.zbits >> q) & 1 for q in range(self.n)) + tuple(
            (self.xbits >> q) & 1 for q in range(self.n)
        )

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class PhasedPauli:
    """A Pauli string together with a fourth-root-of-unity phase."""

    phase: complex
    pauli: PauliString

    def __post_init__(self):
        if self.phase not in (1, -1, 1j, -1j):
            raise InvalidInputError(f"phase {self.phase!r} is not a fourth root of unity")

    def to_dense(self) -> np.ndarray:
        return self.phase * to_dense(self.pauli)


def pauli_from_bits(bits: Sequence[int]) -> PauliString:
    """Decode a 2n-bit vector (z_1..z_n, x_1..x_n) into a Pauli string."""
    bits = tuple(int(b) for b in bits)
    if len(bits) % 2 != 0 or not bits:
        raise InvalidInputError("bit vector length must be even and positive")
    if any(b not in (0, 1) for b in bits):
        raise InvalidInputError("bit vector entries must be 0 or 1")
    n = len(bits) // 2
    z = sum(bits[q] << q for q in range(n))
    x = sum(bits[n + q] << q for q in range(n))
    return PauliString(n, z, x)


def pauli_to_bits(p: PauliString) -> tuple[int, ...]:
    """Inverse of :func:`pauli_from_bits`."""
    return p.bit_vector()


def _dot(a: int, b: int) -> int:
    return (a & b).bit_count()


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic form p.z*q.x + q.z*p.x vanishes mod 2."""
    if p.n != q.n:
        raise InvalidInputError("qubit counts differ")
    return (_dot(p.zbits, q.xbits) + _dot(q.zbits, p.xbits)) % 2 == 0


def multiply(p: PauliString, q: PauliString) -> PhasedPauli:
    """Matrix product p*q as (phase, string) with the phase tracked exactly."""
    if p.n != q.n:
        raise InvalidInputError("qubit counts differ")
    z = p.zbits ^ q.zbits
    x = p.xbits ^ q.xbits
    out = PauliString(p.n, z, x)
    # Z^a X^b Z^c X^d = (-1)^(bc) Z^(a+c) X^(b+d) per qubit, then re-absorb
    # the (-i)^(z.x) normalizations of the three strings involved.
    sign_pow = _dot(p.xbits, q.zbits)  # mod 2
    quarter = (_dot(p.zbits, p.xbits) + _dot(q.zbits, q.xbits) - _dot(z, x)) % 4
    phase = (1, -1j, -1, 1j)[quarter] * (1, -1)[sign_pow % 2]
    return PhasedPauli(complex(phase), out)


def to_dense(p: PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the string; qubit 1 is the most significant factor."""
    if p.n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"dense realization capped at {MAX_DENSE_QUBITS} qubits")
    mat = _DENSE_1Q[p.label[0]]
    for ch in p.label[1:]:
        mat = np.kron(mat, _DENSE_1Q[ch])
    return mat


def pauli_index(p: PauliString) -> int:
    """Index of the string in the base-4 (I,X,Y,Z) ordering, qubit 1 most significant."""
    idx = 0
    for ch in p.label:
        idx = 4 * idx + _LETTERS.index(ch)
    return idx


def pauli_from_index(idx: int, n: int) -> PauliString:
    digits = []
    for _ in range(n):
        digits.append(_LETTERS[idx % 4])
        idx //= 4
    return PauliString.from_label("".join(reversed(digits)))


def all_pauli_strings(n: int) -> list[PauliString]:
    """All 4^n strings in index order."""
    return [pauli_from_index(k, n) for k in range(4**n)]


_SIG = np.stack([_DENSE_1Q[ch] for ch in _LETTERS])  # (4, 2, 2)


def pauli_vector(mat: np.ndarray, n: int) -> np.ndarray:
    """Coefficients Tr[sigma_k mat] in the normalized Pauli basis.

    sigma_k runs over the 4^n strings in :func:`pauli_index` order, each
    normalized by 2^(-n/2) so the basis is orthonormal under the
    Hilbert-Schmidt inner product.
    """
    if mat.shape != (2**n, 2**n):
        raise InvalidInputError("matrix shape does not match qubit count")
    t = np.asarray(mat, dtype=complex).reshape((2,) * (2 * n))
    # After q contractions the axes are (p_1..p_q, r_(q+1)..r_n, c_(q+1)..c_n).
    # Tr[S A] = sum S[r, c] A[c, r], so sigma's row index pairs with A's column.
    for q in range(n):
        rows_left = n - q
        t = np.tensordot(t, _SIG, axes=([q, q + rows_left], [2, 1]))
        t = np.moveaxis(t, -1, q)
    return t.reshape(-1) * 2.0 ** (-n / 2)


class BinaryMatrix:
    """Dense bit matrix over GF(2), rows stored as int masks (bit j = column j)."""

    def __init__(self, rows: int, cols: int, row_masks: Iterable[int] | None = None):
        self.rows = rows
        self.cols = cols
        masks = list(row_masks) if row_masks is not None else [0] * rows
        if len(masks) != rows:
            raise InvalidInputError("row count does not match mask list")
        limit = 1 << cols
        if any(m < 0 or m >= limit for m in masks):
            raise InvalidInputError("row mask exceeds column count")
        self.row_masks = masks

    @classmethod
    def from_columns(cls, cols: Sequence[int], rows: int) -> "BinaryMatrix":
        """Build from column masks (bit i of a column mask = row i)."""
        masks = [0] * rows
        for j, col in enumerate(cols):
            for i in range(rows):
                if (col >> i) & 1:
                    masks[i] |= 1 << j
        return cls(rows, len(cols), masks)

    def get(self, i: int, j: int) -> int:
        return (self.row_masks[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column j as a row-indexed bit mask."""
        out = 0
        for i in range(self.rows):
            out |= self.get(i, j) << i
        return out

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.rows, self.cols, list(self.row_masks))

    def rank(self) -> int:
        work = list(self.row_masks)
        rank = 0
        for col in range(self.cols):
            pivot = next(
                (r for r in range(rank, len(work)) if (work[r] >> col) & 1), None
            )
            if pivot is None:
                continue
            work[rank], work[pivot] = work[pivot], work[rank]
            for r in range(len(work)):
                if r != rank and (work[r] >> col) & 1:
                    work[r] ^= work[rank]
            rank += 1
        return rank

    def to_array(self) -> np.ndarray:
        return np.array(
            [[self.get(i, j) for j in range(self.cols)] for i in range(self.rows)],
            dtype=np.uint8,
        )


def gf2_rank(vectors: Sequence[int]) -> int:
    """Rank over GF(2) of int-mask vectors."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def gf2_independent(vectors: Sequence[int]) -> bool:
    return gf2_rank(vectors) == len(vectors)
