"""Partitioning the non-identity Pauli strings into maximally commuting families.

For n qubits the 4^n - 1 non-identity strings split into 2^n + 1 disjoint
families of 2^n - 1 mutually commuting strings each; the joint eigenbases of
the families form a complete set of mutually unbiased bases.  The families
are built from the finite field GF(2^n): label a string by a pair of field
elements (alpha, beta) where alpha gives the X-part in the polynomial basis
and beta gives the Z-part in the dual (trace-orthogonal) basis.  Two strings
then commute iff Tr(beta alpha' + beta' alpha) = 0, so the lines
{(alpha, lambda*alpha) : alpha != 0} for each lambda, plus the all-Z line
{(0, beta) : beta != 0}, are exactly the families.

Families are ordered by the lexicographically smallest member's bit vector
(z_1..z_n, x_1..x_n), with the all-Z family forced last.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .pauli import PauliString, commutes, gf2_independent, gf2_rank, pauli_from_bits

MAX_PARTITION_QUBITS = 12

# Irreducible polynomials over GF(2), bit i = coefficient of x^i.
_IRREDUCIBLE = {
    1: 0b11,  # x + 1
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10000011,  # x^7 + x + 1
    8: 0b100011011,  # x^8 + x^4 + x^3 + x + 1
    9: 0b1000010001,  # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
    11: 0b100000000101,  # x^11 + x^2 + 1
    12: 0b1000001010011,  # x^12 + x^6 + x^4 + x + 1
}


def gf_mul(a: int, b: int, n: int) -> int:
    """Carry-less product of field elements modulo the degree-n polynomial."""
    poly = _IRREDUCIBLE[n]
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> n:
            a ^= poly
    return out


def _trace_by_squaring(a: int, n: int) -> int:
    acc = 0
    cur = a
    for _ in range(n):
        acc ^= cur
        cur = gf_mul(cur, cur, n)
    return acc & 1


@lru_cache(maxsize=None)
def _trace_mask(n: int) -> int:
    """Bit i set iff Tr(x^i) = 1; the trace is F_2-linear in the coordinates."""
    return sum(_trace_by_squaring(1 << i, n) << i for i in range(n))


def gf_trace(a: int, n: int) -> int:
    """Field trace GF(2^n) -> GF(2): a + a^2 + ... + a^(2^(n-1))."""
    return (a & _trace_mask(n)).bit_count() & 1


@dataclass(frozen=True)
class CommutingFamily:
    """One family: n generators spanning 2^n - 1 commuting non-identity strings."""

    n: int
    generators: tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.generators) != self.n:
            raise InvalidInputError("need exactly n generators")
        if any(g.n != self.n for g in self.generators):
            raise InvalidInputError("generator width mismatch")

    @cached_property
    def members(self) -> frozenset[PauliString]:
        return expand_family(self.generators)

    def member_keys(self) -> np.ndarray:
        """All 2^n - 1 member masks (z << n) | x as a uint32 array, no Paulis built."""
        n = self.n
        keys = np.zeros(2**n, dtype=np.uint32)
        for k, g in enumerate(self.generators):
            key = np.uint32((g.zbits << n) | g.xbits)
            keys[1 << k : 2 << k] = keys[: 1 << k] ^ key
        return keys[1:]

    def member_labels(self) -> list[str]:
        """Sorted member labels, computed vectorized (cheap even at n = 12)."""
        n = self.n
        keys = self.member_keys()
        codes = np.empty((len(keys), n), dtype=np.uint8)
        letters = np.frombuffer(b"IXZY", dtype=np.uint8)
        for q in range(n):
            z = (keys >> np.uint32(n + q)) & 1
            x = (keys >> np.uint32(q)) & 1
            codes[:, q] = letters[(z << 1) | x]
        return sorted(codes.tobytes()[i * n : (i + 1) * n].decode() for i in range(len(keys)))

    @property
    def is_z_family(self) -> bool:
        return all(g.xbits == 0 for g in self.generators)


@dataclass(frozen=True)
class FamilyPartition:
    """The 2^n + 1 disjoint maximally commuting families covering all strings."""

    n: int
    families: tuple[CommutingFamily, ...]


def _vector_int(p: PauliString) -> int:
    """Bit vector (z_1..z_n,x_1..x_n) packed with position 1 most significant."""
    out = 0
    for b in p.bit_vector():
        out = (out << 1) | b
    return out


def _reduced_basis(vectors: Iterable[int]) -> list[int]:
    """Fully reduced GF(2) basis of packed ints, descending leading bit."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i != j:
                basis[i] = min(basis[i], basis[i] ^ basis[j])
    return sorted(basis, reverse=True)


def expand_family(generators: Sequence[PauliString]) -> frozenset[PauliString]:
    """All non-identity products of the generators, phases dropped."""
    gens = tuple(generators)
    if not gens:
        raise InvalidInputError("no generators")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise InvalidInputError("generator width mismatch")
    vecs = [(g.zbits << n) | g.xbits for g in gens]
    if not gf2_independent(vecs):
        raise InvalidInputError("generators are linearly dependent over GF(2)")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutes(gens[i], gens[j]):
                raise InvalidInputError("generators do not mutually commute")
    mask = (1 << n) - 1
    keys = [0]
    for v in vecs:
        keys += [k ^ v for k in keys]
    return frozenset(
        PauliString(n, key >> n, key & mask) for key in keys if key != 0
    )


def extract_generators(members: Iterable[PauliString]) -> list[PauliString]:
    """A canonical GF(2) basis (by pivot order) of a maximally commuting family."""
    members = frozenset(members)
    if not members:
        raise InvalidInputError("empty member set")
    n = next(iter(members)).n
    if any(p.n != n for p in members):
        raise InvalidInputError("member width mismatch")
    if len(members) != 2**n - 1:
        raise InvalidInputError(f"family must have 2^n - 1 = {2**n - 1} members")
    if any(p.is_identity for p in members):
        raise InvalidInputError("identity must not be a member")
    basis = _reduced_basis(sorted(_vector_int(p) for p in members))
    if len(basis) != n:
        raise InvalidInputError("members do not span an n-dimensional GF(2) space")
    width = 2 * n
    gens = [
        pauli_from_bits([(v >> (width - 1 - k)) & 1 for k in range(width)])
        for v in basis  # descending packed value = ascending pivot position
    ]
    for i in range(n):
        for j in range(i + 1, n):
            if not commutes(gens[i], gens[j]):
                raise InvalidInputError("members do not mutually commute")
    if expand_family(gens) != members:
        raise InvalidInputError("member set is not closed under products")
    return gens


def _line_family(n: int, lam: int) -> CommutingFamily:
    """Family of the line beta = lam * alpha; generators use alpha = x^(k-1)."""
    gens = []
    for k in range(n):
        beta = gf_mul(lam, 1 << k, n)  # lam * x^k
        zbits = 0
        for j in range(n):
            zbits |= gf_trace(gf_mul(beta, 1 << j, n), n) << j
        gens.append(PauliString(n, zbits, 1 << k))
    return CommutingFamily(n, tuple(gens))


def _z_family(n: int) -> CommutingFamily:
    return CommutingFamily(n, tuple(PauliString(n, 1 << k, 0) for k in range(n)))


def generate_partition(n: int) -> FamilyPartition:
    """The deterministic partition into 2^n + 1 families, all-Z family last."""
    if not 1 <= n <= MAX_PARTITION_QUBITS:
        raise ResourceLimitError(f"partition generation capped at n <= {MAX_PARTITION_QUBITS}")
    lines = [_line_family(n, lam) for lam in range(2**n)]
    lines.sort(
        key=lambda fam: min(
            _reduced_basis(_vector_int(g) for g in fam.generators)
        )
    )
    return FamilyPartition(n, tuple(lines) + (_z_family(n),))


def validate_partition(partition: FamilyPartition, exhaustive: bool = False) -> None:
    """Raise InvalidInputError unless the partition satisfies all its invariants.

    Structural checks are always run; `exhaustive` additionally verifies
    pairwise commutation member by member (meant for small n).
    """
    n = partition.n
    fams = partition.families
    if len(fams) != 2**n + 1:
        raise InvalidInputError(f"expected {2**n + 1} families, got {len(fams)}")
    for fam in fams:
        if fam.n != n:
            raise InvalidInputError("family width mismatch")
        vecs = [(g.zbits << n) | g.xbits for g in fam.generators]
        if not gf2_independent(vecs):
            raise InvalidInputError("dependent generators in a family")
        for i in range(n):
            for j in range(i + 1, n):
                if not commutes(fam.generators[i], fam.generators[j]):
                    raise InvalidInputError("non-commuting generators in a family")
    if not fams[-1].is_z_family:
        raise InvalidInputError("last family must be the all-Z family")
    for fam in fams[:-1]:
        # no member may fall in the all-Z strings: X-parts must be independent
        if gf2_rank([g.xbits for g in fam.generators]) != n:
            raise InvalidInputError("non-final family overlaps the all-Z strings")
    all_keys = np.concatenate([fam.member_keys() for fam in fams])
    if len(all_keys) != 4**n - 1 or len(np.unique(all_keys)) != 4**n - 1:
        raise InvalidInputError("families do not disjointly cover all strings")
    if exhaustive:
        for fam in fams:
            members = sorted(fam.members, key=_vector_int)
            if len(members) != 2**n - 1:
                raise InvalidInputError("family has the wrong cardinality")
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    if not commutes(members[i], members[j]):
                        raise InvalidInputError("family members do not all commute")


def mub_overlap_check(bases: Sequence[np.ndarray]) -> float:
    """Max deviation | |<phi_i|psi_j>|^2 - 2^-n | over distinct basis pairs.

    Each basis is passed as the unitary whose columns are its vectors.
    """
    if not bases:
        raise InvalidInputError("no bases supplied")
    dim = np.asarray(bases[0]).shape[0]
    mats = []
    for b in bases:
        b = np.asarray(b, dtype=complex)
        if b.shape != (dim, dim):
            raise InvalidInputError("bases must share one square shape")
        if np.max(np.abs(b.conj().T @ b - np.eye(dim))) > 1e-10:
            raise InvalidInputError("basis matrix is not unitary")
        mats.append(b)
    target = 1.0 / dim
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            overlap = np.abs(mats[i].conj().T @ mats[j]) ** 2
            worst = max(worst, float(np.max(np.abs(overlap - target))))
    return worst
