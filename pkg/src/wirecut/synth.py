"""Clifford synthesis: map a commuting family's eigenbasis to the computational basis.

For a family disjoint from the all-Z strings the recipe is: write the
generators' bit vectors as columns of a 2n x n matrix, column-reduce the
X-block to the identity, then read gates off the (symmetric) Z-block C:
a full layer of H, one S-dagger per unit diagonal entry of C, and one CZ
per unit off-diagonal pair.  CZ gates are scheduled in parallel layers via
a round-robin edge coloring of the complete graph, so the depth never
exceeds n + 2 on a fully connected device.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import dense
from .errors import InvalidInputError, ResourceLimitError, SynthesisError
from .families import CommutingFamily
from .pauli import BinaryMatrix, PauliString, to_dense

MAX_DENSE_VERIFY_QUBITS = 10

GATE_NAMES = ("H", "SDG", "CZ")


@dataclass(frozen=True)
class Gate:
    """One elementary gate with 1-based qubit indices."""

    name: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise InvalidInputError(f"unknown gate {self.name!r}")
        arity = 2 if self.name == "CZ" else 1
        if len(self.qubits) != arity:
            raise InvalidInputError(f"{self.name} takes {arity} qubit(s)")
        if self.name == "CZ" and self.qubits[0] == self.qubits[1]:
            raise InvalidInputError("CZ qubits must differ")
        if any(q < 1 for q in self.qubits):
            raise InvalidInputError("qubit indices are 1-based")

    def text(self) -> str:
        return " ".join([self.name, *map(str, self.qubits)])


def _asap_layers(gates: Sequence[Gate], n: int) -> tuple[tuple[Gate, ...], ...]:
    """Pack a gate sequence into parallel layers, preserving per-qubit order."""
    last_layer = [0] * (n + 1)  # 1-based qubits
    layers: list[list[Gate]] = []
    for g in gates:
        if any(q > n for q in g.qubits):
            raise InvalidInputError("gate qubit index exceeds circuit width")
        at = max(last_layer[q] for q in g.qubits) + 1
        while len(layers) < at:
            layers.append([])
        layers[at - 1].append(g)
        for q in g.qubits:
            last_layer[q] = at
    return tuple(tuple(layer) for layer in layers)


@dataclass(frozen=True)
class CliffordCircuit:
    """Layered H / S-dagger / CZ circuit; layers[0] acts first."""

    n: int
    layers: tuple[tuple[Gate, ...], ...]

    def __post_init__(self):
        for layer in self.layers:
            used: set[int] = set()
            for g in layer:
                if any(q > self.n for q in g.qubits):
                    raise InvalidInputError("gate qubit index exceeds circuit width")
                if used & set(g.qubits):
                    raise InvalidInputError("qubit used twice within one layer")
                used.update(g.qubits)

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[Gate]) -> "CliffordCircuit":
        return cls(n, _asap_layers(tuple(gates), n))

    @property
    def gates(self) -> tuple[Gate, ...]:
        return tuple(g for layer in self.layers for g in layer)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def text(self) -> str:
        return "\n".join(g.text() for g in self.gates) + "\n"

    @classmethod
    def parse(cls, text: str, n: int) -> "CliffordCircuit":
        gates = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                gates.append(Gate(parts[0].upper(), tuple(int(p) for p in parts[1:])))
            except (ValueError, IndexError) as exc:
                raise InvalidInputError(f"bad gate line {raw!r}") from exc
        return cls.from_gates(n, gates)


@dataclass(frozen=True)
class GateStats:
    n_h: int
    n_s: int
    n_cz: int
    depth: int


def gate_stats(circuit: CliffordCircuit) -> GateStats:
    names = [g.name for g in circuit.gates]
    return GateStats(
        n_h=names.count("H"),
        n_s=names.count("SDG"),
        n_cz=names.count("CZ"),
        depth=circuit.depth,
    )


@dataclass(frozen=True)
class StabilizerMatrix:
    """Generator bit vectors as columns of a 2n x n GF(2) matrix."""

    matrix: BinaryMatrix

    @classmethod
    def from_family(cls, family: CommutingFamily) -> "StabilizerMatrix":
        n = family.n
        cols = [g.zbits | (g.xbits << n) for g in family.generators]  # rows: z then x
        return cls(BinaryMatrix.from_columns(cols, rows=2 * n))

    def __post_init__(self):
        if self.matrix.rows != 2 * self.matrix.cols:
            raise InvalidInputError("stabilizer matrix must be 2n x n")
        if self.matrix.rank() != self.matrix.cols:
            raise InvalidInputError("stabilizer columns must be independent")


def symplectic_conjugate(gate: Gate, bits: Sequence[int]) -> tuple[int, ...]:
    """Phase-free action of conjugation by `gate` on a (z_1..z_n,x_1..x_n) vector."""
    bits = list(int(b) for b in bits)
    if len(bits) % 2:
        raise InvalidInputError("bit vector length must be even")
    n = len(bits) // 2
    if any(q > n for q in gate.qubits):
        raise InvalidInputError("gate qubit index out of range")
    z = bits[:n]
    x = bits[n:]
    if gate.name == "H":
        (q,) = gate.qubits
        z[q - 1], x[q - 1] = x[q - 1], z[q - 1]
    elif gate.name == "SDG":
        (q,) = gate.qubits
        z[q - 1] ^= x[q - 1]
    else:  # CZ
        i, j = gate.qubits
        z[i - 1] ^= x[j - 1]
        z[j - 1] ^= x[i - 1]
    return tuple(z + x)


def _conjugate_masks(gate: Gate, z: int, x: int) -> tuple[int, int]:
    """Mask-level version of :func:`symplectic_conjugate` (bit q-1 = qubit q)."""
    if gate.name == "H":
        b = 1 << (gate.qubits[0] - 1)
        zq, xq = z & b, x & b
        z = (z & ~b) | xq
        x = (x & ~b) | zq
    elif gate.name == "SDG":
        b = 1 << (gate.qubits[0] - 1)
        if x & b:
            z ^= b
    else:
        bi = 1 << (gate.qubits[0] - 1)
        bj = 1 << (gate.qubits[1] - 1)
        if x & bj:
            z ^= bi
        if x & bi:
            z ^= bj
    return z, x


def conjugate_by_inverse(circuit: CliffordCircuit, p: PauliString) -> PauliString:
    """The string [U^dagger P U] with the phase dropped.

    Conjugation by a gate and by its inverse act identically on the bit
    vector (each action is a GF(2) involution), so the gates are applied
    in reverse circuit order.
    """
    if p.n != circuit.n:
        raise InvalidInputError("Pauli width does not match circuit")
    z, x = p.zbits, p.xbits
    for g in reversed(circuit.gates):
        z, x = _conjugate_masks(g, z, x)
    return PauliString(p.n, z, x)


def edge_color_cz(pairs: Iterable[tuple[int, int]], n: int) -> list[list[tuple[int, int]]]:
    """Schedule CZ pairs into qubit-disjoint layers via K_n round-robin coloring.

    Uses at most chi'(K_n) layers: n for odd n, n - 1 for even n.
    """
    wanted = set()
    for a, b in pairs:
        if a == b or not (1 <= a <= n and 1 <= b <= n):
            raise InvalidInputError(f"bad qubit pair {(a, b)}")
        wanted.add((min(a, b), max(a, b)))
    if not wanted:
        return []
    m = n if n % 2 == 0 else n + 1  # odd n gets a dummy vertex m
    rounds: list[list[tuple[int, int]]] = []
    for r in range(m - 1):
        layer = []
        fixed = (m - 1, r)  # vertex m-1 plays vertex r
        layer.append(fixed)
        for i in range(1, m // 2):
            layer.append(((r + i) % (m - 1), (r - i) % (m - 1)))
        # translate to 1-based and drop pairs touching the dummy vertex
        real = []
        for a, b in layer:
            a, b = a + 1, b + 1
            if a > n or b > n:
                continue
            real.append((min(a, b), max(a, b)))
        rounds.append(sorted(real))
    out = []
    for layer in rounds:
        chosen = [p for p in layer if p in wanted]
        if chosen:
            out.append(chosen)
    scheduled = {p for layer in out for p in layer}
    if scheduled != wanted:
        raise SynthesisError("edge coloring failed to cover all pairs")
    return out


def synthesize(family: CommutingFamily, optimize_depth: bool = True) -> CliffordCircuit:
    """Build the basis-change circuit for one family via Gaussian elimination.

    Column operations bring the X-block of the generator matrix to the
    identity; the residual symmetric Z-block dictates the S-dagger and CZ
    gates.  Fails with SynthesisError when the X-block is rank deficient,
    which happens exactly when the family intersects the all-Z strings.
    """
    n = family.n
    stab = StabilizerMatrix.from_family(family)
    cols = [stab.matrix.column(j) for j in range(n)]  # bit i = row i (z rows first)

    def xbit(col: int, row: int) -> int:
        return (col >> (n + row)) & 1

    for r in range(n):
        pivot = next((c for c in range(r, n) if xbit(cols[c], r)), None)
        if pivot is None:
            raise SynthesisError(
                "X-block is rank deficient; family overlaps the all-Z strings"
            )
        cols[r], cols[pivot] = cols[pivot], cols[r]
        for c in range(n):
            if c != r and xbit(cols[c], r):
                cols[c] ^= cols[r]

    c_block = [[(cols[j] >> i) & 1 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if c_block[i][j] != c_block[j][i]:
                raise SynthesisError("Z-block is not symmetric; generators invalid")

    gates = [Gate("H", (q,)) for q in range(1, n + 1)]
    gates += [Gate("SDG", (k,)) for k in range(1, n + 1) if c_block[k - 1][k - 1]]
    cz_pairs = [
        (l, m)
        for l in range(1, n)
        for m in range(l + 1, n + 1)
        if c_block[l - 1][m - 1]
    ]
    if optimize_depth:
        for layer in edge_color_cz(cz_pairs, n):
            gates += [Gate("CZ", pair) for pair in layer]
        circuit = CliffordCircuit.from_gates(n, gates)
        if circuit.depth > n + 2:
            raise SynthesisError("depth bound n + 2 violated")
    else:
        gates += [Gate("CZ", pair) for pair in cz_pairs]
        layers: list[tuple[Gate, ...]] = [tuple(gates[:n])]
        rest = gates[n:]
        sdg = tuple(g for g in rest if g.name == "SDG")
        if sdg:
            layers.append(sdg)
        layers += [(g,) for g in rest if g.name == "CZ"]
        circuit = CliffordCircuit(n, tuple(layers))
    return circuit


def circuit_unitary(circuit: CliffordCircuit) -> np.ndarray:
    """Dense matrix of the circuit (layers applied left to right in time)."""
    if circuit.n > MAX_DENSE_VERIFY_QUBITS:
        raise ResourceLimitError(
            f"dense circuit realization capped at {MAX_DENSE_VERIFY_QUBITS} qubits"
        )
    dim = 2**circuit.n
    mat = np.eye(dim, dtype=complex)
    for g in circuit.gates:
        if g.name == "H":
            mat = dense.apply_1q(mat, dense.H_1Q, g.qubits[0], circuit.n)
        elif g.name == "SDG":
            mat = dense.apply_1q(mat, dense.SDG_1Q, g.qubits[0], circuit.n)
        else:
            mat = dense.apply_cz(mat, g.qubits[0], g.qubits[1], circuit.n)
    return mat


def _is_signed_z_diagonal(mat: np.ndarray, n: int, tol: float = 1e-10) -> bool:
    """True iff mat equals +-D for some D in {I,Z}^n, entrywise within tol."""
    dim = 2**n
    off = mat - np.diag(np.diagonal(mat))
    if np.max(np.abs(off)) > tol:
        return False
    diag = np.diagonal(mat)
    if np.max(np.abs(np.abs(diag) - 1.0)) > tol or np.max(np.abs(diag.imag)) > tol:
        return False
    sign = 1.0 if diag[0].real > 0 else -1.0
    pattern = diag.real / sign
    s = 0
    for q in range(n):
        if pattern[1 << (n - 1 - q)] < 0:
            s |= 1 << (n - 1 - q)
    idx = np.arange(dim)
    expect = np.where(_parity(idx & s), -1.0, 1.0)
    return bool(np.max(np.abs(pattern - expect)) <= tol)


def _parity(values: np.ndarray) -> np.ndarray:
    out = values.astype(np.int64)
    for shift in (16, 8, 4, 2, 1):
        out ^= out >> shift
    return out & 1


def verify_diagonalizes(circuit: CliffordCircuit, family: CommutingFamily) -> bool:
    """Dense check: U^dagger P U is a signed {I,Z} string for every member."""
    if family.n > MAX_DENSE_VERIFY_QUBITS:
        raise ResourceLimitError("dense verification capped; use the symplectic check")
    if circuit.n != family.n:
        return False
    u = circuit_unitary(circuit)
    udg = u.conj().T
    for p in family.members:
        conj = udg @ to_dense(p) @ u
        if not _is_signed_z_diagonal(conj, family.n):
            return False
    return True


def verify_diagonalizes_symplectic(circuit: CliffordCircuit, family: CommutingFamily) -> bool:
    """Phase-free check that every member maps into the all-Z strings."""
    if circuit.n != family.n:
        return False
    return all(
        conjugate_by_inverse(circuit, p).xbits == 0 for p in family.members
    )
