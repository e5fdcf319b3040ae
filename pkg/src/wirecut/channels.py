"""Measure-and-prepare channels and the five identity-channel decompositions.

A measure-and-prepare channel is a POVM followed by a sign a = +-1 on the
classical record and preparation of a new state conditioned on the outcome:

    E(rho) = sum_mu  a_mu  Tr[E_mu rho]  rho_mu.

A decomposition is a weighted list (c_i, E_i) whose signed sum reproduces a
target channel; here the target is always the n-qubit identity.  Builders:

  * build_peng_1q       -- the original 8-channel single-wire cut, gamma = 4
  * build_optimal_1q    -- 3 channels, gamma = 3 (both lower bounds attained)
  * build_mub_nq        -- 2^n + 1 channels from MUB circuits, gamma = 2^(n+1)-1
  * build_randomized_nq -- 2-design randomized measurement, gamma = 2^(n+1)+1
  * build_teleport_nq   -- teleportation-based, gamma = 2^(n+1)-1, huge m

Weights are exact `fractions.Fraction`s so gamma and m assertions are exact;
verification happens in double precision through the Pauli transfer matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dense import H_1Q, S_1Q, basis_state, is_unitary
from .errors import (
    DesignViolationError,
    InvalidInputError,
    NumericFailureError,
    ResourceLimitError,
)
from .families import FamilyPartition
from .pauli import pauli_vector
from .synth import CliffordCircuit, circuit_unitary, verify_diagonalizes_symplectic

MAX_PTM_QUBITS = 6
PTM_TOL = 1e-10
PSD_FLOOR = -1e-10

Weight = Fraction | float


def _check_hermitian(mat: np.ndarray, what: str) -> None:
    if np.max(np.abs(mat - mat.conj().T)) > 1e-10:
        raise InvalidInputError(f"{what} is not hermitian")


@dataclass(frozen=True, eq=False)
class ChannelTerm:
    """One POVM outcome: sign a, effect E, prepared state rho."""

    a: int
    effect: np.ndarray
    prep: np.ndarray

    def __post_init__(self):
        if self.a not in (1, -1):
            raise InvalidInputError("term sign must be +1 or -1")


@dataclass(frozen=True, eq=False)
class MPChannel:
    """Measure-and-prepare channel on n qubits."""

    n: int
    terms: tuple[ChannelTerm, ...]

    def __post_init__(self):
        dim = 2**self.n
        total = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            if t.effect.shape != (dim, dim) or t.prep.shape != (dim, dim):
                raise InvalidInputError("term matrices do not match qubit count")
            _check_hermitian(t.effect, "POVM effect")
            _check_hermitian(t.prep, "prepared state")
            if np.min(np.linalg.eigvalsh(t.effect)) < PSD_FLOOR:
                raise InvalidInputError("POVM effect is not positive semidefinite")
            if np.min(np.linalg.eigvalsh(t.prep)) < PSD_FLOOR:
                raise InvalidInputError("prepared state is not positive semidefinite")
            if abs(np.trace(t.prep) - 1.0) > 1e-10:
                raise InvalidInputError("prepared state must have unit trace")
            total += t.effect
        if np.max(np.abs(total - np.eye(dim))) > 1e-10:
            raise InvalidInputError("POVM effects do not sum to the identity")


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Weighted measure-and-prepare channels realizing a target channel."""

    n: int
    channels: tuple[tuple[Weight, MPChannel], ...]
    label: str

    def __post_init__(self):
        if not self.channels:
            raise InvalidInputError("decomposition needs at least one channel")
        if any(ch.n != self.n for _, ch in self.channels):
            raise InvalidInputError("channel width mismatch")

    @property
    def gamma(self) -> Weight:
        """One-norm of the weights; exact when all weights are Fractions."""
        total = sum(abs(c) for c, _ in self.channels)
        return total

    @property
    def m(self) -> int:
        return len(self.channels)

    @property
    def probabilities(self) -> np.ndarray:
        g = float(self.gamma)
        return np.array([abs(float(c)) / g for c, _ in self.channels])


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Real 4^n x 4^n matrix of a channel in the normalized Pauli basis."""

    n: int
    entries: np.ndarray


def ptm(channel: MPChannel) -> TransferMatrix:
    """Pauli transfer matrix S[k, l] = Tr[sigma_k E(sigma_l)].

    For a measure-and-prepare channel this is a sum of outer products of
    the Pauli vectors of preps and effects.
    """
    n = channel.n
    if n > MAX_PTM_QUBITS:
        raise ResourceLimitError(f"transfer matrices capped at {MAX_PTM_QUBITS} qubits")
    size = 4**n
    out = np.zeros((size, size), dtype=complex)
    for t in channel.terms:
        out += t.a * np.outer(pauli_vector(t.prep, n), pauli_vector(t.effect, n))
    if np.max(np.abs(out.imag)) > 1e-12:
        raise NumericFailureError("transfer matrix has a non-real residue")
    return TransferMatrix(n, np.ascontiguousarray(out.real))


def identity_ptm(n: int) -> TransferMatrix:
    return TransferMatrix(n, np.eye(4**n))


def verify_decomposition(d: Decomposition) -> float:
    """Max-abs residual of sum_i c_i PTM(E_i) against the identity matrix."""
    if d.n > MAX_PTM_QUBITS:
        raise ResourceLimitError(f"verification capped at {MAX_PTM_QUBITS} qubits")
    total = np.zeros((4**d.n, 4**d.n))
    for c, ch in d.channels:
        total += float(c) * ptm(ch).entries
    return float(np.max(np.abs(total - np.eye(4**d.n))))


def rank_bound_check(target: TransferMatrix, n: int) -> int:
    """Lower bound on the channel count of any ancilla-free decomposition.

    ceil((rank - 1) / (2^n - 1)) with the numerical rank taken at singular
    value tolerance 1e-8; at least 1.
    """
    svals = np.linalg.svd(target.entries, compute_uv=False)
    rank = int(np.sum(svals > 1e-8))
    bound = -(-(rank - 1) // (2**n - 1)) if n >= 1 else 1
    return max(1, bound)


# single-qubit states used by the 1-wire builders
_K0 = basis_state(0, 2)
_K1 = basis_state(1, 2)
_PLUS = (_K0 + _K1) / np.sqrt(2)
_MINUS = (_K0 - _K1) / np.sqrt(2)
_PLUS_I = (_K0 + 1j * _K1) / np.sqrt(2)
_MINUS_I = (_K0 - 1j * _K1) / np.sqrt(2)


def _proj(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def _term(a: int, effect_vec: np.ndarray, prep_vec: np.ndarray) -> ChannelTerm:
    return ChannelTerm(a, _proj(effect_vec), _proj(prep_vec))


def build_peng_1q() -> Decomposition:
    """The original single-wire cut: one channel per signed observable eigenpair."""
    half = Fraction(1, 2)
    rows = [
        (half, [(1, _K0, _K0), (1, _K1, _K0)]),
        (half, [(1, _K0, _K1), (1, _K1, _K1)]),
        (half, [(1, _PLUS, _PLUS), (-1, _MINUS, _PLUS)]),
        (-half, [(1, _PLUS, _MINUS), (-1, _MINUS, _MINUS)]),
        (half, [(1, _PLUS_I, _PLUS_I), (-1, _MINUS_I, _PLUS_I)]),
        (-half, [(1, _PLUS_I, _MINUS_I), (-1, _MINUS_I, _MINUS_I)]),
        (half, [(1, _K0, _K0), (-1, _K1, _K0)]),
        (-half, [(1, _K0, _K1), (-1, _K1, _K1)]),
    ]
    channels = tuple(
        (c, MPChannel(1, tuple(_term(a, e, p) for a, e, p in terms)))
        for c, terms in rows
    )
    return Decomposition(1, channels, "peng")


def build_optimal_1q() -> Decomposition:
    """Three channels: X and Y eigenbasis measure-and-reprepare, minus a bit flip."""
    one = Fraction(1)
    channels = (
        (one, MPChannel(1, (_term(1, _PLUS, _PLUS), _term(1, _MINUS, _MINUS)))),
        (one, MPChannel(1, (_term(1, _PLUS_I, _PLUS_I), _term(1, _MINUS_I, _MINUS_I)))),
        (-one, MPChannel(1, (_term(1, _K0, _K1), _term(1, _K1, _K0)))),
    )
    return Decomposition(1, channels, "optimal1q")


def _mixture_excluding(n: int, j: int) -> np.ndarray:
    """Uniform mixture of computational states |k><k| with k != j."""
    dim = 2**n
    diag = np.full(dim, 1.0 / (dim - 1))
    diag[j] = 0.0
    return np.diag(diag).astype(complex)


def build_mub_nq(
    n: int,
    partition: FamilyPartition,
    circuits: Sequence[CliffordCircuit],
) -> Decomposition:
    """The MUB decomposition: one channel per basis-change circuit plus one
    computational channel that prepares a uniform mixture excluding the outcome."""
    if n > MAX_PTM_QUBITS:
        raise ResourceLimitError(f"builder capped at {MAX_PTM_QUBITS} qubits")
    if partition.n != n or len(circuits) != 2**n:
        raise InvalidInputError("need one circuit per non-Z family")
    for circ, fam in zip(circuits, partition.families[: 2**n]):
        if not verify_diagonalizes_symplectic(circ, fam):
            raise InvalidInputError(
                "circuit does not diagonalize its family; refuse to build"
            )
    dim = 2**n
    channels: list[tuple[Weight, MPChannel]] = []
    for circ in circuits:
        u = circuit_unitary(circ)
        terms = []
        for j in range(dim):
            proj = _proj(u[:, j])
            terms.append(ChannelTerm(1, proj, proj))
        channels.append((Fraction(1), MPChannel(n, tuple(terms))))
    comp_terms = tuple(
        ChannelTerm(1, _proj(basis_state(j, dim)), _mixture_excluding(n, j))
        for j in range(dim)
    )
    channels.append((Fraction(-(dim - 1)), MPChannel(n, comp_terms)))
    return Decomposition(n, tuple(channels), "mub")


def build_mub_default(n: int) -> Decomposition:
    """Partition, synthesize and assemble the MUB decomposition in one call."""
    from .families import generate_partition
    from .synth import synthesize

    part = generate_partition(n)
    circuits = [synthesize(f) for f in part.families[:-1]]
    return build_mub_nq(n, part, circuits)


def single_qubit_clifford_group() -> list[np.ndarray]:
    """The 24 single-qubit Cliffords (up to phase), generated by H and S."""

    def canon(mat: np.ndarray) -> np.ndarray:
        flat = mat.reshape(-1)
        k = next(i for i, v in enumerate(flat) if abs(v) > 1e-9)
        return mat * (abs(flat[k]) / flat[k])

    def key(mat: np.ndarray) -> bytes:
        return (np.round(canon(mat), 9) + 0.0).tobytes()  # +0.0 folds -0.0

    seen = {}
    frontier = [np.eye(2, dtype=complex)]
    seen[key(frontier[0])] = canon(frontier[0])
    while frontier:
        nxt = []
        for mat in frontier:
            for gen in (H_1Q, S_1Q):
                cand = gen @ mat
                k = key(cand)
                if k not in seen:
                    seen[k] = canon(cand)
                    nxt.append(cand)
        frontier = nxt
    group = sorted(seen.values(), key=lambda m: (np.round(m, 9) + 0.0).tobytes())
    if len(group) != 24:
        raise NumericFailureError("Clifford group closure failed")
    return group


def build_randomized_nq(
    n: int, unitary_set: Sequence[tuple[np.ndarray, Weight]]
) -> Decomposition:
    """Randomized-measurement decomposition from a weighted unitary 2-design.

    One channel per unitary (measure in its basis, re-prepare the outcome)
    plus one computational channel preparing the maximally mixed state.
    Raises DesignViolationError when the set is not a 2-design, detected by
    the transfer-matrix residual.
    """
    if n > MAX_PTM_QUBITS:
        raise ResourceLimitError(f"builder capped at {MAX_PTM_QUBITS} qubits")
    if not unitary_set:
        raise InvalidInputError("empty unitary set")
    dim = 2**n
    probs = [p for _, p in unitary_set]
    if abs(float(sum(probs)) - 1.0) > 1e-12:
        raise InvalidInputError("unitary probabilities must sum to one")
    channels: list[tuple[Weight, MPChannel]] = []
    for u, p in unitary_set:
        u = np.asarray(u, dtype=complex)
        if not is_unitary(u) or u.shape != (dim, dim):
            raise InvalidInputError("non-unitary matrix in the ensemble")
        terms = []
        for j in range(dim):
            proj = _proj(u[:, j])
            terms.append(ChannelTerm(1, proj, proj))
        channels.append(((dim + 1) * p, MPChannel(n, tuple(terms))))
    mixed = np.eye(dim, dtype=complex) / dim
    comp_terms = tuple(
        ChannelTerm(1, _proj(basis_state(j, dim)), mixed) for j in range(dim)
    )
    channels.append((Fraction(-dim) if isinstance(probs[0], Fraction) else -float(dim),
                     MPChannel(n, comp_terms)))
    out = Decomposition(n, tuple(channels), "randomized")
    residual = verify_decomposition(out)
    if residual > PTM_TOL:
        raise DesignViolationError(
            f"unitary set is not a 2-design (residual {residual:.3e})"
        )
    return out


def _bell_basis_vector(a: int, b: int) -> np.ndarray:
    """(|0,b> + (-1)^a |1, 1-b>)/sqrt(2) on one (sender, ancilla) qubit pair."""
    out = np.zeros(4, dtype=complex)
    out[b] = 1.0
    out[2 + (1 - b)] = (-1.0) ** a
    return out / np.sqrt(2.0)


def build_teleport_nq(n: int) -> Decomposition:
    """Teleportation-based decomposition with the ancilla legs absorbed.

    The Bell pairs behind n parallel teleportations are replaced by a signed
    separable mixture; folding the Bell measurement and the Pauli correction
    into effects and preparations leaves plain n-qubit channels.  The channel
    count 2^(2^n) + 4^n - 2^n - 1 explodes, hence the n <= 2 guard.
    """
    if n > 2:
        raise ResourceLimitError("teleport builder limited to n <= 2")
    dim = 2**n
    big = 2**dim - 1  # number of phase-ladder states
    # phase-ladder states e_r and their conjugates
    ladder = np.array(
        [
            [
                np.exp(2j * np.pi * r * (2**j - 1) / big) / np.sqrt(dim)
                for j in range(dim)
            ]
            for r in range(1, big + 1)
        ]
    )
    # Bell-measurement vectors for every outcome mu, arranged as a matrix
    # mat[sender_index, ancilla_index]
    bell_mats = []
    corrections = []
    for mu in range(4**n):
        per_pair = []
        z_mask = x_mask = 0
        for l in range(n):
            a = (mu >> (2 * (n - 1 - l) + 1)) & 1
            b = (mu >> (2 * (n - 1 - l))) & 1
            per_pair.append(_bell_basis_vector(a, b))
            z_mask |= a << (n - 1 - l)
            x_mask |= b << (n - 1 - l)
        tensor = per_pair[0].reshape(2, 2)
        for vec in per_pair[1:]:
            tensor = np.tensordot(tensor, vec.reshape(2, 2), axes=0)
        # axes are (A_1, C_1, A_2, C_2, ...); regroup into (A..., C...)
        order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        mat = np.transpose(tensor, order).reshape(dim, dim)
        bell_mats.append(mat)
        # correction V_mu = prod Z^a X^b on the receiving qubits (global phase free)
        idx = np.arange(dim)
        signs = np.where(_popcount_parity(idx & z_mask), -1.0, 1.0)
        corr = np.zeros((dim, dim), dtype=complex)
        corr[idx ^ x_mask, idx] = signs
        corrections.append(corr)

    channels: list[tuple[Weight, MPChannel]] = []
    for r in range(big):
        e_conj = ladder[r].conj()
        terms = []
        for mu in range(4**n):
            v = bell_mats[mu] @ e_conj
            w = corrections[mu] @ e_conj
            terms.append(ChannelTerm(1, _proj(v), _proj(w)))
        channels.append((Fraction(dim, big), MPChannel(n, tuple(terms))))
    for j in range(dim):
        for k in range(dim):
            if j == k:
                continue
            terms = []
            for mu in range(4**n):
                v = bell_mats[mu][:, j]
                w = corrections[mu] @ basis_state(k, dim)
                terms.append(ChannelTerm(1, _proj(v), _proj(w)))
            channels.append((Fraction(-1, dim), MPChannel(n, tuple(terms))))
    return Decomposition(n, tuple(channels), "teleport")


def _popcount_parity(values: np.ndarray) -> np.ndarray:
    out = values.astype(np.int64)
    for shift in (16, 8, 4, 2, 1):
        out ^= out >> shift
    return out & 1


def tensor_decompositions(d1: Decomposition, d2: Decomposition) -> Decomposition:
    """Product decomposition on n1 + n2 qubits; weights and channels multiply."""
    n = d1.n + d2.n
    channels = []
    for c1, ch1 in d1.channels:
        for c2, ch2 in d2.channels:
            terms = tuple(
                ChannelTerm(
                    t1.a * t2.a,
                    np.kron(t1.effect, t2.effect),
                    np.kron(t1.prep, t2.prep),
                )
                for t1 in ch1.terms
                for t2 in ch2.terms
            )
            channels.append((c1 * c2, MPChannel(n, terms)))
    return Decomposition(n, tuple(channels), f"{d1.label}x{d2.label}")


# ---------------------------------------------------------------------------
# JSON wire format


def _matrix_to_json(mat: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in mat]


def _matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


def decomposition_to_json(d: Decomposition) -> dict:
    return {
        "label": d.label,
        "n": d.n,
        "gamma": float(d.gamma),
        "m": d.m,
        "channels": [
            {
                "weight": float(c),
                "terms": [
                    {
                        "a": t.a,
                        "effect": _matrix_to_json(t.effect),
                        "prep": _matrix_to_json(t.prep),
                    }
                    for t in ch.terms
                ],
            }
            for c, ch in d.channels
        ],
    }


def decomposition_from_json(data: dict) -> Decomposition:
    n = int(data["n"])
    channels = tuple(
        (
            float(ch["weight"]),
            MPChannel(
                n,
                tuple(
                    ChannelTerm(
                        int(t["a"]),
                        _matrix_from_json(t["effect"]),
                        _matrix_from_json(t["prep"]),
                    )
                    for t in ch["terms"]
                ),
            ),
        )
        for ch in data["channels"]
    )
    return Decomposition(n, channels, str(data.get("label", "custom")))


def save_decomposition(d: Decomposition, path) -> None:
    with open(path, "w") as fh:
        json.dump(decomposition_to_json(d), fh)


def load_decomposition(path) -> Decomposition:
    with open(path) as fh:
        return decomposition_from_json(json.load(fh))


BUILDERS = {
    "peng": lambda n: _fixed_width(build_peng_1q(), n),
    "optimal1q": lambda n: _fixed_width(build_optimal_1q(), n),
    "mub": build_mub_default,
    "randomized": lambda n: _randomized_default(n),
    "teleport": build_teleport_nq,
}


def _fixed_width(d: Decomposition, n: int) -> Decomposition:
    if n != d.n:
        raise InvalidInputError(f"method {d.label!r} is single-wire only")
    return d


def _randomized_default(n: int) -> Decomposition:
    if n != 1:
        raise ResourceLimitError(
            "default randomized ensemble (24 Cliffords) is single-qubit only"
        )
    group = single_qubit_clifford_group()
    p = Fraction(1, len(group))
    return build_randomized_nq(1, [(u, p) for u in group])


def build_decomposition(method: str, n: int) -> Decomposition:
    if method not in BUILDERS:
        raise InvalidInputError(
            f"unknown method {method!r}; choose from {sorted(BUILDERS)}"
        )
    return BUILDERS[method](n)
