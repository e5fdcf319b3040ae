"""Exact and Monte-Carlo simulation of circuits with cut wires.

A circuit is a sequence of unitary layers on contiguous qubit ranges,
starting from |0...0> and ending in a computational measurement whose
outcome feeds a postprocessing function f.  A cut replaces the identity
on a set of wires (at a chosen point) by a decomposition into
measure-and-prepare channels: per shot a channel is drawn with probability
|c_i|/gamma, the POVM outcome is sampled from the exact upstream
distribution, the prepared state is fed downstream, and the signed,
gamma-scaled average of f over terminal samples estimates the uncut
expectation.

Only the classical record (channel index, outcome, prepared label) crosses
a cut; the severed wires' quantum state is rebuilt from that record alone.
Shots consume a fixed layout of uniforms from a counter-based generator
keyed by the seed, so results are reproducible and independent of how the
shot loop is batched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import dense
from .channels import Decomposition, MPChannel
from .errors import InvalidInputError, NumericFailureError, ResourceLimitError

MAX_SIM_QUBITS = 12
PROB_FLOOR = -1e-9
MAX_TRAJECTORY_NODES = 1 << 18


@dataclass(frozen=True, eq=False)
class CircuitLayer:
    """One unitary on the contiguous qubits first..first+k-1 (1-based)."""

    first: int
    matrix: np.ndarray

    def __post_init__(self):
        if not dense.is_unitary(self.matrix):
            raise InvalidInputError("layer matrix is not unitary")
        if self.first < 1:
            raise InvalidInputError("layer support out of range")

    @property
    def span(self) -> int:
        return int(np.log2(self.matrix.shape[0]))


@dataclass(frozen=True, eq=False)
class LayeredCircuit:
    width: int
    layers: tuple[CircuitLayer, ...]

    def __post_init__(self):
        for layer in self.layers:
            if layer.first + layer.span - 1 > self.width:
                raise InvalidInputError("layer support exceeds circuit width")


@dataclass(frozen=True, eq=False)
class CutLocation:
    """Cut the wires first_wire..first_wire+n-1 right after `after_layer` layers."""

    after_layer: int
    first_wire: int
    decomposition: Decomposition


@dataclass(frozen=True, eq=False)
class CutSpec:
    locations: tuple[CutLocation, ...]

    def __post_init__(self):
        order = [(loc.after_layer, loc.first_wire) for loc in self.locations]
        if order != sorted(order):
            raise InvalidInputError("cut locations must be sorted by layer then wire")
        for a, b in zip(self.locations, self.locations[1:]):
            if a.after_layer == b.after_layer:
                if a.first_wire + a.decomposition.n > b.first_wire:
                    raise InvalidInputError("overlapping cuts at one layer boundary")

    @property
    def gamma_total(self) -> float:
        out = 1.0
        for loc in self.locations:
            out *= float(loc.decomposition.gamma)
        return out


class PostProcess:
    """Terminal postprocessing f: outcomes {0,1}^L -> [-1, 1], tabulated."""

    def __init__(self, width: int, table: np.ndarray, name: str = "table"):
        table = np.asarray(table, dtype=float)
        if table.shape != (2**width,):
            raise InvalidInputError("postprocess table must cover all outcomes")
        if np.max(np.abs(table)) > 1.0 + 1e-12:
            raise InvalidInputError("postprocess values must lie in [-1, 1]")
        self.width = width
        self.table = table
        self.name = name

    @classmethod
    def parity(cls, width: int) -> "PostProcess":
        idx = np.arange(2**width)
        bits = idx
        for shift in (16, 8, 4, 2, 1):
            bits = bits ^ (bits >> shift)
        return cls(width, np.where(bits & 1, -1.0, 1.0), "parity")

    @classmethod
    def bit(cls, k: int, width: int) -> "PostProcess":
        if not 1 <= k <= width:
            raise InvalidInputError("bit index out of range")
        idx = np.arange(2**width)
        return cls(width, ((idx >> (width - k)) & 1).astype(float), f"bit:{k}")

    @classmethod
    def from_spec(cls, spec: str | Sequence[float], width: int) -> "PostProcess":
        if isinstance(spec, str):
            if spec == "parity":
                return cls.parity(width)
            if spec.startswith("bit:"):
                return cls.bit(int(spec.split(":", 1)[1]), width)
            raise InvalidInputError(f"unknown postprocess {spec!r}")
        return cls(width, np.asarray(spec, dtype=float))


@dataclass(frozen=True)
class EstimateReport:
    estimate: float
    shots: int
    gamma_total: float
    std_error: float
    seed: int
    tallies: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "shots": self.shots,
            "gamma_total": self.gamma_total,
            "std_error": self.std_error,
            "seed": self.seed,
            "tallies": [list(t) for t in self.tallies],
        }


def _initial_state(width: int) -> np.ndarray:
    return dense.basis_state(0, 2**width)


def _apply_layers(state: np.ndarray, circuit: LayeredCircuit, lo: int, hi: int) -> np.ndarray:
    for layer in circuit.layers[lo:hi]:
        state = dense.apply_block(state, layer.matrix, layer.first, layer.span, circuit.width)
    return state


def exact_expectation(circuit: LayeredCircuit, f: PostProcess) -> float:
    """Full statevector expectation of f over the terminal distribution."""
    if circuit.width > MAX_SIM_QUBITS:
        raise ResourceLimitError(f"simulation capped at {MAX_SIM_QUBITS} qubits")
    if f.width != circuit.width:
        raise InvalidInputError("postprocess width mismatch")
    state = _apply_layers(_initial_state(circuit.width), circuit, 0, len(circuit.layers))
    return float(np.sum(np.abs(state) ** 2 * f.table))


def _effect_components(effect: np.ndarray) -> list[np.ndarray]:
    """Rank-1 split E = sum_r v_r v_r^dagger; one entry for projector effects."""
    vals, vecs = np.linalg.eigh(effect)
    out = []
    for lam, vec in zip(vals, vecs.T):
        if lam > 1e-12:
            out.append(np.sqrt(lam) * vec)
    return out


def _prep_components(prep: np.ndarray) -> list[tuple[float, int | None, np.ndarray]]:
    """Pure-state realization of a prepared state as (prob, label, vector).

    Diagonal preps (the uniform computational mixtures and computational
    basis states) realize as labelled basis states; anything else falls
    back to its eigendecomposition.
    """
    dim = prep.shape[0]
    off = prep - np.diag(np.diagonal(prep))
    if np.max(np.abs(off)) < 1e-12:
        out = []
        for k in range(dim):
            p = float(np.real(prep[k, k]))
            if p > 1e-12:
                out.append((p, k, dense.basis_state(k, dim)))
        return out
    vals, vecs = np.linalg.eigh(prep)
    return [
        (float(lam), None, np.ascontiguousarray(vec))
        for lam, vec in zip(vals, vecs.T)
        if lam > 1e-12
    ]


def sample_prep(channel: MPChannel, mu: int, rng: np.random.Generator):
    """Draw the prepared pure state for outcome mu: (label, vector).

    The label is the computational index for diagonal (mixture or basis)
    preps and None for general pure preparations.
    """
    comps = _prep_components(channel.terms[mu].prep)
    probs = np.array([c[0] for c in comps])
    probs = probs / probs.sum()
    idx = int(rng.choice(len(comps), p=probs))
    return comps[idx][1], comps[idx][2]


class _RealizedLocation:
    """Sampling tables for one cut location, state-independent parts."""

    def __init__(self, loc: CutLocation, width: int):
        d = loc.decomposition
        self.first = loc.first_wire
        self.span = d.n
        if loc.first_wire + d.n - 1 > width:
            raise InvalidInputError("cut wires exceed circuit width")
        self.gamma = float(d.gamma)
        self.channel_cum = np.cumsum(d.probabilities)
        self.channel_cum[-1] = 1.0
        self.signs = [1 if float(c) >= 0 else -1 for c, _ in d.channels]
        # flattened outcome list per channel: (term_idx, a, component vector)
        self.outcomes: list[list[tuple[int, int, np.ndarray]]] = []
        # per channel, per term: prep realization and cumulative probabilities
        self.preps: list[list[list[tuple[float, int | None, np.ndarray]]]] = []
        self.prep_cum: list[list[np.ndarray]] = []
        for _, ch in d.channels:
            outs = []
            for t_idx, term in enumerate(ch.terms):
                for comp in _effect_components(term.effect):
                    outs.append((t_idx, term.a, comp))
            self.outcomes.append(outs)
            per_term = [_prep_components(t.prep) for t in ch.terms]
            self.preps.append(per_term)
            cums = []
            for comps in per_term:
                probs = np.array([c[0] for c in comps])
                cum = np.cumsum(probs / probs.sum())
                cum[-1] = 1.0
                cums.append(cum)
            self.prep_cum.append(cums)


class _CutEngine:
    """Trajectory lattice shared by the Monte-Carlo sampler and the exact
    enumeration: nodes are distinct intermediate states, memoized by path."""

    def __init__(self, circuit: LayeredCircuit, cuts: CutSpec, f: PostProcess):
        if circuit.width > MAX_SIM_QUBITS:
            raise ResourceLimitError(f"simulation capped at {MAX_SIM_QUBITS} qubits")
        if f.width != circuit.width:
            raise InvalidInputError("postprocess width mismatch")
        for loc in cuts.locations:
            if not 0 <= loc.after_layer <= len(circuit.layers):
                raise InvalidInputError("cut layer index out of range")
        self.circuit = circuit
        self.f = f
        self.locations = [_RealizedLocation(loc, circuit.width) for loc in cuts.locations]
        self.boundaries = [loc.after_layer for loc in cuts.locations]
        self.gamma_total = cuts.gamma_total
        root = _apply_layers(
            _initial_state(circuit.width),
            circuit,
            0,
            self.boundaries[0] if self.boundaries else len(circuit.layers),
        )
        self._states: dict[tuple, np.ndarray] = {(): root}
        self._outcome_cums: dict[tuple, np.ndarray] = {}
        self._residuals: dict[tuple, np.ndarray] = {}
        self._final: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}

    def _guard(self) -> None:
        if len(self._states) > MAX_TRAJECTORY_NODES:
            raise ResourceLimitError("trajectory lattice exceeded the node cap")

    def outcome_cum(self, path: tuple, chan: int) -> np.ndarray:
        """Cumulative outcome probabilities for channel `chan` at node `path`."""
        key = path + (chan,)
        cached = self._outcome_cums.get(key)
        if cached is not None:
            return cached
        loc = self.locations[len(path) // 3]
        state = self._states[path]
        probs = []
        residuals = []
        for _, _, comp in loc.outcomes[chan]:
            amp = dense.partial_inner(state, comp, loc.first, loc.span, self.circuit.width)
            p = float(np.sum(np.abs(amp) ** 2))
            probs.append(p)
            residuals.append(amp)
        probs = np.array(probs)
        if probs.min(initial=0.0) < PROB_FLOOR:
            raise NumericFailureError("negative outcome probability beyond tolerance")
        probs = np.clip(probs, 0.0, None)
        total = probs.sum()
        if not np.isfinite(total) or total <= 0:
            raise NumericFailureError("outcome probabilities degenerate")
        cum = np.cumsum(probs / total)
        cum[-1] = 1.0
        self._outcome_cums[key] = cum
        for o_idx, amp in enumerate(residuals):
            self._residuals[key + (o_idx,)] = amp
        return cum

    def child(self, path: tuple, chan: int, outcome: int, prep: int) -> tuple:
        """Path key of the node reached by (channel, outcome, prep) at `path`."""
        new_path = path + (chan, outcome, prep)
        if new_path in self._states:
            return new_path
        self._guard()
        depth = len(path) // 3
        loc = self.locations[depth]
        self.outcome_cum(path, chan)  # ensure residual cached
        amp = self._residuals[path + (chan, outcome)]
        norm = np.linalg.norm(amp)
        if norm < 1e-15:
            raise NumericFailureError("conditioned on a zero-probability outcome")
        rest = amp / norm
        chi = loc.preps[chan][loc.outcomes[chan][outcome][0]][prep][2]
        state = dense.insert_block(rest, chi, loc.first, loc.span, self.circuit.width)
        lo = self.boundaries[depth]
        hi = self.boundaries[depth + 1] if depth + 1 < len(self.boundaries) else len(self.circuit.layers)
        state = _apply_layers(state, self.circuit, lo, hi)
        self._states[new_path] = state
        return new_path

    def final_dist(self, path: tuple) -> tuple[np.ndarray, np.ndarray]:
        """(cumulative, plain) terminal outcome distribution at a leaf node."""
        cached = self._final.get(path)
        if cached is not None:
            return cached
        probs = np.abs(self._states[path]) ** 2
        probs = probs / probs.sum()
        cum = np.cumsum(probs)
        cum[-1] = 1.0
        out = (cum, probs)
        self._final[path] = out
        return out


def _uniforms(seed: int, shots: int, n_locations: int) -> np.ndarray:
    """Fixed per-shot uniform layout: 3 columns per location plus one for y."""
    gen = np.random.Generator(np.random.Philox(key=seed))
    return gen.random((shots, 3 * n_locations + 1))


def run_monte_carlo(
    circuit: LayeredCircuit,
    cuts: CutSpec,
    f: PostProcess,
    shots: int,
    seed: int = 0,
) -> EstimateReport:
    """Unbiased quasiprobability estimate of the uncut expectation of f."""
    if shots < 1:
        raise InvalidInputError("need at least one shot")
    if not cuts.locations:
        raise InvalidInputError("no cut locations; use exact_expectation instead")
    engine = _CutEngine(circuit, cuts, f)
    u = _uniforms(seed, shots, len(engine.locations))
    paths = np.zeros(shots, dtype=np.int64)  # index into path_list
    path_list: list[tuple] = [()]
    signs = np.ones(shots, dtype=np.float64)
    tallies = []
    for l_idx, loc in enumerate(engine.locations):
        chan = np.searchsorted(loc.channel_cum, u[:, 3 * l_idx], side="right")
        chan = np.minimum(chan, len(loc.signs) - 1)
        tallies.append(tuple(np.bincount(chan, minlength=len(loc.signs)).tolist()))
        new_paths = np.zeros(shots, dtype=np.int64)
        new_list: list[tuple] = []
        new_index: dict[tuple, int] = {}
        for node_id in np.unique(paths):
            node_mask = paths == node_id
            path = path_list[node_id]
            for c in np.unique(chan[node_mask]):
                mask = node_mask & (chan == c)
                cum = engine.outcome_cum(path, int(c))
                out_idx = np.searchsorted(cum, u[mask, 3 * l_idx + 1], side="right")
                out_idx = np.minimum(out_idx, len(cum) - 1)
                sub_signs = np.empty(out_idx.shape)
                sub_paths = np.empty(out_idx.shape, dtype=np.int64)
                for o in np.unique(out_idx):
                    omask = out_idx == o
                    term_idx, a, _ = loc.outcomes[int(c)][int(o)]
                    pcum = loc.prep_cum[int(c)][term_idx]
                    uu = u[mask, 3 * l_idx + 2][omask]
                    p_idx = np.minimum(
                        np.searchsorted(pcum, uu, side="right"), len(pcum) - 1
                    )
                    child_ids = np.empty(p_idx.shape, dtype=np.int64)
                    for p in np.unique(p_idx):
                        key = engine.child(path, int(c), int(o), int(p))
                        if key not in new_index:
                            new_index[key] = len(new_list)
                            new_list.append(key)
                        child_ids[p_idx == p] = new_index[key]
                    sub_paths[omask] = child_ids
                    sub_signs[omask] = a
                signs[mask] *= loc.signs[int(c)] * sub_signs
                new_paths[mask] = sub_paths
        paths = new_paths
        path_list = new_list
    # terminal sampling
    y = np.zeros(shots, dtype=np.int64)
    for node_id in np.unique(paths):
        mask = paths == node_id
        cum, _ = engine.final_dist(path_list[node_id])
        y[mask] = np.minimum(
            np.searchsorted(cum, u[mask, -1], side="right"), len(cum) - 1
        )
    values = engine.gamma_total * signs * f.table[y]
    estimate = float(values.mean())
    std_error = float(values.std(ddof=1) / np.sqrt(shots)) if shots > 1 else float("inf")
    return EstimateReport(
        estimate=estimate,
        shots=shots,
        gamma_total=engine.gamma_total,
        std_error=std_error,
        seed=seed,
        tallies=tuple(tallies),
    )


def enumerate_estimator_mean(circuit: LayeredCircuit, cuts: CutSpec, f: PostProcess) -> float:
    """Zero-sampling-noise mean of the Monte-Carlo estimator.

    Sums sgn(c) * a * f over every channel, outcome, preparation and
    terminal outcome with their exact probabilities; must agree with
    exact_expectation for any valid decomposition.
    """
    if not cuts.locations:
        return exact_expectation(circuit, f)
    engine = _CutEngine(circuit, cuts, f)

    def walk(path: tuple, depth: int) -> float:
        if depth == len(engine.locations):
            _, probs = engine.final_dist(path)
            return float(np.dot(probs, f.table))
        loc = engine.locations[depth]
        chan_probs = np.diff(loc.channel_cum, prepend=0.0)
        total = 0.0
        for c in range(len(loc.signs)):
            cum = engine.outcome_cum(path, c)
            out_probs = np.diff(cum, prepend=0.0)
            for o, (term_idx, a, _) in enumerate(loc.outcomes[c]):
                if out_probs[o] <= 0:
                    continue
                comps = loc.preps[c][term_idx]
                qs = np.array([q for q, _, _ in comps])
                qs = qs / qs.sum()
                for p, q in enumerate(qs):
                    child = engine.child(path, c, o, p)
                    total += (
                        chan_probs[c]
                        * loc.signs[c]
                        * a
                        * out_probs[o]
                        * q
                        * walk(child, depth + 1)
                    )
        return total

    return engine.gamma_total * walk((), 0)


def variance_probe(
    circuit: LayeredCircuit,
    cuts: CutSpec,
    f: PostProcess,
    trials: int,
    shots: int,
    seed0: int = 0,
) -> float:
    """Sample variance of the estimate across independent-seed trials."""
    estimates = [
        run_monte_carlo(circuit, cuts, f, shots, seed=seed0 + t).estimate
        for t in range(trials)
    ]
    return float(np.var(estimates, ddof=1))


def demo_circuit(
    u12: np.ndarray | None = None, u23: np.ndarray | None = None
) -> LayeredCircuit:
    """The 3-qubit two-layer demo: u12 on qubits (1,2), then u23 on (2,3)."""
    u12 = dense.CX_2Q if u12 is None else np.asarray(u12, dtype=complex)
    u23 = dense.CX_2Q if u23 is None else np.asarray(u23, dtype=complex)
    return LayeredCircuit(3, (CircuitLayer(1, u12), CircuitLayer(2, u23)))


def demo_cut(decomposition: Decomposition) -> CutSpec:
    """Cut wire 2 of the demo circuit between its two layers."""
    if decomposition.n != 1:
        raise InvalidInputError("demo cut severs a single wire")
    return CutSpec((CutLocation(1, 2, decomposition),))


# ---------------------------------------------------------------------------
# JSON circuit / cut formats


def circuit_to_json(circuit: LayeredCircuit, f: PostProcess) -> dict:
    from .channels import _matrix_to_json

    out = {
        "width": circuit.width,
        "layers": [
            {
                "qubits": list(range(l.first, l.first + l.span)),
                "matrix": _matrix_to_json(l.matrix),
            }
            for l in circuit.layers
        ],
        "f": f.name,
    }
    if f.name == "table":
        out["table"] = f.table.tolist()
    return out


def circuit_from_json(data: dict) -> tuple[LayeredCircuit, PostProcess]:
    from .channels import _matrix_from_json

    width = int(data["width"])
    layers = []
    for entry in data["layers"]:
        qubits = [int(q) for q in entry["qubits"]]
        if qubits != list(range(qubits[0], qubits[0] + len(qubits))):
            raise InvalidInputError("layer qubits must be contiguous and ascending")
        layers.append(CircuitLayer(qubits[0], _matrix_from_json(entry["matrix"])))
    circuit = LayeredCircuit(width, tuple(layers))
    spec = data.get("f", "parity")
    if spec == "table":
        f = PostProcess.from_spec(data["table"], width)
    else:
        f = PostProcess.from_spec(spec, width)
    return circuit, f


def load_circuit(path) -> tuple[LayeredCircuit, PostProcess]:
    with open(path) as fh:
        return circuit_from_json(json.load(fh))


def save_circuit(circuit: LayeredCircuit, f: PostProcess, path) -> None:
    with open(path, "w") as fh:
        json.dump(circuit_to_json(circuit, f), fh)


def cuts_from_json(data: dict, builder: Callable[[int], Decomposition]) -> CutSpec:
    """Attach decompositions (per wire-set width) to the JSON cut locations."""
    locations = []
    for entry in data["locations"]:
        wires = [int(w) for w in entry["wires"]]
        if wires != list(range(wires[0], wires[0] + len(wires))):
            raise InvalidInputError("cut wires must be contiguous and ascending")
        locations.append(
            CutLocation(int(entry["after_layer"]), wires[0], builder(len(wires)))
        )
    locations.sort(key=lambda loc: (loc.after_layer, loc.first_wire))
    return CutSpec(tuple(locations))


def load_cuts(path, builder: Callable[[int], Decomposition]) -> CutSpec:
    with open(path) as fh:
        return cuts_from_json(json.load(fh), builder)
