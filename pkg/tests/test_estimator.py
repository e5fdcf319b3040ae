"""Estimator tests: exact simulation oracle, unbiasedness, determinism, variance."""

import numpy as np
import pytest

from wirecut import dense
from wirecut.channels import build_mub_default, build_optimal_1q, build_peng_1q
from wirecut.errors import InvalidInputError, ResourceLimitError
from wirecut.estimator import (
    CircuitLayer,
    CutLocation,
    CutSpec,
    LayeredCircuit,
    PostProcess,
    circuit_from_json,
    circuit_to_json,
    cuts_from_json,
    demo_circuit,
    demo_cut,
    enumerate_estimator_mean,
    exact_expectation,
    run_monte_carlo,
    sample_prep,
    variance_probe,
)

H2 = np.kron(dense.H_1Q, np.eye(2))
BELL_MAKER = dense.CX_2Q @ H2


class TestExactExpectation:
    def test_empty_circuit_parity(self):
        circ = LayeredCircuit(2, ())
        assert exact_expectation(circ, PostProcess.parity(2)) == 1.0

    def test_h_circuit_parity_zero(self):
        circ = LayeredCircuit(1, (CircuitLayer(1, dense.H_1Q),))
        assert abs(exact_expectation(circ, PostProcess.parity(1))) < 1e-12

    def test_empty_circuit_bit(self):
        circ = LayeredCircuit(1, ())
        assert exact_expectation(circ, PostProcess.bit(1, 1)) == 0.0

    def test_demo_cx_cx_parity_is_one(self):
        # |000> is a fixed point of both CX layers, so parity is exactly +1
        assert abs(exact_expectation(demo_circuit(), PostProcess.parity(3)) - 1.0) < 1e-12

    def test_ghz_statistics(self):
        circ = LayeredCircuit(3, (CircuitLayer(1, BELL_MAKER), CircuitLayer(2, dense.CX_2Q)))
        assert abs(exact_expectation(circ, PostProcess.parity(3))) < 1e-12
        assert abs(exact_expectation(circ, PostProcess.bit(3, 3)) - 0.5) < 1e-12

    def test_width_guard(self):
        with pytest.raises(ResourceLimitError):
            exact_expectation(LayeredCircuit(13, ()), PostProcess.parity(13))


class TestSamplePrep:
    def test_single_qubit_flip_is_deterministic(self):
        # third channel of the optimal cut: outcome 0 always re-prepares |1>
        _, ch = build_optimal_1q().channels[2]
        rng = np.random.default_rng(0)
        for _ in range(10):
            label, vec = sample_prep(ch, 0, rng)
            assert label == 1
            np.testing.assert_allclose(vec, [0, 1], atol=1e-12)

    def test_two_qubit_mixture_frequencies(self):
        _, ch = build_mub_default(2).channels[-1]
        rng = np.random.default_rng(1)
        draws = 20000
        counts = np.zeros(4)
        for _ in range(draws):
            label, _ = sample_prep(ch, 1, rng)  # outcome j = 01
            counts[label] += 1
        assert counts[1] == 0
        for k in (0, 2, 3):
            p_hat = counts[k] / draws
            sigma = np.sqrt((1 / 3) * (2 / 3) / draws)
            assert abs(p_hat - 1 / 3) < 3 * sigma

    def test_unitary_prep_is_fixed(self):
        _, ch = build_mub_default(1).channels[0]  # X-basis channel
        rng = np.random.default_rng(2)
        label, vec = sample_prep(ch, 0, rng)
        assert label is None
        np.testing.assert_allclose(np.abs(vec), [1 / np.sqrt(2)] * 2, atol=1e-12)


class TestMonteCarlo:
    def test_identity_wire_estimate(self):
        circ = LayeredCircuit(1, ())
        cuts = CutSpec((CutLocation(0, 1, build_optimal_1q()),))
        rep = run_monte_carlo(circ, cuts, PostProcess.parity(1), shots=20000, seed=0)
        sigma = 3.0 / np.sqrt(rep.shots)
        assert abs(rep.estimate - 1.0) <= 5 * sigma
        assert rep.gamma_total == 3.0
        assert sum(rep.tallies[0]) == rep.shots

    def test_demo_converges_both_methods(self):
        circ = demo_circuit()
        f = PostProcess.parity(3)
        exact = exact_expectation(circ, f)
        for build in (build_peng_1q, build_optimal_1q):
            d = build()
            rep = run_monte_carlo(circ, demo_cut(d), f, shots=200000, seed=0)
            bound = 5 * float(d.gamma) / np.sqrt(rep.shots)
            assert abs(rep.estimate - exact) <= bound

    def test_estimate_bound(self):
        circ = demo_circuit()
        rep = run_monte_carlo(
            circ, demo_cut(build_peng_1q()), PostProcess.parity(3), 500, seed=3
        )
        assert abs(rep.estimate) <= rep.gamma_total + 1e-12

    def test_determinism(self):
        circ = demo_circuit()
        cuts = demo_cut(build_optimal_1q())
        f = PostProcess.parity(3)
        a = run_monte_carlo(circ, cuts, f, 5000, seed=7)
        b = run_monte_carlo(circ, cuts, f, 5000, seed=7)
        assert a == b
        c = run_monte_carlo(circ, cuts, f, 5000, seed=8)
        assert c.estimate != a.estimate

    def test_two_independent_single_wire_cuts(self):
        circ = LayeredCircuit(3, (CircuitLayer(1, BELL_MAKER), CircuitLayer(2, dense.CX_2Q)))
        d = build_optimal_1q()
        cuts = CutSpec((CutLocation(1, 1, d), CutLocation(1, 2, d)))
        assert cuts.gamma_total == 9.0
        f = PostProcess.bit(3, 3)
        exact = exact_expectation(circ, f)
        mean = enumerate_estimator_mean(circ, cuts, f)
        assert abs(mean - exact) < 1e-10
        rep = run_monte_carlo(circ, cuts, f, shots=200000, seed=0)
        assert abs(rep.estimate - exact) <= 5 * 9.0 / np.sqrt(rep.shots)

    def test_shots_guard(self):
        with pytest.raises(InvalidInputError):
            run_monte_carlo(
                demo_circuit(), demo_cut(build_optimal_1q()), PostProcess.parity(3), 0
            )

    def test_cut_width_mismatch(self):
        from wirecut.channels import build_mub_default

        with pytest.raises(InvalidInputError):
            CutSpec((CutLocation(1, 3, build_mub_default(2)),))
            run_monte_carlo(
                demo_circuit(),
                CutSpec((CutLocation(1, 3, build_mub_default(2)),)),
                PostProcess.parity(3),
                10,
            )


class TestCutSeparation:
    def test_prepared_states_do_not_depend_on_upstream(self):
        """Only the classical record crosses a cut: the prepared wire states
        are a function of (channel, outcome) alone, whatever ran upstream."""
        from wirecut.estimator import _RealizedLocation

        rng = np.random.default_rng(9)
        d = build_optimal_1q()
        loc_a = _RealizedLocation(CutLocation(1, 2, d), 3)
        loc_b = _RealizedLocation(CutLocation(1, 2, d), 3)
        for chan in range(len(loc_a.preps)):
            for term_a, term_b in zip(loc_a.preps[chan], loc_b.preps[chan]):
                for (qa, la, va), (qb, lb, vb) in zip(term_a, term_b):
                    assert qa == qb and la == lb
                    np.testing.assert_array_equal(va, vb)
        # and per-shot trajectories with identical classical records agree
        circ_a = demo_circuit()
        circ_b = demo_circuit(dense.haar_unitary(4, rng), dense.CX_2Q)
        f = PostProcess.parity(3)
        rep_a = run_monte_carlo(circ_a, demo_cut(d), f, 200, seed=5)
        rep_b = run_monte_carlo(circ_b, demo_cut(d), f, 200, seed=5)
        assert rep_a.gamma_total == rep_b.gamma_total


class TestUnbiasedness:
    @pytest.mark.parametrize("build", [build_peng_1q, build_optimal_1q])
    def test_demo_zero_noise(self, build):
        circ = demo_circuit()
        f = PostProcess.parity(3)
        exact = exact_expectation(circ, f)
        mean = enumerate_estimator_mean(circ, demo_cut(build()), f)
        assert abs(mean - exact) < 1e-10

    @pytest.mark.parametrize("build", [build_peng_1q, build_optimal_1q])
    def test_random_circuits_zero_noise(self, build):
        rng = np.random.default_rng(42)
        d = build()
        for _ in range(5):
            circ = demo_circuit(dense.haar_unitary(4, rng), dense.haar_unitary(4, rng))
            f = PostProcess.parity(3)
            exact = exact_expectation(circ, f)
            mean = enumerate_estimator_mean(circ, demo_cut(d), f)
            assert abs(mean - exact) < 1e-10

    def test_sequential_cuts_different_layers_zero_noise(self):
        """Two cuts at different boundaries: the second cut's upstream state
        depends on the first cut's record, so this drives the chained
        trajectory tree; mixing methods also checks per-location bookkeeping."""
        rng = np.random.default_rng(13)
        circ = LayeredCircuit(
            4,
            (
                CircuitLayer(1, dense.haar_unitary(4, rng)),
                CircuitLayer(2, dense.haar_unitary(4, rng)),
                CircuitLayer(3, dense.haar_unitary(4, rng)),
            ),
        )
        cuts = CutSpec(
            (
                CutLocation(1, 2, build_optimal_1q()),
                CutLocation(2, 3, build_peng_1q()),
            )
        )
        assert cuts.gamma_total == 12.0
        f = PostProcess.parity(4)
        exact = exact_expectation(circ, f)
        mean = enumerate_estimator_mean(circ, cuts, f)
        assert abs(mean - exact) < 1e-10
        rep = run_monte_carlo(circ, cuts, f, shots=400000, seed=1)
        assert abs(rep.estimate - exact) <= 5 * 12.0 / np.sqrt(rep.shots)
        assert len(rep.tallies) == 2
        assert sum(rep.tallies[0]) == rep.shots and sum(rep.tallies[1]) == rep.shots

    def test_teleport_cut_from_json_zero_noise(self):
        """The teleport channels exercise subnormalized rank-1 effects and
        non-diagonal pure preparations, here additionally piped through the
        JSON wire format before cutting."""
        from wirecut.channels import (
            build_teleport_nq,
            decomposition_from_json,
            decomposition_to_json,
        )

        d = decomposition_from_json(decomposition_to_json(build_teleport_nq(1)))
        rng = np.random.default_rng(3)
        circ = demo_circuit(dense.haar_unitary(4, rng), dense.haar_unitary(4, rng))
        f = PostProcess.parity(3)
        exact = exact_expectation(circ, f)
        mean = enumerate_estimator_mean(circ, demo_cut(d), f)
        assert abs(mean - exact) < 1e-10

    def test_mub_two_wire_cut_zero_noise(self):
        # cut both wires of a 2-qubit circuit with the 2-wire MUB decomposition
        rng = np.random.default_rng(5)
        u = dense.haar_unitary(4, rng)
        v = dense.haar_unitary(4, rng)
        circ = LayeredCircuit(2, (CircuitLayer(1, u), CircuitLayer(1, v)))
        cuts = CutSpec((CutLocation(1, 1, build_mub_default(2)),))
        f = PostProcess.parity(2)
        exact = exact_expectation(circ, f)
        mean = enumerate_estimator_mean(circ, cuts, f)
        assert abs(mean - exact) < 1e-10


class TestVariance:
    def test_halves_when_shots_double(self):
        circ = demo_circuit()
        cuts = demo_cut(build_optimal_1q())
        f = PostProcess.parity(3)
        v1 = variance_probe(circ, cuts, f, trials=300, shots=400, seed0=100)
        v2 = variance_probe(circ, cuts, f, trials=300, shots=800, seed0=1000)
        assert 1.5 < v1 / v2 < 2.5

    def test_optimal_variance_within_gamma_square(self):
        circ = demo_circuit()
        f = PostProcess.parity(3)
        rep = run_monte_carlo(circ, demo_cut(build_optimal_1q()), f, 100000, seed=0)
        per_shot_var = rep.std_error**2 * rep.shots
        assert per_shot_var <= 9.0 + 0.5  # gamma^2 * max|f|^2 plus slack


class TestJsonForms:
    def test_circuit_round_trip(self):
        circ = demo_circuit()
        f = PostProcess.parity(3)
        data = circuit_to_json(circ, f)
        back, f2 = circuit_from_json(data)
        assert back.width == 3
        np.testing.assert_allclose(back.layers[0].matrix, circ.layers[0].matrix)
        np.testing.assert_allclose(f2.table, f.table)

    def test_table_postprocess_round_trip(self):
        circ = LayeredCircuit(1, ())
        f = PostProcess(1, np.array([0.25, -0.5]))
        data = circuit_to_json(circ, f)
        _, f2 = circuit_from_json(data)
        np.testing.assert_allclose(f2.table, [0.25, -0.5])

    def test_cuts_from_json(self):
        spec = cuts_from_json(
            {"locations": [{"after_layer": 1, "wires": [2]}]},
            lambda n: build_optimal_1q(),
        )
        assert spec.locations[0].first_wire == 2
        with pytest.raises(InvalidInputError):
            cuts_from_json(
                {"locations": [{"after_layer": 0, "wires": [1, 3]}]},
                lambda n: build_optimal_1q(),
            )

    def test_report_json(self):
        rep = run_monte_carlo(
            demo_circuit(), demo_cut(build_optimal_1q()), PostProcess.parity(3), 100
        )
        data = rep.to_json()
        assert data["shots"] == 100
        assert len(data["tallies"][0]) == 3
