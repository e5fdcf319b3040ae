"""Decomposition builders: exact gamma/m values and transfer-matrix residuals."""

from fractions import Fraction

import numpy as np
import pytest

from wirecut.channels import (
    ChannelTerm,
    Decomposition,
    MPChannel,
    build_decomposition,
    build_mub_default,
    build_mub_nq,
    build_optimal_1q,
    build_peng_1q,
    build_randomized_nq,
    build_teleport_nq,
    decomposition_from_json,
    decomposition_to_json,
    identity_ptm,
    ptm,
    rank_bound_check,
    single_qubit_clifford_group,
    tensor_decompositions,
    verify_decomposition,
)
from wirecut.dense import basis_state
from wirecut.errors import (
    DesignViolationError,
    InvalidInputError,
    ResourceLimitError,
)
from wirecut.families import generate_partition
from wirecut.synth import synthesize


def projector(vec):
    return np.outer(vec, np.conj(vec))


PLUS = np.array([1, 1]) / np.sqrt(2)
MINUS = np.array([1, -1]) / np.sqrt(2)


class TestPtm:
    def test_optimal_decomposition_sums_to_identity_matrix(self):
        d = build_optimal_1q()
        total = sum(float(c) * ptm(ch).entries for c, ch in d.channels)
        np.testing.assert_allclose(total, np.eye(4), atol=1e-12)

    def test_x_measure_plus_prepare_pattern(self):
        ch = MPChannel(
            1,
            (
                ChannelTerm(1, projector(PLUS), projector(PLUS)),
                ChannelTerm(-1, projector(MINUS), projector(PLUS)),
            ),
        )
        mat = ptm(ch).entries
        expected = np.zeros((4, 4))
        expected[0, 1] = 1.0  # I-row hits the X column
        expected[1, 1] = 1.0  # X-row hits the X column
        np.testing.assert_allclose(mat, expected, atol=1e-12)

    def test_trace_preserving_channel_top_row(self):
        # all signs +1 makes the channel trace preserving: first row = e_1
        group = single_qubit_clifford_group()
        u = group[5]
        ch = MPChannel(
            1,
            tuple(
                ChannelTerm(1, projector(u[:, j]), projector(u[:, j]))
                for j in range(2)
            ),
        )
        row = ptm(ch).entries[0]
        np.testing.assert_allclose(row, [1, 0, 0, 0], atol=1e-12)

    def test_resource_guard(self):
        dim = 2**7
        ident = np.eye(dim, dtype=complex)
        ch = MPChannel(7, (ChannelTerm(1, ident, projector(basis_state(0, dim))),))
        with pytest.raises(ResourceLimitError):
            ptm(ch)


class TestPeng:
    def test_gamma_and_m(self):
        d = build_peng_1q()
        assert d.gamma == Fraction(4)
        assert d.m == 8

    def test_residual(self):
        assert verify_decomposition(build_peng_1q()) < 1e-10

    def test_perturbed_weight_detected(self):
        d = build_peng_1q()
        channels = list(d.channels)
        c3, ch3 = channels[2]
        channels[2] = (float(c3) + 0.01, ch3)
        bad = Decomposition(1, tuple(channels), "peng-perturbed")
        assert verify_decomposition(bad) >= 0.005


class TestOptimal1q:
    def test_gamma_and_m(self):
        d = build_optimal_1q()
        assert d.gamma == Fraction(3)
        assert d.m == 3

    def test_third_channel_is_bit_flip(self):
        c, ch = build_optimal_1q().channels[2]
        assert c == Fraction(-1)
        np.testing.assert_allclose(ch.terms[0].effect, projector(basis_state(0, 2)))
        np.testing.assert_allclose(ch.terms[0].prep, projector(basis_state(1, 2)))
        np.testing.assert_allclose(ch.terms[1].effect, projector(basis_state(1, 2)))
        np.testing.assert_allclose(ch.terms[1].prep, projector(basis_state(0, 2)))

    def test_residual(self):
        assert verify_decomposition(build_optimal_1q()) < 1e-10


class TestMub:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_gamma_m_residual(self, n):
        d = build_mub_default(n)
        assert d.gamma == Fraction(2 ** (n + 1) - 1)
        assert d.m == 2**n + 1
        assert verify_decomposition(d) < 1e-10

    def test_n1_matches_optimal_up_to_ordering(self):
        mub = build_mub_default(1)
        opt = build_optimal_1q()
        assert mub.gamma == opt.gamma and mub.m == opt.m

        def channel_key(pair):
            c, ch = pair
            return (float(c), np.round(ptm(ch).entries, 9).tobytes())

        assert sorted(map(channel_key, mub.channels)) == sorted(
            map(channel_key, opt.channels)
        )

    def test_saturates_rank_bound(self):
        for n in (1, 2, 3):
            d = build_mub_default(n)
            assert d.m == rank_bound_check(identity_ptm(n), n)

    def test_rejects_unverified_circuits(self):
        part = generate_partition(2)
        circuits = [synthesize(f) for f in part.families[:-1]]
        circuits[0], circuits[1] = circuits[1], circuits[0]  # wrong pairing
        with pytest.raises(InvalidInputError):
            build_mub_nq(2, part, circuits)


class TestRandomized:
    def test_clifford_group_has_24_elements(self):
        group = single_qubit_clifford_group()
        assert len(group) == 24
        for u in group:
            np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-10)

    def test_clifford_ensemble(self):
        group = single_qubit_clifford_group()
        p = Fraction(1, 24)
        d = build_randomized_nq(1, [(u, p) for u in group])
        assert d.gamma == Fraction(5)
        assert d.m == 25
        assert verify_decomposition(d) < 1e-10
        # 2-design size lower bound for d=2: 2^4 - 2*2^2 + 3
        assert d.m >= 2**4 - 2 * 2**2 + 3

    def test_non_design_rejected(self):
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        with pytest.raises(DesignViolationError):
            build_randomized_nq(1, [(np.eye(2, dtype=complex), 0.5), (h, 0.5)])


class TestTeleport:
    def test_n1(self):
        d = build_teleport_nq(1)
        assert d.m == 5
        assert d.gamma == Fraction(3)
        assert verify_decomposition(d) < 1e-10

    def test_n2(self):
        d = build_teleport_nq(2)
        assert d.m == 27
        assert d.gamma == Fraction(7)
        assert verify_decomposition(d) < 1e-10

    def test_guard(self):
        with pytest.raises(ResourceLimitError):
            build_teleport_nq(3)


class TestRankBound:
    def test_identity_bounds(self):
        assert rank_bound_check(identity_ptm(1), 1) == 3
        assert rank_bound_check(identity_ptm(2), 2) == 5

    def test_rank_one_channel(self):
        # replacement channel rho -> Tr[rho] |0><0| has a rank-1 transfer matrix
        from wirecut.channels import TransferMatrix
        from wirecut.pauli import pauli_vector

        prep = projector(basis_state(0, 2))
        mat = np.outer(pauli_vector(prep, 1), [np.sqrt(2), 0, 0, 0])
        assert rank_bound_check(TransferMatrix(1, mat.real), 1) == 1


class TestProductRule:
    @pytest.mark.parametrize("k", [2, 3])
    def test_tensor_optimal_cuts(self, k):
        d = build_optimal_1q()
        out = d
        for _ in range(k - 1):
            out = tensor_decompositions(out, d)
        assert out.gamma == Fraction(3**k)
        assert out.m == 3**k
        assert verify_decomposition(out) < 1e-10


class TestValidationAndJson:
    def test_povm_must_sum_to_identity(self):
        with pytest.raises(InvalidInputError):
            MPChannel(1, (ChannelTerm(1, projector(PLUS), projector(PLUS)),))

    def test_prep_must_be_a_state(self):
        with pytest.raises(InvalidInputError):
            MPChannel(
                1,
                (
                    ChannelTerm(1, np.eye(2, dtype=complex), 2 * projector(PLUS)),
                ),
            )

    def test_bad_sign_rejected(self):
        with pytest.raises(InvalidInputError):
            ChannelTerm(2, projector(PLUS), projector(PLUS))

    def test_json_round_trip(self):
        d = build_optimal_1q()
        data = decomposition_to_json(d)
        back = decomposition_from_json(data)
        assert back.m == d.m
        assert abs(float(back.gamma) - 3.0) < 1e-12
        assert verify_decomposition(back) < 1e-10
        assert data["gamma"] == 3.0 and data["m"] == 3

    def test_build_decomposition_dispatch(self):
        assert build_decomposition("peng", 1).label == "peng"
        with pytest.raises(InvalidInputError):
            build_decomposition("nope", 1)
        with pytest.raises(InvalidInputError):
            build_decomposition("optimal1q", 2)
