"""Normal-mode spectrum and gap tests."""

import numpy as np
import pytest

from gausstopo import spectra
from gausstopo.errors import ValidationError
from gausstopo.lattice import w_closed_form


class TestNormalModes:
    def test_3x3_unit_squeezing(self):
        res = spectra.normal_modes(3, 3, 1.0)
        assert res.deltas.min() == pytest.approx(0.5, abs=1e-14)
        vertex_energy = 8 * res.omegas / 6.0
        assert vertex_energy.min() == pytest.approx(1 / 3, abs=1e-14)
        assert res.gap == pytest.approx(1 / 3, abs=1e-14)
        assert not res.zero_mode

    def test_even_torus_zero_mode(self):
        res = spectra.normal_modes(4, 4, 1.0)
        assert res.deltas[2, 2] == 0.0
        assert res.gap == 0.0
        assert res.zero_mode

    def test_uniform_mode(self):
        res = spectra.normal_modes(5, 5, 1.0)
        assert res.deltas[0, 0] == pytest.approx(2.0)

    def test_branch_positivity(self):
        for s in (1.0, np.e):
            res = spectra.normal_modes(7, 9, s)
            assert res.deltas.min() >= 0.0
            assert res.omegas.min() >= -1e-12

    def test_too_small_rejected(self):
        with pytest.raises(ValidationError):
            spectra.normal_modes(2, 5, 1.0)


class TestGap:
    def test_3x3(self):
        assert spectra.gap(3, 3, 1.0) == pytest.approx(1 / 3, abs=1e-14)

    def test_even_exactly_zero(self):
        assert spectra.gap(6, 8, np.e) == 0.0

    def test_face_branch_matches_asymptotic(self):
        # the face branch minimum reproduces 4 pi^2 / (s^2 n^2) at large n;
        # the full gap is dominated by the near-zero alternating vertex mode
        s = np.e
        res = spectra.normal_modes(41, 41, s)
        face_min = (8 * res.deltas / s ** 2).min()
        assert face_min / spectra.gap_asymptotic(41, s) == pytest.approx(1.0, abs=0.01)
        assert res.gap <= face_min

    def test_decreases_with_size(self):
        gaps = [spectra.gap(n, n, 1.0) for n in (11, 21, 41)]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_cluster_gap_contrast(self):
        # cluster gap is size-independent, surface gap shrinks with n
        assert spectra.cluster_gap(2.0) == 0.5
        assert spectra.cluster_gap(1.0) == 2.0
        assert spectra.gap(41, 41, 2.0) < spectra.gap(11, 11, 2.0) \
            < spectra.cluster_gap(2.0)


class TestGapAsymptotic:
    def test_arithmetic(self):
        assert spectra.gap_asymptotic(10, 1.0) == pytest.approx(4 * np.pi ** 2 / 100)

    def test_scaling(self):
        assert spectra.gap_asymptotic(20, 1.0) == pytest.approx(
            spectra.gap_asymptotic(10, 1.0) / 4)

    def test_gapless_limit(self):
        assert spectra.gap_asymptotic(10, 1e8) < 1e-14

    def test_rejects_bad_n(self):
        with pytest.raises(ValidationError):
            spectra.gap_asymptotic(0, 1.0)


class TestCommutatorMatrices:
    @pytest.mark.parametrize("n,m", [(3, 3), (5, 7), (9, 9)])
    @pytest.mark.parametrize("s", [1.0, np.e])
    def test_eigenvalues_match_closed_form(self, n, m, s):
        m_v, m_f = spectra.commutator_matrices(n, m, s)
        res = spectra.normal_modes(n, m, s)
        assert np.sort(np.linalg.eigvalsh(m_v)) == pytest.approx(
            np.sort(res.omegas.ravel()), abs=1e-10)
        assert np.sort(np.linalg.eigvalsh(m_f)) == pytest.approx(
            np.sort(res.deltas.ravel()), abs=1e-10)

    def test_structure(self):
        s = np.e
        m_v, m_f = spectra.commutator_matrices(5, 5, s)
        assert np.array_equal(m_v, m_v.T)
        expected = 1 + 4 * (w_closed_form(1, s) + w_closed_form(np.sqrt(2), s)
                            + w_closed_form(2, s))
        assert m_v.sum(axis=0) == pytest.approx(np.full(25, expected))
        assert m_f.sum(axis=0) == pytest.approx(np.full(25, 2.0))
