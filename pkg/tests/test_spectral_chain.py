#!/usr/bin/env python
# -*- coding: utf-8 -*-

# chaincert - Certified truncation error bounds for chain-mapped spin-boson simulations
#
# Copyright (C) 2024-2026
# - Helmholtz Centre Potsdam - GFZ German Research Centre for Geosciences Potsdam,
#   Germany (https://www.gfz-potsdam.de/)
#
# Licensed only under the EUPL, Version 1.2 or - as soon they will be approved
# by the European Commission - subsequent versions of the EUPL (the "Licence").
# You may not use this work except in compliance with the Licence.
#
# You may obtain a copy of the Licence at:
# https://joinup.ec.europa.eu/software/page/eupl
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Tests for the spectral_chain module."""

import unittest

import numpy as np
import pytest

from chaincert.exceptions import GridTooCoarse, NonMonotoneDispersion, QuadratureUnstable
from chaincert.spectral_chain import (DispersionSpec, MappingKind, chainCoefficientsTable, chainFor,
                                      mappingConstants, particleChain, phononChain, powerLawDensity,
                                      spectralDensityFromDispersion, stieltjesRecurrenceOracle, tabulatedDensity)


class TestSpectralChain(unittest.TestCase):
    density = None

    @classmethod
    def setUp(cls) -> None:
        """Define the Class method SetUp."""
        cls.density = powerLawDensity(alpha=0.8, s=3.0, omega_c=1.0)

    @pytest.mark.subset
    def testChainCertPowerLawDensity(self):
        """Test evaluation and support of the power-law density."""
        np.testing.assert_allclose(self.density(0.5), np.pi * 0.8 * 0.125, rtol=1e-14)
        np.testing.assert_array_equal(self.density(np.array([-0.1, 1.5])), [0.0, 0.0])
        assert self.density.supportBounds == (0.0, 1.0)
        assert not self.density.massive

        with pytest.raises(ValueError):
            powerLawDensity(alpha=0.8, s=0.0, omega_c=1.0)
        with pytest.raises(ValueError):
            powerLawDensity(alpha=-1.0, s=1.0, omega_c=1.0)
        with pytest.raises(ValueError):
            powerLawDensity(alpha=0.8, s=1.0, omega_c=0.0)

    @pytest.mark.subset
    def testChainCertDensityFromDispersion(self):
        """Test the density derived from sampled dispersion relations."""
        k = np.linspace(0.0, 1.0, 101)
        density = spectralDensityFromDispersion(dispersion=DispersionSpec(k=k, g=k, h=np.ones_like(k)))
        np.testing.assert_allclose(density.j_values, np.pi, rtol=1e-12)
        np.testing.assert_allclose(density(np.array([0.25, 0.505])), np.pi, rtol=1e-12)

        k = np.linspace(0.0, 1.0, 10001)
        density = spectralDensityFromDispersion(dispersion=DispersionSpec(k=k, g=k ** 2, h=k))
        omega = density.omega_grid
        select = (omega >= 0.0625) & (omega < 1.0)
        np.testing.assert_allclose(density.j_values[select], np.pi / 2 * np.sqrt(omega[select]), rtol=1e-6)

        k = np.linspace(0.0, np.pi, 50)
        with pytest.raises(NonMonotoneDispersion):
            spectralDensityFromDispersion(dispersion=DispersionSpec(k=k, g=np.sin(k), h=np.ones_like(k)))

        with pytest.raises(GridTooCoarse):
            spectralDensityFromDispersion(dispersion=DispersionSpec(k=np.array([0.0, 1.0]), g=np.array([0.0, 1.0]),
                                                                    h=np.array([1.0, 1.0])))

    @pytest.mark.subset
    def testChainCertMappingConstants(self):
        """Test mu0 and mu1 in closed form and by quadrature."""
        constants = mappingConstants(density=self.density)
        np.testing.assert_allclose(constants.mu0, 0.632456, atol=1e-6)
        np.testing.assert_allclose(constants.mu1, 0.565685, atol=1e-6)

        numeric = mappingConstants(density=self.density, closed_form=False)
        np.testing.assert_allclose(numeric.mu0, constants.mu0, rtol=1e-10)
        np.testing.assert_allclose(numeric.mu1, constants.mu1, rtol=1e-10)

        zero = mappingConstants(density=powerLawDensity(alpha=0.0, s=3.0, omega_c=1.0))
        assert zero.mu0 == 0.0 and zero.mu1 == 0.0

        omega = np.linspace(0.0, 1.0, 201)
        tabulated = mappingConstants(density=tabulatedDensity(omega=omega, j_values=np.pi * 0.8 * omega ** 3))
        np.testing.assert_allclose(tabulated.mu0, constants.mu0, rtol=1e-6)
        np.testing.assert_allclose(tabulated.mu1, constants.mu1, rtol=1e-6)

    @pytest.mark.subset
    def testChainCertClosedFormChains(self):
        """Test the closed-form particle and phonon chains."""
        chain = particleChain(density=self.density, L=10)
        assert chain.length == 10
        np.testing.assert_allclose(chain.x_diag[0], 0.8, rtol=1e-14)
        np.testing.assert_allclose(chain.h_coeff, 0.632456, atol=1e-6)
        np.testing.assert_array_equal(chain.X, chain.P)

        chain_s1 = particleChain(density=powerLawDensity(alpha=0.8, s=1.0, omega_c=1.0), L=3)
        np.testing.assert_allclose(chain_s1.x_diag[0], 2 / 3, rtol=1e-14)

        phonon = phononChain(density=self.density, L=10)
        np.testing.assert_allclose(phonon.x_diag[0], 0.5 * (1 + 3 / 7), rtol=1e-14)
        np.testing.assert_allclose(phonon.h_coeff, 0.565685, atol=1e-6)
        assert phonon.p_is_identity
        assert phonon.p_boundary == 0.0
        np.testing.assert_array_equal(phonon.P, np.eye(10))

        with pytest.raises(ValueError):
            particleChain(density=self.density, L=0)
        with pytest.raises(ValueError):
            particleChain(density=tabulatedDensity(omega=np.linspace(0, 1, 5), j_values=np.ones(5)), L=3)

    @pytest.mark.subset
    def testChainCertTruncatedChain(self):
        """Test that sub-chains keep the boundary coupling of the parent chain."""
        long_chain = particleChain(density=self.density, L=10)
        short_chain = particleChain(density=self.density, L=3)
        sub = long_chain.truncated(3)
        np.testing.assert_array_equal(sub.x_diag, short_chain.x_diag)
        np.testing.assert_array_equal(sub.x_offdiag, short_chain.x_offdiag)
        np.testing.assert_allclose(sub.x_boundary, short_chain.x_boundary, rtol=1e-15)
        np.testing.assert_allclose(sub.p_boundary, short_chain.p_boundary, rtol=1e-15)

        with pytest.raises(ValueError):
            long_chain.truncated(11)

    @pytest.mark.subset
    def testChainCertStieltjesSmallMeasures(self):
        """Test the Stieltjes procedure on measures with known first coefficients."""
        linear = stieltjesRecurrenceOracle(density=powerLawDensity(alpha=1.0, s=1.0, omega_c=1.0), L=1)
        np.testing.assert_allclose(linear.x_diag[0], 2 / 3, rtol=1e-12)

        omega = np.linspace(0.0, 1.0, 11)
        flat = stieltjesRecurrenceOracle(density=tabulatedDensity(omega=omega, j_values=np.full(11, np.pi)), L=1)
        np.testing.assert_allclose(flat.x_diag[0], 0.5, rtol=1e-12)

        with pytest.raises(QuadratureUnstable):
            stieltjesRecurrenceOracle(density=self.density, L=10, n_nodes=5)

    def testChainCertClosedFormAgainstStieltjes(self):
        """Test closed-form chain coefficients against the Stieltjes oracle at L=50."""
        for s in [1.0, 3.0]:
            density = powerLawDensity(alpha=0.8, s=s, omega_c=1.0)
            for kind, closed in [(MappingKind.particle, particleChain), (MappingKind.phonon, phononChain)]:
                exact = closed(density=density, L=50)
                oracle = stieltjesRecurrenceOracle(density=density, L=50, kind=kind)
                np.testing.assert_allclose(oracle.x_diag, exact.x_diag, rtol=0, atol=1e-8)
                np.testing.assert_allclose(oracle.x_offdiag, exact.x_offdiag, rtol=0, atol=1e-8)
                np.testing.assert_allclose(oracle.x_boundary, exact.x_boundary, rtol=0, atol=1e-8)
                np.testing.assert_allclose(oracle.h_coeff, exact.h_coeff, rtol=0, atol=1e-8)

    def testChainCertTabulatedChain(self):
        """Test that a finely tabulated power law reproduces the closed-form chain."""
        omega = np.linspace(0.0, 1.0, 2001)
        density = tabulatedDensity(omega=omega, j_values=np.pi * 0.8 * omega ** 3)
        chain = chainFor(density=density, kind=MappingKind.particle, L=5)
        exact = particleChain(density=self.density, L=5)
        np.testing.assert_allclose(chain.x_diag, exact.x_diag, rtol=1e-5)
        np.testing.assert_allclose(chain.x_offdiag, exact.x_offdiag, rtol=1e-5)
        np.testing.assert_allclose(chain.h_coeff, exact.h_coeff, rtol=1e-5)

    def testChainCertJacobiSpectrum(self):
        """Test that the chain spectrum fills the support at L=200."""
        for closed in [particleChain, phononChain]:
            eigenvalues = closed(density=self.density, L=200).xEigenvalues()
            assert eigenvalues.min() >= -1e-10
            assert eigenvalues.max() <= 1.0 + 1e-10
            assert eigenvalues.max() >= 0.99

    @pytest.mark.subset
    def testChainCertCoefficientAsymptotics(self):
        """Test that diagonal and off-diagonal coefficients approach omega_c/2 and omega_c/4."""
        for omega_c in [1.0, 2.0]:
            density = powerLawDensity(alpha=0.8, s=3.0, omega_c=omega_c)
            for closed in [particleChain, phononChain]:
                short_chain = closed(density=density, L=20)
                chain = closed(density=density, L=200)
                assert abs(chain.x_diag[-1] - omega_c / 2) < 0.01 * omega_c
                assert abs(chain.x_offdiag[-1] - omega_c / 4) < 0.01 * omega_c
                assert abs(chain.x_diag[-1] - omega_c / 2) < abs(short_chain.x_diag[-1] - omega_c / 2)
                assert abs(chain.x_offdiag[-1] - omega_c / 4) < abs(short_chain.x_offdiag[-1] - omega_c / 4)

    @pytest.mark.subset
    def testChainCertLargestEigenvalueGrows(self):
        """Test that the largest eigenvalue of X_L does not decrease with L."""
        for s in [1.0, 3.0]:
            density = powerLawDensity(alpha=0.8, s=s, omega_c=1.0)
            for closed in [particleChain, phononChain]:
                chain = closed(density=density, L=40)
                largest = [chain.truncated(L).xEigenvalues().max() for L in range(1, 41)]
                assert np.all(np.diff(largest) >= -1e-14)
                assert largest[-1] <= 1.0 + 1e-10

    @pytest.mark.subset
    def testChainCertCoefficientsTable(self):
        """Test the site-indexed coefficient table."""
        table = chainCoefficientsTable(chain=particleChain(density=self.density, L=10))
        assert list(table.columns) == ['site_index', 'diag_X', 'offdiag_X', 'diag_P', 'offdiag_P']
        assert len(table) == 10
        np.testing.assert_allclose(table['diag_X'][0], 0.8, rtol=1e-14)

        table = chainCoefficientsTable(chain=phononChain(density=self.density, L=4))
        np.testing.assert_array_equal(table['diag_P'], np.ones(4))
        np.testing.assert_array_equal(table['offdiag_P'], np.zeros(4))
