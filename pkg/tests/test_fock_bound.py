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

"""Tests for the fock_bound module."""

import unittest
from decimal import Decimal, localcontext

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.linalg import expm

from chaincert.exceptions import DimensionMismatch, NoConvergence, UnsupportedState
from chaincert.fock_bound import (BathState, BathStateKind, EpsilonCurve, certify, deltaMBound, epsilonCurve,
                                  epsilonDense, epsilonM, exactTruncationErrorOracle, fockModel, integrationGrid,
                                  propagate, tailWeight)
from chaincert.fock_space import SIGMA_Z, SpinSystem, TruncationSpec, productState, spinState
from chaincert.spectral_chain import MappingKind, particleChain, phononChain, powerLawDensity


class TestFockBound(unittest.TestCase):
    density = None
    system = None
    chain = None

    @classmethod
    def setUp(cls) -> None:
        """Define the Class method SetUp."""
        cls.density = powerLawDensity(alpha=0.8, s=3.0, omega_c=1.0)
        cls.system = SpinSystem.spinBoson(1.0)
        cls.chain = particleChain(density=cls.density, L=2)

    def _model(self, trunc, chain=None, tol=1e-10):
        chain = self.chain if chain is None else chain
        psi0 = productState(system_state=spinState("up"), trunc=trunc)
        return fockModel(system=self.system, chain=chain, trunc=trunc, psi0=psi0, tol=tol)

    @pytest.mark.subset
    def testChainCertPropagate(self):
        """Test the Krylov propagation against dense exponentials."""
        rng = np.random.default_rng(3)
        energies = rng.uniform(-2.0, 2.0, 40)
        psi = rng.normal(size=40) + 1j * rng.normal(size=40)
        evolved = propagate(hamiltonian=sp.diags(energies, format='csr'), state=psi, t=1.7)
        np.testing.assert_allclose(evolved, np.exp(-1j * energies * 1.7) * psi, atol=1e-9)

        hamiltonian = self._model(TruncationSpec.uniform(2, 3)).total
        psi0 = productState(system_state=spinState("plus"), trunc=TruncationSpec.uniform(2, 3))
        dense = expm(-1j * 2.5 * hamiltonian.matrix.toarray()) @ psi0
        np.testing.assert_allclose(propagate(hamiltonian=hamiltonian, state=psi0, t=2.5), dense, atol=1e-9)

        back = propagate(hamiltonian=hamiltonian, state=propagate(hamiltonian=hamiltonian, state=psi0, t=3.0), t=-3.0)
        np.testing.assert_allclose(back, psi0, atol=1e-9)
        np.testing.assert_array_equal(propagate(hamiltonian=hamiltonian, state=psi0, t=0.0), psi0)

        with pytest.raises(DimensionMismatch):
            propagate(hamiltonian=hamiltonian, state=np.ones(5), t=1.0)
        with pytest.raises(ValueError):
            propagate(hamiltonian=hamiltonian, state=psi0, t=1.0, tol=0.0)
        with pytest.raises(NoConvergence):
            propagate(hamiltonian=hamiltonian.matrix * 1e14, state=psi0, t=1.0, tol=1e-15, krylov_dim=2)

    @pytest.mark.subset
    def testChainCertEpsilonAtZero(self):
        """Test that eps_m vanishes at x = 0 for the vacuum."""
        model = self._model(TruncationSpec.uniform(2, 3))
        assert epsilonM(x=0.0, model=model) == 0.0

    def testChainCertEpsilonAgainstDense(self):
        """Test eps_m against the literal dense evaluation in a larger Fock space."""
        trunc = TruncationSpec.uniform(2, 3)
        model = self._model(trunc)
        for x in np.linspace(0.0, 3.0, 10):
            dense = epsilonDense(x=float(x), system=self.system, chain=self.chain, trunc=trunc, psi0=model.psi0,
                                 m_ref=12)
            np.testing.assert_allclose(epsilonM(x=float(x), model=model), dense, rtol=0, atol=1e-8)

    @pytest.mark.subset
    def testChainCertEpsilonCurve(self):
        """Test that the curve is independent of the number of threads and matches single evaluations."""
        trunc = TruncationSpec.uniform(2, 2)
        model = self._model(trunc)
        grid = np.linspace(0.0, 1.0, 9)
        curve = epsilonCurve(grid=grid, model=model, threads=1)
        threaded = epsilonCurve(grid=grid, model=model, threads=4)
        assert curve.x == threaded.x
        np.testing.assert_allclose(threaded.epsilon, curve.epsilon, rtol=0, atol=1e-14)
        assert curve.epsilon[0] == 0.0
        assert all(value >= 0 for value in curve.epsilon)
        np.testing.assert_allclose(curve.epsilon[-1], epsilonM(x=1.0, model=model), rtol=0, atol=1e-9)
        assert curve.L == 2 and curve.cutoffs == [2, 2] and curve.mapping == "particle"

        with pytest.raises(ValueError):
            epsilonCurve(grid=[0.0, 0.5, 0.2], model=model)

    @pytest.mark.subset
    def testChainCertIntegrationGrid(self):
        """Test that output times are grid nodes with index divisible by 4."""
        times = np.linspace(0.0, 2.0, 5)
        grid = integrationGrid(times=times, points_per_unit_time=10)
        step = grid[1] - grid[0]
        for t in times:
            index = int(np.round(t / step))
            assert index % 4 == 0
            np.testing.assert_allclose(grid[index], t, rtol=1e-12, atol=1e-15)
        assert len(grid) - 1 >= 2.0 * 10

        single = integrationGrid(times=1.3, points_per_unit_time=64)
        np.testing.assert_allclose(single[-1], 1.3, rtol=1e-14)
        assert (len(single) - 1) % 4 == 0
        np.testing.assert_array_equal(integrationGrid(times=0.0), [0.0])

        with pytest.raises(ValueError):
            integrationGrid(times=[0.0, 1.0, 1.5, 3.1])

    @pytest.mark.subset
    def testChainCertDeltaMBound(self):
        """Test the Simpson rule, its error estimate and monotonicity."""
        x = np.linspace(0.0, 2.0, 17)
        curve = EpsilonCurve(x=x.tolist(), epsilon=(x ** 4).tolist(), L=1, cutoffs=[1], mapping="particle")
        report = deltaMBound(t=2.0, curve=curve, tail_weight=0.0, o_norm=1.0)
        # sqrt(eps) = x^2 is integrated exactly
        np.testing.assert_allclose(report.integral, 8 / 3, rtol=1e-14)
        assert report.quadrature_error < 1e-14
        np.testing.assert_allclose(report.fock_bound, 2 * np.sqrt(2 * 8 / 3), rtol=1e-14)
        assert report.fock_bound >= 2 * np.sqrt(2 * report.integral)
        assert report.quadrature_nodes == 17

        zero = deltaMBound(t=0.0, curve=curve, tail_weight=0.0, o_norm=1.0)
        assert zero.fock_bound == 0.0
        tail = deltaMBound(t=0.0, curve=curve, tail_weight=1.0, o_norm=0.5)
        np.testing.assert_allclose(tail.fock_bound, 1.0, rtol=1e-15)

        rng = np.random.default_rng(11)
        curve = EpsilonCurve(x=x.tolist(), epsilon=rng.uniform(0, 1, 17).tolist(), L=1, cutoffs=[1],
                             mapping="particle")
        bounds = [deltaMBound(t=float(t), curve=curve, tail_weight=0.0, o_norm=1.0).fock_bound for t in x[::4]]
        assert all(later >= earlier for earlier, later in zip(bounds, bounds[1:]))

        with pytest.raises(ValueError):
            deltaMBound(t=0.25, curve=curve, tail_weight=0.0, o_norm=1.0)

    @pytest.mark.subset
    def testChainCertTailWeight(self):
        """Test the weight of initial states outside the truncation."""
        trunc = TruncationSpec.uniform(3, 2)
        assert tailWeight(state=BathState(), trunc=trunc) == 0.0
        assert tailWeight(state=BathState(kind=BathStateKind.fock, occupations=(2,)),
                          trunc=TruncationSpec(cutoffs=(1,))) == 1.0
        assert tailWeight(state=BathState(kind=BathStateKind.fock, occupations=(2, 1, 0)), trunc=trunc) == 0.0
        assert tailWeight(state=BathState(kind=BathStateKind.fock, occupations=(0, 0, 0, 1)), trunc=trunc) == 1.0

        # single thermal mode: geometric tail sum_{n > m} (1 - q) q^n = q^(m+1) = exp(-(m+1) beta omega)
        single = particleChain(density=self.density, L=1)
        omega = float(single.x_diag[0])
        for occupation in [0.1, 0.3, 1.0, 2.0, 5.0]:
            beta = float(np.log1p(1 / occupation) / omega)
            for m in [1, 2, 4, 8, 16]:
                with localcontext() as context:
                    context.prec = 50
                    exact = (-(m + 1) * Decimal(beta) * Decimal(omega)).exp()
                bound = tailWeight(state=BathState(kind=BathStateKind.thermal, beta=beta),
                                   trunc=TruncationSpec(cutoffs=(m,)), chain=single)
                assert Decimal(bound) >= exact
                np.testing.assert_allclose(bound, float(exact), rtol=1e-9)

        with pytest.raises(UnsupportedState):
            tailWeight(state=BathState(kind=BathStateKind.thermal, beta=1.0), trunc=trunc,
                       chain=phononChain(density=self.density, L=3))
        with pytest.raises(ValueError):
            BathState(kind=BathStateKind.thermal)

    @pytest.mark.subset
    def testChainCertExactOracleTrivial(self):
        """Test the exact oracle on cases without truncation error."""
        trunc = TruncationSpec.uniform(2, 3)
        same = exactTruncationErrorOracle(system=self.system, chain=self.chain, trunc=trunc, trunc_ref=trunc,
                                          observable=SIGMA_Z, t=1.0, system_state=spinState("up"))
        assert same == 0.0

        decoupled = particleChain(density=powerLawDensity(alpha=0.0, s=3.0, omega_c=1.0), L=2)
        errors = exactTruncationErrorOracle(system=self.system, chain=decoupled, trunc=trunc,
                                            trunc_ref=TruncationSpec.uniform(2, 6), observable=SIGMA_Z,
                                            t=[0.5, 1.0], system_state=spinState("up"))
        np.testing.assert_allclose(errors, 0.0, atol=1e-9)

    def testChainCertFockOracle(self):
        """Test the Fock bound against the exact error of cutoffs (3, 3) versus (20, 20)."""
        trunc = TruncationSpec.uniform(2, 3)
        times = np.linspace(0.0, 3.0, 7)
        model = self._model(trunc)
        curve = epsilonCurve(grid=integrationGrid(times=times, points_per_unit_time=64), model=model)
        errors = exactTruncationErrorOracle(system=self.system, chain=self.chain, trunc=trunc,
                                            trunc_ref=TruncationSpec.uniform(2, 20), observable=SIGMA_Z, t=times,
                                            system_state=spinState("up"))
        assert np.max(errors) > 0
        previous = 0.0
        for t, error in zip(times, errors):
            bound = deltaMBound(t=float(t), curve=curve, tail_weight=0.0, o_norm=1.0).fock_bound
            assert error <= bound
            assert bound >= previous
            previous = bound

    @pytest.mark.subset
    def testChainCertCertify(self):
        """Test the total certificate on a small model."""
        reports = certify(system=self.system, density=self.density, kind=MappingKind.particle,
                          trunc=TruncationSpec.uniform(2, 2), observable=SIGMA_Z, times=[0.0, 0.5, 1.0],
                          system_state=spinState("up"), points_per_unit_time=16)
        assert len(reports) == 3
        assert reports[0].total == 0.0
        for report in reports:
            assert report.total == report.spatial.delta_bound + report.fock_bound
            assert report.total >= report.spatial.delta_bound
            assert report.total >= report.fock_bound
        assert reports[2].total >= reports[1].total

        with pytest.raises(UnsupportedState):
            certify(system=self.system, density=self.density, kind=MappingKind.particle,
                    trunc=TruncationSpec.uniform(2, 2), observable=SIGMA_Z, times=[0.0, 1.0],
                    system_state=spinState("up"), bath_state=BathState(kind=BathStateKind.thermal, beta=1.0))

    def testChainCertLengthInsensitivity(self):
        """Test that eps_m barely depends on the chain length at m = 5."""
        grid = np.linspace(0.0, 2.0, 21)
        curves = []
        for L in [3, 4]:
            trunc = TruncationSpec.uniform(L, 5)
            chain = particleChain(density=self.density, L=L)
            curves.append(epsilonCurve(grid=grid, model=self._model(trunc, chain=chain)).epsilon)
        assert np.max(np.abs(np.array(curves[1]) - np.array(curves[0]))) < 1e-4

    def testChainCertCutoffDecay(self):
        """Test the faster than exponential decay of eps_m with the cutoff at t = 2."""
        chain = particleChain(density=self.density, L=3)
        values = []
        for m in range(3, 8):
            model = self._model(TruncationSpec.uniform(3, m), chain=chain)
            values.append(epsilonM(x=2.0, model=model))
        assert all(later < earlier for earlier, later in zip(values, values[1:]))
        ratios = [later / earlier for earlier, later in zip(values, values[1:])]
        assert all(later < earlier for earlier, later in zip(ratios, ratios[1:]))

    def testChainCertAlgebraicGrowth(self):
        """Test that log eps_m is close to affine in log t on [0.2, 2] at m = 5."""
        chain = particleChain(density=self.density, L=3)
        model = self._model(TruncationSpec.uniform(3, 5), chain=chain)
        times = np.geomspace(0.2, 2.0, 6)
        values = np.array([epsilonM(x=float(t), model=model) for t in times])
        assert np.all(values > 0)
        slopes = np.diff(np.log(values)) / np.diff(np.log(times))
        assert np.all(slopes > 0)
        assert (slopes.max() - slopes.min()) / slopes.mean() < 0.3

    def testChainCertOhmicAnalogue(self):
        """Test L-insensitivity and cutoff decay for the ohmic density s = 1."""
        density = powerLawDensity(alpha=0.8, s=1.0, omega_c=1.0)
        grid = np.linspace(0.0, 2.0, 21)
        curves = []
        for L in [3, 4]:
            trunc = TruncationSpec.uniform(L, 5)
            chain = particleChain(density=density, L=L)
            curves.append(epsilonCurve(grid=grid, model=self._model(trunc, chain=chain)).epsilon)
        assert np.max(np.abs(np.array(curves[1]) - np.array(curves[0]))) < 1e-3

        chain = particleChain(density=density, L=3)
        values = [epsilonM(x=2.0, model=self._model(TruncationSpec.uniform(3, m), chain=chain)) for m in range(3, 8)]
        assert all(later < earlier for earlier, later in zip(values, values[1:]))
