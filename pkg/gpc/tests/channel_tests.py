#coding=utf-8
from __future__ import division, unicode_literals

import unittest

import numpy as np

from gpc import *
from . import assertions


class ParametrisationTests(unittest.TestCase):
    def testEigenvaluesFromProbabilities(self):
        p = np.random.default_rng(11).dirichlet(np.ones(5))
        assertions.assert_close(prob_from_eigen(eigen_from_prob(p, 3), 3), p, "p → λ → p")

    def testIdentityChannel(self):
        state = ChannelState.identity(5)
        assertions.assert_close(state.p, [1.0] + [0.0] * 6, "Identity probabilities")

    def testWrongLengths(self):
        assertions.assert_raises_message(VectorLengthError, "Expected 4 probabilities for d = 2, got 3.",
                                         eigen_from_prob, [0.5, 0.25, 0.25], 2)
        assertions.assert_raises_message(VectorLengthError, "Expected 4 eigenvalues for d = 3, got 3.",
                                         prob_from_eigen, [1.0, 1.0, 1.0], 3)

    def testComplexEigenvaluesAreRejected(self):
        try:
            ChannelState.from_eigenvalues([1.0, 0.5j, 0.5], 2)
            assert False, "Complex eigenvalues should be rejected"
        except ComplexValueError:
            pass


class CertificationTests(unittest.TestCase):
    def testAgreesWithChoiMatrix(self):
        rng = np.random.default_rng(2024)
        trials = 10000
        for d in (2, 3, 5):
            m = build_mubs(d)
            positives = 0
            for trial in range(trials):
                # scaled draws reach the small CPTP simplex of larger d
                lambdas = rng.uniform(-1, 1, d + 1) * rng.uniform(0, 1)
                state = ChannelState.from_eigenvalues(lambdas, d)
                positive = np.linalg.eigvalsh(choi_matrix(m, state))[0] >= -1e-9
                assert bool(state.certify()) == positive, \
                    "Certificate and Choi matrix disagree for λ = %s" % state.eigenvalues.tolist()
                positives += positive
            assert 0 < positives < trials, "Only one verdict in %d draws for d = %d" % (trials, d)

    def testWorstIndex(self):
        certificate = certify_cptp([0.5, 0.5, -0.6], 2)
        assert certificate.worst_index == 3
        assert str(certificate).endswith("at lambda_3)"), str(certificate)
        assert certify_cptp([0.2, -0.1, 0.4, 0.3, 0.1, 0.0], 5).worst_index == 2
        assert str(certify_cptp([-1.0, -1.0, -1.0], 2)).startswith("CPTP: NO (lower bound violated by")

    def testBoundaries(self):
        assert certify_cptp([-1.0, -1.0, 1.0], 2), "A Pauli channel vertex is CPTP"
        assert certify_cptp([-1.0, -1.0, -1.0], 2).violated_side == "lower"
        assert certify_cptp([1.0, 1.0, -1.0], 2).violated_side == "upper"

    def testRendering(self):
        assert str(certify_cptp([1.0, 1.0, 1.0], 2)) == "CPTP: YES (worst margin 0.0)"
        assert str(certify_cptp([0.5, 0.5, -0.6], 2)).startswith("CPTP: NO (upper bound violated by")


class ChannelActionTests(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(5)

    def testCompletelyDepolarising(self):
        for d in (2, 3, 5):
            m = build_mubs(d)
            state = ChannelState.from_eigenvalues(np.zeros(d + 1), d)
            rho = assertions.random_density_matrix(d, self.rng)
            assertions.assert_close(apply_channel(m, state, rho), np.eye(d) / d, "Depolarising C^%d" % d, 1e-10)

    def testUnitariesAreEigenoperators(self):
        m = build_mubs(3)
        lambdas = [0.9, 0.2, -0.1, 0.4]
        state = ChannelState.from_eigenvalues(lambdas, 3)
        S = channel_superoperator(m, state)
        for alpha, l in enumerate(lambdas, start=1):
            U = m.unitary(alpha)
            vec = U.reshape(-1, order="F")
            assertions.assert_close(S @ vec, l * vec, "S·vec(U_%d)" % alpha, 1e-10)
            assertions.assert_close(channel_action(m, state, U), l * U, "Λ[U_%d]" % alpha, 1e-10)

    def testSuperoperatorMatchesAction(self):
        m = build_mubs(2)
        state = ChannelState.from_probabilities([0.4, 0.3, 0.2, 0.1], 2)
        rho = assertions.random_density_matrix(2, self.rng)
        image = channel_superoperator(m, state) @ rho.reshape(-1, order="F")
        assertions.assert_close(image.reshape(2, 2, order="F"), apply_channel(m, state, rho), "vec(Λ[ρ])", 1e-12)

    def testUncertifiedChannelIsRefused(self):
        m = build_mubs(2)
        state = ChannelState.from_eigenvalues([0.5, 0.5, -0.6], 2)
        try:
            apply_channel(m, state, np.eye(2) / 2)
            assert False, "A channel that is not CPTP should be refused"
        except UncertifiedChannelError:
            pass

    def testMismatchedFamily(self):
        try:
            apply_channel(build_mubs(3), ChannelState.identity(2), np.eye(2) / 2)
            assert False, "Bases of C^3 cannot act on C^2"
        except VectorLengthError:
            pass

    def testGeneratorEigenvalues(self):
        m = build_mubs(3)
        gammas = [0.5, 1.0, 1.5, 2.0]
        for alpha, gamma in enumerate(gammas, start=1):
            U = m.unitary(alpha)
            assertions.assert_close(apply_generator(m, gammas, U, validate=False), (gamma - 5.0) * U,
                                    "L[U_%d]" % alpha, 1e-10)
        assertions.assert_close(apply_generator(m, gammas, np.eye(3) / 3), np.zeros((3, 3)), "L[I/3]", 1e-12)


class TrajectoryTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(5.0, 5000)

    def _oscillating(self, a):
        l = SampledFunction(self.grid, 1 - (1 - np.cos(self.grid.nodes)) / a)
        return Trajectory(2, [l, l, l])

    def testFirstViolation(self):
        certificate = self._oscillating(1.4).certify()
        assert not certificate
        assert certificate.violated_side == "lower"
        assert 2.6 < certificate.first_failure_time < 2.65, certificate.first_failure_time
        assert str(certificate).startswith("CPTP: NO (lower bound first violated at t = 2.6")

    def testAdmissibleTrajectory(self):
        certificate = certify_trajectory(self._oscillating(1.5).lambdas, 2, 1e-9)
        assert certificate, str(certificate)
        assert certificate.first_failure is None

    def testProbabilitiesSumToOne(self):
        p = self._oscillating(2.0).probabilities()
        assertions.assert_close(p.sum(axis=1), np.ones(len(self.grid)), "Σp")

    def testWrongCount(self):
        try:
            Trajectory(3, [SampledFunction.zeros(self.grid)] * 3)
            assert False, "d = 3 needs four eigenvalue trajectories"
        except VectorLengthError:
            pass

    def testEvolveState(self):
        m = build_mubs(2)
        rho = density_from_bloch([0.3, 0.4, 0.5])
        l = SampledFunction.from_function(self.grid, lambda t: np.exp(-t))
        states = evolve_state(m, Trajectory(2, [l, l, l]), rho)
        assert states.shape == (len(self.grid), 2, 2)
        for j in (0, 1000, 5000):
            expected = density_from_bloch(np.exp(-self.grid.nodes[j]) * np.array([0.3, 0.4, 0.5]))
            assertions.assert_close(states[j], expected, "ρ(t_%d)" % j)


class RateTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(2.0, 2000)

    def testConstantRatesGiveSemigroup(self):
        rates = RateVector.from_functions(2, [lambda t: np.ones_like(t)] * 3, self.grid)
        assert rates.negative_rate_indices() == []
        for l in rates_to_eigen(rates).lambdas:
            assertions.assert_close(l, np.exp(-2 * self.grid.nodes), "e^{-2t}", 1e-12)

    def testRatesFromEigenvalues(self):
        rates = RateVector.from_functions(3, [lambda t: np.ones_like(t), lambda t: 1 + t,
                                              lambda t: np.cos(t), lambda t: 0.5 * np.ones_like(t)], self.grid)
        recovered = eigen_to_rates(rates_to_eigen(rates))
        for alpha, (original, gamma) in enumerate(zip(rates.gammas, recovered.gammas), start=1):
            assertions.assert_close(gamma, original, "γ_%d" % alpha, 1e-5)

    def testNegativeRates(self):
        rates = RateVector.from_functions(2, [lambda t: np.ones_like(t), lambda t: np.ones_like(t),
                                              lambda t: -np.tanh(t)], self.grid)
        assert rates.negative_rate_indices() == [3]

    def testVanishingEigenvalue(self):
        l = SampledFunction.from_function(self.grid, lambda t: np.cos(2 * t))
        try:
            eigen_to_rates(Trajectory(2, [l, l, l]))
            assert False, "λ crosses zero"
        except SingularGeneratorError as e:
            assert "λ_1" in str(e)

    def testRatesOnAnotherGrid(self):
        rates = RateVector.from_functions(2, [lambda t: np.ones_like(t)] * 3, self.grid)
        try:
            rates_to_eigen(rates, TimeGrid(1.0, 10))
            assert False, "Grid mismatch should be reported"
        except GridMismatchError:
            pass
