#coding=utf-8
from __future__ import division, unicode_literals

import math
import unittest

import numpy as np

from gpc import *
from . import assertions


def isotropic(d=2, amplitude=0.25, rate=1.0):
    return SemiMarkovSpec(d, [ExponentialSum.exponential(amplitude, rate)] * (d + 1))


def semigroup(gammas):
    "Waiting times whose eigenvalues are e^{(γ_α − γ)t}."
    d = len(gammas) - 1
    c = (d - 1) / d
    total = sum(gammas)
    return SemiMarkovSpec(d, [ExponentialSum.exponential(c * g, c * total) for g in gammas])


class SurvivalTests(unittest.TestCase):
    def testClosedForm(self):
        grid = TimeGrid(2.0, 20)
        g = survival(isotropic(), grid)
        assertions.assert_close(g, 1 - 0.75 * (1 - np.exp(-grid.nodes)), "g = 1 - ∫f")

    def testSampled(self):
        grid = TimeGrid(2.0, 2000)
        spec = SemiMarkovSpec(2, [ExponentialSum.exponential(0.25, 1.0).sample(grid)] * 3)
        assertions.assert_close(survival(spec, grid), 1 - 0.75 * (1 - np.exp(-grid.nodes)), "g", 1e-7)

    def testWrongCount(self):
        try:
            SemiMarkovSpec(3, [ExponentialSum.zero()] * 3)
            assert False, "d = 3 needs four densities"
        except VectorLengthError:
            pass


class QMapTests(unittest.TestCase):
    def setUp(self):
        self.spec = SemiMarkovSpec(3, [ExponentialSum.exponential(a, r) for a, r in
                                       ((0.1, 1.0), (0.2, 2.0), (0.05, 0.5), (0.3, 3.0))])
        self.m = build_mubs(3)

    def testEigenvalueMatchesBases(self):
        for t in (0.0, 0.3, 1.7):
            assert verify_q_eigenvalue(self.spec, self.m, t) < 1e-12

    def testTraceIsTotalDensity(self):
        rho = assertions.random_density_matrix(3, np.random.default_rng(1))
        t = 0.4
        image = apply_q_map(self.spec, self.m, t, rho)
        assertions.assert_close(np.trace(image).real, self.spec.values_at(t).sum(), "Tr Q_t[ρ] = f(t)")

    def testQEigenvalue(self):
        grid = TimeGrid(1.0, 10)
        phis = q_eigenvalue(self.spec, grid)
        samples = self.spec.sampled(grid)
        total = self.spec.total(grid)
        assertions.assert_close(phis[0], samples[0] - (total - samples[0]) * 0.5, "φ_1")

    def testFamilyMismatch(self):
        try:
            apply_q_map(self.spec, build_mubs(2), 0.1, np.eye(2) / 2)
            assert False, "Bases of C^2 cannot serve waiting times on C^3"
        except VectorLengthError:
            pass


class CertificationTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(5.0, 500)

    def testLegitimate(self):
        certificate = certify_semimarkov(isotropic(), self.grid)
        assert certificate
        assert str(certificate) == "semi-Markov: YES; ∫f = 0.75"

    def testProbabilityConservingMap(self):
        certificate = certify_semimarkov(semigroup([1.0, 1.0, 1.0]), self.grid)
        assert certificate
        assert certificate.at_boundary

    def testExcessiveIntegral(self):
        certificate = certify_semimarkov(isotropic(amplitude=0.5), self.grid)
        assert not certificate
        assert str(certificate) == "semi-Markov: NO (∫f = 1.5)"

    def testNegativeDensity(self):
        spec = SemiMarkovSpec(2, [ExponentialSum.exponential(0.5, 1.0)] * 2
                              + [ExponentialSum.hyperbolic(1.0, 0.5, 0.0, -1.0)])
        certificate = certify_semimarkov(spec, self.grid)
        assert not certificate
        assert certificate.negative[0][0] == 3
        assert certificate.negative[0][1] == self.grid.nodes[1]
        assert str(certificate).startswith("semi-Markov: NO (f_3 < 0 from t = 0.01")

    def testOscillatingDensityDiverges(self):
        spec = SemiMarkovSpec(2, [ExponentialSum.cosine(0.1, 1.0) + 0.1] * 3)
        certificate = certify_semimarkov(spec, self.grid)
        assert not certificate
        assert "∫f diverges" in str(certificate)

    def testSampledIntegralIsEstimated(self):
        grid = TimeGrid(20.0, 2000)
        spec = SemiMarkovSpec(2, [ExponentialSum.exponential(0.25, 1.0).sample(grid)] * 3)
        certificate = certify_semimarkov(spec, grid)
        assert certificate
        assert certificate.integral_estimated
        assertions.assert_close(certificate.integral, 0.75, "Estimated ∫f", 1e-4)
        assert str(certificate).endswith("(estimated)")


class EigenvalueTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(2.0, 2000)

    def testIsotropicDyson(self):
        trajectory = lambda_via_dyson(isotropic(), build_mubs(2), self.grid)
        expected = 1 - 0.8 * (1 - np.exp(-1.25 * self.grid.nodes))
        for l in trajectory.lambdas:
            assertions.assert_close(l, expected, "Isotropic λ", 1e-5)

    def testSemigroupDyson(self):
        trajectory = lambda_via_dyson(semigroup([1.0, 2.0, 3.0, 4.0]), build_mubs(3), self.grid)
        for gamma, l in zip([1.0, 2.0, 3.0, 4.0], trajectory.lambdas):
            assertions.assert_close(l, np.exp((gamma - 10.0) * self.grid.nodes), "λ with γ_α = %g" % gamma, 1e-5)

    def testTalbotAgreesWithDyson(self):
        spec = isotropic(3, 0.2, 2.0)
        dyson = lambda_via_dyson(spec, build_mubs(3), self.grid).restrict(200)
        talbot = lambda_via_laplace(spec, self.grid, stride=200)
        assert talbot.grid == TimeGrid(2.0, 10)
        assertions.assert_close(talbot, dyson, "Talbot against Dyson", 1e-6)

    def testEigenvalueTransform(self):
        transform = eigenvalue_laplace(semigroup([1.0, 1.0, 1.0]))[0]
        assertions.assert_close(transform(1.0), 1 / 3, "1/(s + 2)")

    def testDivergentSeries(self):
        spec = SemiMarkovSpec(2, [ExponentialSum.exponential(3.0, 0.1)] * 3)
        try:
            lambda_via_dyson(spec, build_mubs(2), TimeGrid(20.0, 200), max_terms=5)
            assert False, "Five terms cannot sum this series"
        except NonConvergenceError:
            pass


class TransformTests(unittest.TestCase):
    def testEllAndWaitingTimesAreInverse(self):
        forms = [ExponentialSum.exponential(a, r).laplace for a, r in ((0.1, 1.0), (0.2, 2.0), (0.3, 0.5))]
        back = f_from_ell(ell_from_f(forms, 2), 2)
        for form, recovered in zip(forms, back):
            assertions.assert_close(recovered(1.3), form(1.3), "f̃ → ℓ̃ → f̃")

    def testIsotropicEll(self):
        nu = isotropic_ell_laplace(ExponentialSum.exponential(0.25, 1.0).laplace, 2)
        assertions.assert_close(nu(1.0), 1 / 2.25, "1/(s + 1.25)")
        ell = ell_from_f([ExponentialSum.exponential(0.25, 1.0).laplace] * 3, 2)
        assertions.assert_close(ell[0](1.0), nu(1.0), "ℓ̃ of the isotropic map")

    def testIsotropicBound(self):
        assert isotropic_bound(0.25, 2)
        assert isotropic_bound(1 / 3, 2)
        assert not isotropic_bound(0.4, 2)

    def testSemigroupKernel(self):
        memory, kappas = semimarkov_kernel_laplace(semigroup([1.0, 1.0, 1.0]), 0.9)
        assertions.assert_close(memory, [1.0, 1.0, 1.0], "k̃_α = γ_α")
        assertions.assert_close(kappas, [-2.0, -2.0, -2.0], "κ̃_α = γ_α − γ")

    def testWaitingTimesFromTransforms(self):
        ell = [ExponentialSum.exponential(4 / 3, 2.0).laplace] * 3
        grid = TimeGrid(1.0, 10)
        spec = SemiMarkovSpec.from_laplace(2, f_from_ell(ell, 2), grid)
        assert spec.provenance == "numerical"
        expected = np.exp(-5 * grid.nodes / 3) / 3
        for f in spec.functions:
            assertions.assert_close(f.values[1:], expected[1:], "f from ℓ̃", 1e-8)
            assertions.assert_close(f.values[0], expected[0], "Extrapolated f(0)", 5e-3)


class ResidualTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(2.0, 2000)

    def testSemigroupStatesSolveTheEquation(self):
        gammas = [1.0, 1.0, 2.0, 0.5]
        m = build_mubs(3)
        psi = np.array([1.0, 1.0, 1j]) / math.sqrt(3)
        rho = np.outer(psi, psi.conj())
        lambdas = [SampledFunction(self.grid, np.exp((g - sum(gammas)) * self.grid.nodes)) for g in gammas]
        rhos = evolve_state(m, Trajectory(3, lambdas), rho)
        residual = inhomogeneous_rhs(semigroup(gammas), m, rhos, self.grid)
        assert residual.norms.values.max() < 1e-3, repr(residual)

    def testPropagatedStatesConverge(self):
        gammas = [1.0, 0.5, 2.0]
        total = sum(gammas)
        m = build_mubs(2)
        rho = density_from_bloch([0.3, 0.4, 0.5])
        worst = []
        for n_steps in (500, 1000):
            grid = TimeGrid(2.0, n_steps)
            spec = KernelSpec.from_closed_forms(2, [g - total for g in gammas], [ExponentialSum.zero()] * 3, grid)
            rhos = evolve_state(m, propagate_kernel(spec), rho)
            worst.append(inhomogeneous_rhs(semigroup(gammas), m, rhos, grid).norms.values.max())
        assert worst[1] < 1e-4, "Residual %g on the fine grid" % worst[1]
        ratio = worst[0] / worst[1]
        assert 3 < ratio < 5, "Halving h divided the residual by %g" % ratio

    def testWrongStatesAreDetected(self):
        m = build_mubs(2)
        rho = density_from_bloch([0.3, 0.4, 0.5])
        frozen = np.array([rho] * len(self.grid))
        residual = inhomogeneous_rhs(semigroup([1.0, 1.0, 1.0]), m, frozen, self.grid)
        assert residual.norms.values.max() > 0.1

    def testBlochForm(self):
        x0 = np.array([0.3, 0.4, 0.5])
        lambdas = 1 - 0.8 * (1 - np.exp(-1.25 * self.grid.nodes))
        bloch = np.outer(lambdas, x0)
        residual = bloch_inhomogeneous_rhs(isotropic(), bloch, self.grid)
        assert residual.norms.values.max() < 1e-4, repr(residual)

    def testBlochFormNeedsQubit(self):
        try:
            bloch_inhomogeneous_rhs(isotropic(3), np.zeros((len(self.grid), 3)), self.grid)
            assert False, "Bloch vectors exist for qubits only"
        except VectorLengthError:
            pass
