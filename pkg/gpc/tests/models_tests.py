#coding=utf-8
from __future__ import division, unicode_literals

import math
import unittest

import numpy as np

from gpc import *
from . import assertions


class DescriptorTests(unittest.TestCase):
    def testFromDict(self):
        descriptor = ModelDescriptor.from_dict(2, {"family": "semigroup", "gamma": [1, 1, 1], "notes": "test"})
        assert descriptor == ModelDescriptor("semigroup", 2, {"gamma": [1, 1, 1]})
        assert descriptor.notes == "test"

    def testUnknownFamily(self):
        assertions.assert_raises_message(ConfigurationError, "Unknown model family 'lindblad'",
                                         ModelDescriptor, "lindblad", 2)

    def testMissingFamily(self):
        assertions.assert_raises_message(ConfigurationError, "Model source is missing required key 'family'.",
                                         ModelDescriptor.from_dict, 2, {"gamma": 1.0})

    def testParameterNames(self):
        assertions.assert_raises_message(ConfigurationError, "Unknown parameter 'rate' for the semigroup family.",
                                         model_from_descriptor, ModelDescriptor("semigroup", 2, {"rate": 1.0}))
        assertions.assert_raises_message(ConfigurationError, "The oscillatory family needs parameter 'a'.",
                                         model_from_descriptor, ModelDescriptor("oscillatory", 2, {"omega": 1.0}))

    def testScalarParametersBroadcast(self):
        model = model_from_descriptor(ModelDescriptor("semigroup", 3, {"gamma": 0.5}))
        assert model.gammas.tolist() == [0.5] * 4

    def testParameterLength(self):
        try:
            SemigroupModel(2, [1.0, 1.0])
            assert False, "d = 2 needs three rates"
        except VectorLengthError:
            pass

    def testDescriptorRoundTrip(self):
        model = OscillatoryModel(3, 2.0, 2.0)
        assert model_from_descriptor(model.descriptor).descriptor == model.descriptor


class SemigroupTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(2.0, 2000)
        self.model = SemigroupModel(3, [1.0, 2.0, 3.0, 4.0])

    def testEigenvalues(self):
        assertions.assert_close(SemigroupModel(2, [1.0, 1.0, 1.0]).lambdas()[0](1.0), math.exp(-2.0), "e^{-2}")
        assertions.assert_close(self.model.lambdas()[1](0.5), math.exp(-4.0), "e^{-8·0.5}")

    def testKernelPropagation(self):
        trajectory = propagate_kernel(self.model.kernel_spec(self.grid))
        assertions.assert_close(trajectory, self.model.trajectory(self.grid), "Propagated λ", 1e-5)

    def testEllMatchesEigenvalues(self):
        assertions.assert_close(self.model.ell().lambdas(self.grid), self.model.trajectory(self.grid), "1 - ∫ℓ")

    def testRates(self):
        trajectory = rates_to_eigen(self.model.rate_vector(self.grid))
        assertions.assert_close(trajectory, self.model.trajectory(self.grid), "λ from γ", 1e-10)

    def testWaitingTimes(self):
        spec = self.model.waiting_times()
        trajectory = lambda_via_laplace(spec, self.grid, stride=400)
        assertions.assert_close(trajectory, self.model.trajectory(self.grid).restrict(400), "λ from f", 1e-8)
        assert certify_semimarkov(spec, self.grid).at_boundary

    def testNoDecay(self):
        model = SemigroupModel(2, 0.0)
        assertions.assert_close(model.trajectory(self.grid), np.ones((len(self.grid), 3)), "λ ≡ 1")
        assert certify_semimarkov(model.waiting_times(), self.grid).integral == 0.0

    def testNegativeRate(self):
        try:
            SemigroupModel(2, [1.0, -1.0, 1.0])
            assert False, "Negative rates should be rejected"
        except AdmissibilityError as e:
            assert e.inequality == "non-negative rates"


class OscillatoryTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(6.0, 6000)

    def testAdmissibilityBoundary(self):
        assert OscillatoryModel(2, 1.0, 1.5).admissibility().passed
        report = OscillatoryModel(2, 1.0, 1.4).admissibility()
        assert report.failures() == ["oscillatory upper bound"]
        assert report.values["weight lower bound"] == 1.0

    def testDominance(self):
        report = OscillatoryModel(3, 1.0, [2.0, 4.0, 4.0, 4.0]).admissibility()
        assert "oscillatory dominance" in report.failures()

    def testVerdictMatchesTrajectory(self):
        for a in (1.4, 1.5, 2.0):
            model = OscillatoryModel(2, 1.0, a)
            assert bool(model.certify(self.grid)) == model.admissibility().passed, "a = %g" % a

    def testRevival(self):
        model = OscillatoryModel(3, 2.0, 2.0)
        p = model.probabilities(model.revival_time())[0]
        assertions.assert_close(p, [1.0, 0.0, 0.0, 0.0, 0.0], "p at the revival time", 1e-12)
        assertions.assert_close(model.probabilities([0.0, math.pi / 2])[1][0], 1 / 9, "p₀ at half period")

    def testKernelPropagation(self):
        for d, a in ((2, 1.5), (3, 2.0), (5, 2.0)):
            model = OscillatoryModel(d, 1.0, a)
            trajectory = propagate_kernel(model.kernel_spec(self.grid))
            assertions.assert_close(trajectory, model.trajectory(self.grid), "Oscillatory λ for d = %d" % d, 1e-5)

    def testEllMatchesEigenvalues(self):
        model = OscillatoryModel(2, 1.5, [1.5, 2.0, 3.0])
        assertions.assert_close(model.ell().lambdas(self.grid), model.trajectory(self.grid), "1 - ∫ℓ")
        assert check_theorem1_conditions(model.ell(), self.grid)

    def testNoRatesOrWaitingTimes(self):
        model = OscillatoryModel(2, 1.0, 2.0)
        for method in (model.rate_vector, model.waiting_times):
            try:
                method(self.grid)
                assert False, "%s should not exist for the oscillatory family" % method.__name__
            except GpcError:
                pass

    def testBadParameters(self):
        for omega, a, inequality in ((0.0, 2.0, "positive frequency"), (1.0, -2.0, "positive weights")):
            try:
                OscillatoryModel(2, omega, a)
                assert False, "%s should fail" % inequality
            except AdmissibilityError as e:
                assert e.inequality == inequality


class ConvexCombinationTests(unittest.TestCase):
    def setUp(self):
        self.grid = TimeGrid(2.0, 2000)

    def testEigenvalues(self):
        model = ConvexCombinationModel(2, [0.5, 0.5, 0.0])
        t = np.array([0.0, 0.7])
        assertions.assert_close(model.lambdas()[2](t), np.exp(-2 * t), "λ_3")
        assertions.assert_close(model.lambdas()[0](t), (1 + np.exp(-2 * t)) / 2, "λ_1")

    def testUniformRate(self):
        for d in (2, 3):
            model = ConvexCombinationModel(d, [1 / (d + 1)] * (d + 1))
            t = np.linspace(0, 2, 9)
            for row in model.rates(t):
                assertions.assert_close(row, model.gamma_uniform(t), "Uniform γ for d = %d" % d)

    def testUniformRateNeedsUniformWeights(self):
        try:
            ConvexCombinationModel(2, [0.5, 0.25, 0.25]).gamma_uniform(1.0)
            assert False, "Non-uniform weights have no common rate"
        except GpcError:
            pass

    def testKernelPropagation(self):
        model = ConvexCombinationModel(3, [0.1, 0.2, 0.3, 0.4])
        trajectory = propagate_kernel(model.kernel_spec(self.grid))
        assertions.assert_close(trajectory, model.trajectory(self.grid), "Convex λ", 1e-5)

    def testRates(self):
        model = ConvexCombinationModel(3, [0.1, 0.2, 0.3, 0.4])
        trajectory = rates_to_eigen(model.rate_vector(self.grid))
        assertions.assert_close(trajectory, model.trajectory(self.grid), "λ from γ", 1e-5)

    def testQubitIntegral(self):
        assertions.assert_close(ConvexCombinationModel.qubit_integral(1 / 3), 0.6, "∫f at x = 1/3")
        model = ConvexCombinationModel(2, [0.2, 0.2, 0.6])
        integral = sum(f.total_integral() for f in model.waiting_times().functions)
        assertions.assert_close(integral, ConvexCombinationModel.qubit_integral(0.2), "∫f at x = 0.2")

    def testClosedWaitingTimesMatchTransforms(self):
        for model in (ConvexCombinationModel(2, [0.2, 0.2, 0.6]), ConvexCombinationModel(2, [0.45, 0.45, 0.1]),
                      ConvexCombinationModel(3, [0.25] * 4), ConvexCombinationModel(5, [1 / 6] * 6)):
            transforms = f_from_ell(model.ell().laplace_forms(), model.d)
            for f, transform in zip(model.waiting_times().functions, transforms):
                for s in (0.3, 1.0, 4.0):
                    assertions.assert_close(f.laplace(s), transform(s), "f̃ for x = %s" % model.x.tolist(), 1e-12)

    def testUniformQubit(self):
        spec = ConvexCombinationModel(2, [1 / 3] * 3).waiting_times()
        assertions.assert_close(spec.functions[0](1.0), math.exp(-5 / 3) / 3, "f = e^{-5t/3}/3")
        assert str(certify_semimarkov(spec, self.grid)) == "semi-Markov: YES; ∫f = 0.6"

    def testWaitingTimesPropagate(self):
        model = ConvexCombinationModel(2, [0.3, 0.3, 0.4])
        trajectory = lambda_via_dyson(model.waiting_times(), build_mubs(2), self.grid)
        assertions.assert_close(trajectory, model.trajectory(self.grid), "λ from f", 1e-5)

    def testGeneralWeightsNeedGrid(self):
        model = ConvexCombinationModel(3, [0.1, 0.2, 0.3, 0.4])
        try:
            model.waiting_times()
            assert False, "Numerical waiting times need a grid"
        except GpcError:
            pass

    def testSpecialWeights(self):
        model = ConvexCombinationModel(2, [1.0, 0.0, 0.0])
        assert model.special_weights().tolist() == [float("inf"), 1.0, 1.0]
        assert model.admissibility().values["a"][0] == float("inf")

    def testNotAProbabilityVector(self):
        for x in ([0.5, 0.5, 0.5], [1.5, -0.5, 0.0]):
            try:
                ConvexCombinationModel(2, x)
                assert False, "%s is not a probability vector" % x
            except AdmissibilityError as e:
                assert e.inequality == "probability vector"


class EternalTests(unittest.TestCase):
    def testRates(self):
        t = np.linspace(0, 3, 31)
        for d in (2, 3, 5):
            rates = EternalModel(d).rates(t)
            assert rates[d][0] == 0.0
            assert np.all(rates[d][1:] < 0)
            assertions.assert_close(rates[:d], np.ones((d, len(t))), "γ_α = 1 for α ≤ d")
        assertions.assert_close(EternalModel(2).rates(t)[2], -np.tanh(t), "γ_3 = -tanh t")

    def testRatesMatchConvexCombination(self):
        t = np.linspace(0, 3, 31)
        for d in (2, 3, 5):
            convex = ConvexCombinationModel(d, [1 / d] * d + [0.0])
            assertions.assert_close(EternalModel(d).rates(t), convex.rates(t), "Eternal rates for d = %d" % d)

    def testRatesGenerateEigenvalues(self):
        grid = TimeGrid(2.0, 20000)
        model = EternalModel(3)
        trajectory = rates_to_eigen(model.rate_vector(grid))
        assertions.assert_close(trajectory, model.trajectory(grid), "λ from γ", 1e-8)

    def testStillCompletelyPositive(self):
        grid = TimeGrid(4.0, 400)
        for d in (2, 3, 5):
            model = EternalModel(d)
            assert model.certify(grid), "Eternal channels on C^%d" % d
            assert model.rate_vector(grid).negative_rate_indices() == [d + 1]

    def testNegativeWaitingTime(self):
        grid = TimeGrid(4.0, 400)
        for d in (2, 3, 5):
            certificate = certify_semimarkov(EternalModel(d).waiting_times(), grid)
            assert not certificate
            assert [alpha for alpha, _, _ in certificate.negative] == [d + 1]
        f = EternalModel(2).waiting_times().functions[2]
        assertions.assert_close(f(1.0), -math.exp(-1.0) * math.sinh(1 / math.sqrt(2)) / math.sqrt(2), "f_3")

    def testWaitingTimesMatchTransforms(self):
        for d in (2, 3, 5):
            model = EternalModel(d)
            transforms = f_from_ell(model.ell().laplace_forms(), d)
            for f, transform in zip(model.waiting_times().functions, transforms):
                for s in (0.5, 2.0):
                    assertions.assert_close(f.laplace(s), transform(s), "Eternal f̃ for d = %d" % d, 1e-12)

    def testDescriptor(self):
        assert EternalModel(3).descriptor == ModelDescriptor("eternal", 3)
        assert repr(EternalModel(3)) == "model_from_descriptor(ModelDescriptor('eternal', 3, {}))"
