# coding=utf-8

"""
Closed-form example families of generalized Pauli channel dynamics.  Each
family knows every representation it has in closed form: the eigenvalues
λ_α(t), the ℓ functions, the decay rates γ_α(t), the waiting-time densities
f_α(t) and the memory kernel.  Nothing is sampled until a grid is given, so
the families serve as oracles for the numerical pipeline.

>>> model = SemigroupModel(2, [1.0, 1.0, 1.0])
>>> round(model.lambdas()[0](1.0), 12) == round(math.exp(-2.0), 12)
True
"""

from __future__ import division, unicode_literals
import six

import logging
import math
import numbers

import numpy as np

from gpc.base import (Immutable, GpcError, AdmissibilityError, ConfigurationError, VectorLengthError,
                      DefaultTolerance, check_dimension)
from gpc.channel import Trajectory, RateVector, prob_from_eigen
from gpc.kernel import (EllRep, KernelSpec, ExpFamilyParams, InequalityReport, build_exp_family,
                        build_special_class, exp_kernel)
from gpc.numerics import ExponentialSum, SampledFunction
from gpc.semimarkov import SemiMarkovSpec, f_from_ell

logger = logging.getLogger(__name__)

Families = ("semigroup", "oscillatory", "convex_combination", "eternal")
ProbabilityTolerance = 1e-12


class ModelDescriptor(Immutable):
    """
    Names a family and its parameters, in the form scenario files use.

    >>> ModelDescriptor("semigroup", 2, {"gamma": [1, 1, 1]})
    ModelDescriptor('semigroup', 2, {'gamma': [1, 1, 1]})
    >>> try:
    ...     ModelDescriptor("lindblad", 2, {})
    ...     assert False, "ConfigurationError was not raised!"
    ... except ConfigurationError as e:
    ...     assert str(e).startswith("Unknown model family 'lindblad'")
    """

    __slots__ = "frozen", "family", "d", "parameters", "notes"

    def __init__(self, family, d, parameters=None, notes=""):
        if family not in Families:
            raise ConfigurationError("Unknown model family %r; expected one of %s."
                                     % (str(family), ", ".join(Families)))
        self.family = str(family)
        self.d = check_dimension(d)
        self.parameters = dict(parameters or {})
        self.notes = notes
        self.frozen = True

    @classmethod
    def from_dict(cls, d, values):
        "A descriptor from a scenario's source params block, which names the family."
        values = dict(values)
        if "family" not in values:
            raise ConfigurationError("Model source is missing required key 'family'.")
        family = values.pop("family")
        notes = values.pop("notes", "")
        return cls(family, d, values, notes)

    def to_dict(self):
        values = dict(self.parameters)
        values["family"] = self.family
        return values

    def __repr__(self):
        return "ModelDescriptor(%r, %d, %r)" % (str(self.family), self.d,
                                                dict((str(k), v) for k, v in self.parameters.items()))

    def __unicode__(self):
        return "%s model on C^%d" % (self.family, self.d)

    __str__ = __unicode__

    def __eq__(self, other):
        return isinstance(other, ModelDescriptor) and \
            (self.family, self.d, self.parameters) == (other.family, other.d, other.parameters)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((ModelDescriptor, self.family, self.d, repr(sorted(self.parameters.items()))))


def _parameter_vector(values, d, what):
    if isinstance(values, numbers.Real):
        values = [values] * (d + 1)
    try:
        values = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise ConfigurationError("%s must be numbers, got %r." % (what.capitalize(), values))
    if values.shape != (d + 1,):
        raise VectorLengthError("Expected %d %s for d = %d, got %d." % (d + 1, what, d, values.size))
    return values


class Model(Immutable):
    """
    The shared surface of every family.  Subclasses provide descriptor,
    lambdas, ell, kernel_spec and admissibility, and rates or waiting_times
    when the family has them.
    """

    __slots__ = ()

    def lambdas(self):
        raise NotImplementedError()

    def ell(self):
        raise NotImplementedError()

    def kernel_spec(self, grid):
        raise NotImplementedError()

    def admissibility(self, tolerance=DefaultTolerance):
        raise NotImplementedError()

    def rates(self, t):
        raise GpcError("The %s family has no closed-form decay rates." % self.descriptor.family)

    def waiting_times(self, grid=None):
        raise GpcError("The %s family has no semi-Markov representation." % self.descriptor.family)

    def rate_vector(self, grid):
        "γ_α(t) sampled on the grid."
        return RateVector(self.d, [SampledFunction(grid, row) for row in self.rates(grid.nodes)])

    def trajectory(self, grid):
        "The exact λ_α sampled on the grid."
        return Trajectory(self.d, [l.sample(grid) for l in self.lambdas()])

    def probabilities(self, t):
        "p(t) for every time in t, shape (len(t), d+2)."
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lambdas = np.column_stack([l(t) for l in self.lambdas()])
        return np.array([prob_from_eigen(row, self.d) for row in lambdas])

    def certify(self, grid, tolerance=DefaultTolerance):
        return self.trajectory(grid).certify(tolerance)

    def __repr__(self):
        return "model_from_descriptor(%r)" % (self.descriptor,)

    def __unicode__(self):
        return six.text_type(self.descriptor)

    __str__ = __unicode__


class SemigroupModel(Model):
    """
    The Markovian semigroup with constant rates γ_α ≥ 0:
    λ_α(t) = e^{(γ_α−γ)t} and f_α(t) = ((d−1)/d)γ_α e^{−((d−1)/d)γt}.
    """

    __slots__ = "frozen", "d", "gammas"

    def __init__(self, d, gammas):
        self.d = check_dimension(d)
        gammas = _parameter_vector(gammas, self.d, "rates")
        if np.any(gammas < 0):
            raise AdmissibilityError("non-negative rates", "Every semigroup rate must be non-negative, got %s."
                                     % gammas.tolist())
        self.gammas = gammas
        self.frozen = True

    @property
    def descriptor(self):
        return ModelDescriptor("semigroup", self.d, {"gamma": self.gammas.tolist()})

    @property
    def gaps(self):
        "γ − γ_α, the decay rate of λ_α."
        return self.gammas.sum() - self.gammas

    def lambdas(self):
        return [ExponentialSum.exponential(1.0, gap) for gap in self.gaps]

    def ell(self):
        return EllRep(self.d, [ExponentialSum.exponential(gap, gap) for gap in self.gaps])

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        return np.array([np.full(t.shape, gamma) for gamma in self.gammas])

    def waiting_times(self, grid=None):
        scale = (self.d - 1) / self.d
        total = self.gammas.sum()
        return SemiMarkovSpec(self.d, [ExponentialSum.exponential(scale * gamma, scale * total)
                                       for gamma in self.gammas])

    def kernel_spec(self, grid):
        "κ_α = −(γ − γ_α)δ."
        weights, regulars = exp_kernel(self.gaps, self.gaps)
        return KernelSpec.from_closed_forms(self.d, weights, regulars, grid)

    def admissibility(self, tolerance=DefaultTolerance):
        return InequalityReport({"non-negative rates": self.gammas.min()}, tolerance=tolerance)


class OscillatoryModel(Model):
    """
    ℓ_α(t) = (ω/a_α) sin ωt, so λ_α(t) = 1 − (1/a_α)(1 − cos ωt) and
    κ_α(t) = −(ω²/a_α) cos(√(1 − 1/a_α)·ωt).  The channels are legitimate
    exactly when d/a_β ≤ Σ_α 1/a_α ≤ d²/(2(d−1)) for every β.
    """

    __slots__ = "frozen", "d", "omega", "a"

    def __init__(self, d, omega, a):
        self.d = check_dimension(d)
        self.omega = float(omega)
        if not self.omega > 0:
            raise AdmissibilityError("positive frequency", "The frequency must be positive, got %r." % (omega,))
        self.a = _parameter_vector(a, self.d, "weights")
        if np.any(self.a <= 0):
            raise AdmissibilityError("positive weights", "Every a must be positive, got %s." % self.a.tolist())
        self.frozen = True

    @property
    def descriptor(self):
        return ModelDescriptor("oscillatory", self.d, {"omega": self.omega, "a": self.a.tolist()})

    def lambdas(self):
        return [ExponentialSum.constant(1 - 1 / a) + ExponentialSum.cosine(1 / a, self.omega) for a in self.a]

    def ell(self):
        ell, _ = build_special_class(ExponentialSum.sine(self.omega, self.omega), self.a, self.d, strict=False)
        return ell

    def kernel_spec(self, grid):
        regulars = [ExponentialSum.cosine(-self.omega ** 2 / a, self.omega * np.sqrt(complex(1 - 1 / a)))
                    for a in self.a]
        return KernelSpec.from_closed_forms(self.d, [0.0] * (self.d + 1), regulars, grid,
                                            {"admissibility": self.admissibility()})

    def revival_time(self):
        "2π/ω, where every λ_α returns to 1."
        return 2 * math.pi / self.omega

    def admissibility(self, tolerance=DefaultTolerance):
        d = self.d
        inverse = 1 / self.a
        return InequalityReport({
            "oscillatory dominance": inverse.sum() - d * inverse.max(),
            "oscillatory upper bound": d * d / (2 * (d - 1)) - inverse.sum(),
        }, {
            "weight lower bound": 2 * (1 - 1 / d),
            "minimum weight": float(self.a.min()),
        }, tolerance)


class ConvexCombinationModel(Model):
    """
    The mixture Σ_α x_α e^{t𝓛_α} of the semigroups that contract everything
    except one eigendirection, so λ_α(t) = x_α + (1 − x_α)e^{−dt}.  Its ℓ is
    the special class with ℓ(t) = d·e^{−dt} and a_α = 1/(1 − x_α).
    """

    __slots__ = "frozen", "d", "x"

    def __init__(self, d, x):
        self.d = check_dimension(d)
        x = _parameter_vector(x, self.d, "weights")
        if np.any(x < 0) or abs(x.sum() - 1) > ProbabilityTolerance:
            raise AdmissibilityError("probability vector", "The weights x must be a probability vector, got %s."
                                     % x.tolist())
        self.x = x
        self.frozen = True

    @property
    def descriptor(self):
        return ModelDescriptor("convex_combination", self.d, {"x": self.x.tolist()})

    @property
    def uniform(self):
        return bool(np.all(np.abs(self.x - 1 / (self.d + 1)) <= ProbabilityTolerance))

    @property
    def qubit_symmetric(self):
        "d = 2 with x₁ = x₂."
        return self.d == 2 and abs(self.x[0] - self.x[1]) <= ProbabilityTolerance

    def special_weights(self):
        "a_α = 1/(1 − x_α), infinite where x_α = 1."
        with np.errstate(divide="ignore"):
            return np.where(self.x >= 1, np.inf, 1 / (1 - self.x))

    def exp_family(self):
        return ExpFamilyParams(self.d, self.d * (1 - self.x), self.d)

    def lambdas(self):
        return [ExponentialSum([x, 1 - x], [0.0, self.d]) for x in self.x]

    def ell(self):
        return EllRep(self.d, [ExponentialSum.exponential(self.d * (1 - x), self.d) for x in self.x])

    def rates(self, t):
        """
        γ_α(t) = Σ_β (1−x_β)e^{−dt}/λ_β(t) − d(1−x_α)e^{−dt}/λ_α(t).
        """
        t = np.asarray(t, dtype=float)
        decay = np.exp(-self.d * t)
        terms = np.array([(1 - x) * decay / (x + (1 - x) * decay) for x in self.x])
        return terms.sum(axis=0) - self.d * terms

    def gamma_uniform(self, t):
        "γ_α(t) = d/(d + e^{dt}), the common rate when x_α = 1/(d+1)."
        if not self.uniform:
            raise GpcError("The uniform rate needs x_α = 1/(d+1), got %s." % self.x.tolist())
        decay = np.exp(-self.d * np.asarray(t, dtype=float))
        return self.d * decay / (self.d * decay + 1)

    @staticmethod
    def qubit_integral(x):
        "∫f = (−3x² + 3x − 1)/(x² + x − 1) for the qubit family with x₁ = x₂ = x."
        return (-3 * x * x + 3 * x - 1) / (x * x + x - 1)

    def kernel_spec(self, grid):
        _, spec = build_exp_family(self.exp_family(), grid)
        return spec

    def waiting_times(self, grid=None):
        """
        Closed forms for uniform x and for the qubit with x₁ = x₂; any other
        x is inverted numerically from f̃ and needs a grid.
        """
        d = self.d
        if self.uniform:
            decay = (d * (d + 1) - 1) / (d + 1)
            return SemiMarkovSpec(d, [ExponentialSum.exponential((d - 1) / (d + 1), decay)] * (d + 1))
        if self.qubit_symmetric:
            x = self.x[0]
            xi = math.sqrt(12 * x * x - 4 * x + 1)
            decay = (3 - 2 * x) / 2
            pair = ExponentialSum.hyperbolic(decay, xi / 2, x, x * (6 * x - 3) / xi)
            third = ExponentialSum.hyperbolic(decay, xi / 2, 1 - 2 * x, (1 - 4 * x) / xi)
            return SemiMarkovSpec(d, [pair, pair, third])
        if grid is None:
            raise GpcError("Waiting times for x = %s are numerical and need a grid." % self.x.tolist())
        return SemiMarkovSpec.from_laplace(d, f_from_ell(self.ell().laplace_forms(), d), grid)

    def admissibility(self, tolerance=DefaultTolerance):
        report = self.exp_family().admissibility(tolerance)
        margins = dict(report.margins)
        margins["probability vector"] = float(self.x.min())
        values = dict(report.values)
        values["a"] = self.special_weights().tolist()
        return InequalityReport(margins, values, tolerance)


class EternalModel(ConvexCombinationModel):
    """
    The convex combination with x = (1/d, …, 1/d, 0), whose rate γ_{d+1}(t) is
    negative for every t > 0 and whose semi-Markov densities include a
    negative f_{d+1}.
    """

    __slots__ = ()

    def __init__(self, d):
        d = check_dimension(d)
        super(EternalModel, self).__init__(d, [1 / d] * d + [0.0])

    @property
    def descriptor(self):
        return ModelDescriptor("eternal", self.d)

    def rates(self, t):
        "γ_α = 1 for α ≤ d and γ_{d+1}(t) = −(d−1)(e^{dt}−1)/(e^{dt}+d−1)."
        d = self.d
        decay = np.exp(-d * np.asarray(t, dtype=float))
        gammas = np.ones((d + 1,) + decay.shape)
        gammas[d] = -(d - 1) * (1 - decay) / (1 + (d - 1) * decay)
        return gammas

    def waiting_times(self, grid=None):
        d = self.d
        b = math.sqrt((d ** 3 - 4 * d + 4) / (4 * d))
        root = math.sqrt(d ** 4 - 4 * d * d + 4 * d)
        first = ExponentialSum.hyperbolic(d / 2, b, (d - 1) / d, -(d - 1) * (d - 2) / root)
        last = ExponentialSum.hyperbolic(d / 2, b, 0.0, -2 * (d - 1) ** 2 / root)
        return SemiMarkovSpec(d, [first] * d + [last])


def model_from_descriptor(descriptor):
    """
    Builds the family a descriptor names.

    >>> model_from_descriptor(ModelDescriptor("eternal", 3)).x.tolist()[-1]
    0.0
    """
    parameters = descriptor.parameters
    family = descriptor.family
    expected = {
        "semigroup": ("gamma",),
        "oscillatory": ("omega", "a"),
        "convex_combination": ("x",),
        "eternal": (),
    }[family]
    unknown = sorted(set(parameters) - set(expected))
    if unknown:
        raise ConfigurationError("Unknown parameter '%s' for the %s family." % (unknown[0], family))
    for name in expected:
        if name not in parameters:
            raise ConfigurationError("The %s family needs parameter '%s'." % (family, name))
    logger.debug("Building %s", descriptor)
    if family == "semigroup":
        return SemigroupModel(descriptor.d, parameters["gamma"])
    if family == "oscillatory":
        return OscillatoryModel(descriptor.d, parameters["omega"], parameters["a"])
    if family == "convex_combination":
        return ConvexCombinationModel(descriptor.d, parameters["x"])
    return EternalModel(descriptor.d)
