# coding=utf-8

"""
Generalized Pauli channels Λ = p₀·id + (1/(d−1)) Σ_α p_α 𝕌_α, their
eigenvalue representation, complete positivity certification, and the
time-local rates of a channel trajectory.

A channel is stored dually as the probability vector p = (p₀, p₁..p_{d+1})
and the eigenvalue vector λ = (λ₁..λ_{d+1}) of Λ on the operators U_α^k.
The channel is completely positive and trace preserving exactly when every
p is non-negative, which is the pair of linear inequalities

    −1/(d−1) ≤ Σ_β λ_β ≤ 1 + d·min_α λ_α

checked by certify_cptp.
"""

from __future__ import division, unicode_literals
import six

import logging

import numpy as np

from gpc.base import (Immutable, VectorLengthError, UncertifiedChannelError, SingularGeneratorError,
                      ComplexValueError, GridMismatchError, DefaultTolerance, check_dimension)
from gpc.mub import validate_density_matrix, u_map_images, apply_phi
from gpc.numerics import SampledFunction, cumulative_integral, derivative

logger = logging.getLogger(__name__)


def _real_vector(values, expected, d, what):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        if np.any(values.imag != 0):
            raise ComplexValueError("%s must be real for d = %d." % (what.capitalize(), d))
        values = values.real
    values = np.array(values, dtype=float)
    if values.ndim != 1 or len(values) != expected:
        raise VectorLengthError("Expected %d %s for d = %d, got %d." % (expected, what, d, values.size))
    return values


def eigen_from_prob(p, d):
    """
    λ_α = p₀ + (d/(d−1)) p_α − (1/(d−1)) Σ_{β≥1} p_β.

    >>> eigen_from_prob([1.0, 0.0, 0.0, 0.0], 2).tolist()
    [1.0, 1.0, 1.0]
    """
    d = check_dimension(d)
    p = _real_vector(p, d + 2, d, "probabilities")
    return p[0] + (d * p[1:] - p[1:].sum()) / (d - 1)


def prob_from_eigen(lambdas, d):
    """
    p₀ = (1 + (d−1)Σλ)/d², p_α = ((d−1)/d²)(1 + dλ_α − Σλ).

    >>> prob_from_eigen([0.0, 0.0, 0.0], 2).tolist()
    [0.25, 0.25, 0.25, 0.25]
    """
    d = check_dimension(d)
    lambdas = _real_vector(lambdas, d + 1, d, "eigenvalues")
    total = lambdas.sum()
    p = np.empty(d + 2)
    p[0] = (1.0 + (d - 1) * total) / (d * d)
    p[1:] = (d - 1) * (1.0 + d * lambdas - total) / (d * d)
    return p


class FujiwaraAlgoetCertificate(Immutable):
    """
    The verdict of the complete positivity check of one channel.  Margins are
    positive when satisfied: lower_margin = Σλ + 1/(d−1) and
    upper_margin = 1 + d·min λ − Σλ.  worst_index is the 1-based α of the
    smallest eigenvalue, the one the upper bound is tight on.
    """

    __slots__ = "frozen", "passed", "lower_margin", "upper_margin", "tolerance", "worst_index"

    def __init__(self, lower_margin, upper_margin, tolerance, worst_index=None):
        self.lower_margin = float(lower_margin)
        self.upper_margin = float(upper_margin)
        self.tolerance = tolerance
        self.worst_index = worst_index
        self.passed = self.lower_margin >= -tolerance and self.upper_margin >= -tolerance
        self.frozen = True

    @property
    def worst_margin(self):
        return min(self.lower_margin, self.upper_margin)

    @property
    def violated_side(self):
        "'lower', 'upper' or None."
        if self.passed:
            return None
        return "lower" if self.lower_margin < self.upper_margin else "upper"

    def __bool__(self):
        return self.passed

    __nonzero__ = __bool__

    def __repr__(self):
        return "FujiwaraAlgoetCertificate(%r, %r, %r, %r)" % (self.lower_margin, self.upper_margin, self.tolerance,
                                                              self.worst_index)

    def __unicode__(self):
        if self.passed:
            return "CPTP: YES (worst margin %s)" % six.text_type(round(self.worst_margin, 12))
        if self.violated_side == "upper" and self.worst_index is not None:
            return "CPTP: NO (upper bound violated by %s at lambda_%d)" % (six.text_type(-self.worst_margin),
                                                                          self.worst_index)
        return "CPTP: NO (%s bound violated by %s)" % (self.violated_side, six.text_type(-self.worst_margin))

    __str__ = __unicode__


def _margins(lambdas, d):
    lambdas = np.asarray(lambdas, dtype=float)
    total = lambdas.sum(axis=-1)
    return total + 1.0 / (d - 1), 1.0 + d * lambdas.min(axis=-1) - total


def certify_cptp(lambdas, d, tolerance=DefaultTolerance):
    """
    Checks the complete positivity inequalities for one eigenvalue vector.

    >>> certificate = certify_cptp([0.5, 0.5, -0.6], 2)
    >>> certificate.violated_side, certificate.worst_index
    ('upper', 3)
    """
    d = check_dimension(d)
    lambdas = _real_vector(lambdas, d + 1, d, "eigenvalues")
    lower, upper = _margins(lambdas, d)
    return FujiwaraAlgoetCertificate(lower, upper, tolerance, int(np.argmin(lambdas)) + 1)


class ChannelState(Immutable):
    """
    A generalized Pauli channel at one instant, holding p and λ.  Build it
    with from_probabilities or from_eigenvalues.
    """

    __slots__ = "frozen", "d", "p", "eigenvalues"

    def __init__(self, d, p, eigenvalues):
        self.d = check_dimension(d)
        self.p = _real_vector(p, self.d + 2, self.d, "probabilities")
        self.eigenvalues = _real_vector(eigenvalues, self.d + 1, self.d, "eigenvalues")
        self.frozen = True

    @classmethod
    def from_probabilities(cls, p, d):
        return cls(d, p, eigen_from_prob(p, d))

    @classmethod
    def from_eigenvalues(cls, lambdas, d):
        return cls(d, prob_from_eigen(lambdas, d), lambdas)

    @classmethod
    def identity(cls, d):
        return cls.from_eigenvalues(np.ones(d + 1), d)

    def __repr__(self):
        return "ChannelState.from_eigenvalues(%r, %d)" % (self.eigenvalues.tolist(), self.d)

    def __unicode__(self):
        return "Pauli channel on C^%d with eigenvalues %s" % (self.d, six.text_type(self.eigenvalues.tolist()))

    __str__ = __unicode__

    def __eq__(self, other):
        return isinstance(other, ChannelState) and self.d == other.d and np.array_equal(self.eigenvalues, other.eigenvalues)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((ChannelState, self.d, self.eigenvalues.tobytes()))

    def certify(self, tolerance=DefaultTolerance):
        return certify_cptp(self.eigenvalues, self.d, tolerance)


def _check_family(m, state):
    if m.d != state.d:
        raise VectorLengthError("Channel on C^%d cannot use bases of C^%d." % (state.d, m.d))


def channel_action(m, state, operator):
    "Λ[X] for any d×d operator X, without certification."
    images = u_map_images(m, operator)
    return state.p[0] * operator + np.einsum("a,aij->ij", state.p[1:], images) / (m.d - 1)


def apply_channel(m, state, rho, tolerance=DefaultTolerance):
    """
    Λ[ρ] for a certified channel and a density matrix ρ.
    """
    _check_family(m, state)
    rho = validate_density_matrix(rho, m.d)
    certificate = state.certify(tolerance)
    if not certificate:
        raise UncertifiedChannelError("Refusing to apply a channel that is not CPTP: %s." % certificate)
    return channel_action(m, state, rho)


def channel_superoperator(m, state):
    """
    The d²×d² matrix S with vec(Λ[X]) = S·vec(X) for column-stacked vec.
    """
    _check_family(m, state)
    d = m.d
    S = state.p[0] * np.eye(d * d, dtype=complex)
    for index in range(d + 1):
        for k in range(1, d):
            U = m.powers[index, k]
            S = S + state.p[index + 1] / (d - 1) * np.kron(U.conj(), U)
    return S


def choi_matrix(m, state):
    """
    J = Σ_{ij} |i⟩⟨j| ⊗ Λ[|i⟩⟨j|], assembled from the orthogonal Kraus
    operators I and U_α^k with weights p₀ and p_α/(d−1).
    """
    _check_family(m, state)
    weights = np.concatenate([[state.p[0]], np.repeat(state.p[1:] / (m.d - 1), m.d - 1)])
    V = m.kraus_vectors
    return (V.T * weights) @ V.conj()


def apply_generator(m, gammas, rho, validate=True):
    "Σ_α γ_α (Φ_α[ρ] − ρ), the time-local generator."
    gammas = _real_vector(gammas, m.d + 1, m.d, "rates")
    if validate:
        rho = validate_density_matrix(rho, m.d)
    rho = np.asarray(rho, dtype=complex)
    return sum(gamma * (apply_phi(m, alpha, rho, validate=False) - rho)
               for alpha, gamma in enumerate(gammas, start=1))


class TrajectoryCertificate(Immutable):
    """
    Complete positivity along a trajectory: the verdict, the first failing
    node (None when every node passes) and the worst margins.
    """

    __slots__ = "frozen", "passed", "first_failure", "first_failure_time", "violated_side", \
        "worst_lower_margin", "worst_upper_margin", "worst_node", "tolerance"

    def __init__(self, grid, lower, upper, tolerance):
        failing = np.flatnonzero((lower < -tolerance) | (upper < -tolerance))
        self.tolerance = tolerance
        self.passed = failing.size == 0
        self.first_failure = None if self.passed else int(failing[0])
        self.first_failure_time = None if self.passed else float(grid.nodes[failing[0]])
        if self.passed:
            self.violated_side = None
        else:
            self.violated_side = "lower" if lower[failing[0]] < upper[failing[0]] else "upper"
        self.worst_lower_margin = float(lower.min())
        self.worst_upper_margin = float(upper.min())
        self.worst_node = int(np.argmin(np.minimum(lower, upper)))
        self.frozen = True

    @property
    def worst_margin(self):
        return min(self.worst_lower_margin, self.worst_upper_margin)

    def __bool__(self):
        return self.passed

    __nonzero__ = __bool__

    def __repr__(self):
        return "<TrajectoryCertificate passed=%r first_failure=%r>" % (self.passed, self.first_failure)

    def __unicode__(self):
        if self.passed:
            return "CPTP: YES (worst margin %.6g)" % self.worst_margin
        return "CPTP: NO (%s bound first violated at t = %.6g, worst margin %.6g)" % (
            self.violated_side, self.first_failure_time, self.worst_margin)

    __str__ = __unicode__


class Trajectory(Immutable):
    """
    A family of channels Λ_t on a TimeGrid, held as the d+1 eigenvalue
    trajectories λ_α(t).
    """

    __slots__ = "frozen", "d", "grid", "lambdas"

    def __init__(self, d, lambdas):
        d = check_dimension(d)
        lambdas = list(lambdas)
        if len(lambdas) != d + 1:
            raise VectorLengthError("Expected %d eigenvalue trajectories for d = %d, got %d." % (d + 1, d, len(lambdas)))
        grids = set(l.grid for l in lambdas)
        if len(grids) != 1:
            raise GridMismatchError("Eigenvalue trajectories live on different grids.")
        self.d = d
        self.grid = lambdas[0].grid
        self.lambdas = tuple(lambdas)
        self.frozen = True

    def __repr__(self):
        return "<Trajectory d=%d on %r>" % (self.d, self.grid)

    def __unicode__(self):
        return "Pauli channel trajectory on C^%d, %s" % (self.d, six.text_type(self.grid))

    __str__ = __unicode__

    def eigenvalues(self):
        "λ as an array of shape (nodes, d+1)."
        return np.column_stack([l.values for l in self.lambdas])

    def probabilities(self):
        "p as an array of shape (nodes, d+2)."
        lambdas = self.eigenvalues()
        d = self.d
        total = lambdas.sum(axis=1)
        p = np.empty((len(self.grid), d + 2))
        p[:, 0] = (1.0 + (d - 1) * total) / (d * d)
        p[:, 1:] = (d - 1) * (1.0 + d * lambdas - total[:, None]) / (d * d)
        return p

    def state(self, j):
        self.grid.check_index(j)
        return ChannelState.from_eigenvalues(self.eigenvalues()[j], self.d)

    def restrict(self, stride):
        return Trajectory(self.d, [l.restrict(stride) for l in self.lambdas])

    def certify(self, tolerance=DefaultTolerance):
        return certify_trajectory(self.lambdas, self.d, tolerance)


def certify_trajectory(lambdas, d, tolerance=DefaultTolerance):
    "Complete positivity at every node of a trajectory."
    trajectory = lambdas if isinstance(lambdas, Trajectory) else Trajectory(d, lambdas)
    lower, upper = _margins(trajectory.eigenvalues(), trajectory.d)
    certificate = TrajectoryCertificate(trajectory.grid, lower, upper, tolerance)
    logger.info("Trajectory certification: %s", certificate)
    return certificate


def evolve_state(m, lambdas, rho):
    """
    ρ(t_j) = Λ_{t_j}[ρ] at every node, as an array of shape (nodes, d, d).
    """
    trajectory = lambdas if isinstance(lambdas, Trajectory) else Trajectory(m.d, lambdas)
    rho = validate_density_matrix(rho, m.d)
    images = u_map_images(m, rho)
    p = trajectory.probabilities()
    return (np.multiply.outer(p[:, 0], rho)
            + np.einsum("ta,aij->tij", p[:, 1:], images) / (m.d - 1))


class RateVector(Immutable):
    """
    Decay rates γ_α(t) of the time-local generator, sampled on a grid, with
    their prefix integrals Γ_α(t).
    """

    __slots__ = "frozen", "d", "grid", "gammas", "integrals"

    def __init__(self, d, gammas):
        d = check_dimension(d)
        gammas = list(gammas)
        if len(gammas) != d + 1:
            raise VectorLengthError("Expected %d rates for d = %d, got %d." % (d + 1, d, len(gammas)))
        if len(set(g.grid for g in gammas)) != 1:
            raise GridMismatchError("Rates live on different grids.")
        self.d = d
        self.grid = gammas[0].grid
        self.gammas = tuple(gammas)
        self.integrals = tuple(cumulative_integral(g) for g in gammas)
        self.frozen = True

    @classmethod
    def from_functions(cls, d, functions, grid):
        "Rates from vectorised callables of t."
        return cls(d, [SampledFunction.from_function(grid, f) for f in functions])

    def __repr__(self):
        return "<RateVector d=%d on %r>" % (self.d, self.grid)

    def __unicode__(self):
        return "decay rates on C^%d, %s" % (self.d, six.text_type(self.grid))

    __str__ = __unicode__

    def total(self):
        "γ(t) = Σ_α γ_α(t)."
        return sum(self.gammas[1:], self.gammas[0])

    def negative_rate_indices(self, tolerance=0.0):
        "The labels α whose rate drops below −tolerance at some node."
        return [alpha for alpha, g in enumerate(self.gammas, start=1) if np.any(g.values < -tolerance)]


def rates_to_eigen(rates, grid=None):
    """
    λ_α(t) = exp(Γ_α(t) − Γ(t)) from the prefix integrals of the rates.
    """
    if grid is not None and grid != rates.grid:
        raise GridMismatchError("Rates live on %r, not %r." % (rates.grid, grid))
    total = sum(rates.integrals[1:], rates.integrals[0])
    return Trajectory(rates.d, [SampledFunction(rates.grid, np.exp(G.values - total.values)) for G in rates.integrals])


def eigen_to_rates(lambdas, d=None):
    """
    γ_α from a trajectory: μ_α = d/dt log λ_α, γ = −(1/d)Σμ_α, γ_α = μ_α + γ.
    Every λ_α must stay positive.
    """
    trajectory = lambdas if isinstance(lambdas, Trajectory) else Trajectory(d, lambdas)
    d = trajectory.d
    logs = []
    for alpha, l in enumerate(trajectory.lambdas, start=1):
        bad = np.flatnonzero(l.values <= 0)
        if bad.size:
            raise SingularGeneratorError("λ_%d is not positive at t = %g; the generator is singular there."
                                         % (alpha, trajectory.grid.nodes[bad[0]]))
        logs.append(SampledFunction(trajectory.grid, np.log(l.values)))
    mus = [derivative(log) for log in logs]
    total = -sum(mu.values for mu in mus) / d
    return RateVector(d, [SampledFunction(trajectory.grid, mu.values + total) for mu in mus])
