# coding=utf-8

"""
Classical shadows of generalized Pauli channels: the probability
distributions of a state in each mutually unbiased basis, the doubly
stochastic maps the channel induces on them, the classical semi-Markov
representation of those maps, and qubit Wigner function dynamics.

Every map here lives in the two-dimensional algebra spanned by the identity
𝕀 and the uniform projector 𝒫 = (1/d)·J, with 𝒫² = 𝒫, so it is stored and
multiplied on its coordinates (a, b) of a·𝕀 + b·𝒫.
"""

from __future__ import division, unicode_literals
import six

import logging

import numpy as np

from gpc.base import (Immutable, DimensionUnsupportedError, VectorLengthError, NonConvergenceError,
                      DefaultTolerance, DysonTolerance, DysonMaxTerms, PoleTolerance, PoleError)
from gpc.channel import Trajectory, channel_action
from gpc.kernel import EllRep
from gpc.mub import validate_density_matrix, wigner_function, build_wigner_ops
from gpc.numerics import SampledFunction, convolution_values
from gpc.semimarkov import survival, q_eigenvalue

logger = logging.getLogger(__name__)


def mub_distributions(m, rho):
    """
    π_k^{(α)} = Tr(P_k^{(α)} ρ) as a (d+1)×d array, row α−1 for basis α.

    >>> from gpc.mub import build_mubs
    >>> mub_distributions(build_mubs(2), [[1, 0], [0, 0]])[2].tolist()
    [1.0, 0.0]
    """
    rho = validate_density_matrix(rho, m.d)
    return np.einsum("alij,ji->al", m.projectors, rho).real


class StochasticMap(Immutable):
    """
    A d×d stochastic matrix acting on probability vectors.
    """

    __slots__ = "frozen", "matrix"

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise VectorLengthError("Stochastic maps are square, got shape %s." % (matrix.shape,))
        self.matrix = matrix
        self.frozen = True

    @classmethod
    def from_coordinates(cls, a, b, d):
        "a·𝕀 + b·𝒫."
        return cls(a * np.eye(d) + b * np.full((d, d), 1.0 / d))

    @property
    def d(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return "StochasticMap(%r)" % self.matrix.tolist()

    def __unicode__(self):
        return "%d×%d stochastic map" % (self.d, self.d)

    __str__ = __unicode__

    def __call__(self, distribution):
        return self.matrix @ np.asarray(distribution, dtype=float)

    def is_doubly_stochastic(self, tolerance=DefaultTolerance):
        "Row and column sums equal 1 within the tolerance."
        return bool(np.all(np.abs(self.matrix.sum(axis=0) - 1) <= tolerance)
                    and np.all(np.abs(self.matrix.sum(axis=1) - 1) <= tolerance))

    def is_positive(self, tolerance=DefaultTolerance):
        return bool(np.all(self.matrix >= -tolerance))


def stochastic_map(state, alpha):
    """
    T^{(α)} = c_α·𝕀 + (1 − c_α)·𝒫 with c_α = (d/(d−1))(p₀ + p_α − 1/d),
    the map the channel induces on distributions in basis α.

    >>> from gpc.channel import ChannelState
    >>> stochastic_map(ChannelState.identity(2), 1).matrix.tolist()
    [[1.0, 0.0], [0.0, 1.0]]
    """
    d = state.d
    if not 1 <= alpha <= d + 1:
        raise IndexError("Basis label %r is outside 1..%d." % (alpha, d + 1))
    c = d / (d - 1) * (state.p[0] + state.p[alpha] - 1.0 / d)
    return StochasticMap.from_coordinates(c, 1 - c, d)


def stochastic_map_full(m, state, alpha):
    "T_ij = Tr(P_i^{(α)} Λ[P_j^{(α)}]) by direct application of the channel."
    projectors = m.projectors[m._index(alpha)]
    matrix = np.empty((m.d, m.d))
    for j in range(m.d):
        image = channel_action(m, state, projectors[j])
        matrix[:, j] = np.einsum("iab,ba->i", projectors, image).real
    return StochasticMap(matrix)


class ClassicalSemiMarkov(Immutable):
    """
    The classical semi-Markov representation T^{(α)}_t = n_t + n_t∗q_t + …
    in basis α, held on the (𝕀, 𝒫) coordinates: identity_weight is the 𝕀
    coordinate of T and conserved the row sum, so
    T = identity_weight·𝕀 + (conserved − identity_weight)·𝒫.
    """

    __slots__ = "frozen", "d", "alpha", "grid", "waiting", "jump", "survival", "identity_weight", "conserved"

    def __init__(self, d, alpha, waiting, jump, survival_values, identity_weight, conserved):
        self.d = d
        self.alpha = alpha
        self.waiting = waiting
        self.jump = jump
        self.survival = survival_values
        self.identity_weight = identity_weight
        self.conserved = conserved
        self.grid = identity_weight.grid
        self.frozen = True

    def __repr__(self):
        return "<ClassicalSemiMarkov d=%d alpha=%d on %r>" % (self.d, self.alpha, self.grid)

    def __unicode__(self):
        return "classical semi-Markov maps in basis %d of C^%d" % (self.alpha, self.d)

    __str__ = __unicode__

    def q_matrices(self):
        "q_t with f_α(t) on the diagonal and (f − f_α)/(d−1) elsewhere, shape (nodes, d, d)."
        d = self.d
        off = self.jump.values / d
        diagonal = (self.waiting.values - off)[:, None, None]
        return diagonal * np.eye(d) + off[:, None, None] * np.ones((d, d))

    def n_matrices(self):
        "n_t = g(t)·𝕀."
        return self.survival.values[:, None, None] * np.eye(self.d)

    def maps(self):
        "T^{(α)} at every node, shape (nodes, d, d)."
        a = self.identity_weight.values[:, None, None]
        b = (self.conserved.values - self.identity_weight.values)[:, None, None]
        return a * np.eye(self.d) + b * np.full((self.d, self.d), 1.0 / self.d)


def _series(start, factor, grid, tolerance, max_terms):
    term = start.copy()
    total = start.copy()
    for n in range(1, max_terms + 1):
        term = convolution_values(factor, term, grid.h)
        total += term
        if np.max(np.abs(term)) < tolerance:
            logger.debug("Classical series converged after %d terms", n)
            return SampledFunction(grid, total)
    raise NonConvergenceError("Classical semi-Markov series did not converge in %d terms." % max_terms)


def classical_semimarkov(spec, alpha, grid, tolerance=DysonTolerance, max_terms=DysonMaxTerms):
    """
    Sums T = n + n∗q + n∗q∗q + … on the (𝕀, 𝒫) coordinates.  The 𝕀
    coordinate of q is φ_α and its row sum is f, so the two coordinates are
    independent scalar series.
    """
    d = spec.d
    if not 1 <= alpha <= d + 1:
        raise IndexError("Basis label %r is outside 1..%d." % (alpha, d + 1))
    samples = spec.sampled(grid)
    waiting = samples[alpha - 1]
    total = sum(samples[1:], samples[0])
    phi = q_eigenvalue(spec, grid)[alpha - 1]
    g = survival(spec, grid)
    # q = φ·𝕀 + d(f − f_α)/(d−1)·𝒫
    jump = (total - waiting) * (d / (d - 1))
    identity_weight = _series(g.values, phi.values, grid, tolerance, max_terms)
    conserved = _series(g.values, total.values, grid, tolerance, max_terms)
    return ClassicalSemiMarkov(d, alpha, waiting, jump, g, identity_weight, conserved)


def classical_memory_kernel_laplace(spec, alpha, s):
    """
    K̃(s) = s·𝕀 − (𝕀 − q̃(s))ñ(s)⁻¹ on its (𝕀, 𝒫) coordinates.
    """
    forms = spec.laplace_forms()
    d = spec.d
    values = [form(s) for form in forms]
    total = sum(values)
    own = values[alpha - 1]
    phi = own - (total - own) / (d - 1)
    jump = d * (total - own) / (d - 1)
    g = (1 - total) / s
    if abs(g) < PoleTolerance:
        raise PoleError("Survival transform vanishes at s = %s." % (s,))
    return s - (1 - phi) / g, jump / g


class WignerVector(Immutable):
    """
    The qubit Wigner function as the vector (W₀₀, W₀₁, W₁₀, W₁₁).
    """

    __slots__ = "frozen", "values"

    def __init__(self, values):
        values = np.array(values, dtype=float)
        if values.shape != (4,):
            raise VectorLengthError("Qubit Wigner vectors have 4 entries, got %d." % values.size)
        self.values = values
        self.frozen = True

    def __repr__(self):
        return "WignerVector(%r)" % self.values.tolist()

    def __unicode__(self):
        return "W = %s" % six.text_type(self.values.tolist())

    __str__ = __unicode__


def wigner_vector(rho):
    """
    (W₀₀, W₀₁, W₁₀, W₁₁) of a qubit state.

    >>> wigner_vector([[0.5, 0], [0, 0.5]]).values.tolist()
    [0.25, 0.25, 0.25, 0.25]
    """
    return WignerVector(wigner_function(build_wigner_ops(2), rho).reshape(-1))


def wigner_matrix(L):
    """
    The 4×4 doubly stochastic S with W(t) = S·W(0) for integrals L₁, L₂, L₃.
    """
    L = np.asarray(L, dtype=float)
    s0 = 4 - L.sum()
    s1, s2, s3 = L.sum() - 2 * L
    return 0.25 * np.array([
        [s0, s3, s1, s2],
        [s3, s0, s2, s1],
        [s1, s2, s0, s3],
        [s2, s1, s3, s0],
    ])


def wigner_evolution_qubit(dynamics, grid=None):
    """
    S(t) at every node, shape (nodes, 4, 4), from an EllRep (exact integrals
    L_α) or a Trajectory (L_α = 1 − λ_α).
    """
    if dynamics.d != 2:
        raise DimensionUnsupportedError("Wigner evolution is implemented for qubits, got d = %d." % dynamics.d)
    if isinstance(dynamics, EllRep):
        L = np.column_stack([f.values for f in dynamics.integrals(grid)])
    elif isinstance(dynamics, Trajectory):
        L = 1.0 - dynamics.eigenvalues()
    else:
        raise TypeError("Expected an EllRep or a Trajectory, got %r." % (dynamics,))
    return np.array([wigner_matrix(row) for row in L])


def evolve_wigner(S, W):
    "S·W for one matrix or a stack of matrices."
    values = W.values if isinstance(W, WignerVector) else np.asarray(W, dtype=float)
    return np.einsum("...ij,j->...i", np.asarray(S), values)
