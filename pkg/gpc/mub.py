# coding=utf-8

"""
Mutually unbiased bases of C^d for prime d, the unitaries and conjugation
maps built from them, and discrete Wigner operators.

Bases are labelled α = 1..d+1 in the public functions; arrays indexed by
basis keep them at positions 0..d.  For d = 2 the bases are the eigenbases of
σ₁, σ₂, σ₃ in that order, with P₀ the +1 projector, so U_α = σ_α.  For odd
prime d, basis α ≤ d is the eigenbasis of X Z^{α−1} and basis d+1 is the
computational basis; P_l projects onto the eigenvalue ω^l, so U_α is exactly
X Z^{α−1} (or Z).
"""

from __future__ import division, unicode_literals
import logging

import numpy as np
from scipy import linalg

from gpc.base import Immutable, InvalidDensityMatrixError, DensityTolerance, check_dimension

logger = logging.getLogger(__name__)

PauliMatrices = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _qubit_projectors():
    identity = np.eye(2, dtype=complex)
    return np.array([[(identity + sigma) / 2, (identity - sigma) / 2] for sigma in PauliMatrices])


def _odd_prime_projectors(d):
    j = np.arange(d)
    projectors = np.empty((d + 1, d, d, d), dtype=complex)
    for k in range(d):
        for m in range(d):
            exponents = (-m * j + k * (j * (j - 1) // 2)) % d
            vector = np.exp(2j * np.pi * exponents / d) / np.sqrt(d)
            projectors[k, m] = np.outer(vector, vector.conj())
    for m in range(d):
        projectors[d, m] = 0
        projectors[d, m, m, m] = 1
    return projectors


class MubFamily(Immutable):
    """
    The d+1 mutually unbiased bases of C^d as rank-one projectors
    P_l^{(α)}, together with U_α = Σ_l ω^l P_l^{(α)} and its powers.

    >>> m = MubFamily(2)
    >>> np.allclose(m.unitary(3), PauliMatrices[2])
    True
    """

    __slots__ = "frozen", "d", "omega", "projectors", "powers", "kraus_vectors"

    def __init__(self, d):
        d = check_dimension(d)
        self.d = d
        self.omega = np.exp(2j * np.pi / d)
        projectors = _qubit_projectors() if d == 2 else _odd_prime_projectors(d)
        phases = self.omega ** np.arange(d)
        unitaries = np.einsum("l,alij->aij", phases, projectors)
        powers = np.empty((d + 1, d, d, d), dtype=complex)
        for index in range(d + 1):
            powers[index, 0] = np.eye(d)
            for k in range(1, d):
                powers[index, k] = powers[index, k - 1] @ unitaries[index]
        self.projectors = projectors
        self.powers = powers
        # Rows are vec(K) for the d² orthogonal unitaries I, U_α^k in the
        # order identity, then α = 1..d+1 with k = 1..d−1.
        kraus = [np.eye(d)] + [powers[index, k] for index in range(d + 1) for k in range(1, d)]
        self.kraus_vectors = np.array([K.T.reshape(-1) for K in kraus])
        self.frozen = True

    def __repr__(self):
        return "MubFamily(%d)" % self.d

    def __unicode__(self):
        return "%d mutually unbiased bases of C^%d" % (self.d + 1, self.d)

    __str__ = __unicode__

    def __eq__(self, other):
        return isinstance(other, MubFamily) and other.d == self.d

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((MubFamily, self.d))

    def _index(self, alpha):
        if isinstance(alpha, bool) or int(alpha) != alpha or not 1 <= alpha <= self.d + 1:
            raise IndexError("Basis label %r is outside 1..%d." % (alpha, self.d + 1))
        return int(alpha) - 1

    def projector(self, alpha, l):
        return self.projectors[self._index(alpha), l]

    def unitary(self, alpha):
        return self.powers[self._index(alpha), 1]

    def operator_basis(self, alpha, k):
        "U_α^k for k = 0..d−1."
        return self.powers[self._index(alpha), k % self.d]

    def basis_vectors(self, alpha):
        "The basis α as the columns of a unitary matrix."
        projectors = self.projectors[self._index(alpha)]
        columns = []
        for P in projectors:
            values, vectors = linalg.eigh(P)
            columns.append(vectors[:, -1])
        return np.array(columns).T


def build_mubs(d):
    """
    The mutually unbiased bases of C^d.  Only prime d is supported.

    >>> build_mubs(3).d
    3
    """
    return MubFamily(d)


def validate_density_matrix(rho, d=None, tolerance=DensityTolerance):
    """
    Checks that rho is a d×d density matrix (Hermitian, unit trace, positive
    semidefinite within the tolerance) and returns it as a complex array.
    """
    rho = np.array(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or (d is not None and rho.shape[0] != d):
        raise InvalidDensityMatrixError("Density matrix has shape %s, expected %s." % (rho.shape, (d, d)))
    if np.max(np.abs(rho - rho.conj().T)) > tolerance:
        raise InvalidDensityMatrixError("Density matrix is not Hermitian.")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > tolerance:
        raise InvalidDensityMatrixError("Density matrix has trace %.12g, expected 1." % trace)
    smallest = linalg.eigvalsh(rho)[0]
    if smallest < -tolerance:
        raise InvalidDensityMatrixError("Density matrix has negative eigenvalue %.3g." % smallest)
    return rho


def _conjugation_sum(m, index, operator):
    powers = m.powers[index, 1:]
    return np.einsum("kij,jl,kml->im", powers, operator, powers.conj())


def apply_U_map(m, alpha, rho, validate=True):
    """
    𝕌_α[ρ] = Σ_{k=1}^{d−1} U_α^k ρ U_α^{k†}.  With validate=False any d×d
    operator is accepted.
    """
    if validate:
        rho = validate_density_matrix(rho, m.d)
    return _conjugation_sum(m, m._index(alpha), np.asarray(rho, dtype=complex))


def apply_phi(m, alpha, rho, validate=True):
    "Φ_α[ρ] = Σ_l P_l^{(α)} ρ P_l^{(α)}, the dephasing in basis α."
    if validate:
        rho = validate_density_matrix(rho, m.d)
    projectors = m.projectors[m._index(alpha)]
    return np.einsum("lij,jk,lkm->im", projectors, np.asarray(rho, dtype=complex), projectors)


def u_map_images(m, operator):
    "𝕌_α[X] for every α, stacked along the first axis."
    operator = np.asarray(operator, dtype=complex)
    return np.array([_conjugation_sum(m, index, operator) for index in range(m.d + 1)])


class WignerOperatorSet(Immutable):
    """
    The d² discrete Wigner operators A_{a₁a₂} of prime dimension d, stored as
    operators[a₁, a₂].  Each is Hermitian with unit trace and together they
    sum to d·I.
    """

    __slots__ = "frozen", "d", "operators"

    def __init__(self, d):
        d = check_dimension(d)
        operators = np.empty((d, d, d, d), dtype=complex)
        if d == 2:
            sigma1, sigma2, sigma3 = PauliMatrices
            for a1 in range(2):
                for a2 in range(2):
                    operators[a1, a2] = 0.5 * ((-1) ** a1 * sigma3 + (-1) ** a2 * sigma1
                                               + (-1) ** (a1 + a2) * sigma2 + np.eye(2))
        else:
            k, l = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
            for a1 in range(d):
                for a2 in range(d):
                    operators[a1, a2] = ((2 * a1 - k - l) % d == 0) * np.exp(2j * np.pi * a2 * (k - l) / d)
        self.d = d
        self.operators = operators
        self.frozen = True

    def __repr__(self):
        return "WignerOperatorSet(%d)" % self.d

    def __unicode__(self):
        return "%d discrete Wigner operators of C^%d" % (self.d * self.d, self.d)

    __str__ = __unicode__


def build_wigner_ops(d):
    """
    The discrete Wigner operators of prime dimension d.

    >>> ops = build_wigner_ops(2)
    >>> np.allclose(ops.operators.sum(axis=(0, 1)), 2 * np.eye(2))
    True
    """
    return WignerOperatorSet(d)


def wigner_function(ops, rho):
    "W_{a₁a₂} = (1/d) Tr(ρ A_{a₁a₂}) as a real d×d array."
    rho = validate_density_matrix(rho, ops.d)
    return np.einsum("abij,ji->ab", ops.operators, rho).real / ops.d


def bloch_vector(rho):
    "x_α = Tr(ρσ_α) for a qubit state."
    rho = validate_density_matrix(rho, 2)
    return np.array([np.trace(rho @ sigma).real for sigma in PauliMatrices])


def density_from_bloch(x):
    """
    ρ = (I + x·σ)/2.

    >>> np.allclose(bloch_vector(density_from_bloch([0.6, 0.0, 0.8])), [0.6, 0.0, 0.8])
    True
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise InvalidDensityMatrixError("Bloch vector needs three components, got shape %s." % (x.shape,))
    return validate_density_matrix(0.5 * (np.eye(2) + np.einsum("a,aij->ij", x, np.array(PauliMatrices))), 2)
