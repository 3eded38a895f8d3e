# coding=utf-8

"""
Quantum semi-Markov dynamics Λ_t = N_t + N_t∗Q_t + N_t∗Q_t∗Q_t + …, where
Q_t = (1/(d−1)) Σ_α f_α(t) 𝕌_α is built from waiting-time densities f_α and
N_t = g(t)·id with the survival function g = 1 − ∫₀ᵗ f, f = Σ_α f_α.

Q_t acts on U_α^k as multiplication by φ_α = f_α − (f − f_α)/(d−1), so each
channel eigenvalue is the scalar series λ_α = g + g∗φ_α + g∗φ_α∗φ_α + …,
whose transform is

    λ̃_α(s) = (d−1)(1 − f̃(s)) / (s·(f̃(s) − d·f̃_α(s) + d − 1)).
"""

from __future__ import division, unicode_literals
import logging

import numpy as np

from gpc.base import (Immutable, GpcError, PoleError, VectorLengthError, NonConvergenceError,
                      DefaultTolerance, DysonTolerance, DysonMaxTerms, PoleTolerance, check_dimension, map_alpha)
from gpc.channel import Trajectory
from gpc.mub import validate_density_matrix
from gpc.numerics import (ExponentialSum, SampledFunction, cumulative_integral, convolution_values, derivative,
                          inverse_laplace, trapezoid_integral)

logger = logging.getLogger(__name__)

TailFraction = 0.1


class SemiMarkovSpec(Immutable):
    """
    The waiting-time densities f_α(t), α = 1..d+1, of a quantum semi-Markov
    map.  Each is an ExponentialSum, a SampledFunction or a vectorised
    callable; transforms optionally supplies f̃_α for non-closed forms.
    provenance is "closed form" or "numerical".
    """

    __slots__ = "frozen", "d", "functions", "transforms", "provenance"

    def __init__(self, d, functions, transforms=None, provenance="closed form"):
        d = check_dimension(d)
        functions = tuple(functions)
        if len(functions) != d + 1:
            raise VectorLengthError("Expected %d waiting-time densities for d = %d, got %d."
                                    % (d + 1, d, len(functions)))
        if transforms is not None and len(transforms) != d + 1:
            raise VectorLengthError("Expected %d transforms for d = %d, got %d." % (d + 1, d, len(transforms)))
        self.d = d
        self.functions = functions
        self.transforms = tuple(transforms) if transforms is not None else None
        self.provenance = provenance
        self.frozen = True

    @classmethod
    def from_laplace(cls, d, transforms, grid):
        """
        Densities known only through their transforms, sampled on the grid by
        Talbot inversion.  f_α(0) is extrapolated from the first nodes.
        """
        def invert(transform):
            values = np.empty(len(grid))
            for j in range(1, len(grid)):
                values[j] = inverse_laplace(transform, grid.nodes[j])
            values[0] = 3 * values[1] - 3 * values[2] + values[3]
            return SampledFunction(grid, values)
        logger.warning("Waiting-time densities on C^%d are numerical Talbot inversions", d)
        return cls(d, map_alpha(invert, transforms), transforms, "numerical")

    def __repr__(self):
        return "SemiMarkovSpec(%d, %r)" % (self.d, list(self.functions))

    def __unicode__(self):
        return "semi-Markov map on C^%d (%s)" % (self.d, self.provenance)

    __str__ = __unicode__

    @property
    def closed_form(self):
        return all(isinstance(f, ExponentialSum) for f in self.functions)

    def sampled(self, grid):
        samples = []
        for f in self.functions:
            if isinstance(f, SampledFunction):
                if f.grid != grid:
                    raise GpcError("Waiting times are sampled on %r, not %r." % (f.grid, grid))
                samples.append(f)
            elif isinstance(f, ExponentialSum):
                samples.append(f.sample(grid))
            else:
                samples.append(SampledFunction.from_function(grid, f))
        return samples

    def values_at(self, t):
        "f_α(t) for every α at one time."
        values = []
        for f in self.functions:
            if isinstance(f, SampledFunction):
                values.append(float(np.interp(t, f.grid.nodes, f.values)))
            else:
                values.append(float(f(t)))
        return np.array(values)

    def total(self, grid):
        "f = Σ_α f_α."
        samples = self.sampled(grid)
        return sum(samples[1:], samples[0])

    def laplace_forms(self):
        """
        f̃_α as callables of s: exact for closed forms and supplied transforms,
        otherwise a trapezoid transform of the samples.
        """
        if self.transforms is not None:
            return list(self.transforms)
        forms = []
        for f in self.functions:
            if isinstance(f, ExponentialSum):
                forms.append(f.laplace)
            elif isinstance(f, SampledFunction):
                logger.warning("Using a trapezoid transform of sampled waiting times; Talbot accuracy is limited")
                forms.append(_sampled_transform(f))
            else:
                raise GpcError("No transform available for waiting time %r." % (f,))
        return forms


def _sampled_transform(f):
    nodes, values, h = f.grid.nodes, f.values, f.grid.h

    def transform(s):
        weights = np.exp(-complex(s) * nodes) * values
        return complex(h * (weights.sum() - 0.5 * (weights[0] + weights[-1])))
    return transform


def survival(spec, grid):
    "g(t) = 1 − ∫₀ᵗ f, exact for closed forms."
    if spec.closed_form:
        integral = sum(f.integral(grid.nodes) for f in spec.functions)
        return SampledFunction(grid, 1.0 - integral)
    return 1.0 - cumulative_integral(spec.total(grid))


def q_eigenvalue(spec, grid):
    "φ_α(t) = f_α − (f − f_α)/(d−1), the eigenvalue of Q_t on U_α^k."
    samples = spec.sampled(grid)
    total = sum(samples[1:], samples[0])
    d = spec.d
    return [(d * f - total) * (1.0 / (d - 1)) for f in samples]


def _q_action(spec, m, t, operator):
    values = spec.values_at(t)
    powers = m.powers[:, 1:]
    images = np.einsum("akij,jl,akml->aim", powers, operator, powers.conj())
    return np.einsum("a,aij->ij", values, images) / (spec.d - 1)


def apply_q_map(spec, m, t, rho):
    "Q_t[ρ] = (1/(d−1)) Σ_α f_α(t) 𝕌_α[ρ]."
    _check_family(spec, m)
    return _q_action(spec, m, t, validate_density_matrix(rho, m.d))


def _check_family(spec, m):
    if spec.d != m.d:
        raise VectorLengthError("Waiting times on C^%d cannot use bases of C^%d." % (spec.d, m.d))


def verify_q_eigenvalue(spec, m, t):
    """
    The largest deviation between Q_t[U_α^k] and φ_α(t)U_α^k over every α
    and k, computed by applying Q_t through the bases.
    """
    _check_family(spec, m)
    values = spec.values_at(t)
    total, d = values.sum(), spec.d
    worst = 0.0
    for index in range(d + 1):
        phi = (d * values[index] - total) / (d - 1)
        for k in range(1, d):
            U = m.powers[index, k]
            worst = max(worst, float(np.max(np.abs(_q_action(spec, m, t, U) - phi * U))))
    return worst


class SemiMarkovCertificate(Immutable):
    """
    Legitimacy of a semi-Markov map: every f_α non-negative on the grid and
    ∫₀^∞ f ≤ 1.  negative lists (α, first time, minimum) for each density
    that dips below −tolerance.  integral_estimated marks a tail that was
    extrapolated rather than known in closed form.
    """

    __slots__ = "frozen", "legitimate", "negative", "integral", "integral_estimated", "at_boundary", "tolerance"

    def __init__(self, negative, integral, integral_estimated, tolerance):
        self.negative = tuple(negative)
        self.integral = integral
        self.integral_estimated = integral_estimated
        self.tolerance = tolerance
        bounded = integral is not None and integral <= 1.0 + tolerance
        self.at_boundary = integral is not None and abs(integral - 1.0) <= tolerance
        self.legitimate = bounded and not self.negative
        self.frozen = True

    def __bool__(self):
        return self.legitimate

    __nonzero__ = __bool__

    def __repr__(self):
        return "<SemiMarkovCertificate legitimate=%r integral=%r>" % (self.legitimate, self.integral)

    def _integral_text(self):
        if self.integral is None:
            return "∫f diverges"
        text = "∫f = %.6g" % self.integral
        return text + " (estimated)" if self.integral_estimated else text

    def __unicode__(self):
        if self.legitimate:
            return "semi-Markov: YES; %s" % self._integral_text()
        reasons = ["f_%d < 0 from t = %.6g" % (alpha, time) for alpha, time, _ in self.negative]
        if self.integral is None or self.integral > 1.0 + self.tolerance:
            reasons.append(self._integral_text())
        return "semi-Markov: NO (%s)" % "; ".join(reasons)

    __str__ = __unicode__


def _tail_integral(f):
    values = f.values
    start = int(len(values) * (1 - TailFraction))
    tail = values[start:]
    if values[-1] == 0 or len(tail) < 2:
        return 0.0
    if np.any(tail <= 0):
        return float("inf")
    slope = np.polyfit(f.grid.nodes[start:], np.log(tail), 1)[0]
    return values[-1] / -slope if slope < 0 else float("inf")


def certify_semimarkov(spec, grid, tolerance=DefaultTolerance):
    """
    Checks f_α ≥ 0 at every node and ∫₀^∞ f ≤ 1.  Closed forms integrate
    exactly; sampled densities add an exponential tail fitted to the last
    part of the grid.
    """
    negative = []
    for alpha, f in enumerate(spec.sampled(grid), start=1):
        below = np.flatnonzero(f.values < -tolerance)
        if below.size:
            negative.append((alpha, float(grid.nodes[below[0]]), float(f.values.min())))
    estimated = False
    if spec.closed_form:
        integrals = [f.total_integral() for f in spec.functions]
        integral = None if any(i is None for i in integrals) else float(sum(integrals))
    else:
        total = spec.total(grid)
        integral = trapezoid_integral(total, grid.n_steps) + _tail_integral(total)
        estimated = True
        if not np.isfinite(integral):
            integral = None
        logger.warning("Estimated ∫f for sampled waiting times with an exponential tail")
    certificate = SemiMarkovCertificate(negative, integral, estimated, tolerance)
    if certificate.at_boundary:
        logger.warning("Waiting times conserve probability exactly (∫f = 1)")
    logger.info("Semi-Markov certification on C^%d: %s", spec.d, certificate)
    return certificate


def lambda_via_dyson(spec, m, grid, tolerance=DysonTolerance, max_terms=DysonMaxTerms):
    """
    λ_α = g + g∗φ_α + g∗φ_α∗φ_α + … summed term by term on the grid.  A
    series stops when a term drops below tolerance everywhere or when the
    geometric bound g_max·rⁿ/(1−r), r = ∫|φ_α|, does.
    """
    _check_family(spec, m)
    probe = grid.nodes[1]
    deviation = verify_q_eigenvalue(spec, m, probe)
    if deviation > 1e-10 * (1.0 + np.max(np.abs(spec.values_at(probe)))):
        raise GpcError("Q map eigenvalue check failed with deviation %g." % deviation)
    if not certify_semimarkov(spec, grid):
        logger.warning("Summing the Dyson series of a map that is not a legitimate semi-Markov map")
    g = survival(spec, grid)
    g_max = float(np.max(np.abs(g.values)))
    h = grid.h

    def series(phi):
        ratio = trapezoid_integral(SampledFunction(grid, np.abs(phi.values)), grid.n_steps)
        term = g.values.copy()
        total = term.copy()
        for n in range(1, max_terms + 1):
            term = convolution_values(phi.values, term, h)
            total += term
            if np.max(np.abs(term)) < tolerance:
                logger.debug("Dyson series converged after %d terms", n)
                return SampledFunction(grid, total)
            if ratio < 1 and g_max * ratio ** (n + 1) / (1 - ratio) < tolerance:
                logger.debug("Dyson series bounded after %d terms (r = %g)", n, ratio)
                return SampledFunction(grid, total)
        raise NonConvergenceError("Dyson series did not converge in %d terms (r = %g)." % (max_terms, ratio))
    return Trajectory(spec.d, map_alpha(series, q_eigenvalue(spec, grid)))


def eigenvalue_laplace(spec):
    """
    λ̃_α(s) = −((d−1)/s)(f̃ − 1)/(f̃ − d·f̃_α + d − 1) for each α.
    """
    forms = spec.laplace_forms()
    d = spec.d
    if spec.transforms is None and spec.closed_form:
        combined = sum(spec.functions[1:], spec.functions[0])
        total = combined.laplace
    else:
        total = lambda s: sum(form(s) for form in forms)

    def relation(form):
        def eigenvalue(s):
            f = total(s)
            denominator = s * (f - d * form(s) + d - 1)
            if abs(denominator) < PoleTolerance:
                raise PoleError("Eigenvalue transform has a pole at s = %s." % (s,))
            return -(d - 1) * (f - 1) / denominator
        return eigenvalue
    return [relation(form) for form in forms]


def lambda_via_laplace(spec, grid, stride=1):
    """
    λ_α at every stride-th node by Talbot inversion of λ̃_α.
    """
    coarse = grid.coarsen(stride)
    transforms = eigenvalue_laplace(spec)

    def invert(transform):
        values = np.ones(len(coarse))
        for j in range(1, len(coarse)):
            values[j] = inverse_laplace(transform, coarse.nodes[j])
        return SampledFunction(coarse, values)
    logger.debug("Inverting %d eigenvalue transforms at %d nodes", len(transforms), coarse.n_steps)
    return Trajectory(spec.d, map_alpha(invert, transforms))


def ell_from_f(f_laplace, d):
    "ℓ̃_α = d(f̃ − f̃_α)/(f̃ − d·f̃_α + d − 1) for each α."
    forms = list(f_laplace)
    d = check_dimension(d)

    def relation(form):
        def ell(s):
            f = sum(other(s) for other in forms)
            own = form(s)
            denominator = f - d * own + d - 1
            if abs(denominator) < PoleTolerance:
                raise PoleError("f̃ − d·f̃_α + d − 1 vanishes at s = %s." % (s,))
            return d * (f - own) / denominator
        return ell
    return [relation(form) for form in forms]


def f_from_ell(ell_laplace, d):
    """
    f̃_α = (Σ − d/(1 − ℓ̃_α) − 1)/(Σ + 1/(d−1)) with Σ = Σ_β 1/(1 − ℓ̃_β).
    """
    forms = list(ell_laplace)
    d = check_dimension(d)

    def inverse_gap(value, s):
        if abs(1 - value) < PoleTolerance:
            raise PoleError("Transform of ell equals 1 at s = %s." % (s,))
        return 1 / (1 - value)

    def relation(index):
        def f(s):
            gaps = [inverse_gap(form(s), s) for form in forms]
            total = sum(gaps)
            denominator = total + 1.0 / (d - 1)
            if abs(denominator) < PoleTolerance:
                raise PoleError("Σ 1/(1 − ℓ̃) + 1/(d−1) vanishes at s = %s." % (s,))
            return (total - d * gaps[index] - 1) / denominator
        return f
    return [relation(index) for index in range(len(forms))]


def isotropic_ell_laplace(chi_laplace, d):
    "ν̃ = d²χ̃/(χ̃ + d − 1) for the isotropic map f_α = χ."
    d = check_dimension(d)

    def nu(s):
        chi = chi_laplace(s)
        denominator = chi + d - 1
        if abs(denominator) < PoleTolerance:
            raise PoleError("χ̃ + d − 1 vanishes at s = %s." % (s,))
        return d * d * chi / denominator
    return nu


def isotropic_bound(chi_integral, d):
    "∫χ ≤ 1/(d+1), the legitimacy bound of the isotropic map."
    return chi_integral <= 1.0 / (d + 1)


def semimarkov_kernel_laplace(spec, s):
    """
    k̃_α(s) = (d/(d−1)) f̃_α(s)/g̃(s) and κ̃_α(s) = k̃_α − Σ_β k̃_β at one s.
    """
    forms = spec.laplace_forms()
    d = spec.d
    f = [form(s) for form in forms]
    survival_transform = (1 - sum(f)) / s
    if abs(survival_transform) < PoleTolerance:
        raise PoleError("Survival transform vanishes at s = %s." % (s,))
    memory = [d / (d - 1) * value / survival_transform for value in f]
    total = sum(memory)
    return memory, [k - total for k in memory]


class Residual(Immutable):
    """
    Node-wise residual of a master equation: the matrices and their
    Frobenius norms.
    """

    __slots__ = "frozen", "matrices", "norms"

    def __init__(self, matrices, grid):
        self.matrices = np.array(matrices)
        axes = tuple(range(1, self.matrices.ndim))
        self.norms = SampledFunction(grid, np.sqrt(np.sum(np.abs(self.matrices) ** 2, axis=axes)))
        self.frozen = True

    def __repr__(self):
        return "<Residual max norm %g>" % float(self.norms.values.max())


def _memory_kernels(spec, grid):
    kernels = []
    for f, samples in zip(spec.functions, spec.sampled(grid)):
        if isinstance(f, ExponentialSum):
            kernels.append((f.at_zero(), f.derivative().sample(grid).values))
        else:
            kernels.append((float(samples.values[0]), derivative(samples).values))
    return kernels


def inhomogeneous_rhs(spec, m, rhos, grid):
    """
    The residual ρ̇ − [∫₀ᵗ 𝕂_{t−τ}[ρ_τ]dτ − f(t)ρ₀] along a state trajectory,
    with 𝕂 = (1/(d−1)) Σ_α (ḟ_α + f_α(0)δ) 𝕌_α.
    """
    _check_family(spec, m)
    rhos = np.asarray(rhos, dtype=complex)
    if rhos.shape != (len(grid), m.d, m.d):
        raise VectorLengthError("Expected states of shape %s, got %s." % ((len(grid), m.d, m.d), rhos.shape))
    d, h = m.d, grid.h
    powers = m.powers[:, 1:]
    memory = np.zeros_like(rhos)
    for index, (start, slope) in enumerate(_memory_kernels(spec, grid)):
        images = np.einsum("kij,tjl,kml->tim", powers[index], rhos, powers[index].conj())
        memory += start * images
        for i in range(d):
            for j in range(d):
                memory[:, i, j] += convolution_values(slope, images[:, i, j], h)
    memory /= d - 1
    total = spec.total(grid).values
    rate = np.gradient(rhos, h, axis=0, edge_order=2)
    return Residual(rate - memory + np.multiply.outer(total, rhos[0]), grid)


def bloch_inhomogeneous_rhs(spec, bloch, grid):
    """
    The qubit form of inhomogeneous_rhs on Bloch vectors:
    ẋ_α − [(2h_α − h)∗x_α − f·x_α(0)] with h_α = ḟ_α + f_α(0)δ.
    """
    if spec.d != 2:
        raise VectorLengthError("Bloch vectors need d = 2, got d = %d." % spec.d)
    bloch = np.asarray(bloch, dtype=float)
    if bloch.shape != (len(grid), 3):
        raise VectorLengthError("Expected Bloch vectors of shape %s, got %s." % ((len(grid), 3), bloch.shape))
    kernels = _memory_kernels(spec, grid)
    start_total = sum(start for start, _ in kernels)
    slope_total = sum(slope for _, slope in kernels)
    total = spec.total(grid).values
    rate = np.gradient(bloch, grid.h, axis=0, edge_order=2)
    residual = np.empty_like(bloch)
    for index, (start, slope) in enumerate(kernels):
        x = bloch[:, index]
        memory = (2 * start - start_total) * x + convolution_values(2 * slope - slope_total, x, grid.h)
        residual[:, index] = rate[:, index] - memory + total * x[0]
    return Residual(residual, grid)
