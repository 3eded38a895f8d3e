# coding=utf-8

"""
Memory kernels of generalized Pauli channels.

A kernel acts on U_α^k with eigenvalue κ_α(t), so each eigenvalue obeys the
scalar equation λ̇_α = ∫₀ᵗ κ_α(t−τ)λ_α(τ)dτ with λ_α(0) = 1.  Equivalently
λ_α = 1 − ∫₀ᵗ ℓ_α, and in the Laplace domain κ̃_α = −sℓ̃_α/(1 − ℓ̃_α).

The ℓ representation is the convenient one for admissibility: with
L_α(t) = ∫₀ᵗ ℓ_α, the channel is completely positive at t exactly when

    L_α ≥ 0,  Σ_β L_β ≤ d²/(d−1),  Σ_β L_β ≥ d·L_α  for every α.
"""

from __future__ import division, unicode_literals
import six

import logging
import numbers

import numpy as np

from gpc.base import (Immutable, GpcError, PoleError, VectorLengthError, AdmissibilityError, GridMismatchError,
                      DefaultTolerance, PoleTolerance, check_dimension, map_alpha)
from gpc.channel import Trajectory
from gpc.mub import apply_phi
from gpc.numerics import (ExponentialSum, SampledFunction, DeltaPlusRegular, cumulative_integral, derivative,
                          solve_volterra, solve_volterra_second_kind)

logger = logging.getLogger(__name__)


class EllRep(Immutable):
    """
    The functions ℓ_α(t), α = 1..d+1, each an ExponentialSum, a
    SampledFunction or a vectorised callable of t.
    """

    __slots__ = "frozen", "d", "functions"

    def __init__(self, d, functions):
        d = check_dimension(d)
        functions = tuple(functions)
        if len(functions) != d + 1:
            raise VectorLengthError("Expected %d ell functions for d = %d, got %d." % (d + 1, d, len(functions)))
        self.d = d
        self.functions = functions
        self.frozen = True

    def __repr__(self):
        return "EllRep(%d, %r)" % (self.d, list(self.functions))

    def __unicode__(self):
        return "ell representation on C^%d" % self.d

    __str__ = __unicode__

    @property
    def closed_form(self):
        return all(isinstance(f, ExponentialSum) for f in self.functions)

    def sampled(self, grid):
        samples = []
        for f in self.functions:
            if isinstance(f, SampledFunction):
                if f.grid != grid:
                    raise GridMismatchError("ell is sampled on %r, not %r." % (f.grid, grid))
                samples.append(f)
            elif isinstance(f, ExponentialSum):
                samples.append(f.sample(grid))
            else:
                samples.append(SampledFunction.from_function(grid, f))
        return samples

    def integrals(self, grid):
        "L_α(t_j) = ∫₀^{t_j} ℓ_α, exact for closed forms."
        if self.closed_form:
            return [SampledFunction(grid, f.integral(grid.nodes)) for f in self.functions]
        return [cumulative_integral(f) for f in self.sampled(grid)]

    def lambdas(self, grid):
        "The eigenvalue trajectories λ_α = 1 − L_α."
        return Trajectory(self.d, [1.0 - L for L in self.integrals(grid)])

    def probabilities(self, grid):
        return self.lambdas(grid).probabilities()

    def limit_integrals(self):
        "L_α(∞) when every ℓ_α is a decaying closed form, otherwise None."
        if not self.closed_form:
            return None
        limits = [f.total_integral() for f in self.functions]
        return None if any(l is None for l in limits) else np.array(limits)

    def laplace_forms(self):
        "The transforms ℓ̃_α as callables of s."
        if not self.closed_form:
            raise GpcError("Laplace transforms need closed-form ell functions.")
        return [f.laplace for f in self.functions]


class ConditionCertificate(Immutable):
    """
    The outcome of checking named inequalities at every node of a grid and,
    when available, in the t → ∞ limit.  margins maps each condition to its
    smallest margin; a condition holds when its margin is at least −tolerance.
    """

    __slots__ = "frozen", "passed", "margins", "first_failure", "first_failure_time", "failed_condition", \
        "limit_margins", "tolerance"

    def __init__(self, grid, margins, tolerance, limit_margins=None):
        self.tolerance = tolerance
        self.margins = dict((name, float(np.min(values))) for name, values in margins.items())
        self.limit_margins = dict(limit_margins) if limit_margins else {}
        first, first_condition = None, None
        for name, values in margins.items():
            failing = np.flatnonzero(np.asarray(values) < -tolerance)
            if failing.size and (first is None or failing[0] < first):
                first, first_condition = int(failing[0]), name
        if first_condition is None:
            for name, margin in self.limit_margins.items():
                if margin < -tolerance:
                    first_condition = name
                    break
        self.first_failure = first
        self.first_failure_time = None if first is None else float(grid.nodes[first])
        if first is None and first_condition is not None:
            self.first_failure_time = float("inf")
        self.failed_condition = first_condition
        self.passed = first_condition is None
        self.frozen = True

    def __bool__(self):
        return self.passed

    __nonzero__ = __bool__

    def __repr__(self):
        return "<ConditionCertificate passed=%r failed_condition=%r>" % (self.passed, self.failed_condition)

    def __unicode__(self):
        if self.passed:
            return "YES (worst margin %.6g)" % min(self.margins.values())
        return "NO (%s first violated at t = %s)" % (self.failed_condition, six.text_type(self.first_failure_time))

    __str__ = __unicode__


def _ell_margins(L, d):
    L = np.asarray(L, dtype=float)
    total = L.sum(axis=0)
    return {
        "non-negative integrals": L.min(axis=0),
        "total integral bound": d * d / (d - 1) - total,
        "dominance": total - d * L.max(axis=0),
    }


def check_theorem1_conditions(ell, grid, tolerance=DefaultTolerance):
    """
    Checks the ℓ-integral inequalities that make λ_α = 1 − L_α a completely
    positive family, at every node and in the t → ∞ limit when it exists.
    """
    L = np.array([f.values for f in ell.integrals(grid)])
    limits = ell.limit_integrals()
    limit_margins = None
    if limits is not None:
        limit_margins = dict((name, float(np.min(value))) for name, value in _ell_margins(limits, ell.d).items())
    certificate = ConditionCertificate(grid, _ell_margins(L, ell.d), tolerance, limit_margins)
    logger.info("Kernel conditions on C^%d: %s", ell.d, certificate)
    return certificate


def _ell_forms(ell):
    return ell.laplace_forms() if isinstance(ell, EllRep) else list(ell)


def kappa_from_ell_laplace(ell):
    """
    κ̃_α(s) = −sℓ̃_α(s)/(1 − ℓ̃_α(s)) for each α, from an EllRep or a list of
    transforms.

    >>> kappa = kappa_from_ell_laplace([lambda s: 1.0 / (s + 1.0)])[0]
    >>> kappa(1.0)
    -1.0
    """
    def relation(transform):
        def kappa(s):
            value = transform(s)
            denominator = 1 - value
            if abs(denominator) < PoleTolerance:
                raise PoleError("Transform of ell equals 1 at s = %s." % (s,))
            return -s * value / denominator
        return kappa
    return [relation(transform) for transform in _ell_forms(ell)]


def lambda_laplace_from_kappa(kappa):
    "λ̃_α(s) = 1/(s − κ̃_α(s)) for each α."
    def relation(transform):
        def eigenvalue(s):
            denominator = s - transform(s)
            if abs(denominator) < PoleTolerance:
                raise PoleError("s − κ̃(s) vanishes at s = %s." % (s,))
            return 1 / denominator
        return eigenvalue
    return [relation(transform) for transform in kappa]


class KernelSpec(Immutable):
    """
    A memory kernel given by its eigenvalue functions κ_α = w_α·δ + r_α on a
    common grid.  closed_forms keeps the exact regular parts when they are
    known.
    """

    __slots__ = "frozen", "d", "kappas", "closed_forms", "diagnostics"

    def __init__(self, d, kappas, closed_forms=None, diagnostics=None):
        d = check_dimension(d)
        kappas = tuple(kappas)
        if len(kappas) != d + 1:
            raise VectorLengthError("Expected %d kernel eigenvalues for d = %d, got %d." % (d + 1, d, len(kappas)))
        if len(set(k.grid for k in kappas)) != 1:
            raise GridMismatchError("Kernel eigenvalues live on different grids.")
        self.d = d
        self.kappas = kappas
        self.closed_forms = tuple(closed_forms) if closed_forms is not None else None
        self.diagnostics = dict(diagnostics or {})
        self.frozen = True

    @classmethod
    def from_closed_forms(cls, d, delta_weights, regulars, grid, diagnostics=None):
        "A kernel from Dirac weights and ExponentialSum regular parts."
        kappas = [DeltaPlusRegular(w, r.sample(grid)) for w, r in zip(delta_weights, regulars)]
        return cls(d, kappas, list(zip([float(w) for w in delta_weights], regulars)), diagnostics)

    @classmethod
    def from_memory(cls, d, memory):
        "A kernel from the memory functions k_α."
        return cls(d, kappa_from_memory(memory))

    @property
    def grid(self):
        return self.kappas[0].grid

    def __repr__(self):
        return "<KernelSpec d=%d on %r>" % (self.d, self.grid)

    def __unicode__(self):
        return "memory kernel on C^%d, %s" % (self.d, six.text_type(self.grid))

    __str__ = __unicode__

    def memory_functions(self):
        "k_α = κ_α − (1/d)Σ_β κ_β."
        total = sum(self.kappas[1:], self.kappas[0])
        return [k - total * (1.0 / self.d) for k in self.kappas]

    def laplace_forms(self):
        "κ̃_α(s) for closed-form kernels."
        if self.closed_forms is None:
            raise GpcError("Laplace transforms need a closed-form kernel.")
        return [lambda s, w=w, r=r: w + r.laplace(s) for w, r in self.closed_forms]


def kappa_from_memory(memory):
    "κ_α = k_α − Σ_β k_β."
    memory = list(memory)
    total = sum(memory[1:], memory[0])
    return [k - total for k in memory]


def apply_kernel(m, k_values, operator):
    """
    Σ_α k_α (Φ_α[X] − X) for the memory-function values k_α at one time and
    any d×d operator X.
    """
    k_values = np.asarray(k_values, dtype=float)
    if k_values.shape != (m.d + 1,):
        raise VectorLengthError("Expected %d memory values for d = %d, got %d." % (m.d + 1, m.d, k_values.size))
    operator = np.asarray(operator, dtype=complex)
    return sum(k * (apply_phi(m, alpha, operator, validate=False) - operator)
               for alpha, k in enumerate(k_values, start=1))


def propagate_kernel(spec, grid=None):
    """
    Solves λ̇_α = ∫₀ᵗ κ_α(t−τ)λ_α(τ)dτ, λ_α(0) = 1, for every α.
    """
    if grid is not None and grid != spec.grid:
        raise GridMismatchError("Kernel lives on %r, not %r." % (spec.grid, grid))
    lambdas = map_alpha(solve_volterra, spec.kappas)
    logger.debug("Propagated %d kernel eigenvalues on %r", len(lambdas), spec.grid)
    return Trajectory(spec.d, lambdas)


def kernel_from_ell(ell, grid):
    """
    κ_α = −ℓ_α(0)δ + r_α with r_α = −ℓ̇_α − ℓ_α(0)ℓ_α + r_α∗ℓ_α, the time
    domain form of κ̃ = −sℓ̃/(1 − ℓ̃).
    """
    def synthesise(f):
        if isinstance(f, ExponentialSum):
            start, slope, samples = f.at_zero(), f.derivative().sample(grid), f.sample(grid)
        else:
            samples = f if isinstance(f, SampledFunction) else SampledFunction.from_function(grid, f)
            start, slope = float(samples.values[0]), derivative(samples)
        regular = solve_volterra_second_kind(-slope - start * samples, samples)
        return DeltaPlusRegular(-start, regular)
    functions = [f for f in ell.functions]
    if not ell.closed_form:
        functions = ell.sampled(grid)
    return KernelSpec(ell.d, map_alpha(synthesise, functions))


class InequalityReport(Immutable):
    """
    Named parameter inequalities with their margins (positive when
    satisfied) and any derived values worth reporting.
    """

    __slots__ = "frozen", "margins", "values", "tolerance"

    def __init__(self, margins, values=None, tolerance=DefaultTolerance):
        self.margins = dict((name, float(margin)) for name, margin in margins.items())
        self.values = dict(values or {})
        self.tolerance = tolerance
        self.frozen = True

    @property
    def passed(self):
        return not self.failures()

    def failures(self):
        return sorted(name for name, margin in self.margins.items() if margin < -self.tolerance)

    def __bool__(self):
        return self.passed

    __nonzero__ = __bool__

    def __repr__(self):
        return "InequalityReport(%r, %r)" % (self.margins, self.values)

    def __unicode__(self):
        lines = []
        for name in sorted(self.margins):
            verdict = "ok" if self.margins[name] >= -self.tolerance else "FAIL"
            lines.append("%s: %s (margin %.6g)" % (name, verdict, self.margins[name]))
        return "\n".join(lines)

    __str__ = __unicode__

    def require(self):
        "Raises AdmissibilityError for the first failing inequality."
        failures = self.failures()
        if failures:
            raise AdmissibilityError(failures[0], "Inequality '%s' is violated (margin %.6g)."
                                     % (failures[0], self.margins[failures[0]]))
        return self


def _vector(values, d, what):
    if isinstance(values, numbers.Real):
        values = [values] * (d + 1)
    values = np.asarray(values, dtype=float)
    if values.shape != (d + 1,):
        raise VectorLengthError("Expected %d %s for d = %d, got %d." % (d + 1, what, d, values.size))
    return values


class ExpFamilyParams(Immutable):
    """
    Parameters of ℓ_α(t) = η_α e^{−ξ_α t}.  A single η gives the family whose
    admissibility is settled by the integrals at t → ∞ alone:

        η Σ_β 1/ξ_β ≤ d²/(d−1)  and  Σ_β 1/ξ_β ≥ d/ξ_α.
    """

    __slots__ = "frozen", "d", "eta", "xi"

    def __init__(self, d, eta, xi):
        self.d = check_dimension(d)
        self.eta = _vector(eta, self.d, "eta values")
        self.xi = _vector(xi, self.d, "xi values")
        if np.any(self.xi <= 0):
            raise AdmissibilityError("positive decay rates", "Every xi must be positive.")
        if np.any(self.eta < 0):
            raise AdmissibilityError("non-negative amplitudes", "Every eta must be non-negative.")
        self.frozen = True

    def __repr__(self):
        return "ExpFamilyParams(%d, %r, %r)" % (self.d, self.eta.tolist(), self.xi.tolist())

    def __unicode__(self):
        return "exponential ell family on C^%d" % self.d

    __str__ = __unicode__

    @property
    def uniform_eta(self):
        return bool(np.all(self.eta == self.eta[0]))

    def stability_margins(self):
        "ξ_α − η_α + η_α/d; negative entries give a growing kernel exponent."
        return self.xi - self.eta + self.eta / self.d

    def admissibility(self, tolerance=DefaultTolerance):
        ratios = self.eta / self.xi
        d = self.d
        return InequalityReport({
            "exponential total bound": d * d / (d - 1) - ratios.sum(),
            "exponential dominance": ratios.sum() - d * ratios.max(),
        }, {"stability margins": self.stability_margins().tolist()}, tolerance)


def exp_kernel(eta, xi):
    """
    Closed-form kernel eigenvalues of ℓ_α = η_α e^{−ξ_α t}:
    κ_α = −η_α δ + η_α(ξ_α − η_α)e^{−(ξ_α−η_α)t}.  Returns the Dirac weights
    and the regular parts.
    """
    weights = [-float(e) for e in eta]
    regulars = [ExponentialSum.exponential(e * (x - e), x - e) for e, x in zip(eta, xi)]
    return weights, regulars


def build_exp_family(params, grid, strict=True):
    """
    The EllRep and closed-form KernelSpec of an exponential family, with the
    admissibility report and stability margins as kernel diagnostics.  A
    strict build raises AdmissibilityError on the first violated inequality;
    otherwise the violation is only logged.
    """
    ell = EllRep(params.d, [ExponentialSum.exponential(e, x) for e, x in zip(params.eta, params.xi)])
    weights, regulars = exp_kernel(params.eta, params.xi)
    report = params.admissibility()
    if strict:
        report.require()
    elif not report.passed:
        logger.warning("Exponential family violates %s", ", ".join(report.failures()))
    spec = KernelSpec.from_closed_forms(params.d, weights, regulars, grid,
                                       {"admissibility": report, "stability margins": params.stability_margins()})
    return ell, spec


def _inverse_weights(a):
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise AdmissibilityError("positive weights", "Every a must be positive.")
    return np.where(np.isinf(a), 0.0, 1.0 / a)


def _special_dominance(inverse, d):
    return inverse.sum() - d * inverse.max()


def build_special_class(ell, a, d, grid=None, tolerance=DefaultTolerance, strict=True):
    """
    ℓ_α = ℓ/a_α for one base function ℓ.  Checks Σ_β 1/a_β ≥ d/a_α and, on
    the grid and in the limit when known, (Σ_β 1/a_β)∫₀ᵗℓ ≤ d²/(d−1).
    a_α may be infinite, which switches ℓ_α off.  With strict=False a
    violation is left in the returned report instead of raised.
    """
    d = check_dimension(d)
    a = _vector(a, d, "weights")
    inverse = _inverse_weights(a)
    margins = {"special dominance": _special_dominance(inverse, d)}
    bound = d * d / (d - 1)
    if grid is not None:
        base = EllRep(d, [ell] * (d + 1))
        integral = base.integrals(grid)[0].values
        margins["special total bound"] = float(np.min(bound - inverse.sum() * integral))
    if isinstance(ell, ExponentialSum) and ell.total_integral() is not None:
        margins["special total bound at infinity"] = bound - inverse.sum() * ell.total_integral()
    if isinstance(ell, ExponentialSum):
        functions = [ell * float(w) for w in inverse]
    else:
        functions = [(lambda t, f=ell, w=w: w * np.asarray(f(t))) for w in inverse]
    report = InequalityReport(margins, tolerance=tolerance)
    if strict:
        report.require()
    return EllRep(d, functions), report


def convolution_p0_limit(z, a, d):
    "p₀(∞) = (1/d²)[d² − (d−1)Σ(1/a_α)/Πz_k]."
    inverse = _inverse_weights(_vector(a, d, "weights"))
    return (d * d - (d - 1) * inverse.sum() / float(np.prod(z))) / (d * d)


def build_convolution_class(z, a, d, tolerance=DefaultTolerance):
    """
    ℓ = e^{−z₁t}∗…∗e^{−z_nt} with ℓ_α = ℓ/a_α, for distinct positive z_k.
    The report carries the a-dominance inequality, Π z_k ≥ ((d−1)/d²)Σ1/a_α,
    and p₀(∞).
    """
    d = check_dimension(d)
    z = [float(rate) for rate in z]
    if not z or any(rate <= 0 for rate in z):
        raise AdmissibilityError("positive decay rates", "Every z must be positive.")
    if len(set(z)) != len(z):
        raise AdmissibilityError("distinct decay rates", "The rates z must be distinct.")
    inverse = _inverse_weights(_vector(a, d, "weights"))
    base = ExponentialSum.exponential(1.0, z[0])
    for rate in z[1:]:
        base = base.convolve(ExponentialSum.exponential(1.0, rate))
    margins = {
        "special dominance": _special_dominance(inverse, d),
        "convolution rate bound": float(np.prod(z)) - (d - 1) / (d * d) * inverse.sum(),
    }
    report = InequalityReport(margins, {"p0 limit": convolution_p0_limit(z, a, d)}, tolerance)
    return EllRep(d, [base * float(w) for w in inverse]), report
