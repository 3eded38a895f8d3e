# coding=utf-8

"""
Uniform time grids, functions sampled on them, closed-form exponential sums,
quadrature, discrete convolution, Volterra solvers and the fixed Talbot
inverse Laplace transform.

Every time-domain quantity in the library lives on a TimeGrid with nodes
t_j = j·h, j = 0..n_steps.  Integrals are composite trapezoid sums over those
nodes, so a prefix integral is exact for functions that are affine on the
grid and accurate to O(h²) otherwise.
"""

from __future__ import division, unicode_literals
import six

import logging
import math
import numbers
import threading

import mpmath
import numpy as np
from scipy import integrate

from gpc.base import (Immutable, GpcError, GridMismatchError, ComplexValueError, NonConvergenceError,
                      TalbotNodes, TalbotCheckNodes, TalbotAgreement)

logger = logging.getLogger(__name__)

ImaginaryTolerance = 1e-12
ResonanceTolerance = 1e-12


class TimeGrid(Immutable):
    """
    A uniform grid on [0, t_max] with n_steps intervals.

    >>> grid = TimeGrid(1.0, 4)
    >>> grid.h
    0.25
    >>> grid.nodes.tolist()
    [0.0, 0.25, 0.5, 0.75, 1.0]
    >>> len(grid)
    5
    """

    __slots__ = "frozen", "t_max", "n_steps", "h", "nodes"

    def __init__(self, t_max, n_steps):
        t_max = float(t_max)
        if not (t_max > 0 and math.isfinite(t_max)):
            raise ValueError("Grid length must be positive and finite, got %r." % t_max)
        if isinstance(n_steps, bool) or int(n_steps) != n_steps or n_steps < 1:
            raise ValueError("Grid needs a positive integer number of steps, got %r." % (n_steps,))
        self.t_max = t_max
        self.n_steps = int(n_steps)
        self.h = t_max / self.n_steps
        self.nodes = np.arange(self.n_steps + 1) * self.h
        self.frozen = True

    def __len__(self):
        return self.n_steps + 1

    def __eq__(self, other):
        return isinstance(other, TimeGrid) and self.t_max == other.t_max and self.n_steps == other.n_steps

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((TimeGrid, self.t_max, self.n_steps))

    def __repr__(self):
        return "TimeGrid(%r, %r)" % (self.t_max, self.n_steps)

    def __unicode__(self):
        return "%d steps of %s on [0, %s]" % (self.n_steps, six.text_type(self.h), six.text_type(self.t_max))

    __str__ = __unicode__

    def node(self, j):
        "The time of node j."
        self.check_index(j)
        return self.nodes[j]

    def check_index(self, j):
        if isinstance(j, bool) or not isinstance(j, (numbers.Integral, np.integer)) or not 0 <= j <= self.n_steps:
            raise GridMismatchError("Node index %s is outside 0..%d." % (j, self.n_steps))

    def coarsen(self, stride):
        """
        The grid made of every stride-th node.

        >>> TimeGrid(1.0, 100).coarsen(10)
        TimeGrid(1.0, 10)
        """
        if stride < 1 or self.n_steps % stride:
            raise GridMismatchError("Stride %d does not divide %d steps." % (stride, self.n_steps))
        return TimeGrid(self.t_max, self.n_steps // stride)


def _real_samples(values):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        scale = 1.0 + (np.max(np.abs(values.real)) if values.size else 0.0)
        if values.size and np.max(np.abs(values.imag)) > ImaginaryTolerance * scale:
            raise ComplexValueError("Samples have an imaginary part of %g." % np.max(np.abs(values.imag)))
        values = values.real
    return np.array(values, dtype=float)


class SampledFunction(Immutable):
    """
    A real function known at the nodes of a TimeGrid.
    """

    __slots__ = "frozen", "grid", "values"
    __array_ufunc__ = None

    def __init__(self, grid, values):
        values = _real_samples(values)
        if values.shape != (len(grid),):
            raise GridMismatchError("Expected %d samples for %r, got shape %s." % (len(grid), grid, values.shape))
        self.grid = grid
        self.values = values
        self.frozen = True

    @classmethod
    def from_function(cls, grid, function):
        "Samples a vectorised callable at every node."
        values = np.asarray(function(grid.nodes))
        return cls(grid, np.broadcast_to(values, (len(grid),)))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(len(grid)))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, j):
        return self.values[j]

    def __repr__(self):
        return "SampledFunction(%r, <%d values>)" % (self.grid, len(self.values))

    def __unicode__(self):
        return "sampled function on %s" % six.text_type(self.grid)

    __str__ = __unicode__

    def _other_values(self, other):
        if isinstance(other, SampledFunction):
            if other.grid != self.grid:
                raise GridMismatchError("Cannot combine samples on %r and %r." % (self.grid, other.grid))
            return other.values
        if isinstance(other, numbers.Real):
            return float(other)
        return NotImplemented

    def __add__(self, other):
        values = self._other_values(other)
        if values is NotImplemented:
            return NotImplemented
        return SampledFunction(self.grid, self.values + values)

    __radd__ = __add__

    def __sub__(self, other):
        values = self._other_values(other)
        if values is NotImplemented:
            return NotImplemented
        return SampledFunction(self.grid, self.values - values)

    def __rsub__(self, other):
        values = self._other_values(other)
        if values is NotImplemented:
            return NotImplemented
        return SampledFunction(self.grid, values - self.values)

    def __mul__(self, other):
        values = self._other_values(other)
        if values is NotImplemented:
            return NotImplemented
        return SampledFunction(self.grid, self.values * values)

    __rmul__ = __mul__

    def __neg__(self):
        return SampledFunction(self.grid, -self.values)

    def restrict(self, stride):
        "The samples at every stride-th node, on the coarsened grid."
        return SampledFunction(self.grid.coarsen(stride), self.values[::stride])

    def sup_distance(self, other):
        "max_j |self(t_j) − other(t_j)|."
        return float(np.max(np.abs(self.values - self._other_values(other))))


class DeltaPlusRegular(Immutable):
    """
    A kernel w·δ(t) + r(t) with the Dirac mass at the origin.  Inside a
    convolution ∫₀ᵗ k(t−τ)x(τ)dτ the Dirac part contributes w·x(t).
    """

    __slots__ = "frozen", "delta_weight", "regular"
    __array_ufunc__ = None

    def __init__(self, delta_weight, regular):
        delta_weight = float(delta_weight)
        if not math.isfinite(delta_weight):
            raise ValueError("Delta weight must be finite, got %r." % delta_weight)
        self.delta_weight = delta_weight
        self.regular = regular
        self.frozen = True

    @classmethod
    def zero(cls, grid):
        return cls(0.0, SampledFunction.zeros(grid))

    @classmethod
    def delta(cls, weight, grid):
        "A pure Dirac kernel."
        return cls(weight, SampledFunction.zeros(grid))

    @property
    def grid(self):
        return self.regular.grid

    def __repr__(self):
        return "DeltaPlusRegular(%r, %r)" % (self.delta_weight, self.regular)

    def __unicode__(self):
        return "%s·δ(t) + %s" % (six.text_type(self.delta_weight), six.text_type(self.regular))

    __str__ = __unicode__

    def __add__(self, other):
        if not isinstance(other, DeltaPlusRegular):
            return NotImplemented
        return DeltaPlusRegular(self.delta_weight + other.delta_weight, self.regular + other.regular)

    def __sub__(self, other):
        if not isinstance(other, DeltaPlusRegular):
            return NotImplemented
        return DeltaPlusRegular(self.delta_weight - other.delta_weight, self.regular - other.regular)

    def __mul__(self, scalar):
        if not isinstance(scalar, numbers.Real):
            return NotImplemented
        return DeltaPlusRegular(self.delta_weight * scalar, self.regular * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


class ExponentialSum(Immutable):
    """
    The closed-form real function f(t) = Re Σ_k c_k e^{−z_k t} with complex
    coefficients and rates.  Oscillating and hyperbolic terms are written as
    pairs of complex exponentials.

    >>> f = ExponentialSum([1.0], [2.0])
    >>> round(f(0.5), 12) == round(math.exp(-1.0), 12)
    True
    >>> f.laplace(1.0)
    0.3333333333333333
    >>> f.total_integral()
    0.5
    """

    __slots__ = "frozen", "coefficients", "rates"
    __array_ufunc__ = None

    def __init__(self, coefficients, rates):
        coefficients = np.array(coefficients, dtype=complex).ravel()
        rates = np.array(rates, dtype=complex).ravel()
        if coefficients.shape != rates.shape:
            raise ValueError("Need one rate per coefficient, got %d and %d." % (len(coefficients), len(rates)))
        if not (np.all(np.isfinite(coefficients)) and np.all(np.isfinite(rates))):
            raise ValueError("Coefficients and rates must be finite.")
        self.coefficients = coefficients
        self.rates = rates
        self.frozen = True

    @classmethod
    def zero(cls):
        return cls([], [])

    @classmethod
    def constant(cls, value):
        return cls([value], [0.0])

    @classmethod
    def exponential(cls, amplitude, rate):
        "amplitude·e^{−rate·t}"
        return cls([amplitude], [rate])

    @classmethod
    def hyperbolic(cls, decay, frequency, cosh_weight, sinh_weight):
        """
        e^{−decay·t}[cosh_weight·cosh(frequency·t) + sinh_weight·sinh(frequency·t)].
        A complex frequency turns the hyperbolic functions into circular ones.
        """
        return cls([(cosh_weight + sinh_weight) / 2.0, (cosh_weight - sinh_weight) / 2.0],
                   [decay - frequency, decay + frequency])

    @classmethod
    def cosine(cls, amplitude, frequency):
        "amplitude·cos(frequency·t); an imaginary frequency gives cosh."
        return cls.hyperbolic(0.0, 1j * complex(frequency), amplitude, 0.0)

    @classmethod
    def sine(cls, amplitude, frequency):
        "amplitude·sin(frequency·t) for real frequency."
        return cls([amplitude / 2j, -amplitude / 2j], [-1j * frequency, 1j * frequency])

    def __len__(self):
        return len(self.coefficients)

    def __repr__(self):
        return "ExponentialSum(%r, %r)" % (list(self.coefficients), list(self.rates))

    def __unicode__(self):
        terms = ["(%s)·exp(−(%s)t)" % (six.text_type(c), six.text_type(z)) for c, z in zip(self.coefficients, self.rates)]
        return "Re[" + " + ".join(terms) + "]" if terms else "0"

    __str__ = __unicode__

    def __eq__(self, other):
        return (isinstance(other, ExponentialSum) and np.array_equal(self.coefficients, other.coefficients)
                and np.array_equal(self.rates, other.rates))

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((ExponentialSum, self.coefficients.tobytes(), self.rates.tobytes()))

    def complex_value(self, t):
        "Σ_k c_k e^{−z_k t} without taking the real part."
        t = np.asarray(t, dtype=float)
        return np.exp(-np.multiply.outer(t, self.rates)) @ self.coefficients

    def __call__(self, t):
        value = self.complex_value(t).real
        return float(value) if np.ndim(value) == 0 else value

    def sample(self, grid):
        return SampledFunction(grid, self(grid.nodes))

    def at_zero(self):
        return float(self.coefficients.sum().real)

    def laplace(self, s):
        """
        ∫₀^∞ f(t)e^{−st}dt for Re s beyond every rate.  Works with Python and
        mpmath numbers alike.
        """
        total = 0
        for c, z in zip(self.coefficients, self.rates):
            c, z = complex(c), complex(z)
            if c == 0:
                continue
            term = 0.5 * (c / (s + z) + c.conjugate() / (s + z.conjugate()))
            total = total + term
        if isinstance(total, complex) and isinstance(s, numbers.Real):
            return total.real
        return total

    def integral(self, t):
        "The prefix integral ∫₀ᵗ f(τ)dτ."
        t = np.asarray(t, dtype=float)
        zero = self.rates == 0
        safe = np.where(zero, 1.0, self.rates)
        weights = np.where(zero, 0.0, self.coefficients / safe)
        value = (1.0 - np.exp(-np.multiply.outer(t, self.rates))) @ weights
        value = value + np.multiply.outer(t, np.where(zero, self.coefficients, 0.0)).sum(axis=-1)
        value = value.real
        return float(value) if np.ndim(value) == 0 else value

    def total_integral(self):
        "∫₀^∞ f(t)dt, or None when a term does not decay."
        live = self.coefficients != 0
        if np.any(self.rates[live].real <= 0):
            return None
        return float((self.coefficients[live] / self.rates[live]).sum().real)

    def derivative(self):
        return ExponentialSum(-self.coefficients * self.rates, self.rates)

    def conjugate_closed(self):
        """
        The same real function written so that the complex sum itself is
        real: every term c·e^{−zt} becomes ½c·e^{−zt} + ½c̄·e^{−z̄t}.
        """
        return ExponentialSum(np.concatenate([self.coefficients, self.coefficients.conj()]) / 2.0,
                              np.concatenate([self.rates, self.rates.conj()]))

    def simplified(self):
        "Merges terms with identical rates and drops zero terms."
        merged = {}
        for c, z in zip(self.coefficients, self.rates):
            merged[z] = merged.get(z, 0) + c
        pairs = [(c, z) for z, c in merged.items() if c != 0]
        return ExponentialSum([c for c, _ in pairs], [z for _, z in pairs])

    def convolve(self, other):
        """
        The closed-form time convolution (f∗g)(t) = ∫₀ᵗ f(t−τ)g(τ)dτ.  The
        rates of the two factors must be pairwise distinct.

        >>> h = ExponentialSum.exponential(1.0, 1.0).convolve(ExponentialSum.exponential(1.0, 2.0))
        >>> round(h(1.0), 12) == round(math.exp(-1.0) - math.exp(-2.0), 12)
        True
        """
        left, right = self.conjugate_closed(), other.conjugate_closed()
        coefficients, rates = [], []
        for c1, z1 in zip(left.coefficients, left.rates):
            for c2, z2 in zip(right.coefficients, right.rates):
                if abs(z2 - z1) <= ResonanceTolerance * (1.0 + abs(z1)):
                    raise GpcError("Cannot convolve terms with equal rates %s and %s." % (z1, z2))
                weight = c1 * c2 / (z2 - z1)
                coefficients.extend([weight, -weight])
                rates.extend([z1, z2])
        return ExponentialSum(coefficients, rates).simplified()

    def __add__(self, other):
        if isinstance(other, numbers.Real):
            other = ExponentialSum.constant(other)
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        return ExponentialSum(np.concatenate([self.coefficients, other.coefficients]),
                              np.concatenate([self.rates, other.rates]))

    __radd__ = __add__

    def __neg__(self):
        return ExponentialSum(-self.coefficients, self.rates)

    def __sub__(self, other):
        if isinstance(other, numbers.Real):
            other = ExponentialSum.constant(other)
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if not isinstance(scalar, numbers.Real):
            return NotImplemented
        return ExponentialSum(self.coefficients * scalar, self.rates)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, numbers.Real):
            return NotImplemented
        return ExponentialSum(self.coefficients / scalar, self.rates)

    __div__ = __truediv__


def trapezoid_integral(f, j):
    """
    The composite trapezoid value of ∫₀^{t_j} f(τ)dτ.

    >>> grid = TimeGrid(1.0, 10)
    >>> round(trapezoid_integral(SampledFunction(grid, grid.nodes), 10), 12)
    0.5
    """
    f.grid.check_index(j)
    if j == 0:
        return 0.0
    return float(integrate.trapezoid(f.values[:j + 1], dx=f.grid.h))


def cumulative_integral(f):
    "The prefix integrals ∫₀^{t_j} f at every node."
    return SampledFunction(f.grid, integrate.cumulative_trapezoid(f.values, dx=f.grid.h, initial=0.0))


def _check_same_grid(*functions):
    grids = set(f.grid for f in functions)
    if len(grids) > 1:
        raise GridMismatchError("Functions live on different grids: %s." % ", ".join(repr(g) for g in grids))


def convolve_at(k, x, j):
    """
    k.delta_weight·x(t_j) plus the trapezoid value of ∫₀^{t_j} r(t_j−τ)x(τ)dτ.
    """
    _check_same_grid(k.regular, x)
    x.grid.check_index(j)
    value = k.delta_weight * x.values[j]
    if j > 0:
        segment = k.regular.values[j::-1] * x.values[:j + 1]
        value += x.grid.h * (segment.sum() - 0.5 * (segment[0] + segment[-1]))
    return float(value)


def convolution_values(r, x, h):
    """
    Trapezoid values of ∫₀^{t_j} r(t_j−τ)x(τ)dτ at every node for raw sample
    arrays (real or complex).
    """
    r, x = np.asarray(r), np.asarray(x)
    full = np.convolve(r, x)[:len(x)]
    return h * (full - 0.5 * (r * x[0] + r[0] * x))


def convolve(k, x):
    "convolve_at at every node."
    _check_same_grid(k.regular, x)
    return SampledFunction(x.grid, k.delta_weight * x.values + convolution_values(k.regular.values, x.values, x.grid.h))


VolterraMethods = ("implicit", "predictor-corrector")


def solve_volterra(kappa, initial=1.0, method="implicit"):
    """
    Solves x'(t) = ∫₀ᵗ κ(t−τ)x(τ)dτ, x(0) = initial, for κ = w·δ + r.

    The memory integral is a trapezoid sum.  The default time step is the
    implicit trapezoid rule, whose only unknown enters linearly and is
    solved for directly.  method="predictor-corrector" takes an explicit
    Euler predictor and one trapezoid corrector instead.  Both are second
    order in h.
    """
    if method not in VolterraMethods:
        raise ValueError("Unknown Volterra method %r, expected one of %s." % (method, ", ".join(VolterraMethods)))
    grid = kappa.grid
    h, w, r = grid.h, kappa.delta_weight, kappa.regular.values
    x = np.empty(len(grid))
    x[0] = initial
    slope = w + 0.5 * h * r[0]
    if method == "implicit":
        denominator = 1.0 - 0.5 * h * slope
        if abs(denominator) < 1e-14:
            raise NonConvergenceError("Step %g is too large for kernel weight %g." % (h, slope))
        derivative = slope * x[0]
    else:
        derivative = w * x[0]
    for j in range(grid.n_steps):
        history = h * (0.5 * r[j + 1] * x[0] + np.dot(r[j:0:-1], x[1:j + 1]))
        if method == "implicit":
            x[j + 1] = (x[j] + 0.5 * h * (derivative + history)) / denominator
        else:
            predicted = slope * (x[j] + h * derivative) + history
            x[j + 1] = x[j] + 0.5 * h * (derivative + predicted)
        derivative = slope * x[j + 1] + history
    logger.debug("Solved Volterra equation on %r by the %s step", grid, method)
    return SampledFunction(grid, x)


def solve_volterra_second_kind(b, kernel, scale=1.0):
    """
    Solves y(t) = b(t) + scale·∫₀ᵗ kernel(t−τ)y(τ)dτ by trapezoid marching.
    """
    _check_same_grid(b, kernel)
    grid = b.grid
    h, k = grid.h, kernel.values
    y = np.empty(len(grid))
    y[0] = b.values[0]
    denominator = 1.0 - 0.5 * scale * h * k[0]
    if abs(denominator) < 1e-14:
        raise NonConvergenceError("Step %g is too large for kernel value %g." % (h, k[0]))
    for j in range(1, grid.n_steps + 1):
        history = 0.5 * k[j] * y[0] + np.dot(k[j - 1:0:-1], y[1:j])
        y[j] = (b.values[j] + scale * h * history) / denominator
    return SampledFunction(grid, y)


def derivative(f):
    "Second-order finite differences, one-sided at the ends."
    if f.grid.n_steps < 2:
        raise GridMismatchError("Differentiation needs at least two steps, %r has %d." % (f.grid, f.grid.n_steps))
    return SampledFunction(f.grid, np.gradient(f.values, f.grid.h, edge_order=2))


_contexts = threading.local()


def _context():
    context = getattr(_contexts, "context", None)
    if context is None:
        context = _contexts.context = mpmath.MPContext()
    return context


def inverse_laplace(transform, t, nodes=TalbotNodes, check_nodes=TalbotCheckNodes, shift=0.0,
                    agreement=TalbotAgreement):
    """
    f(t) from its Laplace transform by the fixed Talbot contour.

    The contour sum is evaluated in mpmath at a working precision equal to
    the node count, once with `nodes` and once with `check_nodes` nodes; the
    two must agree to `agreement` relative to max(1, |f(t)|).  A positive
    shift moves the contour right for transforms with singularities in the
    right half plane.

    >>> round(inverse_laplace(lambda s: 1 / (s + 1), 1.0), 10) == round(math.exp(-1.0), 10)
    True
    """
    t = float(t)
    if not t > 0:
        raise ValueError("Laplace inversion needs t > 0, got %r." % t)
    context = _context()
    if shift:
        function = lambda s: transform(s + shift)
    else:
        function = transform
    values = []
    for degree in (nodes, check_nodes):
        value = context.invertlaplace(function, t, method="talbot", degree=degree)
        values.append(float(value) * math.exp(shift * t))
    first, second = values
    if not (math.isfinite(first) and math.isfinite(second)) or \
            abs(first - second) > agreement * max(1.0, abs(first), abs(second)):
        raise NonConvergenceError("Talbot inversion at t = %g gives %r with %d nodes and %r with %d nodes."
                                  % (t, first, nodes, second, check_nodes))
    logger.debug("Inverted transform at t = %g with %d and %d nodes", t, nodes, check_nodes)
    return first
