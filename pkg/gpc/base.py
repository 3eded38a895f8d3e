# coding=utf-8

"""
Shared machinery for the gpc package: the Immutable base class every value
type derives from, the exception hierarchy, library-wide tolerances and the
per-α work dispatcher.
"""

from __future__ import division, unicode_literals

import logging
import os

import numpy as np
from joblib import Parallel, delayed

logger = logging.getLogger(__name__)

DefaultTolerance = 1e-9
DensityTolerance = 1e-10
TalbotNodes = 64
TalbotCheckNodes = 96
TalbotAgreement = 1e-6
DysonTolerance = 1e-10
DysonMaxTerms = 200
PoleTolerance = 1e-12

SupportedDimensionLimit = 97


class GpcError(Exception):
    """
    The base class of every error the library raises on misuse.  Physics
    violations (a channel that is not completely positive, an inadmissible
    kernel) are reported through certificates, not exceptions.
    """


class DimensionUnsupportedError(GpcError):
    """
    Raised when a dimension is not a prime number the library can build
    mutually unbiased bases for.

    >>> from gpc.mub import build_mubs
    >>> try:
    ...     build_mubs(4)
    ...     assert False, "DimensionUnsupportedError was not raised!"
    ... except DimensionUnsupportedError as e:
    ...     assert str(e) == "Dimension 4 is not prime; only prime dimensions are supported."
    """


class InvalidDensityMatrixError(GpcError):
    """
    Raised when an operator offered as a state is not Hermitian, does not
    have unit trace or has a negative eigenvalue.

    >>> import numpy
    >>> from gpc.mub import validate_density_matrix
    >>> try:
    ...     validate_density_matrix(numpy.eye(2), 2)
    ...     assert False, "InvalidDensityMatrixError was not raised!"
    ... except InvalidDensityMatrixError as e:
    ...     assert str(e).startswith("Density matrix has trace 2")
    """


class GridMismatchError(GpcError):
    """
    Raised when sampled functions on different grids are combined, when a
    node index is outside a grid, or when a sample count does not match.

    >>> from gpc.numerics import TimeGrid
    >>> try:
    ...     TimeGrid(1.0, 10).node(11)
    ...     assert False, "GridMismatchError was not raised!"
    ... except GridMismatchError as e:
    ...     assert str(e) == "Node index 11 is outside 0..10."
    """


class VectorLengthError(GpcError):
    """
    Raised when a probability or eigenvalue vector has the wrong number of
    entries for its dimension.

    >>> from gpc.channel import eigen_from_prob
    >>> try:
    ...     eigen_from_prob([1.0, 0.0], 2)
    ...     assert False, "VectorLengthError was not raised!"
    ... except VectorLengthError as e:
    ...     assert str(e) == "Expected 4 probabilities for d = 2, got 2."
    """


class UncertifiedChannelError(GpcError):
    """
    Raised when a channel that fails the complete positivity conditions is
    asked to act on a state.
    """


class AdmissibilityError(GpcError):
    """
    Raised when model parameters violate one of the inequalities that make
    the family a legitimate family of channels.  The name of the violated
    inequality is kept on the exception.

    >>> from gpc.models import SemigroupModel
    >>> try:
    ...     SemigroupModel(2, [1.0, -1.0, 1.0])
    ...     assert False, "AdmissibilityError was not raised!"
    ... except AdmissibilityError as e:
    ...     assert e.inequality == "non-negative rates"
    """

    def __init__(self, inequality, message):
        super(AdmissibilityError, self).__init__(message)
        self.inequality = inequality


class PoleError(GpcError):
    """
    Raised when a Laplace-domain relation is evaluated at a pole, such as
    ℓ̃(s) = 1 in the kernel relation.

    >>> from gpc.kernel import kappa_from_ell_laplace
    >>> try:
    ...     kappa_from_ell_laplace([lambda s: 1.0])[0](2.0)
    ...     assert False, "PoleError was not raised!"
    ... except PoleError as e:
    ...     assert str(e) == "Transform of ell equals 1 at s = 2.0."
    """


class NonConvergenceError(GpcError):
    """
    Raised when an iterative or contour method does not reach its accuracy
    target: the Talbot inversion at two node counts disagrees, or a Dyson
    series needs more terms than allowed.
    """


class SingularGeneratorError(GpcError):
    """
    Raised when decay rates are requested for an eigenvalue trajectory that
    touches or crosses zero, where the time-local generator does not exist.
    """


class ComplexValueError(GpcError):
    """
    Raised when a closed-form function meant to describe a real trajectory
    has a non-vanishing imaginary part.
    """


class ConfigurationError(GpcError):
    """
    Raised for unreadable or inconsistent scenario files and invalid
    environment settings.

    >>> from gpc.cli import Scenario
    >>> try:
    ...     Scenario.from_dict({"d": 2})
    ...     assert False, "ConfigurationError was not raised!"
    ... except ConfigurationError as e:
    ...     assert str(e) == "Scenario is missing required key 'grid'."
    """


class Immutable(object):
    """
    A base class for all of the gpc value types.  This class allows objects
    to freeze themselves from further changes.  numpy arrays stored on an
    Immutable are flagged read-only as they are assigned, so constructors
    store copies.

    >>> class Frigid(Immutable):
    ...   def __init__(self, value):
    ...     self.value = value
    ...     super(Immutable, self).__init__()
    ...     self.frozen = True
    ...
    >>> f = Frigid("my value")
    >>> f.value = "new value"
    Traceback (most recent call last):
      ...
    AttributeError: Frigid is immutable.
    >>> del(f.value)
    Traceback (most recent call last):
      ...
    AttributeError: Frigid is immutable.
    """

    __slots__ = ()

    def __setattr__(self, name, value):
        "Overridden to implement object freezing."
        if hasattr(self, "frozen"):
            raise AttributeError(self.__class__.__name__ + " is immutable.")
        if isinstance(value, np.ndarray):
            value.flags.writeable = False
        super(Immutable, self).__setattr__(name, value)

    def __delattr__(self, *args):
        "Overridden to implement object freezing."
        if hasattr(self, "frozen"):
            raise AttributeError(self.__class__.__name__ + " is immutable.")
        super(Immutable, self).__delattr__(*args)


def is_prime(n):
    """
    True when n is a prime number.

    >>> [n for n in range(20) if is_prime(n)]
    [2, 3, 5, 7, 11, 13, 17, 19]
    """
    if n < 2:
        return False
    factor = 2
    while factor * factor <= n:
        if n % factor == 0:
            return False
        factor += 1
    return True


def check_dimension(d):
    "Validates a Hilbert space dimension and returns it as an int."
    try:
        integral = not isinstance(d, bool) and int(d) == d
    except (TypeError, ValueError):
        integral = False
    if not integral:
        raise DimensionUnsupportedError("Dimension %r is not an integer." % (d,))
    d = int(d)
    if not is_prime(d):
        raise DimensionUnsupportedError("Dimension %d is not prime; only prime dimensions are supported." % d)
    if d > SupportedDimensionLimit:
        raise DimensionUnsupportedError("Dimension %d exceeds the supported limit of %d." % (d, SupportedDimensionLimit))
    return d


def thread_count():
    """
    The number of worker threads for per-α work, read from GPC_THREADS
    (default 1).
    """
    raw = os.environ.get("GPC_THREADS", "1")
    try:
        count = int(raw)
    except ValueError:
        raise ConfigurationError("GPC_THREADS must be a positive integer, got %r." % raw)
    if count < 1:
        raise ConfigurationError("GPC_THREADS must be a positive integer, got %r." % raw)
    return count


def map_alpha(function, items):
    """
    Applies function to every item, in order, on up to GPC_THREADS threads.
    The per-α computations are independent and release the GIL inside
    numpy, so threads are enough.

    >>> map_alpha(lambda x: x * x, [1, 2, 3])
    [1, 4, 9]
    """
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [function(item) for item in items]
    logger.debug("Dispatching %d items on %d threads", len(items), workers)
    return Parallel(n_jobs=workers, prefer="threads")(delayed(function)(item) for item in items)
