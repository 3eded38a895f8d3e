# coding=utf-8

"""
gpc simulates and certifies the dynamics of generalized Pauli channels on
C^d for prime d: memory-kernel and semi-Markov master equations, complete
positivity certificates, closed-form example families, and the classical
stochastic maps and Wigner functions the channels induce.
"""

from __future__ import division, unicode_literals

from gpc.base import (GpcError, DimensionUnsupportedError, InvalidDensityMatrixError, GridMismatchError,
                      VectorLengthError, UncertifiedChannelError, AdmissibilityError, PoleError, NonConvergenceError,
                      SingularGeneratorError, ComplexValueError, ConfigurationError, Immutable, is_prime,
                      check_dimension, thread_count, map_alpha, DefaultTolerance, DensityTolerance, TalbotNodes,
                      TalbotCheckNodes, TalbotAgreement, DysonTolerance, DysonMaxTerms, PoleTolerance,
                      SupportedDimensionLimit)
from gpc.numerics import (TimeGrid, SampledFunction, DeltaPlusRegular, ExponentialSum, trapezoid_integral,
                          cumulative_integral, convolve_at, convolve, solve_volterra, solve_volterra_second_kind,
                          derivative, inverse_laplace)
from gpc.mub import (MubFamily, WignerOperatorSet, build_mubs, validate_density_matrix, apply_U_map, apply_phi,
                     build_wigner_ops, wigner_function, bloch_vector, density_from_bloch)
from gpc.channel import (ChannelState, FujiwaraAlgoetCertificate, TrajectoryCertificate, Trajectory, RateVector,
                         eigen_from_prob, prob_from_eigen, certify_cptp, certify_trajectory, channel_action,
                         apply_channel, channel_superoperator, choi_matrix, apply_generator, evolve_state,
                         rates_to_eigen, eigen_to_rates)
from gpc.kernel import (EllRep, ConditionCertificate, KernelSpec, InequalityReport, ExpFamilyParams,
                        check_theorem1_conditions, kappa_from_ell_laplace, lambda_laplace_from_kappa,
                        kappa_from_memory, apply_kernel, propagate_kernel, kernel_from_ell, exp_kernel,
                        build_exp_family, build_special_class, build_convolution_class, convolution_p0_limit)
from gpc.semimarkov import (SemiMarkovSpec, SemiMarkovCertificate, Residual, survival, q_eigenvalue, apply_q_map,
                            verify_q_eigenvalue, certify_semimarkov, lambda_via_dyson, eigenvalue_laplace,
                            lambda_via_laplace, ell_from_f, f_from_ell, isotropic_ell_laplace, isotropic_bound,
                            semimarkov_kernel_laplace, inhomogeneous_rhs, bloch_inhomogeneous_rhs)
from gpc.models import (ModelDescriptor, SemigroupModel, OscillatoryModel, ConvexCombinationModel, EternalModel,
                        model_from_descriptor)
from gpc.classical import (StochasticMap, ClassicalSemiMarkov, WignerVector, mub_distributions, stochastic_map,
                           stochastic_map_full, classical_semimarkov, classical_memory_kernel_laplace, wigner_vector,
                           wigner_matrix, wigner_evolution_qubit, evolve_wigner)

__version__ = "0.1.0"
