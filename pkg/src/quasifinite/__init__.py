"""Exact computations with quasi-finite current algebras of vertex operator algebras.

Modules:
    linalg     exact rational sparse linear algebra and rational spectra
    voa        structure-constant VOA data, Borcherds and axiom checks
    current    the current Lie algebra and its bracket
    quotient   truncated quotient modules Q_n(d) and the Hamiltonian
    filtration the weight filtration and normal-ordered product identity
    finite     spectra, Gamma-sets, density and the finite algebras A_n
    synthetic  finite graded algebras used as exact quotient sources
    modules    finite modules, P_n (x) X, E_n and restricted duals
    zhu        Zhu's Poisson algebra and Poisson-law checks
    pca        the Poisson current algebra: straightening and dimension bounds
    report     deterministic report emission
    cli        the command-line workbench
"""

from .errors import (CapTooSmall, IncompatibleAlgebras, InvariantViolation, NonRationalSpectrum, NotConverged,
                     OutOfWindow, ParseError, StepLimitExceeded, WorkbenchError)
from .linalg import (EigenSplit, Polynomial, RowReducer, SparseMatrix, format_rational, gen_eigen_split, min_poly,
                     parse_rational, rank_kernel, rational_factorization, solve_in_span)
from .voa import VoaData, check_axioms, check_borcherds, load_voa, to_document, validate
from .current import CurrentAlgebra, CurrentElement, check_hamiltonian_relation, check_lie_properties
from .quotient import QuotientSlice, TruncationWindow, VoaQuotientEngine, compute_quotient_slice, h_action
from .filtration import gr_filtration_check, normal_ordered_residual
from .finite import (FiniteAlgebra, SpectrumReport, bimodule_density_check, extract_finite_algebra, gap_of,
                     gamma_set, spectrum)
from .synthetic import STANDARD_CASES, GradedAlgebra, block_matrix_algebra, standard_algebra
from .modules import (FinModule, Progenerator, E_n, functor_check, make_progenerator, random_module,
                      regular_module, restricted_dual, round_trip_check, tensor_over_An)
from .zhu import PoissonAlgebraData, c2_quotient, load_poisson, poisson_check
from .pca import (LoopSymbol, PcaDimReport, dim_bound, enumerate_indices, loop_bracket,
                  poisson_ideal_identity_check, psi_surjection_check, straighten)
from .report import Report, emit, parse_report

__version__ = "0.1.0"
