"""Phase-diffused squeezed vacuum: simulation and nonclassicality analysis."""

__version__ = "0.1.0"

from .cf import CfCurve, SignificanceReport, cf_scan, empirical_cf, significance
from .datafile import import_csv, read_dataset, write_dataset
from .errors import (AnalysisError, ConvergenceError, DataFormatError,
                     PdsqError, QuadratureError)
from .matrices import (MinEigResult, MomentMatrix, bootstrap_min_eig,
                       bootstrap_min_eig_table, build_matrix, min_eig_cg,
                       min_eig_dense)
from .moments import (MomentSet, SqueezingDegrees, central_moments,
                      estimate_moments, hermite, hong_mandel_q,
                      normally_ordered_moments)
from .report import Report, RunConfig, analyze_dataset, emit, run, run_catalog
from .sampler import (DatasetMeta, QuadratureDataset, bootstrap_counts,
                      sample_phase, sample_quadratures)
from .states import (PhaseNoise, SqueezingParams, StateModel,
                     analytic_cf, analytic_central_moment,
                     analytic_normally_ordered_moment, effective_variance,
                     phase_average, quadrature_variance, wigner)
from .witness import (BoundVerification, TabulatedDensity, WitnessCertificate,
                      certify, cone_order, heavy_interval, interval_mass,
                      verify_bound)

__all__ = [
    "__version__",
    "AnalysisError", "ConvergenceError", "DataFormatError", "PdsqError",
    "QuadratureError",
    "PhaseNoise", "SqueezingParams", "StateModel",
    "analytic_cf", "analytic_central_moment",
    "analytic_normally_ordered_moment", "effective_variance",
    "phase_average", "quadrature_variance", "wigner",
    "DatasetMeta", "QuadratureDataset", "bootstrap_counts",
    "sample_phase", "sample_quadratures",
    "CfCurve", "SignificanceReport", "cf_scan", "empirical_cf", "significance",
    "MomentSet", "SqueezingDegrees", "central_moments", "estimate_moments",
    "hermite", "hong_mandel_q", "normally_ordered_moments",
    "MinEigResult", "MomentMatrix", "bootstrap_min_eig",
    "bootstrap_min_eig_table", "build_matrix", "min_eig_cg", "min_eig_dense",
    "BoundVerification", "TabulatedDensity", "WitnessCertificate",
    "certify", "cone_order", "heavy_interval", "interval_mass", "verify_bound",
    "import_csv", "read_dataset", "write_dataset",
    "Report", "RunConfig", "analyze_dataset", "emit", "run", "run_catalog",
]
