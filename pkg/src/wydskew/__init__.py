"""Metric adjusted skew information from operator monotone generators."""

from .errors import DomainError, NumericalError, ValidationError, WydSkewError
from .generators import (
    GeneratorFunction,
    MetricFunction,
    builtin_bridge,
    builtin_exotic,
    builtin_power,
    construct_f,
    derivative_at_one,
    g_auxiliary,
    generator,
    limit_at_zero,
    sharp,
    star,
    symmetry_class,
    tilde,
)
from .loewner import (
    CertificationReport,
    certify_operator_convex,
    certify_operator_monotone,
    loewner_matrix,
    recheck_witness,
)
from .matrix_core import (
    DensityMatrix,
    HermitianMatrix,
    apply_scalar_function,
    commutator,
    eigh,
    random_density_matrix,
    random_hermitian,
    random_unitary,
    variance,
)
from .skew import (
    MorozovaCencov,
    SkewInfoReport,
    bridge_skew_info,
    c_hat,
    c_value,
    masi_modular,
    masi_spectral,
    metric_form,
    unbounded_masi,
    unbounded_wyd_commutator,
    wyd_commutator,
)

__version__ = "0.1.0"
