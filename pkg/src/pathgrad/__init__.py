"""Path-integral gradient attributions with completeness and symmetry checks."""
from .engine import (
    AttributionReport,
    QuadratureSpec,
    completeness_residual,
    ig_straight,
    integrated_gradients,
    kink_crossings,
    refine,
    symmetry_gap,
)
from .fields import (
    ReluNetSpec,
    ScalarField,
    cantor_value,
    field_from_spec,
    field_to_spec,
    make_bilinear,
    make_cantor,
    make_linear,
    make_max,
    make_relu_field,
    make_witness_field,
    random_relu_net,
)
from .paths import (
    MonotonicityReport,
    PathSpec,
    check_endpoints,
    check_monotonic,
    eval_path,
    make_counterexample,
    make_pchip,
    make_piecewise_linear,
    make_power_arc,
    make_power_path,
    make_straight,
    path_derivative,
    path_from_spec,
    path_to_spec,
)
from .witness import ViolationInterval, demonstrate_asymmetry, violation_interval

__version__ = "0.1.0"
