"""Exact set-valued dynamics of multiple mappings on compact metric spaces."""
from .space import (
    HyperorbitError,
    InvalidInput,
    Rational,
    Space,
    UnsupportedOperation,
    diameter,
    distance,
    format_rational,
    parse_rational,
)
from .maps import BuiltinRule, CircleAffine, FiniteTable, PiecewiseLinear, commutes, evaluate, evaluate_word
from .setdyn import deleted_orbit, hausdorff, image_set, make_set, orbit
from .systems import GeneratorSpec, MultiMapSystem, builtin, builtin_names, generate, load_system
from .analysis import (
    Ball,
    DevaneyConfig,
    ExpansionCheckConfig,
    Sampler,
    Subset,
    classify_periodic,
    classify_periodic_classical,
    devaney_report,
    enumerate_ran_finite,
    expansion_check,
    is_fixed_point,
    is_transitive_finite,
    periodic_density_scan,
    sensitivity_scan,
    transitivity_witness,
)

__version__ = "0.1.0"
