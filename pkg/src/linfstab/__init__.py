"""Stable regularization in L-infinity for multiplier and compact operators."""

from .core import (
    FourierSignal,
    NormKind,
    RadialField,
    RadialGrid,
    TorusField,
    TorusGrid,
    analyze,
    norm,
    sup_grid_size,
    synthesize,
)
from .multiplier import (
    DilatedFilterPair,
    FilterProfile,
    FilterShape,
    MultiplierSpec,
    apply_multiplier,
    apply_precondition,
    dilate_filters,
    regularized_propagate,
    triangle_filters,
    wave_multiplier,
)
from .perconv import (
    AdversarialParams,
    PeriodicKernel,
    TestSignalKind,
    adversarial_perturbation,
    forward_convolve,
    singular_kernel,
    svd_of_convolution,
    test_signal,
)
from .regularizers import (
    FilterKind,
    FilterScheme,
    SeriesWarning,
    SmoothnessParams,
    SvdOperator,
    WeightSchedule,
    apply_filter,
    choose_alpha,
    linf_bound_constant,
    picard_sum,
    rate_envelope,
    uniform_sum,
    weight_schedule,
)
from .wave3d import (
    RadialProfile,
    TransitionFamilyParams,
    center_value,
    fd_wave_oracle,
    make_transition_profile,
    propagate_radial,
    wave_propagator,
)

__version__ = "0.1.0"
