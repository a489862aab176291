"""Label-free many-particle states of identical particles.

Amplitudes are permanents (bosons) or determinants (fermions) of one-particle
overlap matrices; partial traces, entropies and Bell analysis are built on top.
"""

from .amplitude import amplitude, amplitude_naive, permanent_ryser, permutation_sum
from .errors import (
    BasisMismatchError,
    DegenerateStateError,
    GuardError,
    LabelError,
    LabelFreeError,
    NoCoincidenceError,
    NotApplicableError,
    NullStateError,
    NumericalContractError,
    ParticleNumberError,
    StatisticsMismatchError,
)
from .hilbert import ModeBasis, SingleParticleState, gram_matrix, inner1, make_state
from .library import (
    SpesSpec,
    build_naive_w,
    build_spes,
    factor_spatial_spin,
    overlap_spes3_entropy,
    bell_pair,
    psi_pair,
)
from .operators import (
    OneBodyOperator,
    annihilate,
    apply_one_body,
    commutator_check,
    create,
    pair_annihilate,
    pair_create,
)
from .reduction import (
    CollectiveBasis,
    DensityMatrix,
    dot,
    outcome_probability,
    partial_trace,
    von_neumann_entropy,
)
from .slocc import (
    MeasurementSetting,
    bell_max,
    bell_max_search,
    bell_value,
    concurrence,
    slocc_project,
)
from .states import (
    ElementaryKet,
    ManyParticleState,
    Statistics,
    canonicalize,
    normalize,
    states_equal,
    swap_slots,
    wedge,
)

__version__ = "0.1.0"
