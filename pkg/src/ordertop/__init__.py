"""Order convergence on finite posets: Dedekind–MacNeille completions,
the O₁/O₂/O₃/O^DM convergence deciders for eventually periodic
sequences, induced order topologies, counterexample galleries with
certificates, and an exact dyadic measure-space lab."""

from .completion import (
    Completion,
    Cut,
    DEFAULT_CUT_LIMIT,
    brute_force_cut_masks,
    dm_complete,
    enumerate_cuts,
    verify_completion_properties,
)
from .convergence import (
    ConvergenceVerdict,
    LassoSequence,
    drop_prefix,
    format_lasso,
    liminf_limsup,
    o1_converges,
    o2_converges,
    o3_converges,
    o3_residual_criteria,
    odm_converges,
    parse_lasso,
    residual,
)
from .errors import (
    CycleError,
    DuplicateLabelError,
    NoEscapeWithinDepth,
    NotALatticeError,
    NotConvergentInMeasure,
    OrdertopError,
    ParameterOutOfRange,
    PosetFormatError,
    SizeBoundExceeded,
    TruncationNotLattice,
    UnboundedFiber,
    WindowTooSmall,
    WitnessMismatch,
)
from .gallery import (
    Certificate,
    OlejcekTruncation,
    WolkTruncation,
    directed_sup_certificate,
    olejcek_b_set_o1_closed,
    olejcek_truncate,
    olejcek_zero_sequence_converges,
    wolk_no_directed_sup_one,
    wolk_o3_to_top,
    wolk_truncate,
)
from .measure import (
    DyadicSet,
    PowerCoefficientFunction,
    StepFunction,
    format_step_function,
    gamma_K,
    holder_e4_check,
    integral,
    measure_ae_subsequence,
    p_power_norm,
    pairing,
    parse_step_function,
    rho_E,
    sigma_pq_separation,
    t5_escape_witness,
    t5_family_element,
    t5_symmetric_difference_certificate,
    t5_tree,
    tau_mu_sigma1_separation,
    uniform_integrability_profile,
)
from .poset import (
    FinitePoset,
    format_poset,
    from_covers,
    inf,
    is_directed,
    is_filtered,
    is_lattice,
    is_monotone_order_separable,
    lower_bounds,
    parse_poset,
    random_poset,
    sup,
    to_dot,
    upper_bounds,
)
from .topology import (
    ClosureQuery,
    IndexMap,
    extract_convergent_subsequence,
    isotone_cofinal_restriction,
    oi_closure,
    topology_inclusion_report,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
