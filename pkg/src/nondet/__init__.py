"""Nondeterministic mechanisms on finite state spaces.

Choice maps, their inverse and weak inverse image operators, convergence
analysis, and the IF / DO guarded-command constructs with weakest
preconditions.
"""

from .dynamics import (
    AnalysisSets,
    Run,
    analyze,
    basin,
    basin_by_iterated_inverse,
    convergent_points,
    enumerate_runs,
    fixed_points,
    iterated_inverse,
    limit_map,
    stable_points,
    weakly_convergent_points,
)
from .gcl import (
    Patch,
    Quilt,
    Verdict,
    check_alternative,
    check_invariance,
    do_delta,
    if_delta,
    quilt_delta,
    wp_do,
    wp_do_iterates,
    wp_if,
    wp_if_patchwise,
)
from .sets import (
    ChoiceMap,
    SpaceMismatchError,
    StateSet,
    StateSpace,
    abort_map,
    apply,
    chaos_map,
    compose,
    deterministic_map,
    dyn_set,
    inverse,
    power,
    skip_map,
    weak_inverse,
)
from .transformers import (
    AxiomReport,
    MonotoneChain,
    SetTransformer,
    check_continuity,
    delta_from_additive,
    delta_from_multiplicative,
    dualize,
    from_inverse,
    from_weak_inverse,
    verify_axioms,
)

__version__ = "0.1.0"
