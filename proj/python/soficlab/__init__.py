"""Random hypergraph colourings of free products of cyclic groups."""

from ._core import (
    DomainError,
    InputError,
    NumericalError,
    ScaleError,
    check_sofic,
    core_fixed_point,
    count_equitable,
    count_proper,
    count_uniform_homs,
    d_of_eta,
    density_report,
    exact_first_moment,
    exact_planted_distance_moment,
    f_dk,
    hom_from_json,
    hom_to_json,
    is_proper,
    psi0,
    run_experiment,
    sample_planted,
    sample_uniform,
    t_star,
)

__version__ = "0.1.0"
