"""Exact lossy boson-sampling simulation and error-tolerance analysis."""

from .errors import BosonHarnessError
from .fock import (
    OutputDistribution,
    amplitude,
    distinguishable_distribution,
    hilbert_dimension,
    output_distribution,
    sample,
    standard_input,
)
from .gaussian import (
    SqueezedParams,
    distance_curve,
    minimize_distance,
    photon_number_prob,
    trace_distance_lossy,
    trace_distance_pure_copies,
)
from .hardness import Benchmark, TruncationSpec, region, truncation_curve, truncation_error
from .linops import balanced_beamsplitter, haar_unitary, permanent, recompose, reck_decompose
from .loss import (
    apply_loss_to_distribution,
    lossy_output_distribution,
    photons_required,
    postselect_probability,
    required_efficiency,
)
from .modematch import FilterWindow, SpectralProfile, filter_pass_probability, loss_budget_check

__version__ = "0.1.0"


def schema(name: str) -> dict:
    """JSON schema for the output of CLI subcommand ``name``."""
    import json
    from importlib.resources import files

    return json.loads(files(__package__).joinpath("schemas", f"{name}.schema.json").read_text())
