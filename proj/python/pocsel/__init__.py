"""Bounds on the probability of causation under sample selection."""

import json

from ._pocsel import (
    AssumptionSet,
    BoundsInterval,
    ConfigError,
    Dataset,
    LatentJoint,
    ObservedMoments,
    ParseError,
    PocselError,
    __version__,
    bootstrap_bounds,
    bounds_a13,
    bounds_a14,
    bounds_a15,
    check_assumptions,
    compute_bounds,
    construct_bound_distribution,
    construct_interior_distribution,
    estimate_moments,
    estimate_stratified,
    load_csv,
    observed_from_latent,
    run_analysis_json,
    sharp_envelope_oracle,
    test_restrictions,
    theta_oo,
    trim_ratio,
)


def run_analysis(input, **kwargs):
    """Full pipeline on a CSV file; returns the report as a dict."""
    return json.loads(run_analysis_json(input, **kwargs))


def report_schema():
    """JSON Schema of the report produced by run_analysis and the CLI."""
    from importlib import resources

    return json.loads(resources.files(__name__).joinpath("report.schema.json").read_text())
