"""dtlab: DT(mu,c) random-matrix laboratory and atomic-measure classifier."""

import json as _json

try:
    from ._dtlab import (  # installed-wheel layout
        AtomicMeasure,
        classify_json,
        example3_min_bound,
        lemma1_cos_lower,
        lemma1_cos_weak,
        lemma1_experiment_json,
        make_family,
        mass_in_ball,
        nearest_support_gap,
        nza_chain_cos,
        parse_measure,
        philox_block,
        unza_chain_cos,
        __version__,
    )
except ImportError:  # in-tree build: extension next to the package on sys.path
    from _dtlab import (
        AtomicMeasure,
        classify_json,
        example3_min_bound,
        lemma1_cos_lower,
        lemma1_cos_weak,
        lemma1_experiment_json,
        make_family,
        mass_in_ball,
        nearest_support_gap,
        nza_chain_cos,
        parse_measure,
        philox_block,
        unza_chain_cos,
        __version__,
    )


def classify(measure, c=1.0):
    """Classify a measure; returns the hypothesis report as a dict."""
    return _json.loads(classify_json(measure, c))


def lemma1_experiment(**kwargs):
    """Run the lemma1 angle experiment; returns the summary as a dict."""
    return _json.loads(lemma1_experiment_json(**kwargs))


__all__ = [
    "AtomicMeasure",
    "classify",
    "classify_json",
    "example3_min_bound",
    "lemma1_cos_lower",
    "lemma1_cos_weak",
    "lemma1_experiment",
    "lemma1_experiment_json",
    "make_family",
    "mass_in_ball",
    "nearest_support_gap",
    "nza_chain_cos",
    "parse_measure",
    "philox_block",
    "unza_chain_cos",
    "__version__",
]
