"""Interpretable knowledge tracing: BKT skill mastery, k-means ability
profiles and problem difficulty as evidence for a Tree-Augmented Naive Bayes
correctness classifier."""

from ._ikt import (  # noqa: F401
    BktParams,
    Dataset,
    InputError,
    TanModel,
    advance,
    assign_profile,
    auc,
    difficulty_level,
    fit_skill,
    fit_tan,
    load_csv,
    parse_csv,
    performance_vector,
    posterior_given_obs,
    preprocess,
    rmse,
    run_ablation,
    run_cv,
    segment_intervals,
    sequence_log_likelihood,
    split_folds,
    trace_mastery,
    train_clusters,
)

__version__ = "0.1.0"
