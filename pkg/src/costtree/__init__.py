"""Cost-sensitive decision tree induction with anytime refinement.

The package builds classification trees that minimize the combined cost of
testing attributes and misclassifying examples.  Attribute tests carry
prices, possibly shared through group discounts; misclassification penalties
come from a class-by-class matrix.  Greedy, stochastic, and lookahead
inducers share one tree representation and one evaluation harness.
"""

from .act import (
    AnytimeConfig,
    SampleRecord,
    act_choose,
    act_choose_numeric,
    act_induce,
    cost_sensitive_prune,
    lsid3_choose,
    lsid3_induce,
)
from .costgen import CostAssignmentParams, assign_costs
from .costs import (
    ChargeContext,
    CostModel,
    EMPTY_CONTEXT,
    charge,
    charge_set,
    context_cost,
    load_cost_model,
    misclassification_cost,
    save_cost_model,
    with_matrix,
)
from .dataset import (
    Attribute,
    Dataset,
    Example,
    generate_multi_and_or,
    generate_multi_xor,
    generate_multiplexer,
    generate_numeric_xor3d,
    generate_xor,
    load_dataset,
    make_schema,
    save_dataset,
)
from .errors import CostTreeError, DataFormatError, UnsupportedFeatureError
from .estimate import (
    CostEstimate,
    ProblemScale,
    expected_error,
    leaf_mcost,
    problem_scale,
    total_cost,
    total_test_cost,
    tree_mcost,
)
from .estimators import (
    ACTClassifier,
    ALGORITHMS,
    BaseTreeClassifier,
    DTMCClassifier,
    GreedyTreeClassifier,
    LSID3Classifier,
    StochasticTreeClassifier,
    make_classifier,
)
from .evaluation import (
    ComparisonResult,
    EvalReport,
    FoldResult,
    compare_methods,
    kfold_cv,
    normalized_cost,
    paired_ttest,
    standard_cost,
    stratified_kfold,
    wilcoxon,
)
from .induction import (
    InducerConfig,
    SplitCandidate,
    best_numeric_split,
    choose_dtmc,
    choose_greedy,
    choose_seg2,
    choose_sid3,
    criterion_score,
    derive_rng,
    entropy,
    error_based_prune,
    grow_greedy,
    grow_stochastic,
    icf,
    induce,
    info_gain,
    numeric_split_info,
    sample_proportional,
    tdidt,
)
from .tree import (
    DecisionTree,
    Leaf,
    NominalSplit,
    NumericSplit,
    PathCharge,
    average_tcost,
    classify,
    default_class,
    iter_leaves,
    tree_from_text,
    tree_size,
    tree_to_text,
)

__version__ = "0.1.0"

__all__ = [
    "ACTClassifier",
    "ALGORITHMS",
    "AnytimeConfig",
    "Attribute",
    "BaseTreeClassifier",
    "ChargeContext",
    "ComparisonResult",
    "CostAssignmentParams",
    "CostEstimate",
    "CostModel",
    "CostTreeError",
    "DTMCClassifier",
    "DataFormatError",
    "Dataset",
    "DecisionTree",
    "EMPTY_CONTEXT",
    "EvalReport",
    "Example",
    "FoldResult",
    "GreedyTreeClassifier",
    "InducerConfig",
    "LSID3Classifier",
    "Leaf",
    "NominalSplit",
    "NumericSplit",
    "PathCharge",
    "ProblemScale",
    "SampleRecord",
    "SplitCandidate",
    "StochasticTreeClassifier",
    "UnsupportedFeatureError",
    "act_choose",
    "act_choose_numeric",
    "act_induce",
    "assign_costs",
    "average_tcost",
    "best_numeric_split",
    "charge",
    "charge_set",
    "choose_dtmc",
    "choose_greedy",
    "choose_seg2",
    "choose_sid3",
    "classify",
    "compare_methods",
    "context_cost",
    "cost_sensitive_prune",
    "criterion_score",
    "default_class",
    "derive_rng",
    "entropy",
    "error_based_prune",
    "expected_error",
    "generate_multi_and_or",
    "generate_multi_xor",
    "generate_multiplexer",
    "generate_numeric_xor3d",
    "generate_xor",
    "grow_greedy",
    "grow_stochastic",
    "icf",
    "induce",
    "info_gain",
    "iter_leaves",
    "kfold_cv",
    "leaf_mcost",
    "load_cost_model",
    "load_dataset",
    "lsid3_choose",
    "lsid3_induce",
    "make_classifier",
    "make_schema",
    "misclassification_cost",
    "normalized_cost",
    "numeric_split_info",
    "paired_ttest",
    "problem_scale",
    "sample_proportional",
    "save_cost_model",
    "save_dataset",
    "standard_cost",
    "stratified_kfold",
    "tdidt",
    "total_cost",
    "total_test_cost",
    "tree_from_text",
    "tree_mcost",
    "tree_size",
    "tree_to_text",
    "wilcoxon",
    "with_matrix",
]
