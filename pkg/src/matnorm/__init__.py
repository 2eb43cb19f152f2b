"""matnorm: operator norms of structured random matrices.

Solvers for l_p -> l_q operator norms with certified witnesses,
closed-form upper bounds for their expected values under Gaussian,
bounded, and heavy-tailed (symmetric Weibull) entry distributions,
Monte Carlo estimators, generic-chaining functionals, and ratio
campaigns that compare the two.
"""

from .bounds import (
    BoundValue,
    ChevetInputs,
    ConjectureTerms,
    TensorWeights,
    bounded_entry_bound,
    chevet_gaussian_rhs,
    chevet_weibull_rhs,
    conjecture_terms,
    gauss_iid_bound,
    gauss_iid_branch_value,
    gauss_tensor_bound,
    order_stat_lq_expect_bound,
    order_stat_qmoment_bound,
    order_stat_threshold,
    structured_gauss_bound,
    submatrix_bound,
    tensor_product_twosided,
    weibull_iid_bound,
    weibull_iid_branch_value,
    weibull_iid_moment_form,
    weibull_square_bound,
    weibull_square_moment_form,
    weibull_tensor_bound,
    weighted_lrho_bound,
)
from .campaigns import (
    CampaignConfig,
    campaign_kinds,
    load_campaign_config,
    run_campaign,
)
from .chaining import (
    AdmissibleSequence,
    gamma_lower_radius,
    gamma_upper_greedy,
    sequence_value,
    tensor_set,
    verify_gamma_esup,
    verify_tensor_separation,
)
from .distributions import (
    DistributionSpec,
    Gaussian,
    LogConcaveUncProduct,
    PsiRExample,
    RademacherScaled,
    SampleMatrix,
    WeibullSym,
    sample_matrix,
    spec_from_json,
    tail_prob,
    weibull_moment,
)
from .errors import BudgetExceededError, ConfigError, DomainError, MatnormError
from .exponents import INF, NormPair, Regime, holder_conjugate, log_plus
from .montecarlo import (
    MCEstimate,
    RatioRecord,
    campaign_summary,
    estimate_esup_bilinear,
    estimate_esup_linear,
    estimate_opnorm,
    estimate_order_stat_lq,
    estimate_submatrix_sup,
    ratio_campaign,
    run_estimator,
)
from .opnorm import (
    FinitePointSet,
    OpNormResult,
    SolveMethod,
    SolverBudget,
    attain_in_ball,
    bilinear_sup,
    opnorm,
    power_method_step,
    submatrix_sup,
)
from .vectors import (
    WeightVector,
    as_weights,
    ball_norm_sup,
    equal_entry_orlicz,
    lp_norm,
    multiplier_sup,
    orlicz_phi_norm,
    rearrange,
    sup_ball_moment,
    weighted_sum_moment,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "MatnormError",
    "DomainError",
    "BudgetExceededError",
    "ConfigError",
    # exponents
    "INF",
    "NormPair",
    "Regime",
    "holder_conjugate",
    "log_plus",
    # distributions
    "DistributionSpec",
    "WeibullSym",
    "Gaussian",
    "RademacherScaled",
    "PsiRExample",
    "LogConcaveUncProduct",
    "SampleMatrix",
    "sample_matrix",
    "spec_from_json",
    "weibull_moment",
    "tail_prob",
    # vectors
    "WeightVector",
    "as_weights",
    "lp_norm",
    "rearrange",
    "orlicz_phi_norm",
    "equal_entry_orlicz",
    "multiplier_sup",
    "weighted_sum_moment",
    "ball_norm_sup",
    "sup_ball_moment",
    # operator norms
    "OpNormResult",
    "SolveMethod",
    "SolverBudget",
    "FinitePointSet",
    "opnorm",
    "attain_in_ball",
    "power_method_step",
    "bilinear_sup",
    "submatrix_sup",
    # bounds
    "BoundValue",
    "TensorWeights",
    "ChevetInputs",
    "ConjectureTerms",
    "chevet_gaussian_rhs",
    "chevet_weibull_rhs",
    "gauss_iid_bound",
    "gauss_iid_branch_value",
    "bounded_entry_bound",
    "weibull_iid_bound",
    "weibull_iid_branch_value",
    "weibull_square_bound",
    "weibull_iid_moment_form",
    "weibull_square_moment_form",
    "gauss_tensor_bound",
    "weibull_tensor_bound",
    "conjecture_terms",
    "tensor_product_twosided",
    "weighted_lrho_bound",
    "order_stat_qmoment_bound",
    "order_stat_threshold",
    "order_stat_lq_expect_bound",
    "submatrix_bound",
    "structured_gauss_bound",
    # monte carlo
    "MCEstimate",
    "RatioRecord",
    "run_estimator",
    "estimate_opnorm",
    "estimate_esup_bilinear",
    "estimate_esup_linear",
    "estimate_order_stat_lq",
    "estimate_submatrix_sup",
    "ratio_campaign",
    "campaign_summary",
    # chaining
    "AdmissibleSequence",
    "sequence_value",
    "gamma_lower_radius",
    "gamma_upper_greedy",
    "tensor_set",
    "verify_tensor_separation",
    "verify_gamma_esup",
    # campaigns
    "CampaignConfig",
    "campaign_kinds",
    "load_campaign_config",
    "run_campaign",
]
