"""Information-based divergences between categorical variables."""
from .distribution import (
    InfoSummary,
    JointDistribution,
    TripleDistribution,
    entropy,
    entropy_of_triple,
    from_samples,
    is_equivalent,
    marginal_x,
    marginal_y,
    pairwise_marginals,
    summarize,
)

__version__ = "0.1.0"
