"""Information-theoretic ROC lower bounds for cooperative spectrum sensing.

The fusion-center decision of a cooperative sensing network is a binary
asymmetric channel whose crossover probabilities are the false-alarm and
missed-detection probabilities. Bounding its mutual information by the
mutual information between signal presence and the raw sensor samples gives
a detector-independent lower bound to the ROC. This package computes that
bound, its asymptotics, and an energy-detector baseline (analytic and
Monte-Carlo) to compare against.
"""

__version__ = "0.1.0"

from rocbound.channel_mi import (
    GammaMixture,
    Prior,
    additive_snr,
    averaged_mi,
    bac_mutual_information,
    biawgn_mi,
    rayleigh_gamma_mixture,
)
from rocbound.roc_bound import (
    OperatingPoint,
    RocCurve,
    equilibrium_probability,
    roc_lower_bound,
)

__all__ = [
    "GammaMixture",
    "OperatingPoint",
    "Prior",
    "RocCurve",
    "__version__",
    "additive_snr",
    "averaged_mi",
    "bac_mutual_information",
    "biawgn_mi",
    "equilibrium_probability",
    "rayleigh_gamma_mixture",
    "roc_lower_bound",
]
