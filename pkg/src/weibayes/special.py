"""Log-gamma on the positive reals.

Accuracy is load-bearing here: the scale hyperparameter of the conditional
prior is a ratio of gamma values whose arguments can sit very close to zero,
so ``log_gamma`` must keep at least 12 significant digits over (0, 200].
The platform ``lgamma`` comfortably meets that contract (it is accurate to a
few ulp); the wrapper adds domain validation.
"""

import math

__all__ = ["log_gamma"]


def log_gamma(z: float) -> float:
    """Natural log of the gamma function for z > 0."""
    z = float(z)
    if not (z > 0.0) or math.isinf(z):
        raise ValueError(f"log_gamma requires a positive finite argument, got {z!r}")
    return math.lgamma(z)
