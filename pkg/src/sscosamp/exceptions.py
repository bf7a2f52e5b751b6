"""Exception types shared across the package."""


class InvalidSupportError(ValueError):
    """A support references atoms outside the dictionary."""


class InfeasibleBruteForceError(RuntimeError):
    """Exhaustive support enumeration would exceed the configured cap."""


class RegimeViolationError(ValueError):
    """Theory constants are undefined for the given D-RIP regime."""


class NoConvergenceError(ValueError):
    """The contraction factor does not certify convergence (rho >= 1)."""


class GenerationError(ValueError):
    """A random problem instance cannot be generated under the constraints."""


class ConfigError(ValueError):
    """An experiment configuration is inconsistent or incomplete."""
