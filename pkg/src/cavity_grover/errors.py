"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 1,
numerical failures with 2.
"""


class ConfigError(ValueError):
    """Invalid configuration: bad parameter values, broken coupling ratios,
    malformed config files, or arguments outside an operation's domain."""


class NumericalError(RuntimeError):
    """Evolution produced unusable numbers (non-finite amplitudes)."""


class CutoffError(NumericalError):
    """Amplitude reached photon states that couple past the truncation,
    so the truncated dynamics can no longer be trusted."""
