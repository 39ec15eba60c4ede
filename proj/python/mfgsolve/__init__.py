"""Mean field game solver: elliptic-reduction continuation solver plus the
diagnostics bundle and a small-grid coupled reference solver."""

from ._core import (
    ConfigError,
    DomainError,
    oracle_solve,
    recover_density,
    solve,
    validate,
    verify,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "oracle_solve",
    "recover_density",
    "solve",
    "validate",
    "verify",
]
