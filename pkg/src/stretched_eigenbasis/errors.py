"""Exception types shared across the package."""

from __future__ import annotations

import numpy as np


class DomainError(ValueError):
    """A point or index lies outside where the basis is defined."""


class ContractError(ValueError):
    """Arguments violate a documented precondition."""


class SingularSystemError(np.linalg.LinAlgError):
    """The collocation matrix could not be solved to working precision."""

    def __init__(self, message: str, cond: float = float("inf")):
        super().__init__(f"{message} (condition estimate {cond:.3e})")
        self.cond = cond
