"""Port interfaces for member policy lookups in heterogeneous funds."""

from typing import Protocol

import numpy as np
import numpy.typing as npt


class MemberPolicyPort(Protocol):
    """Protocol for per-member homogeneous-fund policies.

    A member's controls depend on their own wealth and on n', the size
    of the homogeneous fund of look-alikes they act as if they were in.
    """

    def controls(
        self,
        member: int,
        t_index: int,
        wealth: npt.NDArray[np.float64],
        n_prime: npt.NDArray[np.intp],
    ) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """Consumption rate and risky weight for `member`.

        Args:
            member: Member index.
            t_index: Grid step (member's own table).
            wealth: Member wealth per simulation.
            n_prime: Survivor count per simulation; values above n_max
                mean the infinite collective.

        Raises:
            ConfigurationError: If the member has no policy.
        """
        ...
