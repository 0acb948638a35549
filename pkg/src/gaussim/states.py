"""Gaussian states as (means, covariance) pairs, with constructors and reductions."""

from dataclasses import dataclass, field, InitVar

import numpy as np

from .errors import PhysicalityError
from .phasespace import symplectic_spectrum

# Symplectic eigenvalues may dip this far below 1 before a state is
# rejected; looser than the linear-algebra tolerance to absorb error
# accumulated over long map chains.
PHYSICALITY_TOL = 1e-6


@dataclass(frozen=True)
class GaussianState:
    """An n-mode Gaussian state.

    Attributes:
        n: mode count.  A zero-mode state is the legal residue of measuring
           out every mode; the public constructors below all require n >= 1.
        xi: real 2n-vector of quadrature means, ordered (q..., p...).
        gamma: real symmetric 2n x 2n covariance matrix, vacuum = identity.

    The covariance is symmetrized exactly on construction and checked for
    physicality (every symplectic eigenvalue >= 1 - PHYSICALITY_TOL) unless
    ``check=False`` is passed, which is reserved for internal code paths
    that deliberately build invalid states for diagnostics.
    """

    n: int
    xi: np.ndarray
    gamma: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check):
        xi = np.asarray(self.xi, dtype=float).reshape(-1).copy()
        gamma = np.asarray(self.gamma, dtype=float).reshape(2 * self.n, 2 * self.n).copy()
        if self.n < 0:
            raise ValueError(f"mode count must be nonnegative, got {self.n}")
        if xi.shape != (2 * self.n,):
            raise ValueError(f"means vector has shape {xi.shape}, expected ({2 * self.n},)")
        gamma = (gamma + gamma.T) / 2.0
        xi.setflags(write=False)
        gamma.setflags(write=False)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "gamma", gamma)
        if check and self.n > 0:
            nu_min = float(symplectic_spectrum(gamma)[-1])
            if nu_min < 1.0 - PHYSICALITY_TOL:
                raise PhysicalityError(
                    f"covariance violates the uncertainty bound: "
                    f"minimum symplectic eigenvalue {nu_min} < 1"
                )

    def __eq__(self, other):
        if not isinstance(other, GaussianState):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.xi, other.xi)
            and np.array_equal(self.gamma, other.gamma)
        )

    def symplectic_spectrum(self):
        """Symplectic eigenvalues of the covariance, descending."""
        return symplectic_spectrum(self.gamma)

    def to_dict(self):
        """JSON-ready dict {n, xi, gamma} with row-major gamma."""
        return {"n": self.n, "xi": self.xi.tolist(), "gamma": self.gamma.tolist()}

    @classmethod
    def from_dict(cls, data):
        """Inverse of :meth:`to_dict`."""
        return cls(int(data["n"]), np.asarray(data["xi"]), np.asarray(data["gamma"]))


@dataclass(frozen=True)
class ResourceCount:
    """Number of real parameters tracked for an n-mode Gaussian state."""

    means_count: int
    cov_count: int

    @property
    def total(self):
        return self.means_count + self.cov_count


def resource_count(state_or_n):
    """Classical bookkeeping cost of a Gaussian state.

    An n-mode state is fully described by 2n means plus the n(2n+1)
    independent entries of its symmetric covariance, for a total of
    2n^2 + 3n real numbers -- polynomial in the mode count, which is the
    whole point of simulating in this representation.

    Args:
        state_or_n: a :class:`GaussianState` or a mode count.

    Returns:
        ResourceCount: means and covariance entry counts.
    """
    n = state_or_n.n if isinstance(state_or_n, GaussianState) else int(state_or_n)
    return ResourceCount(means_count=2 * n, cov_count=n * (2 * n + 1))


def vacuum(n):
    """The n-mode vacuum: zero means, identity covariance.

    Raises:
        ValueError: if ``n`` < 1.
    """
    if n < 1:
        raise ValueError(f"mode count must be positive, got {n}")
    return GaussianState(n, np.zeros(2 * n), np.eye(2 * n))


def coherent(n, xi):
    """A coherent state: displaced vacuum with means ``xi``.

    Args:
        n (int): mode count.
        xi (array): real 2n-vector of means.

    Raises:
        ValueError: if ``xi`` does not have length 2n.
    """
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape != (2 * n,):
        raise ValueError(f"means vector has length {xi.shape[0]}, expected {2 * n}")
    if n < 1:
        raise ValueError(f"mode count must be positive, got {n}")
    return GaussianState(n, xi, np.eye(2 * n))


def squeezed_vacuum(r):
    """Single-mode squeezed vacuum with covariance diag(e^-2r, e^2r)."""
    return GaussianState(1, np.zeros(2), np.diag([np.exp(-2.0 * r), np.exp(2.0 * r)]))


def thermal(n_bar):
    """Single-mode thermal state with mean photon number ``n_bar``.

    Raises:
        ValueError: if ``n_bar`` is negative.
    """
    if n_bar < 0:
        raise ValueError(f"mean photon number must be nonnegative, got {n_bar}")
    return GaussianState(1, np.zeros(2), (2.0 * n_bar + 1.0) * np.eye(2))


def epr(r):
    """Two-mode squeezed vacuum.

    The q quadratures are positively correlated and the p quadratures
    anti-correlated for r > 0; negate ``r`` for the opposite convention.
    """
    c = np.cosh(2.0 * r)
    s = np.sinh(2.0 * r)
    gamma = np.zeros((4, 4))
    gamma[:2, :2] = [[c, s], [s, c]]
    gamma[2:, 2:] = [[c, -s], [-s, c]]
    return GaussianState(2, np.zeros(4), gamma)


def attach_vacuum(state, k):
    """Append ``k`` fresh vacuum modes to a state.

    The new modes take indices n..n+k-1 and the result is re-indexed to the
    (q..., p...) ordering.

    Raises:
        ValueError: if ``k`` < 1.
    """
    if k < 1:
        raise ValueError(f"must attach at least one mode, got {k}")
    n, m = state.n, state.n + k
    xi = np.zeros(2 * m)
    xi[:n] = state.xi[:n]
    xi[m:m + n] = state.xi[n:]
    gamma = np.eye(2 * m)
    old = np.concatenate([np.arange(n), m + np.arange(n)])
    gamma[np.ix_(old, old)] = state.gamma
    return GaussianState(m, xi, gamma)


def partial_trace(state, keep):
    """Restrict a state to a subset of its modes.

    Discarding the complement realizes a measurement whose outcome is
    thrown away: the kept modes are left in their unconditioned marginal.

    Args:
        state: input state.
        keep: iterable of mode indices to retain (order-insensitive).

    Returns:
        GaussianState: the marginal state on the kept modes, ascending.

    Raises:
        ValueError: if ``keep`` is empty or contains an invalid index.
    """
    modes = sorted(set(int(i) for i in keep))
    if not modes:
        raise ValueError("must keep at least one mode")
    if modes[0] < 0 or modes[-1] >= state.n:
        raise ValueError(f"mode index out of range for {state.n} modes: {modes}")
    idx = np.array([*modes, *(state.n + m for m in modes)])
    return GaussianState(len(modes), state.xi[idx], state.gamma[np.ix_(idx, idx)])


def wigner(state, point):
    """Evaluate the state's Gaussian phase-space density at a point.

    Normalized so the integral over phase space is 1; the vacuum peaks at
    1/pi.

    Args:
        state: input state with invertible covariance.
        point (array): real 2n-vector.

    Returns:
        float: pi^-n det(Gamma)^-1/2 exp(-(z - xi) Gamma^-1 (z - xi)^T).

    Raises:
        ValueError: if the covariance is numerically singular.
    """
    point = np.asarray(point, dtype=float).reshape(-1)
    if point.shape != (2 * state.n,):
        raise ValueError(f"point has length {point.shape[0]}, expected {2 * state.n}")
    eigs = np.linalg.eigvalsh(state.gamma)
    if eigs[0] <= 1e-12:
        raise ValueError(
            f"covariance is singular: smallest eigenvalue {eigs[0]} "
            f"(infinitely squeezed states are not representable)"
        )
    delta = point - state.xi
    quad = float(delta @ np.linalg.solve(state.gamma, delta))
    det = float(np.prod(eigs))
    return float(np.pi ** (-state.n) * det ** (-0.5) * np.exp(-quad))
