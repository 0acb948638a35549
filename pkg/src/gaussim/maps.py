"""Gaussian semigroup maps (alpha, A, G): validation, application, composition.

A map sends means xi -> xi A + alpha (row convention) and covariance
Gamma -> A^T Gamma A + G.  It is a physical channel iff

    G + i Sigma - i A^T Sigma A >= 0,

checked spectrally by :func:`validate_cp`.  Maps with G = 0 and symplectic A
are the unitary (Clifford) subgroup; loss, amplification, and classical
noise have G != 0 and are irreversible.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CPViolationError
from .phasespace import DEFAULT_TOL, is_symplectic, min_eigenvalue, sigma
from .states import GaussianState


@dataclass(frozen=True)
class GaussianMap:
    """A Gaussian semigroup element on ``n`` modes.

    Attributes:
        n: mode count.
        alpha: real 2n-vector, phase-space displacement.
        a: real 2n x 2n linear part; need not be symplectic.
        g: real symmetric 2n x 2n added-noise second moments.
    """

    n: int
    alpha: np.ndarray
    a: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1).copy()
        a = np.asarray(self.a, dtype=float).copy()
        g = np.asarray(self.g, dtype=float).copy()
        d = 2 * self.n
        if self.n < 1:
            raise ValueError(f"mode count must be positive, got {self.n}")
        if alpha.shape != (d,):
            raise ValueError(f"alpha has shape {alpha.shape}, expected ({d},)")
        if a.shape != (d, d):
            raise ValueError(f"linear part has shape {a.shape}, expected ({d}, {d})")
        if g.shape != (d, d):
            raise ValueError(f"noise matrix has shape {g.shape}, expected ({d}, {d})")
        g = (g + g.T) / 2.0
        for arr in (alpha, a, g):
            arr.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "g", g)

    def __eq__(self, other):
        if not isinstance(other, GaussianMap):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.alpha, other.alpha)
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.g, other.g)
        )

    def to_dict(self):
        """JSON-ready dict {n, alpha, a, g} with row-major matrices."""
        return {
            "n": self.n,
            "alpha": self.alpha.tolist(),
            "a": self.a.tolist(),
            "g": self.g.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        """Inverse of :meth:`to_dict`."""
        return cls(
            int(data["n"]),
            np.asarray(data["alpha"]),
            np.asarray(data["a"]),
            np.asarray(data["g"]),
        )


@dataclass(frozen=True)
class CPReport:
    """Outcome of a complete-positivity check.

    Truthy iff the map passed; ``min_eigenvalue`` is the smallest eigenvalue
    of G + i Sigma - i A^T Sigma A and quantifies the violation when
    negative.
    """

    ok: bool
    min_eigenvalue: float

    def __bool__(self):
        return self.ok


def cp_matrix(m):
    """The Hermitian matrix whose positivity makes the map a channel."""
    s = sigma(m.n)
    return m.g + 1j * s - 1j * (m.a.T @ s @ m.a)


def validate_cp(m, tol=DEFAULT_TOL):
    """Check the complete-positivity condition of a map.

    Args:
        m: the map to validate.
        tol (float): eigenvalues down to ``-tol`` still pass.

    Returns:
        CPReport: pass/fail plus the minimum eigenvalue as a diagnostic.
    """
    lam = min_eigenvalue(cp_matrix(m))
    return CPReport(ok=lam >= -tol, min_eigenvalue=lam)


def noise_second_moments(m):
    """Second moments of the map's implicit noise operators, minus i Sigma.

    Returns G - i A^T Sigma A; adding i Sigma back and testing positivity
    reproduces :func:`validate_cp`.  For Clifford maps this is exactly
    -i Sigma.
    """
    s = sigma(m.n)
    return m.g.astype(complex) - 1j * (m.a.T @ s @ m.a)


def apply(m, state, tol=DEFAULT_TOL, force=False):
    """Apply a map to a state: xi -> xi A + alpha, Gamma -> A^T Gamma A + G.

    Args:
        m: the map.
        state: the input state.
        tol (float): tolerance for the CP and physicality checks.
        force (bool): UNSAFE -- skip the CP check and the output physicality
            check.  Only for deliberately probing invalid maps or for hot
            loops applying maps already known to be valid.

    Returns:
        GaussianState: the transformed state (covariance symmetrized).

    Raises:
        ValueError: on mode-count mismatch.
        CPViolationError: if the map fails the CP condition (unless forced).
        PhysicalityError: if the output covariance is unphysical, which
            indicates an internal inconsistency (unless forced).
    """
    if m.n != state.n:
        raise ValueError(f"map acts on {m.n} modes but state has {state.n}")
    if not force:
        report = validate_cp(m, tol)
        if not report:
            raise CPViolationError(
                f"map is not completely positive: minimum eigenvalue "
                f"{report.min_eigenvalue}"
            )
    xi = state.xi @ m.a + m.alpha
    gamma = m.a.T @ state.gamma @ m.a + m.g
    return GaussianState(m.n, xi, gamma, check=not force)


def compose(first, second):
    """The map equivalent to applying ``first`` and then ``second``.

    Note the order: ``compose(f, s)`` acts as s(f(state)).  The composite
    of two valid channels is always a valid channel.

    Raises:
        ValueError: on mode-count mismatch.
    """
    if first.n != second.n:
        raise ValueError(f"cannot compose maps on {first.n} and {second.n} modes")
    return GaussianMap(
        first.n,
        first.alpha @ second.a + second.alpha,
        first.a @ second.a,
        second.a.T @ first.g @ second.a + second.g,
    )


def is_clifford(m, tol=DEFAULT_TOL):
    """True iff the map is unitary Gaussian: G = 0 and A symplectic."""
    if float(np.max(np.abs(m.g))) > tol:
        return False
    return is_symplectic(m.a, tol)


# ---------------------------------------------------------------------------
# Constructors.  Mode-addressed gates take the total mode count n and act as
# the identity on every mode they do not name.
# ---------------------------------------------------------------------------


def identity(n):
    """The identity map on ``n`` modes."""
    return GaussianMap(n, np.zeros(2 * n), np.eye(2 * n), np.zeros((2 * n, 2 * n)))


def displacement(alpha):
    """Phase-space displacement by the 2n-vector ``alpha``."""
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    if alpha.size % 2 != 0 or alpha.size == 0:
        raise ValueError(f"displacement vector must have even positive length, got {alpha.size}")
    n = alpha.size // 2
    return GaussianMap(n, alpha, np.eye(2 * n), np.zeros((2 * n, 2 * n)))


def symplectic(a):
    """Unitary Gaussian map with linear part ``a``; G = 0.

    Raises:
        ValueError: if ``a`` is not symplectic at the default tolerance.
    """
    a = np.asarray(a, dtype=float)
    if not is_symplectic(a):
        raise ValueError("linear part is not symplectic")
    n = a.shape[0] // 2
    return GaussianMap(n, np.zeros(2 * n), a, np.zeros((2 * n, 2 * n)))


def clifford(alpha, a):
    """General unitary Gaussian map: displacement after symplectic."""
    m = symplectic(a)
    return GaussianMap(m.n, np.asarray(alpha, dtype=float), m.a, m.g)


def _embed_block(n, modes, block):
    """Place a 2k x 2k single/two-mode matrix block into 2n x 2n, identity elsewhere."""
    k = len(modes)
    idx = np.array([*modes, *(n + m for m in modes)])
    a = np.eye(2 * n)
    a[np.ix_(idx, idx)] = block
    return a, idx


def _check_modes(n, *modes):
    if len(set(modes)) != len(modes):
        raise ValueError(f"modes must be distinct, got {modes}")
    for m in modes:
        if not 0 <= m < n:
            raise ValueError(f"mode {m} out of range for {n} modes")


def phase_shift(n, mode, theta):
    """Rotation by ``theta`` in one mode's (q, p) plane.

    Sign convention: (q, p) -> (q cos t + p sin t, -q sin t + p cos t).
    """
    _check_modes(n, mode)
    c, s = np.cos(theta), np.sin(theta)
    block = np.array([[c, -s], [s, c]])
    a, _ = _embed_block(n, [mode], block)
    return GaussianMap(n, np.zeros(2 * n), a, np.zeros((2 * n, 2 * n)))


def squeeze(n, mode, r):
    """Single-mode squeeze: q scales by e^-r, p by e^r on the given mode."""
    _check_modes(n, mode)
    block = np.diag([np.exp(-r), np.exp(r)])
    a, _ = _embed_block(n, [mode], block)
    return GaussianMap(n, np.zeros(2 * n), a, np.zeros((2 * n, 2 * n)))


def beamsplitter(n, mode_j, mode_k, theta):
    """Passive rotation by ``theta`` mixing (q_j, q_k), identically (p_j, p_k).

    Same sign convention as :func:`phase_shift`.
    """
    _check_modes(n, mode_j, mode_k)
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    block = np.zeros((4, 4))
    block[:2, :2] = rot
    block[2:, 2:] = rot
    a, _ = _embed_block(n, [mode_j, mode_k], block)
    return GaussianMap(n, np.zeros(2 * n), a, np.zeros((2 * n, 2 * n)))


def two_mode_squeeze(n, mode_j, mode_k, r):
    """Two-mode squeeze; acting on vacuum it produces the EPR state epr(r)."""
    _check_modes(n, mode_j, mode_k)
    ch, sh = np.cosh(r), np.sinh(r)
    block = np.zeros((4, 4))
    block[:2, :2] = [[ch, sh], [sh, ch]]
    block[2:, 2:] = [[ch, -sh], [-sh, ch]]
    a, _ = _embed_block(n, [mode_j, mode_k], block)
    return GaussianMap(n, np.zeros(2 * n), a, np.zeros((2 * n, 2 * n)))


def loss(n, mode, eta):
    """Pure loss with transmissivity ``eta`` on one mode.

    A = sqrt(eta) I, G = (1 - eta) I on the mode: the minimal-noise
    dissipation channel.  eta = 1 is the identity.

    Raises:
        ValueError: if ``eta`` is outside (0, 1].
    """
    _check_modes(n, mode)
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"transmissivity must be in (0, 1], got {eta}")
    a, idx = _embed_block(n, [mode], np.sqrt(eta) * np.eye(2))
    g = np.zeros((2 * n, 2 * n))
    g[np.ix_(idx, idx)] = (1.0 - eta) * np.eye(2)
    return GaussianMap(n, np.zeros(2 * n), a, g)


def amplifier(n, mode, gain):
    """Phase-insensitive linear amplifier with gain ``gain`` >= 1.

    A = sqrt(gain) I, G = (gain - 1) I on the mode: the minimum added noise
    compatible with complete positivity.

    Raises:
        ValueError: if ``gain`` < 1.
    """
    _check_modes(n, mode)
    if gain < 1.0:
        raise ValueError(f"amplifier gain must be >= 1, got {gain}")
    a, idx = _embed_block(n, [mode], np.sqrt(gain) * np.eye(2))
    g = np.zeros((2 * n, 2 * n))
    g[np.ix_(idx, idx)] = (gain - 1.0) * np.eye(2)
    return GaussianMap(n, np.zeros(2 * n), a, g)


def thermal_noise(n, mode, n_noise):
    """Classical additive Gaussian noise: A = I, G = 2 n_noise I on the mode.

    Raises:
        ValueError: if ``n_noise`` < 0.
    """
    _check_modes(n, mode)
    if n_noise < 0.0:
        raise ValueError(f"noise photon number must be nonnegative, got {n_noise}")
    g = np.zeros((2 * n, 2 * n))
    idx = np.array([mode, n + mode])
    g[np.ix_(idx, idx)] = 2.0 * n_noise * np.eye(2)
    return GaussianMap(n, np.zeros(2 * n), np.eye(2 * n), g)


def embed(m, targets, n):
    """Lift a k-mode map to ``n`` modes, acting on ``targets``, identity elsewhere.

    Args:
        m: map on k modes.
        targets: k distinct target mode indices, in the order the map's own
            modes should land on them.
        n (int): total mode count of the result.

    Raises:
        ValueError: on bad target count or out-of-range indices.
    """
    targets = [int(t) for t in targets]
    if len(targets) != m.n:
        raise ValueError(f"map acts on {m.n} modes but {len(targets)} targets given")
    _check_modes(n, *targets)
    idx = np.array([*targets, *(n + t for t in targets)])
    a = np.eye(2 * n)
    a[np.ix_(idx, idx)] = m.a
    g = np.zeros((2 * n, 2 * n))
    g[np.ix_(idx, idx)] = m.g
    alpha = np.zeros(2 * n)
    alpha[idx] = m.alpha
    return GaussianMap(n, alpha, a, g)
