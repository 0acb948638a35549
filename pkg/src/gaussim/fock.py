"""Brute-force truncated-Fock-space simulator used as a verification oracle.

States are dense density matrices on d^n dimensions (n <= 3), so the cost is
exponential in the mode count -- exactly the bookkeeping the covariance
engine avoids.  Nothing here shares formulas with the engine: unitaries are
matrix exponentials of quadratic generators, loss and amplification are
modeled microscopically by coupling to an ancilla mode and tracing it out,
and moments are read off operator expectation values.

Quadratures are q = a + a^dag and p = -i(a - a^dag), so [q, p] = 2i on the
sub-block below the truncation boundary and the vacuum has unit variance.
"""

from dataclasses import dataclass

import numpy as np

from . import circuit as circuit_mod
from .phasespace import sigma
from .states import GaussianState

# Largest allowed Hilbert-space dimension d^n.
MAX_DIM = 8000

# Populations at the truncation boundary above this make comparisons
# inconclusive rather than failed.
TOP_POPULATION_LIMIT = 1e-10


@dataclass
class FockState:
    """Dense density matrix on n modes, each truncated to d levels.

    ``trace_deficit`` accumulates the probability lost to truncation by
    renormalizing operations (thermal tails, quadrature projections keep it
    at zero because they renormalize by construction).
    """

    n: int
    d: int
    rho: np.ndarray
    trace_deficit: float = 0.0

    def __post_init__(self):
        dim = self.d ** self.n
        if self.n < 1 or self.n > 3:
            raise ValueError(f"oracle supports 1..3 modes, got {self.n}")
        if self.d < 2:
            raise ValueError(f"truncation dimension must be >= 2, got {self.d}")
        if dim > MAX_DIM:
            raise ValueError(f"Hilbert-space dimension {dim} exceeds cap {MAX_DIM}")
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (dim, dim):
            raise ValueError(f"density matrix has shape {rho.shape}, expected ({dim}, {dim})")
        herm_err = float(np.max(np.abs(rho - rho.conj().T)))
        if herm_err > 1e-10:
            raise ValueError(f"density matrix is not Hermitian: max deviation {herm_err}")
        trace_err = abs(float(np.trace(rho).real) - 1.0)
        if trace_err > 1e-8:
            raise ValueError(f"density matrix trace deviates from 1 by {trace_err}")
        self.rho = (rho + rho.conj().T) / 2.0

    def tensor(self):
        """The density matrix reshaped to 2n per-mode axes (kets then bras)."""
        shape = (self.d,) * self.n
        return self.rho.reshape(shape + shape)

    def validate(self):
        """Full (expensive) check: eigenvalues >= -1e-8. Returns min eigenvalue."""
        lam = float(np.linalg.eigvalsh(self.rho)[0])
        if lam < -1e-8:
            raise ValueError(f"density matrix has negative eigenvalue {lam}")
        return lam


def ladder(d):
    """Truncated annihilation operator: a|k> = sqrt(k)|k-1>."""
    return np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)


def quadrature_ops(n, d):
    """Per-mode quadrature matrices (q, p), identical for every mode.

    Args:
        n (int): mode count (for interface symmetry; the matrices do not
            depend on it).
        d (int): truncation dimension, >= 2.

    Returns:
        tuple: (q, p) as d x d complex matrices with q = a + a^dag and
        p = -i(a - a^dag).
    """
    if n < 1:
        raise ValueError(f"mode count must be positive, got {n}")
    if d < 2:
        raise ValueError(f"truncation dimension must be >= 2, got {d}")
    a = ladder(d)
    ad = a.conj().T
    return a + ad, -1j * (a - ad)


def _unitary_from_generator(x):
    """exp(x) for anti-Hermitian x, via eigendecomposition of ix."""
    h = 1j * x
    w, v = np.linalg.eigh((h + h.conj().T) / 2.0)
    return (v * np.exp(-1j * w)) @ v.conj().T


def _gate_generator(kind, params, d):
    """Anti-Hermitian generator of a gate on its own 1- or 2-mode space."""
    a = ladder(d)
    ad = a.conj().T
    if kind == "phase":
        return -1j * params["theta"] * (ad @ a)
    if kind == "squeeze":
        return 0.5 * params["r"] * (a @ a - ad @ ad)
    if kind == "displacement":
        beta = (params.get("dq", 0.0) + 1j * params.get("dp", 0.0)) / 2.0
        return beta * ad - np.conj(beta) * a
    if kind == "bs":
        return params["theta"] * (np.kron(ad, a) - np.kron(a, ad))
    if kind == "tms":
        return params["r"] * (np.kron(ad, ad) - np.kron(a, a))
    raise ValueError(f"unknown gate kind {kind!r}")


def _conjugate(state, u_small, modes):
    """rho -> U rho U^dag with U acting on the given modes."""
    n, d = state.n, state.d
    k = len(modes)
    u_t = u_small.reshape((d,) * k + (d,) * k)
    u_in = list(range(k, 2 * k))
    rho_t = state.tensor()
    out = np.tensordot(u_t, rho_t, axes=(u_in, list(modes)))
    out = np.moveaxis(out, range(k), modes)
    out = np.tensordot(u_t.conj(), out, axes=(u_in, [n + m for m in modes]))
    out = np.moveaxis(out, range(k), [n + m for m in modes])
    dim = d ** n
    return out.reshape(dim, dim)


def apply_gaussian_unitary(state, kind, modes, params):
    """Apply a quadratic-Hamiltonian unitary to the state.

    Supported kinds: ``phase`` (theta), ``squeeze`` (r), ``displacement``
    (dq, dp), ``bs`` (theta), ``tms`` (r).  ``modes`` names the 1 or 2 modes
    acted on, in generator order.
    """
    modes = tuple(int(m) for m in modes)
    expected = 2 if kind in ("bs", "tms") else 1
    if len(modes) != expected:
        raise ValueError(f"{kind} acts on {expected} mode(s), got {modes}")
    for m in modes:
        if not 0 <= m < state.n:
            raise ValueError(f"mode {m} out of range for {state.n} modes")
    u = _unitary_from_generator(_gate_generator(kind, params, state.d))
    rho = _conjugate(state, u, modes)
    return FockState(state.n, state.d, rho, state.trace_deficit)


def _trace_out_last(state_n, d, rho, keep_deficit):
    """Trace out the last of state_n modes and renormalize."""
    shape = (d,) * state_n
    rho_t = rho.reshape(shape + shape)
    reduced = np.trace(rho_t, axis1=state_n - 1, axis2=2 * state_n - 1)
    dim = d ** (state_n - 1)
    reduced = reduced.reshape(dim, dim)
    tr = float(np.trace(reduced).real)
    deficit = 1.0 - tr
    return FockState(state_n - 1, d, reduced / tr, keep_deficit + deficit)


def apply_loss(state, mode, eta):
    """Pure loss, modeled microscopically.

    Couples the mode to a vacuum ancilla through a beamsplitter with
    cos^2(theta) = eta, then traces the ancilla out.

    Raises:
        ValueError: if ``eta`` is outside (0, 1] or the ancilla would
            exceed the dimension cap.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"transmissivity must be in (0, 1], got {eta}")
    if not 0 <= mode < state.n:
        raise ValueError(f"mode {mode} out of range for {state.n} modes")
    if eta == 1.0:
        return FockState(state.n, state.d, state.rho.copy(), state.trace_deficit)
    anc = np.zeros((state.d, state.d), dtype=complex)
    anc[0, 0] = 1.0
    joint = FockState(state.n + 1, state.d, np.kron(state.rho, anc), state.trace_deficit)
    theta = np.arccos(np.sqrt(eta))
    joint = apply_gaussian_unitary(joint, "bs", (mode, state.n), {"theta": theta})
    return _trace_out_last(joint.n, joint.d, joint.rho, joint.trace_deficit)


def apply_amplifier(state, mode, gain):
    """Phase-insensitive amplifier, modeled microscopically.

    Two-mode squeezes the mode against a vacuum ancilla with
    cosh^2(r) = gain, then traces the ancilla out.
    """
    if gain < 1.0:
        raise ValueError(f"amplifier gain must be >= 1, got {gain}")
    if not 0 <= mode < state.n:
        raise ValueError(f"mode {mode} out of range for {state.n} modes")
    if gain == 1.0:
        return FockState(state.n, state.d, state.rho.copy(), state.trace_deficit)
    anc = np.zeros((state.d, state.d), dtype=complex)
    anc[0, 0] = 1.0
    joint = FockState(state.n + 1, state.d, np.kron(state.rho, anc), state.trace_deficit)
    r = np.arccosh(np.sqrt(gain))
    joint = apply_gaussian_unitary(joint, "tms", (mode, state.n), {"r": r})
    return _trace_out_last(joint.n, joint.d, joint.rho, joint.trace_deficit)


def apply_thermal_noise(state, mode, n_noise):
    """Classical additive noise as loss followed by compensating amplification.

    loss(1/(1+nbar)) then amplifier(1+nbar) leaves the amplitude unchanged
    and adds 2*nbar units of symmetric quadrature noise.
    """
    if n_noise < 0.0:
        raise ValueError(f"noise photon number must be nonnegative, got {n_noise}")
    if n_noise == 0.0:
        return FockState(state.n, state.d, state.rho.copy(), state.trace_deficit)
    out = apply_loss(state, mode, 1.0 / (1.0 + n_noise))
    return apply_amplifier(out, mode, 1.0 + n_noise)


def prepare(kind, params, d):
    """Construct an oracle state.

    Kinds and parameters:
        vacuum:   n (mode count)
        coherent: xi (length-2n means vector; displaced vacuum)
        squeezed: r (single mode)
        thermal:  nbar (single mode, explicit geometric diagonal)
        epr:      r (two-mode squeezed vacuum)
    """
    if kind == "vacuum":
        n = int(params["n"])
        rho = np.zeros((d ** n, d ** n), dtype=complex)
        rho[0, 0] = 1.0
        return FockState(n, d, rho)
    if kind == "coherent":
        xi = np.asarray(params["xi"], dtype=float).reshape(-1)
        n = xi.size // 2
        state = prepare("vacuum", {"n": n}, d)
        for m in range(n):
            state = apply_gaussian_unitary(
                state, "displacement", (m,), {"dq": xi[m], "dp": xi[n + m]}
            )
        return state
    if kind == "squeezed":
        state = prepare("vacuum", {"n": 1}, d)
        return apply_gaussian_unitary(state, "squeeze", (0,), {"r": params["r"]})
    if kind == "thermal":
        nbar = float(params["nbar"])
        if nbar < 0:
            raise ValueError(f"mean photon number must be nonnegative, got {nbar}")
        k = np.arange(d)
        weights = (nbar / (1.0 + nbar)) ** k / (1.0 + nbar) if nbar > 0 else (k == 0).astype(float)
        deficit = 1.0 - float(weights.sum())
        rho = np.diag(weights / weights.sum()).astype(complex)
        return FockState(1, d, rho, deficit)
    if kind == "epr":
        state = prepare("vacuum", {"n": 2}, d)
        return apply_gaussian_unitary(state, "tms", (0, 1), {"r": params["r"]})
    raise ValueError(f"unknown state kind {kind!r}")


# ---------------------------------------------------------------------------
# Moments and comparison against the covariance engine
# ---------------------------------------------------------------------------


def reduce_to(state, modes):
    """Partial trace down to the given modes (ascending), as a small matrix."""
    modes = sorted(set(int(m) for m in modes))
    n, d = state.n, state.d
    rho_t = state.tensor()
    current = list(range(n))
    for m in reversed(range(n)):
        if m in modes:
            continue
        pos = current.index(m)
        rho_t = np.trace(rho_t, axis1=pos, axis2=len(current) + pos)
        current.remove(m)
    dim = d ** len(modes)
    return rho_t.reshape(dim, dim)


def _mode_population(state, mode):
    return np.diag(reduce_to(state, [mode])).real


def top_population(state):
    """Largest boundary-level population over all modes.

    Diagnoses whether the truncation was large enough for the state to be
    trusted; comparisons with a value above TOP_POPULATION_LIMIT are
    inconclusive.  Looks at the top two levels because states with a photon
    number parity (squeezed vacua) leave every other level exactly empty.
    """
    return max(
        float(np.max(_mode_population(state, m)[-2:])) for m in range(state.n)
    )


def quadrature_moments(state):
    """Means and covariance of the quadratures, read off the density matrix.

    Evaluates the full complex second-moment matrix <dz dz^dag> - i Sigma
    from operator expectations and checks that its imaginary part cancels
    (it must, while the commutation relations hold on the occupied levels).

    Returns:
        tuple: (means (2n,), covariance (2n, 2n)) as real arrays.

    Raises:
        ValueError: if the imaginary residual exceeds 1e-8, which signals
            an undersized truncation.
    """
    n, d = state.n, state.d
    q, p = quadrature_ops(n, d)
    ops = [q if i < n else p for i in range(2 * n)]
    mode_of = [i % n for i in range(2 * n)]

    singles = {m: reduce_to(state, [m]) for m in range(n)}
    pairs = {}
    for a in range(n):
        for b in range(a + 1, n):
            pairs[(a, b)] = reduce_to(state, [a, b])

    means = np.array([
        float(np.trace(singles[mode_of[i]] @ ops[i]).real) for i in range(2 * n)
    ])

    second = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(2 * n):
        for j in range(2 * n):
            mi, mj = mode_of[i], mode_of[j]
            if mi == mj:
                second[i, j] = np.trace(singles[mi] @ (ops[i] @ ops[j]))
            else:
                a, b = min(mi, mj), max(mi, mj)
                op_a = ops[i] if mi == a else ops[j]
                op_b = ops[j] if mj == b else ops[i]
                second[i, j] = np.trace(pairs[(a, b)] @ np.kron(op_a, op_b))

    gamma_c = second - np.outer(means, means) - 1j * sigma(n)
    residual = float(np.max(np.abs(gamma_c.imag)))
    if residual > 1e-8:
        raise ValueError(
            f"covariance has imaginary residual {residual}; truncation too small"
        )
    return means, gamma_c.real


@dataclass(frozen=True)
class CompareReport:
    """Result of checking the engine's (means, covariance) against the oracle."""

    max_mean_dev: float
    max_cov_dev: float
    top_population: float
    tol: float

    @property
    def conclusive(self):
        return self.top_population < TOP_POPULATION_LIMIT

    @property
    def passed(self):
        return self.conclusive and self.max_mean_dev <= self.tol and self.max_cov_dev <= self.tol

    @property
    def status(self):
        if not self.conclusive:
            return "inconclusive"
        return "pass" if self.passed else "fail"


def compare(state, gaussian, tol=1e-6):
    """Compare oracle moments against a GaussianState.

    Args:
        state (FockState): oracle state.
        gaussian (GaussianState): engine state on the same modes.
        tol (float): maximum allowed absolute deviation.

    Returns:
        CompareReport: deviations, truncation diagnostic, and verdict.
    """
    if state.n != gaussian.n:
        raise ValueError(f"mode counts differ: oracle {state.n}, engine {gaussian.n}")
    means, cov = quadrature_moments(state)
    return CompareReport(
        max_mean_dev=float(np.max(np.abs(means - gaussian.xi))),
        max_cov_dev=float(np.max(np.abs(cov - gaussian.gamma))),
        top_population=top_population(state),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# Quadrature projection (conditional states) and circuit execution
# ---------------------------------------------------------------------------


def quadrature_wavefunction(d, value):
    """Oscillator eigenfunctions evaluated at a quadrature value.

    Component k is <k|q = value> for q = a + a^dag, via the stable
    normalized Hermite recurrence.
    """
    x = value / np.sqrt(2.0)
    psi = np.zeros(d)
    psi[0] = (2.0 * np.pi) ** (-0.25) * np.exp(-value ** 2 / 4.0)
    if d > 1:
        psi[1] = x * np.sqrt(2.0) * psi[0]
    for k in range(1, d - 1):
        psi[k + 1] = x * np.sqrt(2.0 / (k + 1)) * psi[k] - np.sqrt(k / (k + 1.0)) * psi[k - 1]
    return psi


def project_quadrature(state, mode, value, theta=0.0):
    """Condition on measuring q cos(theta) + p sin(theta) = value on a mode.

    Projects onto the (approximate, truncated) quadrature eigenvector and
    renormalizes; the measured mode is removed.

    Returns:
        FockState on n - 1 modes.
    """
    if not 0 <= mode < state.n:
        raise ValueError(f"mode {mode} out of range for {state.n} modes")
    if state.n == 1:
        raise ValueError("cannot project away the only mode")
    if theta != 0.0:
        state = apply_gaussian_unitary(state, "phase", (mode,), {"theta": theta})
    w = quadrature_wavefunction(state.d, value).astype(complex)
    n = state.n
    rho_t = state.tensor()
    out = np.tensordot(w.conj(), rho_t, axes=([0], [mode]))
    out = np.tensordot(w, out, axes=([0], [n - 1 + mode]))
    dim = state.d ** (n - 1)
    out = out.reshape(dim, dim)
    norm = float(np.trace(out).real)
    if norm <= 0:
        raise ValueError("projection has vanishing probability density")
    return FockState(n - 1, state.d, out / norm, state.trace_deficit)


def run_circuit(circ, d):
    """Execute a deterministic circuit in the truncated Fock space.

    Supports preparations and gates; measurements, feedforward, and raw
    maps are outside the oracle's scope and rejected.  ``output``
    instructions are ignored.
    """
    state = None
    for index, instr in enumerate(circ.instructions):
        if isinstance(instr, circuit_mod.Prepare):
            params = dict(instr.params)
            if instr.kind == "vacuum":
                params["n"] = circ.n
            state = prepare(instr.kind, params, d)
        elif isinstance(instr, circuit_mod.Gate):
            if state is None:
                state = prepare("vacuum", {"n": circ.n}, d)
            name, modes, params = instr.name, instr.modes, instr.params
            if name == "disp":
                state = apply_gaussian_unitary(state, "displacement", modes, params)
            elif name in ("phase", "squeeze", "bs", "tms"):
                state = apply_gaussian_unitary(state, name, modes, params)
            elif name == "loss":
                state = apply_loss(state, modes[0], params["eta"])
            elif name == "amp":
                state = apply_amplifier(state, modes[0], params["g"])
            elif name == "noise":
                state = apply_thermal_noise(state, modes[0], params["nbar"])
            else:
                raise ValueError(f"unknown gate {name!r}")
        elif isinstance(instr, circuit_mod.Output):
            continue
        else:
            raise ValueError(
                f"instruction {index} ({type(instr).__name__}) is outside the oracle's scope"
            )
    if state is None:
        state = prepare("vacuum", {"n": circ.n}, d)
    return state
