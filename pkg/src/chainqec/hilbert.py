"""Exact full-Hilbert-space simulation of the chain.

State vectors are indexed so that qubit 1 is the most significant bit of the
basis index: |1,0,...,0> on N sites is index 2^(N-1).  The chain Hamiltonian
used throughout couples the field B_n to the local excitation number
(I - Z_n)/2, which makes the single-excitation block equal the tridiagonal
matrix of chain.single_excitation_matrix exactly and keeps the fermionic
mode evolution of the freefermion module exact for nonzero fields.

Evolution is excitation-number resolved: each occupied sector is
diagonalised once per chain (cached) and reused for every later time.  A
Chebyshev propagator on the sparse sector matrix is available for one-shot
evolutions where filling the cache would be wasted work (disorder sweeps).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp
from scipy.special import jv

from .chain import ChainSpec
from .errors import ResourceLimitError
from .pauli import PauliString, site_bit

_DENSITY_MATRIX_MAX_SITES = 8
_DENSE_H_MAX_SITES = 12


@dataclass
class StateVector:
    amps: np.ndarray  # 2^N complex amplitudes
    n_sites: int

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (1 << self.n_sites,):
            raise ValueError("amplitude count must be 2^n_sites")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "StateVector":
        return StateVector(self.amps / self.norm(), self.n_sites)

    def copy(self) -> "StateVector":
        return StateVector(self.amps.copy(), self.n_sites)


@dataclass
class DensityMatrix:
    mat: np.ndarray  # 2^N x 2^N, Hermitian, unit trace
    n_sites: int

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=complex)
        dim = 1 << self.n_sites
        if self.mat.shape != (dim, dim):
            raise ValueError("matrix must be 2^n x 2^n")

    def validate(self, tol: float = 1e-10) -> None:
        if np.abs(self.mat - self.mat.conj().T).max() > tol:
            raise ValueError("density matrix not Hermitian")
        if abs(np.trace(self.mat) - 1) > tol:
            raise ValueError("density matrix trace != 1")
        if np.linalg.eigvalsh(self.mat).min() < -tol:
            raise ValueError("density matrix not positive")


def basis_state(n_sites: int, excited_sites=()) -> StateVector:
    amps = np.zeros(1 << n_sites, dtype=complex)
    idx = 0
    for s in excited_sites:
        idx |= site_bit(n_sites, s)
    amps[idx] = 1.0
    return StateVector(amps, n_sites)


def from_density(state: StateVector) -> DensityMatrix:
    return DensityMatrix(np.outer(state.amps, state.amps.conj()), state.n_sites)


def apply_pauli(state: StateVector, p: PauliString) -> StateVector:
    """Return p|psi>."""
    if p.n_sites != state.n_sites:
        raise ValueError("size mismatch")
    idx = np.arange(state.amps.size, dtype=np.int64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & p.z_mask) & 1)
    out = np.empty_like(state.amps)
    out[idx ^ p.x_mask] = p.phase * signs * state.amps
    return StateVector(out, state.n_sites)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    if a.n_sites != b.n_sites:
        raise ValueError("size mismatch")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def cz_network(state: StateVector, region) -> StateVector:
    """Controlled-phase between every unordered pair of qubits in `region`.

    Diagonal: a basis state with w excitations inside the region picks up
    (-1)^(w(w-1)/2).
    """
    mask = 0
    for s in region:
        mask |= site_bit(state.n_sites, s)
    idx = np.arange(state.amps.size, dtype=np.int64)
    w = np.bitwise_count(idx & mask).astype(np.int64)
    phase = 1 - 2 * ((w * (w - 1) // 2) & 1)
    return StateVector(state.amps * phase, state.n_sites)


# ---------------------------------------------------------------------------
# excitation-sector machinery
# ---------------------------------------------------------------------------


def sector_indices(n_sites: int, weight: int) -> np.ndarray:
    """Basis indices with `weight` excited sites, in ascending combination order."""
    out = [
        sum(1 << (n_sites - s) for s in combo)
        for combo in combinations(range(1, n_sites + 1), weight)
    ]
    return np.array(out, dtype=np.int64)


def _sector_hops(n_sites: int, states: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    """For each bond n, the (row, col) pairs the hop J_n connects inside a sector."""
    lookup = {int(s): i for i, s in enumerate(states)}
    hops = []
    for n in range(1, n_sites):
        b1, b2 = 1 << (n_sites - n), 1 << (n_sites - n - 1)
        rows, cols = [], []
        for i, s in enumerate(states):
            s = int(s)
            if bool(s & b1) != bool(s & b2):
                rows.append(i)
                cols.append(lookup[s ^ b1 ^ b2])
        hops.append((np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64)))
    return hops


def _sector_diagonal(spec: ChainSpec, states: np.ndarray) -> np.ndarray:
    diag = np.zeros(states.size)
    for n in range(1, spec.n_sites + 1):
        b = spec.fields[n - 1]
        if b != 0.0:
            diag += b * ((states >> (spec.n_sites - n)) & 1)
    return diag


def sector_sparse(spec: ChainSpec, states: np.ndarray, hops=None) -> sp.csr_matrix:
    if hops is None:
        hops = _sector_hops(spec.n_sites, states)
    rows, cols, vals = [], [], []
    for n, (r, c) in enumerate(hops, start=1):
        rows.append(r)
        cols.append(c)
        vals.append(np.full(r.size, spec.couplings[n - 1]))
    rows = np.concatenate(rows) if rows else np.array([], dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.array([], dtype=np.int64)
    vals = np.concatenate(vals) if vals else np.array([])
    m = sp.csr_matrix((vals, (rows, cols)), shape=(states.size, states.size))
    diag = _sector_diagonal(spec, states)
    if np.any(diag):
        m = m + sp.diags(diag)
    return m


class _SectorCache:
    """Per-chain eigendecompositions of the occupied sectors.

    For zero-field chains the weight-w and weight-(N-w) blocks are related by
    the occupied/empty relabelling, so only the smaller of the two is ever
    diagonalised.
    """

    def __init__(self, spec: ChainSpec):
        self.spec = spec
        self._eigs: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def states(self, w: int) -> np.ndarray:
        return self._get(w)[0]

    def _get(self, w: int):
        if w in self._eigs:
            return self._eigs[w]
        n = self.spec.n_sites
        states = sector_indices(n, w)
        zero_field = not any(self.spec.fields)
        if zero_field and w > n - w:
            # occupied/empty relabelling: reuse the smaller complementary block
            st_c, evals, evecs = self._get(n - w)
            full = (1 << n) - 1
            lookup = {int(v): k for k, v in enumerate(st_c ^ full)}
            perm = np.array([lookup[int(s)] for s in states], dtype=np.int64)
            self._eigs[w] = (states, evals, evecs[perm])
            return self._eigs[w]
        h = sector_sparse(self.spec, states).toarray()
        evals, evecs = np.linalg.eigh(h)
        self._eigs[w] = (states, evals, evecs)
        return self._eigs[w]

    def propagate(self, amps: np.ndarray, w: int, t: float) -> None:
        states, evals, evecs = self._get(w)
        sub = amps[states]
        amps[states] = evecs @ (np.exp(-1j * evals * t) * (evecs.T @ sub))


_EVOLUTION_CACHE: dict[ChainSpec, _SectorCache] = {}


def _cache_for(spec: ChainSpec) -> _SectorCache:
    if spec not in _EVOLUTION_CACHE:
        if len(_EVOLUTION_CACHE) >= 8:
            _EVOLUTION_CACHE.pop(next(iter(_EVOLUTION_CACHE)))
        _EVOLUTION_CACHE[spec] = _SectorCache(spec)
    return _EVOLUTION_CACHE[spec]


def clear_evolution_cache() -> None:
    _EVOLUTION_CACHE.clear()


def sector_eig(spec: ChainSpec, weight: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cached (basis indices, eigenvalues, eigenvectors) of one excitation sector."""
    return _cache_for(spec)._get(weight)


def _occupied_weights(state: StateVector) -> list[int]:
    idx = np.nonzero(np.abs(state.amps) ** 2 > 0.0)[0]
    return sorted(set(int(np.bitwise_count(np.int64(i))) for i in idx))


def _chebyshev_sector(h: sp.csr_matrix, v: np.ndarray, t: float) -> np.ndarray:
    """e^{-iht} v via a Chebyshev expansion with Gershgorin spectral bounds."""
    radius = float(np.abs(h).sum(axis=1).max()) if h.shape[0] > 1 else float(abs(h[0, 0]))
    radius = max(radius, 1e-12)
    z = radius * t
    n_terms = int(abs(z)) + 60
    ks = np.arange(n_terms)
    coef = 2.0 * (-1j) ** (ks % 4) * jv(ks, z)
    coef[0] /= 2.0
    hs = h * (1.0 / radius)
    tm2 = v.astype(complex)
    tm1 = hs @ tm2
    out = coef[0] * tm2 + coef[1] * tm1
    for k in range(2, n_terms):
        tm0 = 2.0 * (hs @ tm1) - tm2
        out += coef[k] * tm0
        tm2, tm1 = tm1, tm0
    return out


def evolve(
    state: StateVector,
    spec: ChainSpec,
    t: float,
    tol: float = 1e-10,
    method: str = "eig",
) -> StateVector:
    """Return e^{-iHt}|psi>.

    Both methods are exact well beyond `tol`; excitation-sector weights are
    preserved identically because each sector is propagated in isolation.
    method="eig" diagonalises occupied sectors once per chain and caches
    them; method="chebyshev" does a one-shot sparse propagation instead and
    leaves no cache behind.
    """
    if spec.n_sites != state.n_sites:
        raise ValueError("size mismatch")
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if method not in ("eig", "chebyshev"):
        raise ValueError(f"unknown method {method!r}")
    amps = state.amps.copy()
    if method == "eig":
        cache = _cache_for(spec)
        for w in _occupied_weights(state):
            cache.propagate(amps, w, t)
    else:
        for w in _occupied_weights(state):
            states = sector_indices(spec.n_sites, w)
            h = sector_sparse(spec, states)
            amps[states] = _chebyshev_sector(h, amps[states], t)
    return StateVector(amps, state.n_sites)


# ---------------------------------------------------------------------------
# dense Hamiltonian, Lindblad dephasing, mode coherences
# ---------------------------------------------------------------------------


def dense_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Full 2^N x 2^N chain Hamiltonian (resource-guarded)."""
    n = spec.n_sites
    if n > _DENSE_H_MAX_SITES:
        raise ResourceLimitError(f"dense Hamiltonian limited to N <= {_DENSE_H_MAX_SITES}")
    dim = 1 << n
    h = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim, dtype=np.int64)
    for k in range(1, n):
        b1, b2 = site_bit(n, k), site_bit(n, k + 1)
        one_exc = ((idx & b1) != 0) != ((idx & b2) != 0)
        src = idx[one_exc]
        h[src ^ (b1 | b2), src] += spec.couplings[k - 1]
    diag = np.zeros(dim)
    for k in range(1, n + 1):
        diag += spec.fields[k - 1] * ((idx >> (n - k)) & 1)
    h[idx, idx] += diag
    return h


_DENSE_EIG_CACHE: dict[ChainSpec, tuple[np.ndarray, np.ndarray]] = {}


def _dense_eig(spec: ChainSpec):
    if spec not in _DENSE_EIG_CACHE:
        if len(_DENSE_EIG_CACHE) >= 8:
            _DENSE_EIG_CACHE.pop(next(iter(_DENSE_EIG_CACHE)))
        evals, evecs = np.linalg.eigh(dense_hamiltonian(spec))
        _DENSE_EIG_CACHE[spec] = (evals, evecs)
    return _DENSE_EIG_CACHE[spec]


def dense_unitary(spec: ChainSpec, t: float) -> np.ndarray:
    evals, evecs = _dense_eig(spec)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def lindblad_evolve(
    rho: DensityMatrix, spec: ChainSpec, gamma: float, t: float, step: float | None = None
) -> DensityMatrix:
    """Integrate drho/dt = -i[H,rho] - N gamma rho + gamma sum_n Z_n rho Z_n.

    Fixed-step classical 4th-order scheme; the step is chosen so that
    (scale*step)^4 <= 1e-12 with scale = ||H|| + 2 N gamma, and the trace is
    renormalised each step to absorb roundoff drift.
    """
    n = rho.n_sites
    if n != spec.n_sites:
        raise ValueError("size mismatch")
    if n > _DENSITY_MATRIX_MAX_SITES:
        raise ResourceLimitError(f"Lindblad integration limited to N <= {_DENSITY_MATRIX_MAX_SITES}")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return DensityMatrix(rho.mat.copy(), n)
    h = dense_hamiltonian(spec)
    evals, _ = _dense_eig(spec)
    scale = float(np.max(np.abs(evals))) + 2 * n * gamma + 1e-9
    if step is None:
        step = 1e-3 / scale  # (scale*step)^4 = 1e-12
    n_steps = max(1, int(np.ceil(t / step)))
    dt = t / n_steps

    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    zsigns = [1.0 - 2.0 * ((idx >> (n - k)) & 1) for k in range(1, n + 1)]

    def rhs(r: np.ndarray) -> np.ndarray:
        out = -1j * (h @ r - r @ h) - (n * gamma) * r
        for zs in zsigns:
            out += gamma * (zs[:, None] * r * zs[None, :])
        return out

    r = rho.mat.astype(complex)
    for _ in range(n_steps):
        k1 = rhs(r)
        k2 = rhs(r + 0.5 * dt * k1)
        k3 = rhs(r + 0.5 * dt * k2)
        k4 = rhs(r + dt * k3)
        r = r + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        r /= np.trace(r).real
    r = 0.5 * (r + r.conj().T)
    return DensityMatrix(r, n)


def mirror_mode(n_sites: int, mode: int) -> int:
    """Index of the spatially mirrored fermion mode (within each block of N)."""
    if 1 <= mode <= n_sites:
        return n_sites + 1 - mode
    if n_sites < mode <= 2 * n_sites:
        return 3 * n_sites + 1 - mode
    raise ValueError("mode out of range")


def chi(rho: DensityMatrix, spec: ChainSpec, n: int, t: float) -> complex:
    """Coherence of the mode that is headed for position n at the readout.

    Computed as Tr(rho_int c_{N+1-n}) with rho_int the interaction-picture
    state e^{iHt} rho e^{-iHt}; equivalently the expectation of the
    Heisenberg mode e^{-iHt} c_{N+1-n} e^{iHt} in rho.  Written this way the
    unitary dynamics drop out exactly, which is what makes the closed-form
    dephasing decay hold for every mode and initial state.
    """
    from .freefermion import jordan_wigner

    u = dense_unitary(spec, t)
    rho_int = u.conj().T @ rho.mat @ u
    c = jordan_wigner(mirror_mode(spec.n_sites, n), spec.n_sites).dense()
    return complex(np.trace(rho_int @ c))


def trajectory_sample(
    state: StateVector,
    gamma: float,
    duration: float,
    rng_seed: int,
    spec: ChainSpec,
    method: str = "eig",
) -> tuple[StateVector, tuple[tuple[float, int], ...]]:
    """One stochastic unravelling of the dephasing channel.

    Each site flips phase at Poisson rate gamma; unitary evolution runs
    between jumps.  Averaging over seeds converges to lindblad_evolve.
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    rng = np.random.Generator(np.random.Philox(key=[int(rng_seed) & (2**64 - 1), 0]))
    events: list[tuple[float, int]] = []
    for site in range(1, spec.n_sites + 1):
        for t_j in rng.uniform(0, duration, rng.poisson(gamma * duration)):
            events.append((float(t_j), site))
    events.sort()
    psi = state
    t_prev = 0.0
    for t_j, site in events:
        if t_j > t_prev:
            psi = evolve(psi, spec, t_j - t_prev, method=method)
        psi = apply_pauli(psi, PauliString(spec.n_sites, 0, site_bit(spec.n_sites, site)))
        t_prev = t_j
    if duration > t_prev:
        psi = evolve(psi, spec, duration - t_prev, method=method)
    return psi, tuple(events)


# ---------------------------------------------------------------------------
# golden-file serialisation
# ---------------------------------------------------------------------------


def state_to_text(state: StateVector) -> str:
    """One "index real imag" line per amplitude; index bit k is site N-k."""
    lines = [f"# n_sites {state.n_sites}"]
    for i, a in enumerate(state.amps):
        lines.append(f"{i} {a.real:.17g} {a.imag:.17g}")
    return "\n".join(lines) + "\n"


def state_from_text(text: str) -> StateVector:
    n_sites = None
    amps = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            toks = line[1:].split()
            if toks[:1] == ["n_sites"]:
                n_sites = int(toks[1])
                amps = np.zeros(1 << n_sites, dtype=complex)
            continue
        if amps is None:
            raise ValueError("missing n_sites header")
        i, re_s, im_s = line.split()
        amps[int(i)] = float(re_s) + 1j * float(im_s)
    if amps is None:
        raise ValueError("empty state file")
    return StateVector(amps, n_sites)
