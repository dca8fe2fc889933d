"""Error-scenario generators.

Each scenario produces the exact evolved state handed to the decoder:
a single phase flip injected mid-transfer, a timing offset on the readout,
a disorder instance of the couplings, or one stochastic dephasing
trajectory.  Scenarios are reproducible from (kind, parameters, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, single_excitation_matrix
from .hilbert import StateVector, apply_pauli, evolve
from .pauli import PauliString, site_bit

_KINDS = ("single_z", "dephasing", "timing", "coupling")


@dataclass(frozen=True)
class ErrorScenario:
    kind: str
    parameters: dict

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "parameters": self.parameters}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ErrorScenario":
        d = json.loads(text)
        return cls(d["kind"], d["parameters"])


def single_z_scenario(site: int, t_err: float, total_time: float | None = None) -> ErrorScenario:
    params = {"site": int(site), "t_err": float(t_err)}
    if total_time is not None:
        params["total_time"] = float(total_time)
    return ErrorScenario("single_z", params)


def timing_scenario(delta: float) -> ErrorScenario:
    return ErrorScenario("timing", {"delta": float(delta)})


def coupling_scenario(f: float, seed: int) -> ErrorScenario:
    if not 0 <= f < 1:
        raise ValueError("disorder fraction must be in [0, 1)")
    return ErrorScenario("coupling", {"f": float(f), "seed": int(seed)})


def dephasing_trajectory_scenario(
    gamma: float, duration: float | None = None, seed: int = 0
) -> ErrorScenario:
    """Descriptor for one Poisson dephasing trajectory (consumed by trajectory_sample)."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    params = {"gamma": float(gamma), "seed": int(seed)}
    if duration is not None:
        params["duration"] = float(duration)
    return ErrorScenario("dephasing", params)


def inject_single_z(
    state: StateVector,
    spec: ChainSpec,
    site: int,
    t_err: float,
    total_time: float,
    method: str = "eig",
) -> StateVector:
    """Evolve to t_err, flip the phase of one site, evolve out to total_time."""
    if not 1 <= site <= spec.n_sites:
        raise ValueError("site out of range")
    if not 0 <= t_err <= total_time:
        raise ValueError("need 0 <= t_err <= total_time")
    psi = evolve(state, spec, t_err, method=method)
    psi = apply_pauli(psi, PauliString(spec.n_sites, 0, site_bit(spec.n_sites, site)))
    return evolve(psi, spec, total_time - t_err, method=method)


def timing_offset(
    state: StateVector, spec: ChainSpec, nominal: float, delta: float, method: str = "eig"
) -> tuple[StateVector, float]:
    """Evolve for nominal + delta; also report |delta| * lambda_max.

    The report is the caller's handle on the perturbative condition: the
    offset is a small error only while it is well below 1.
    """
    lam_max = float(np.max(np.abs(np.linalg.eigvalsh(single_excitation_matrix(spec)))))
    psi = evolve(state, spec, nominal + delta, method=method)
    return psi, abs(delta) * lam_max


def coupling_disorder(spec: ChainSpec, f: float, rng_seed: int) -> tuple[ChainSpec, float]:
    """Multiply each coupling by an independent uniform draw from [1-f, 1+f].

    Fields are left untouched (pass through perturb_fields=True on
    disordered_spec for exploratory runs).  Returns the perturbed spec and
    the largest singular value of the single-excitation perturbation.
    """
    return disordered_spec(spec, f, rng_seed, perturb_fields=False)


def disordered_spec(
    spec: ChainSpec, f: float, rng_seed: int, perturb_fields: bool = False
) -> tuple[ChainSpec, float]:
    if not 0 <= f < 1:
        raise ValueError("disorder fraction must be in [0, 1)")
    rng = np.random.Generator(np.random.Philox(key=[int(rng_seed) & (2**64 - 1), 1]))
    js = np.array(spec.couplings) * rng.uniform(1 - f, 1 + f, spec.n_sites - 1)
    bs = np.array(spec.fields)
    if perturb_fields:
        bs = bs * rng.uniform(1 - f, 1 + f, spec.n_sites)
    perturbed = ChainSpec(spec.n_sites, tuple(js), tuple(bs))
    dh = single_excitation_matrix(perturbed) - single_excitation_matrix(spec)
    zeta_max = float(np.max(np.abs(np.linalg.eigvalsh(dh)))) if spec.n_sites else 0.0
    return perturbed, zeta_max
