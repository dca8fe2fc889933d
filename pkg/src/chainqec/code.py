"""Stabilizer-code constructions used on the chain.

Both families here are CSS-type block codes: an inner repetition inside each
block stacked with an outer repetition across blocks.  The two constructors
use opposite inner bases (a documented `orientation` field):

* minimal15 - inner computational-basis repetition (checks Z_i Z_{i+1},
  bit flips detected with distance 5), outer phase code across three blocks
  (checks X^{x10}, one residual Z error correctable).
* shor_code(d) - the transposed nesting on d blocks of d: inner
  Hadamard-basis repetition (checks X_i X_{i+1}, distance d against Z),
  outer majority vote (checks Z^{x2d}, distance d against X).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ResourceLimitError
from .hilbert import StateVector
from .pauli import PauliString, from_sites, symplectic_rank

_ENCODE_MAX_QUBITS = 20


@dataclass(frozen=True)
class StabilizerCode:
    n_qubits: int
    x_detecting_generators: tuple[PauliString, ...]  # Z-type checks
    z_detecting_generators: tuple[PauliString, ...]  # X-type checks
    logical_x: PauliString
    logical_z: PauliString
    blocks: tuple[tuple[int, ...], ...]
    dx: int  # distance against X errors
    dz: int  # distance against Z errors
    orientation: str  # "inner-bitflip" or "inner-phaseflip"
    codeword_builder: Callable[[], tuple[np.ndarray, np.ndarray]] = field(
        repr=False, compare=False, default=None
    )

    @property
    def generators(self) -> tuple[PauliString, ...]:
        return self.x_detecting_generators + self.z_detecting_generators

    @property
    def n_logical(self) -> int:
        return self.n_qubits - symplectic_rank(self.generators)

    def validate(self) -> None:
        gens = self.generators
        for i, g in enumerate(gens):
            for h in gens[i + 1 :]:
                if not g.commutes_with(h):
                    raise ValueError("generators do not commute")
        for logical in (self.logical_x, self.logical_z):
            for g in gens:
                if not logical.commutes_with(g):
                    raise ValueError("logical operator fails to commute with a generator")
        if self.logical_x.commutes_with(self.logical_z):
            raise ValueError("logical X and Z must anticommute")
        if symplectic_rank(gens) != len(gens):
            raise ValueError("generators are not independent")

    def codewords(self) -> tuple[StateVector, StateVector]:
        if self.n_qubits > _ENCODE_MAX_QUBITS:
            raise ResourceLimitError(
                f"dense codewords limited to {_ENCODE_MAX_QUBITS} qubits"
            )
        zero, one = self.codeword_builder()
        return StateVector(zero, self.n_qubits), StateVector(one, self.n_qubits)

    def to_tableau(self) -> str:
        """Text tableau: sign then x/z masks in hex, one operator per line."""
        lines = [
            f"# n_qubits {self.n_qubits}",
            f"# blocks {';'.join(','.join(str(s) for s in b) for b in self.blocks)}",
            f"# dx {self.dx}",
            f"# dz {self.dz}",
            f"# orientation {self.orientation}",
        ]

        def fmt(p: PauliString) -> str:
            sign = {1 + 0j: "+1", -1 + 0j: "-1", 1j: "+i", -1j: "-i"}[p.phase]
            return f"{sign} {p.x_mask:#x} {p.z_mask:#x}"

        lines.append("# x-detecting")
        lines.extend(fmt(g) for g in self.x_detecting_generators)
        lines.append("# z-detecting")
        lines.extend(fmt(g) for g in self.z_detecting_generators)
        lines.append("# logical-x")
        lines.append(fmt(self.logical_x))
        lines.append("# logical-z")
        lines.append(fmt(self.logical_z))
        return "\n".join(lines) + "\n"


def _ghz_block(size: int, sign: int) -> np.ndarray:
    v = np.zeros(1 << size, dtype=complex)
    v[0] = 1 / np.sqrt(2)
    v[(1 << size) - 1] = sign / np.sqrt(2)
    return v


def minimal15() -> StabilizerCode:
    """The 15-qubit working example: 3 blocks of 5, sites numbered left to right.

    Codewords are the block products (|00000> +/- |11111>)/sqrt(2) over all
    three blocks; the sign is the logical bit.
    """
    n = 15
    blocks = tuple(tuple(range(5 * b + 1, 5 * b + 6)) for b in range(3))
    xdet = tuple(
        from_sites(n, zs=(blk[i], blk[i + 1])) for blk in blocks for i in range(4)
    )
    zdet = tuple(
        from_sites(n, xs=blocks[b] + blocks[b + 1]) for b in range(2)
    )

    def build():
        zero = one = np.ones(1, dtype=complex)
        for _ in range(3):
            zero = np.kron(zero, _ghz_block(5, +1))
            one = np.kron(one, _ghz_block(5, -1))
        return zero, one

    return StabilizerCode(
        n_qubits=n,
        x_detecting_generators=xdet,
        z_detecting_generators=zdet,
        logical_x=from_sites(n, zs=(1, 6, 11)),  # flips every block sign
        logical_z=from_sites(n, xs=blocks[0]),
        blocks=blocks,
        dx=5,
        dz=3,
        orientation="inner-bitflip",
        codeword_builder=build,
    )


def shor_code(d: int) -> StabilizerCode:
    """Nested repetition on d blocks of d qubits, inner Hadamard basis.

    The inner level protects against Z errors with distance d, the outer
    majority vote against X errors with distance d.  Every generator and
    both logicals commute with the all-sites Z parity exactly when d is
    even.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    n = d * d
    blocks = tuple(tuple(range(d * b + 1, d * b + d + 1)) for b in range(d))
    zdet = tuple(
        from_sites(n, xs=(blk[i], blk[i + 1])) for blk in blocks for i in range(d - 1)
    )
    xdet = tuple(
        from_sites(n, zs=blocks[b] + blocks[b + 1]) for b in range(d - 1)
    )

    def build():
        if n > _ENCODE_MAX_QUBITS:
            raise ResourceLimitError(f"dense codewords limited to {_ENCODE_MAX_QUBITS} qubits")
        had = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        hd = np.ones((1, 1), dtype=complex)
        for _ in range(d):
            hd = np.kron(hd, had)
        zero = one = np.ones(1, dtype=complex)
        for _ in range(d):
            zero = np.kron(zero, hd @ _ghz_block(d, +1))
            one = np.kron(one, hd @ _ghz_block(d, -1))
        return zero, one

    return StabilizerCode(
        n_qubits=n,
        x_detecting_generators=xdet,
        z_detecting_generators=zdet,
        logical_x=from_sites(n, xs=tuple(blk[0] for blk in blocks)),
        logical_z=from_sites(n, zs=blocks[0]),
        blocks=blocks,
        dx=d,
        dz=d,
        orientation="inner-phaseflip",
        codeword_builder=build,
    )


def parity_condition(codeobj: StabilizerCode) -> bool:
    """True iff every generator and both logicals commute with Z on all qubits.

    Commutation with the global Z parity is an even X-weight condition; when
    it holds the code space has a fixed excitation parity.
    """
    ops = codeobj.generators + (codeobj.logical_x, codeobj.logical_z)
    return all(p.x_weight() % 2 == 0 for p in ops)


def encode(codeobj: StabilizerCode, alpha: complex, beta: complex) -> StateVector:
    """Return alpha |0_L> + beta |1_L>."""
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-12:
        raise ValueError("logical amplitudes must be normalised")
    zero, one = codeobj.codewords()
    return StateVector(alpha * zero.amps + beta * one.amps, codeobj.n_qubits)


def logical_readout(
    codeobj: StabilizerCode, state: StateVector
) -> tuple[complex, complex, bool]:
    """Project onto the code space; amplitudes are valid only if the flag is set."""
    if state.n_sites != codeobj.n_qubits:
        raise ValueError("size mismatch")
    zero, one = codeobj.codewords()
    a0 = complex(np.vdot(zero.amps, state.amps))
    a1 = complex(np.vdot(one.amps, state.amps))
    weight = abs(a0) ** 2 + abs(a1) ** 2
    in_codespace = bool(weight >= 1.0 - 1e-10)
    return a0, a1, in_codespace
