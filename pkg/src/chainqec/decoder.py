"""Modified syndrome decoding for chain-propagated errors.

The correction runs in two stages.  Bit-flip checks are measured first; the
decoded flip locations get X corrections plus a trailing-Z string fixed by a
parity rule: a Z lands on every site holding an odd number of detected flips
strictly on the configured side (below each flip for the revival setup,
above it after the controlled-phase network of the transfer setup).  The
residual Z errors sitting on the flip sites are then handled by the phase
checks, with one extra rule on three-block codes: a phase syndrome pointing
at a block with no detected flip, while flips exist elsewhere, is
reinterpreted as phase errors on the other two blocks.

Every syndrome outcome is tracked as an explicit branch with its Born
probability; success_probability is the probability-weighted squared
overlap with the reference state over all leaves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .code import StabilizerCode, encode
from .hilbert import StateVector, apply_pauli, cz_network
from .pauli import PauliString, popcount

_EXACT_ZERO = 0.0


@dataclass
class SyndromeBranch:
    outcomes: tuple[int, ...]  # one bit per measured generator, 1 = eigenvalue -1
    probability: float
    post_state: StateVector


@dataclass(frozen=True)
class BranchRecord:
    x_outcomes: tuple[int, ...]
    z_outcomes: tuple[int, ...]
    probability: float
    correction: PauliString
    fidelity: float
    corrected: bool  # False when a stage flagged the syndrome as undecodable


@dataclass
class CorrectionReport:
    branches: list[BranchRecord]
    success_probability: float
    discarded_mass: float
    metric: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "success_probability": self.success_probability,
                "discarded_mass": self.discarded_mass,
                "metric": self.metric,
                "branches": [
                    {
                        "x_outcomes": "".join(map(str, b.x_outcomes)),
                        "z_outcomes": "".join(map(str, b.z_outcomes)),
                        "probability": b.probability,
                        "correction": b.correction.label(),
                        "fidelity": b.fidelity,
                        "corrected": b.corrected,
                    }
                    for b in self.branches
                ],
            }
        )


@dataclass
class DecodeOptions:
    mode: str = "revival"  # "revival" or "general"
    alpha: complex = 1 / np.sqrt(2)
    beta: complex = 1 / np.sqrt(2)
    prune_below: float = 0.0
    reference: StateVector | None = None  # full-size (revival) or region-size (general)
    success_metric: str = "fidelity"  # or "threshold"
    threshold_eps: float = 1e-6
    trailing_side: str | None = None  # default: "below" in revival, "above" in general
    # general mode: each excitation reaching the far end carries the chain's
    # known arrival phase (TransferReport.global_phase); the receiver undoes
    # it per region excitation along with the controlled-phase network
    arrival_phase: complex = 1 + 0j
    # expected syndrome keys of a clean arrival (x, z); transfer conjugates the
    # stabilizers with mode-dependent signs, so a clean general-mode arrival can
    # sit in the -1 eigenspace of some checks.  Decoding is relative to this.
    syndrome_frame: tuple[int, int] = (0, 0)


# ---------------------------------------------------------------------------
# projective measurement of commuting generators
# ---------------------------------------------------------------------------


def measure_generators(
    state: StateVector, generators, prune_below: float = 0.0
) -> tuple[list[SyndromeBranch], float]:
    """Branch over all outcomes of measuring the commuting `generators` in order.

    Returns (branches, discarded_mass).  With prune_below = 0 only branches
    of exactly zero probability are dropped, so the retained probabilities
    sum to 1.  Post-states are normalised dense vectors: the tree has at
    most 2^len(generators) leaves, so keep the generator list modest.
    """
    gens = list(generators)
    for i, g in enumerate(gens):
        if g.n_sites != state.n_sites:
            raise ValueError("generator size mismatch")
        for h in gens[i + 1 :]:
            if not g.commutes_with(h):
                raise ValueError("generators must mutually commute")
    branches = [((), state.amps.astype(complex), 1.0)]
    discarded = 0.0
    for g in gens:
        nxt = []
        for outcomes, amps, _ in branches:
            ga = apply_pauli(StateVector(amps, state.n_sites), g).amps
            for bit, proj in ((0, 0.5 * (amps + ga)), (1, 0.5 * (amps - ga))):
                p = float(np.vdot(proj, proj).real)
                if p <= _EXACT_ZERO or p < prune_below:
                    discarded += p
                    continue
                nxt.append((outcomes + (bit,), proj, p))
        branches = nxt
    out = []
    for outcomes, amps, _ in branches:
        p = float(np.vdot(amps, amps).real)
        out.append(SyndromeBranch(outcomes, p, StateVector(amps / np.sqrt(p), state.n_sites)))
    return out, discarded


# ---------------------------------------------------------------------------
# syndrome decode tables
# ---------------------------------------------------------------------------


def _syndrome_key(gens, x_mask: int, z_mask: int) -> int:
    """Key with bit g set iff the error (x_mask, z_mask) anticommutes with gens[g]."""
    key = 0
    for g, gen in enumerate(gens):
        if (popcount(gen.x_mask & z_mask) + popcount(gen.z_mask & x_mask)) & 1:
            key |= 1 << g
    return key


def _x_decode_table(codeobj: StabilizerCode) -> dict[int, tuple[int, ...]]:
    """Syndrome key -> flip sites, for flip patterns up to floor((dx-1)/2)."""
    n = codeobj.n_qubits
    gens = codeobj.x_detecting_generators
    table: dict[int, tuple[int, ...]] = {0: ()}
    for w in range(1, (codeobj.dx - 1) // 2 + 1):
        for sites in combinations(range(1, n + 1), w):
            mask = 0
            for s in sites:
                mask |= 1 << (n - s)
            table.setdefault(_syndrome_key(gens, mask, 0), sites)
    return table


def _z_decode_table(codeobj: StabilizerCode) -> dict[int, tuple[int, ...]]:
    """Syndrome key -> Z-error sites, for patterns up to floor((dz-1)/2).

    Collisions keep the first (lowest) representative; for the block codes
    here any two same-block single-Z patterns that collide differ by a
    stabilizer, so the representative acts identically on the code space.
    """
    gens = codeobj.z_detecting_generators
    n = codeobj.n_qubits
    table: dict[int, tuple[int, ...]] = {0: ()}
    for w in range(1, (codeobj.dz - 1) // 2 + 1):
        for sites in combinations(range(1, n + 1), w):
            z_mask = 0
            for s in sites:
                z_mask |= 1 << (n - s)
            table.setdefault(_syndrome_key(gens, 0, z_mask), sites)
    return table


def _trailing_mask(n_sites: int, flips, side: str) -> int:
    """Z-mask of the parity rule: Z wherever an odd number of flips lies on `side`."""
    mask = 0
    flips = tuple(flips)
    for q in range(1, n_sites + 1):
        if q in flips:
            continue
        if side == "below":
            count = sum(1 for s in flips if s > q)
        elif side == "above":
            count = sum(1 for s in flips if s < q)
        else:
            raise ValueError("trailing side must be 'below' or 'above'")
        if count & 1:
            mask |= 1 << (n_sites - q)
    return mask


def x_stage(
    branch: SyndromeBranch, codeobj: StabilizerCode, trailing_side: str = "below"
) -> tuple[PauliString | None, tuple[int, ...]]:
    """Decode a bit-flip syndrome branch into its correction.

    Returns (correction, flip_sites); the correction is None when the
    syndrome matches no pattern the code can resolve (the branch is then
    scored as-is rather than raising).
    """
    key = 0
    for g, bit in enumerate(branch.outcomes):
        key |= int(bit) << g
    flips = _x_decode_table(codeobj).get(key)
    if flips is None:
        return None, ()
    n = codeobj.n_qubits
    x_mask = 0
    for s in flips:
        x_mask |= 1 << (n - s)
    return PauliString(n, x_mask, _trailing_mask(n, flips, trailing_side)), flips


def _block_of(codeobj: StabilizerCode, site: int) -> int:
    for b, blk in enumerate(codeobj.blocks):
        if site in blk:
            return b
    raise ValueError(f"site {site} not in any block")


def _z_correction_sites(
    codeobj: StabilizerCode, decoded_sites, x_flip_sites
) -> tuple[int, ...] | None:
    """Turn a decoded Z pattern into correction sites, applying the
    cross-reference rule of the three-block code: a single phase error
    decoded onto a block holding no detected flip, while flips exist in
    other blocks, really means one phase error on each of the other two
    blocks (at their flip sites)."""
    if decoded_sites is None:
        return None
    flip_blocks = {_block_of(codeobj, s) for s in x_flip_sites}

    def block_site(b: int) -> int:
        # put the Z on the block's detected flip when it has one; on the
        # inner-bitflip codes any site of the block is equivalent anyway
        return next((s for s in x_flip_sites if s in codeobj.blocks[b]), codeobj.blocks[b][0])

    if len(decoded_sites) == 1 and len(codeobj.blocks) == 3:
        beta = _block_of(codeobj, decoded_sites[0])
        if beta not in flip_blocks and flip_blocks:
            return tuple(block_site(b) for b in range(3) if b != beta)
        if codeobj.orientation == "inner-bitflip":
            return (block_site(beta),)
    return tuple(decoded_sites)


def _sites_to_zmask(n: int, sites) -> int:
    mask = 0
    for s in sites:
        mask |= 1 << (n - s)
    return mask


def z_stage(
    branch: SyndromeBranch, codeobj: StabilizerCode, x_flip_sites
) -> PauliString | None:
    """Decode a phase syndrome branch (measured after the X corrections)."""
    key = 0
    for g, bit in enumerate(branch.outcomes):
        key |= int(bit) << g
    decoded = _z_decode_table(codeobj).get(key)
    sites = _z_correction_sites(codeobj, decoded, tuple(x_flip_sites))
    if sites is None:
        return None
    n = codeobj.n_qubits
    return PauliString(n, 0, _sites_to_zmask(n, sites))


# ---------------------------------------------------------------------------
# full pipeline (sparse branch engine)
# ---------------------------------------------------------------------------


def _reverse_bits(mask: int, n: int) -> int:
    out = 0
    for k in range(n):
        if mask & (1 << k):
            out |= 1 << (n - 1 - k)
    return out


def mirror_code(codeobj: StabilizerCode) -> StabilizerCode:
    """The site-mirrored code (qubit k <-> qubit n+1-k), as it arrives after transfer."""
    n = codeobj.n_qubits

    def rev(p: PauliString) -> PauliString:
        return PauliString(n, _reverse_bits(p.x_mask, n), _reverse_bits(p.z_mask, n), p.phase)

    return StabilizerCode(
        n_qubits=n,
        x_detecting_generators=tuple(rev(g) for g in codeobj.x_detecting_generators),
        z_detecting_generators=tuple(rev(g) for g in codeobj.z_detecting_generators),
        logical_x=rev(codeobj.logical_x),
        logical_z=rev(codeobj.logical_z),
        blocks=tuple(
            tuple(sorted(n + 1 - s for s in blk)) for blk in reversed(codeobj.blocks)
        ),
        dx=codeobj.dx,
        dz=codeobj.dz,
        orientation=codeobj.orientation,
        codeword_builder=codeobj.codeword_builder,
    )


def _restore_region(state: StateVector, m_qubits: int, arrival_phase: complex) -> np.ndarray:
    """Undo the arrival dressing on the last m_qubits sites.

    Applies the controlled-phase network over the region and removes the
    known per-excitation arrival phase, after which the plain mirrored code
    is restored up to deterministic check signs.
    """
    n_total = state.n_sites
    psi = cz_network(state, range(n_total - m_qubits + 1, n_total + 1)).amps
    if arrival_phase != 1:
        if abs(abs(arrival_phase) - 1) > 1e-9:
            raise ValueError("arrival phase must have unit modulus")
        idx = np.arange(psi.size, dtype=np.int64)
        w = np.bitwise_count(idx & ((1 << m_qubits) - 1))
        psi = psi * np.conj(arrival_phase) ** w
    return psi


def clean_arrival_frame(
    clean_state: StateVector, codeobj: StabilizerCode, arrival_phase: complex = 1 + 0j
) -> tuple[int, int]:
    """Syndrome keys a noiseless general-mode arrival produces.

    `clean_state` is the full chain state after evolving the encoded state
    for the transfer time, before the controlled-phase network.  The
    mirrored checks are deterministic (+/-1) on it after the dressing is
    undone; the returned keys feed DecodeOptions.syndrome_frame.
    """
    n_total = clean_state.n_sites
    psi = StateVector(_restore_region(clean_state, codeobj.n_qubits, arrival_phase), n_total)
    work = mirror_code(codeobj)
    keys = []
    for gens in (work.x_detecting_generators, work.z_detecting_generators):
        key = 0
        for g, gen in enumerate(gens):
            embedded = PauliString(n_total, gen.x_mask, gen.z_mask, gen.phase)
            val = np.vdot(psi.amps, apply_pauli(psi, embedded).amps).real
            if abs(abs(val) - 1) > 1e-6:
                raise ValueError("clean state does not have deterministic syndromes")
            if val < 0:
                key |= 1 << g
        keys.append(key)
    return keys[0], keys[1]


def _syndrome_keys_for_indices(gens, idx: np.ndarray) -> np.ndarray:
    keys = np.zeros(idx.shape, dtype=np.int64)
    for g, gen in enumerate(gens):
        if gen.x_mask:
            raise ValueError("bit-flip checks must be Z-type (diagonal)")
        keys |= (np.bitwise_count(idx & gen.z_mask) & 1).astype(np.int64) << g
    return keys


def _z_outcome_split(ind: np.ndarray, amp: np.ndarray, gen: PauliString):
    """Split a sparse branch by the two outcomes of an X-type generator."""
    if gen.z_mask or gen.phase != 1:
        raise ValueError("phase checks must be plain X-type")
    flipped_ind = ind ^ gen.x_mask
    union = np.union1d(ind, flipped_ind)
    v = np.zeros(union.size, dtype=complex)
    v[np.searchsorted(union, ind)] = amp
    w = np.zeros(union.size, dtype=complex)
    w[np.searchsorted(union, flipped_ind)] = amp
    return union, 0.5 * (v + w), 0.5 * (v - w)


def decode_pipeline(
    state: StateVector, codeobj: StabilizerCode, options: DecodeOptions | None = None
) -> CorrectionReport:
    """Run the two-stage correction on `state`, tracking every syndrome branch.

    Revival mode expects the state on exactly the code qubits with the code
    in its original orientation.  General mode expects the code to have
    arrived (mirrored) on the last n_qubits sites of a longer chain: the
    controlled-phase network is applied to that region first, the mirrored
    generators are measured, and fidelity is taken against
    options.reference, the expected pure state of the region.
    """
    opt = options or DecodeOptions()
    n_total = state.n_sites
    if opt.mode == "revival":
        if codeobj.n_qubits != n_total:
            raise ValueError("revival mode needs the state on exactly the code qubits")
        work = codeobj
        side = opt.trailing_side or "below"
        psi = state.amps
        ref = (opt.reference or encode(codeobj, opt.alpha, opt.beta)).amps
        region_bits = None
    elif opt.mode == "general":
        m = codeobj.n_qubits
        if n_total < m:
            raise ValueError("state smaller than the code")
        if opt.reference is None:
            raise ValueError("general mode needs options.reference for the region")
        psi = _restore_region(state, m, opt.arrival_phase)
        work = mirror_code(codeobj)
        side = opt.trailing_side or "above"
        ref = opt.reference.amps
        region_bits = m
    else:
        raise ValueError(f"unknown mode {opt.mode!r}")

    xgens = work.x_detecting_generators
    zgens = work.z_detecting_generators
    xtable = _x_decode_table(work)
    ztable = _z_decode_table(work)
    m_qubits = work.n_qubits

    nz = np.nonzero(np.abs(psi) ** 2 > _EXACT_ZERO)[0].astype(np.int64)
    keys = _syndrome_keys_for_indices(xgens, nz)
    order = np.argsort(keys, kind="stable")
    nz, keys = nz[order], keys[order]
    cuts = np.nonzero(np.diff(keys))[0] + 1
    groups = np.split(np.arange(nz.size), cuts)

    def leaf_overlap(ind: np.ndarray, amp: np.ndarray) -> float:
        """|<ref| branch>|^2 without normalising (general mode: region-contracted)."""
        if region_bits is None:
            return float(abs(np.sum(np.conj(ref[ind]) * amp)) ** 2)
        low = (1 << region_bits) - 1
        rest = ind >> region_bits
        w = np.zeros(int(rest.max()) + 1 if rest.size else 1, dtype=complex)
        np.add.at(w, rest, np.conj(ref[ind & low]) * amp)
        return float(np.sum(np.abs(w) ** 2))

    x_frame, z_frame = opt.syndrome_frame
    records: list[BranchRecord] = []
    discarded = 0.0
    identity = PauliString(m_qubits, 0, 0)
    for grp in groups:
        ind = nz[grp]
        amp = psi[ind]
        key = int(keys[grp[0]])
        p_branch = float(np.sum(np.abs(amp) ** 2))
        if p_branch < opt.prune_below:
            discarded += p_branch
            continue
        x_out = tuple((key >> g) & 1 for g in range(len(xgens)))
        flips = xtable.get(key ^ x_frame)
        if flips is None:
            records.append(
                BranchRecord(
                    x_out, (), p_branch, identity,
                    leaf_overlap(ind, amp) / p_branch, corrected=False,
                )
            )
            continue
        x_mask = 0
        for s in flips:
            x_mask |= 1 << (m_qubits - s)
        z_mask = _trailing_mask(m_qubits, flips, side)
        corr_x = PauliString(m_qubits, x_mask, z_mask)
        sign = 1.0 - 2.0 * (np.bitwise_count(ind & z_mask) & 1)
        ind2, amp2 = ind ^ x_mask, amp * sign
        srt = np.argsort(ind2)
        stack = [((), ind2[srt], amp2[srt])]
        for gen in zgens:
            nxt = []
            for z_out, bi, ba in stack:
                union, plus, minus = _z_outcome_split(bi, ba, gen)
                for bit, vec in ((0, plus), (1, minus)):
                    keep = np.abs(vec) ** 2 > _EXACT_ZERO
                    if not keep.any():
                        continue
                    nxt.append((z_out + (bit,), union[keep], vec[keep]))
            stack = nxt
        for z_out, bi, ba in stack:
            p_leaf = float(np.sum(np.abs(ba) ** 2))
            if p_leaf < opt.prune_below:
                discarded += p_leaf
                continue
            zkey = 0
            for g, bit in enumerate(z_out):
                zkey |= bit << g
            zc_sites = _z_correction_sites(work, ztable.get(zkey ^ z_frame), flips)
            if zc_sites is None:
                records.append(
                    BranchRecord(
                        x_out, z_out, p_leaf, corr_x,
                        leaf_overlap(bi, ba) / p_leaf, corrected=False,
                    )
                )
                continue
            zc_mask = _sites_to_zmask(m_qubits, zc_sites)
            ba_corr = ba * (1.0 - 2.0 * (np.bitwise_count(bi & zc_mask) & 1))
            fid = leaf_overlap(bi, ba_corr) / p_leaf
            records.append(
                BranchRecord(
                    x_out, z_out, p_leaf,
                    corr_x * PauliString(m_qubits, 0, zc_mask), fid, corrected=True,
                )
            )

    if opt.success_metric == "fidelity":
        success = float(sum(b.probability * b.fidelity for b in records))
    elif opt.success_metric == "threshold":
        success = float(
            sum(b.probability for b in records if b.fidelity >= 1 - opt.threshold_eps)
        )
    else:
        raise ValueError(f"unknown metric {opt.success_metric!r}")
    return CorrectionReport(records, success, discarded, opt.success_metric)


# ---------------------------------------------------------------------------
# vectorised revival evaluator (no per-branch records; used by sweeps)
# ---------------------------------------------------------------------------


class RevivalEvaluator:
    """Success probability of the revival-mode pipeline, fully vectorised.

    Precomputes, for every possible bit-flip syndrome key, the correction
    masks and the block bookkeeping, plus the projected-and-corrected
    reference vectors for every phase outcome; a decode is then a handful of
    gathers and segment sums.  Agrees with decode_pipeline to roundoff.
    """

    def __init__(self, codeobj: StabilizerCode, alpha: complex, beta: complex,
                 trailing_side: str = "below"):
        n = codeobj.n_qubits
        self.n_qubits = n
        if codeobj.orientation != "inner-bitflip":
            raise ValueError("evaluator supports the inner-bitflip block codes")
        xgens = codeobj.x_detecting_generators
        zgens = codeobj.z_detecting_generators
        n_x, n_z = len(xgens), len(zgens)
        if n_x > 20 or n_z > 6:
            raise ValueError("evaluator sized for small generator sets")
        for gen in zgens:
            if gen.z_mask or gen.phase != 1:
                raise ValueError("phase checks must be plain X-type")
        dim = 1 << n
        idx = np.arange(dim, dtype=np.int64)
        self.keys = _syndrome_keys_for_indices(xgens, idx)

        xtable = _x_decode_table(codeobj)
        ztable = _z_decode_table(codeobj)
        n_keys = 1 << n_x
        self.xmask = np.zeros(n_keys, dtype=np.int64)
        self.ztrail = np.zeros(n_keys, dtype=np.int64)
        self.correctable = np.zeros(n_keys, dtype=bool)
        self.flip_blocks = np.zeros(n_keys, dtype=np.int64)  # bitmask over blocks
        for key, flips in xtable.items():
            self.correctable[key] = True
            for s in flips:
                self.xmask[key] |= 1 << (n - s)
                for b, blk in enumerate(codeobj.blocks):
                    if s in blk:
                        self.flip_blocks[key] |= 1 << b
            self.ztrail[key] = _trailing_mask(n, flips, trailing_side)

        n_blocks = len(codeobj.blocks)
        n_out = 1 << n_z
        n_cls = 1 << n_blocks
        # class = bitmask of blocks receiving a Z (representative site each);
        # on these codes the in-block position is a stabilizer choice, so the
        # representative acts on the reference exactly like the flip site
        self.cls_table = np.zeros((n_cls, n_out), dtype=np.int64)
        for fb in range(n_cls):
            fake_flips = tuple(
                codeobj.blocks[b][0] for b in range(n_blocks) if fb & (1 << b)
            )
            for o in range(n_out):
                sites = _z_correction_sites(codeobj, ztable.get(o), fake_flips)
                cls = 0
                if sites is not None:  # undecodable: score with no correction
                    for s in sites:
                        cls |= 1 << _block_of(codeobj, s)
                self.cls_table[fb, o] = cls

        ref = encode(codeobj, alpha, beta).amps
        self.ref = ref
        # u[o, cls] = P_o * C2(cls) |ref> with C2 a Z at each class block's first site
        self.u = np.zeros((n_out, n_cls, dim), dtype=complex)
        for cls in range(n_cls):
            zm = 0
            for b in range(n_blocks):
                if cls & (1 << b):
                    zm |= 1 << (n - codeobj.blocks[b][0])
            v = ref * (1.0 - 2.0 * (np.bitwise_count(idx & zm) & 1))
            for o in range(n_out):
                w = v
                for g, gen in enumerate(zgens):
                    flipped = np.empty_like(w)
                    flipped[idx ^ gen.x_mask] = w
                    w = 0.5 * (w + (1 - 2 * ((o >> g) & 1)) * flipped)
                self.u[o, cls] = w
        self.n_out = n_out

    def success(self, psi: np.ndarray) -> float:
        ind = np.nonzero(np.abs(psi) ** 2 > _EXACT_ZERO)[0].astype(np.int64)
        amp = psi[ind]
        k = self.keys[ind]
        uniq, inv = np.unique(k, return_inverse=True)
        ok = self.correctable[k]
        total = 0.0
        # undecodable branches score their raw overlap with the reference
        if not ok.all():
            bad = ~ok
            s = _segment_sum(np.conj(self.ref[ind[bad]]) * amp[bad], inv[bad], uniq.size)
            total += float(np.sum(np.abs(s) ** 2))
        ind2 = ind ^ self.xmask[k]
        amp2 = amp * (1.0 - 2.0 * (np.bitwise_count(ind & self.ztrail[k]) & 1))
        fb = self.flip_blocks[k]
        for o in range(self.n_out):
            cls = self.cls_table[fb, o]
            vals = np.conj(self.u[o, cls, ind2]) * amp2
            vals[~ok] = 0.0
            s = _segment_sum(vals, inv, uniq.size)
            total += float(np.sum(np.abs(s) ** 2))
        return total


def _segment_sum(values: np.ndarray, seg: np.ndarray, n_seg: int) -> np.ndarray:
    re = np.bincount(seg, weights=values.real, minlength=n_seg)
    im = np.bincount(seg, weights=values.imag, minlength=n_seg)
    return re + 1j * im


# ---------------------------------------------------------------------------
# scenario evaluation
# ---------------------------------------------------------------------------


def success_probability(
    logical: tuple[complex, complex],
    channel,
    codeobj: StabilizerCode,
    spec,
    options: DecodeOptions | None = None,
    evolve_method: str = "eig",
) -> float:
    """Encode, run one error scenario, decode, and return the success probability.

    `channel` is a noise.ErrorScenario; the chain must match the code size
    (the revival setup: the state is evolved for twice the transfer time so
    it returns to its original sites).
    """
    from . import noise
    from .chain import analyze_transfer
    from .hilbert import evolve, trajectory_sample

    alpha, beta = logical
    if codeobj.n_qubits != spec.n_sites:
        raise ValueError("scenario evaluation expects the revival setup (M = N)")
    opt = replace(options or DecodeOptions(), mode="revival", alpha=alpha, beta=beta)
    report_t0 = analyze_transfer(spec)
    total = 2.0 * report_t0.transfer_time
    psi0 = encode(codeobj, alpha, beta)

    kind = channel.kind
    if kind == "single_z":
        psi = noise.inject_single_z(
            psi0, spec, channel.parameters["site"], channel.parameters["t_err"],
            channel.parameters.get("total_time", total), method=evolve_method,
        )
    elif kind == "timing":
        psi, _ = noise.timing_offset(
            psi0, spec, total, channel.parameters["delta"], method=evolve_method
        )
    elif kind == "coupling":
        perturbed, _ = noise.coupling_disorder(
            spec, channel.parameters["f"], channel.parameters["seed"]
        )
        psi = evolve(psi0, perturbed, total, method=evolve_method)
    elif kind == "dephasing":
        psi, _ = trajectory_sample(
            psi0, channel.parameters["gamma"],
            channel.parameters.get("duration", total),
            channel.parameters["seed"], spec, method=evolve_method,
        )
    else:
        raise ValueError(f"unknown scenario kind {kind!r}")
    return decode_pipeline(psi, codeobj, opt).success_probability
