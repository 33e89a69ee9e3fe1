"""Exact simulation of N gapless two-level detectors after coupling to the field.

The final detector state has a closed form in the monopole eigenbasis: for
sign vectors mu, mu' in {+1,-1}^N the matrix element of rho is

    2^{-N} exp[(i/2) sum_{i<j} (mu'_i mu'_j - mu_i mu_j) Delta_ij]
         * exp[(i/2) sum_{i,j} mu'_i mu_j E_ij]
         * exp[-(1/4) (mu - mu')^T H (mu - mu')]

(the commutator part of the Gaussian norm cancels by antisymmetry, leaving
the anticommutator matrix H).  ``density_matrix`` builds this state exactly
and is the single source of truth for operator expectation values; the
closed-form correlators in ``pauli_ev_closed`` are pinned against it.

Conventions pinned against that oracle (the cross correlators' sign, index
order and exponent are all easy to get wrong, and plausible-looking
alternatives fail the comparison at O(0.1)):

    <sz_i sz_j> = (1/2) e^{-H_ii - H_jj} [ e^{+2 H_ij} prod_k cos(2G_ik - 2G_jk)
                                         + e^{-2 H_ij} prod_k cos(2G_ik + 2G_jk) ]
    <sy_i sy_j> = same with a minus between the two terms
    <sz_i>      = e^{-H_ii} prod_{k != i} cos(2 G_ik)
    <sy_i sx_j> = -e^{-H_ii} sin(2 G_ij) prod_{k != i,j} cos(2 G_ik)
    <sx_i sy_j> = -e^{-H_jj} sin(2 G_ji) prod_{k != i,j} cos(2 G_jk)

with G the lambda^2-scaled retarded matrix.  Detector indices are 1-based in
the public API, matching lattice/CSV numbering.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityError, ConsistencyError
from .kernels import KernelMatrix

__all__ = [
    "MAX_QUBITS",
    "DensityMatrix",
    "PauliLabel",
    "CorrelationRecord",
    "density_matrix",
    "pauli_ev_oracle",
    "pauli_ev_closed",
    "sample_correlator",
    "correlation_record",
    "sample_record",
    "random_kernel_matrix",
    "write_correlation_records",
    "read_correlation_records",
]

MAX_QUBITS = 12  # 4^N-term sums and 2^N x 2^N dense storage beyond this

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_TOL = -1e-10

# Basis change (g, e) -> mu eigenbasis: |+> = (|g>+|e>)/sqrt2, |-> = (|g>-|e>)/sqrt2.
_U_MU = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
_PAULI_GE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_MU = {name: _U_MU.conj().T @ mat @ _U_MU for name, mat in _PAULI_GE.items()}


@dataclass(frozen=True)
class PauliLabel:
    """Single-qubit Pauli operator acting on a 1-based qubit index."""

    axis: str
    qubit_index: int

    def __post_init__(self):
        if self.axis not in "IXYZ" or len(self.axis) != 1:
            raise ValueError(f"axis must be one of I, X, Y, Z, got {self.axis!r}")
        if self.qubit_index < 1:
            raise ValueError("qubit_index is 1-based and must be >= 1")


@dataclass(frozen=True)
class DensityMatrix:
    """Dense detector state in the mu eigenbasis.

    Row/column index bits run from qubit 1 (most significant) down, with
    mu = +1 before mu = -1.
    """

    n_qubits: int
    entries: np.ndarray

    def validate(self) -> None:
        rho = self.entries
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > _HERMITICITY_TOL:
            raise ConsistencyError(f"density matrix not Hermitian: deviation {herm:.3e}")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ConsistencyError(f"density matrix trace {tr} != 1")
        min_eig = float(np.linalg.eigvalsh(rho).min())
        if min_eig < _PSD_TOL:
            raise ConsistencyError(f"density matrix not PSD: min eigenvalue {min_eig:.3e}")


def _sign_table(n: int) -> np.ndarray:
    """All 2^n sign vectors; row index bit (n-1-q) encodes qubit q+1, + first."""
    idx = np.arange(2**n)
    return 1.0 - 2.0 * ((idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1)


def density_matrix(kernels: KernelMatrix) -> DensityMatrix:
    """Exact final state of n ground-state detectors given their kernel matrix."""
    n = kernels.n
    if n > MAX_QUBITS:
        raise CapacityError(f"n = {n} detectors exceeds the dense-simulation cap {MAX_QUBITS}")
    H, E, Delta = kernels.H, kernels.E, kernels.Delta
    M = _sign_table(n)

    # quadratic forms over sign vectors
    qH = np.einsum("ai,ij,aj->a", M, H, M)
    cH = M @ H @ M.T
    # (mu - mu')^T H (mu - mu') at (row=mu, col=mu')
    norm_term = -0.25 * (qH[:, None] + qH[None, :] - cH - cH.T)

    # sum_{i<j} mu_i mu_j Delta_ij = (mu Delta mu^T - tr Delta) / 2
    s_delta = 0.5 * (np.einsum("ai,ij,aj->a", M, Delta, M) - np.trace(Delta))
    delta_term = 0.5 * (s_delta[None, :] - s_delta[:, None])

    # sum_{i,j} mu'_i mu_j E_ij at (row=mu, col=mu')
    cE = M @ E @ M.T
    e_term = 0.5 * cE.T

    rho = np.exp(norm_term + 1j * (delta_term + e_term)) / 2**n
    dm = DensityMatrix(n_qubits=n, entries=rho)
    dm.validate()
    return dm


def pauli_ev_oracle(rho: DensityMatrix, ops: list[PauliLabel]) -> float:
    """Tr(rho * tensor(ops)) evaluated directly on the dense state.

    The brute-force reference for the closed forms; the imaginary part must
    vanish and is checked before being discarded.
    """
    n = rho.n_qubits
    seen = set()
    for op in ops:
        if op.qubit_index > n:
            raise ValueError(f"qubit index {op.qubit_index} exceeds n = {n}")
        if op.axis != "I" and op.qubit_index in seen:
            raise ValueError(f"duplicate qubit index {op.qubit_index} in operator list")
        seen.add(op.qubit_index)
    full = np.eye(1, dtype=complex)
    by_qubit = {op.qubit_index: PAULI_MU[op.axis] for op in ops if op.axis != "I"}
    for q in range(1, n + 1):
        full = np.kron(full, by_qubit.get(q, PAULI_MU["I"]))
    val = complex(np.trace(rho.entries @ full))
    if abs(val.imag) > 1e-12:
        raise ConsistencyError(f"expectation value has imaginary part {val.imag:.3e}")
    return val.real


_KINDS = ("ZZ", "YY", "Zi", "Zj", "YiXj", "XiYj")


def pauli_ev_closed(kernels: KernelMatrix, i: int, j: int, kind: str) -> float:
    """Closed-form correlator between detectors i and j (1-based indices)."""
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    n = kernels.n
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise ValueError(f"need distinct 1-based indices in [1, {n}], got i={i}, j={j}")
    H, G = kernels.H, kernels.GR
    a, b = i - 1, j - 1
    others = [k for k in range(n) if k not in (a, b)]

    if kind in ("ZZ", "YY"):
        prod_minus = math.prod(math.cos(2.0 * G[a, k] - 2.0 * G[b, k]) for k in others)
        prod_plus = math.prod(math.cos(2.0 * G[a, k] + 2.0 * G[b, k]) for k in others)
        plus = math.exp(2.0 * H[a, b]) * prod_minus
        minus = math.exp(-2.0 * H[a, b]) * prod_plus
        sign = 1.0 if kind == "ZZ" else -1.0
        return 0.5 * math.exp(-H[a, a] - H[b, b]) * (plus + sign * minus)
    if kind == "Zi":
        return math.exp(-H[a, a]) * math.prod(
            math.cos(2.0 * G[a, k]) for k in range(n) if k != a)
    if kind == "Zj":
        return math.exp(-H[b, b]) * math.prod(
            math.cos(2.0 * G[b, k]) for k in range(n) if k != b)
    if kind == "YiXj":
        return -math.exp(-H[a, a]) * math.sin(2.0 * G[a, b]) * math.prod(
            math.cos(2.0 * G[a, k]) for k in others)
    # XiYj
    return -math.exp(-H[b, b]) * math.sin(2.0 * G[b, a]) * math.prod(
        math.cos(2.0 * G[b, k]) for k in others)


def sample_correlator(exact_ev: float, shots: int, seed: int) -> float:
    """Shot-noise sample of a +-1 observable with mean ``exact_ev``.

    Draws the number of +1 outcomes binomially (distribution-identical to
    averaging ``shots`` independent +-1 measurements) and is deterministic
    per seed.
    """
    if abs(exact_ev) > 1.0:
        raise ValueError(f"|exact_ev| must be <= 1, got {exact_ev}")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    p = min(max((1.0 + exact_ev) / 2.0, 0.0), 1.0)
    ups = int(rng.binomial(shots, p))
    return 2.0 * ups / shots - 1.0


@dataclass
class CorrelationRecord:
    """Correlators needed to reconstruct H_ij for one detector pair (1-based)."""

    i: int
    j: int
    zz: float
    yy: float
    zi: float
    zj: float
    yx_ik: dict[int, float] = field(default_factory=dict)  # <sy_i sx_k> per third detector
    xy_kj: dict[int, float] = field(default_factory=dict)  # <sx_k sy_j> per third detector
    shots: int | None = None  # None means exact
    seed: int | None = None


def correlation_record(kernels: KernelMatrix, i: int, j: int) -> CorrelationRecord:
    """Exact correlators for pair (i, j) from the closed forms."""
    rec = CorrelationRecord(
        i=i, j=j,
        zz=pauli_ev_closed(kernels, i, j, "ZZ"),
        yy=pauli_ev_closed(kernels, i, j, "YY"),
        zi=pauli_ev_closed(kernels, i, j, "Zi"),
        zj=pauli_ev_closed(kernels, i, j, "Zj"),
    )
    for k in range(1, kernels.n + 1):
        if k in (i, j):
            continue
        rec.yx_ik[k] = pauli_ev_closed(kernels, i, k, "YiXj")
        rec.xy_kj[k] = pauli_ev_closed(kernels, k, j, "XiYj")
    return rec


_KIND_CODES = {"zz": 0, "yy": 1, "zi": 2, "zj": 3, "yx": 4, "xy": 5}


def _entry_seed(seed: int, i: int, j: int, kind: str, k: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed,
                                  spawn_key=(i, j, _KIND_CODES[kind], k))


def sample_record(kernels: KernelMatrix, i: int, j: int, shots: int,
                  seed: int) -> CorrelationRecord:
    """Shot-noise sampled correlators; every observable gets its own sub-stream."""
    exact = correlation_record(kernels, i, j)

    def draw(value: float, kind: str, k: int = 0) -> float:
        rng = np.random.default_rng(_entry_seed(seed, i, j, kind, k))
        p = min(max((1.0 + value) / 2.0, 0.0), 1.0)
        return 2.0 * int(rng.binomial(shots, p)) / shots - 1.0

    rec = CorrelationRecord(
        i=i, j=j,
        zz=draw(exact.zz, "zz"),
        yy=draw(exact.yy, "yy"),
        zi=draw(exact.zi, "zi"),
        zj=draw(exact.zj, "zj"),
        shots=shots, seed=seed,
    )
    for k, v in exact.yx_ik.items():
        rec.yx_ik[k] = draw(v, "yx", k)
    for k, v in exact.xy_kj.items():
        rec.xy_kj[k] = draw(v, "xy", k)
    return rec


def random_kernel_matrix(n: int, seed: int | np.random.Generator) -> KernelMatrix:
    """Random physically valid kernel matrix for tests and sweeps.

    GR is drawn strictly lower triangular (index order = time order) with
    entries in [-0.3, 0.3]; E and Delta follow from it.  H starts from a
    Wishart draw and its diagonal is boosted until both |H_ij| <=
    min(H_ii, H_jj) and the Gram matrix (H + iE)/2 is positive semidefinite,
    which is exactly the condition for the detector state to be physical.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    GR = np.zeros((n, n))
    for a in range(n):
        for b in range(a):
            GR[a, b] = rng.uniform(-0.3, 0.3)
    E = GR - GR.T
    A = rng.normal(size=(n, n))
    H = A @ A.T / n
    boost = 0.0
    for a in range(n):
        for b in range(n):
            if a != b:
                need = abs(H[a, b]) - min(H[a, a], H[b, b])
                boost = max(boost, need + 0.05)
    H += boost * np.eye(n)
    w_min = float(np.linalg.eigvalsh(0.5 * (H + 1j * E)).min())
    if w_min < 1e-6:
        H += 2.0 * (1e-6 - w_min) * np.eye(n)
    return KernelMatrix(n=n, H=H, E=E, GR=GR, Delta=GR + GR.T,
                        Wdiag=np.diag(H) / 2.0, lam=1.0, state=None)


def _record_rows(rec: CorrelationRecord) -> list[tuple[str, float]]:
    rows = [(kind, getattr(rec, kind)) for kind in ("zz", "yy", "zi", "zj")]
    rows += [(f"yx_{k}", v) for k, v in sorted(rec.yx_ik.items())]
    rows += [(f"xy_{k}", v) for k, v in sorted(rec.xy_kj.items())]
    return rows


def write_correlation_records(records: list[CorrelationRecord], path: str | Path,
                              sampled: list[CorrelationRecord] | None = None) -> None:
    """Flatten records to CSV rows (i, j, kind, exact, sampled, shots, seed).

    ``sampled`` is an optional parallel list of shot-noise records for the
    same pairs; its columns are left empty when absent.
    """
    if sampled is not None and len(sampled) != len(records):
        raise ValueError("sampled record list must parallel the exact one")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "kind", "exact", "sampled", "shots", "seed"])
        for idx, rec in enumerate(records):
            samp = sampled[idx] if sampled is not None else None
            if samp is not None and (samp.i, samp.j) != (rec.i, rec.j):
                raise ValueError(f"sampled record {idx} refers to a different pair")
            samp_rows = dict(_record_rows(samp)) if samp is not None else {}
            for kind, value in _record_rows(rec):
                srow = f"{samp_rows[kind]:.17g}" if samp is not None else ""
                shots = "" if samp is None or samp.shots is None else samp.shots
                seed = "" if samp is None or samp.seed is None else samp.seed
                writer.writerow([rec.i, rec.j, kind, f"{value:.17g}", srow,
                                 shots, seed])


def _set_record_value(rec: CorrelationRecord, kind: str, value: float) -> None:
    if kind in ("zz", "yy", "zi", "zj"):
        setattr(rec, kind, value)
    elif kind.startswith("yx_"):
        rec.yx_ik[int(kind[3:])] = value
    elif kind.startswith("xy_"):
        rec.xy_kj[int(kind[3:])] = value
    else:
        raise ValueError(f"unrecognised correlator kind {kind!r}")


def read_correlation_records(
        path: str | Path) -> tuple[list[CorrelationRecord],
                                   list[CorrelationRecord] | None]:
    """Inverse of ``write_correlation_records``: (exact, sampled-or-None)."""
    exact: dict[tuple[int, int], CorrelationRecord] = {}
    samp: dict[tuple[int, int], CorrelationRecord] = {}
    any_sampled = False
    with open(path, encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (int(row["i"]), int(row["j"]))
            if key not in exact:
                exact[key] = CorrelationRecord(i=key[0], j=key[1],
                                               zz=0.0, yy=0.0, zi=0.0, zj=0.0)
                samp[key] = CorrelationRecord(
                    i=key[0], j=key[1], zz=0.0, yy=0.0, zi=0.0, zj=0.0,
                    shots=int(row["shots"]) if row["shots"] else None,
                    seed=int(row["seed"]) if row["seed"] else None)
            _set_record_value(exact[key], row["kind"], float(row["exact"]))
            if row["sampled"]:
                any_sampled = True
                _set_record_value(samp[key], row["kind"], float(row["sampled"]))
    keys = sorted(exact)
    return ([exact[k] for k in keys],
            [samp[k] for k in keys] if any_sampled else None)
