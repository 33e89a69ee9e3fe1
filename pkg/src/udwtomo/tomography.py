"""Inversion of detector correlators into the smeared field two-point function.

For a spacelike-isolated pair the anticommutator kernel follows from two
correlators alone,

    H_ij = (1/2) arctanh(<sy_i sy_j> / <sz_i sz_j>),

while pairs with causally connected third detectors pick up a correction

    C_ij = (1/2) sum_k arctanh[ (<sy_i sx_k>/<sz_i>) (<sx_k sy_j>/<sz_j>) ],

each ratio being -tan(2 G) of the corresponding retarded entry, so that
H_ij = (1/2) arctanh(yy/zz) - C_ij in general.  Combining with the known
commutator part gives back the complex two-point value W = H/2 + i E/2.

The commutator entries E_ij are consumed as known inputs (they depend only on
the classical equation of motion, not on the state) and are never re-derived
from the correlators here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .detector import CorrelationRecord
from .errors import DephasingError, NoiseDominatedError, TangentDomainError

__all__ = [
    "ReconstructionResult",
    "reconstruct_spacelike",
    "causal_correction",
    "reconstruct_general",
    "assemble_wightman",
    "reconstruct_record",
    "write_reconstruction_results",
]

_DEPHASING_HARD = 1e-300   # |zz| below this: no information survives
_DEPHASING_FLAG = 1e-6     # |zz| below this: result returned but flagged


def reconstruct_spacelike(rec: CorrelationRecord) -> float:
    """H_ij from the yy/zz ratio alone (valid when no third-party causal links)."""
    if abs(rec.zz) < _DEPHASING_HARD:
        raise DephasingError(
            f"pair ({rec.i},{rec.j}): <sz sz> = {rec.zz:g} is fully dephased")
    ratio = rec.yy / rec.zz
    if abs(ratio) >= 1.0:
        raise NoiseDominatedError(
            f"pair ({rec.i},{rec.j}): |yy/zz| = {abs(ratio):.6g} >= 1, "
            "sampled record is noise dominated", ratio=ratio)
    return 0.5 * math.atanh(ratio)


def causal_correction(records: Sequence[tuple[float, float, float, float]]) -> float:
    """C_ij from per-third-detector tuples (yx_ik, zi, xy_kj, zj)."""
    total = 0.0
    for k, (yx_ik, zi, xy_kj, zj) in enumerate(records):
        if zi == 0.0 or zj == 0.0:
            raise DephasingError(f"correction term {k}: vanishing <sz> denominator")
        arg = (yx_ik / zi) * (xy_kj / zj)
        if abs(arg) >= 1.0:
            raise TangentDomainError(
                f"correction term {k}: |product| = {abs(arg):.6g} >= 1 "
                "(some 2G approaches pi/2)", k=k)
        total += 0.5 * math.atanh(arg)
    return total


def reconstruct_general(rec: CorrelationRecord,
                        corrections: float | Sequence[tuple] | None = None) -> float:
    """H_ij = (1/2) arctanh(yy/zz) - C_ij.

    ``corrections`` may be a precomputed C_ij, explicit per-k tuples, or None
    to build the tuples from the record's own cross correlators.
    """
    base = reconstruct_spacelike(rec)
    if corrections is None:
        corrections = [(rec.yx_ik[k], rec.zi, rec.xy_kj[k], rec.zj)
                       for k in sorted(rec.yx_ik)]
    if isinstance(corrections, (int, float)):
        c = float(corrections)
    else:
        c = causal_correction(corrections)
    return base - c


def assemble_wightman(h_ij: float, e_ij: float) -> complex:
    """W_ij = H_ij/2 + i E_ij/2."""
    return complex(0.5 * h_ij, 0.5 * e_ij)


@dataclass
class ReconstructionResult:
    """Reconstructed pair data plus diagnostics."""

    i: int
    j: int
    H_ij_reconstructed: float
    C_ij: float
    W_ij: complex
    regime: str                      # "spacelike" | "causal"
    condition_flags: list[str] = field(default_factory=list)


def reconstruct_record(rec: CorrelationRecord, e_ij: float) -> ReconstructionResult:
    """Invert one correlation record, consuming the known commutator entry e_ij.

    The regime is data driven: a pair whose cross correlators all vanish used
    the pure spacelike branch.  Heavily dephased pairs are flagged rather
    than rejected.
    """
    flags: list[str] = []
    if abs(rec.zz) < _DEPHASING_FLAG:
        flags.append("dephasing_dominated")
    entries = [(rec.yx_ik[k], rec.zi, rec.xy_kj[k], rec.zj) for k in sorted(rec.yx_ik)]
    if any(yx != 0.0 or xy != 0.0 for yx, _, xy, _ in entries):
        regime = "causal"
        c = causal_correction(entries)
    else:
        regime = "spacelike"
        c = 0.0
    h = reconstruct_spacelike(rec) - c
    return ReconstructionResult(
        i=rec.i, j=rec.j, H_ij_reconstructed=h, C_ij=c,
        W_ij=assemble_wightman(h, e_ij), regime=regime, condition_flags=flags)


def write_reconstruction_results(results: Sequence[ReconstructionResult],
                                 path: str | Path,
                                 h_true: np.ndarray | None = None) -> None:
    """Persist results; ``h_true`` (1-based pairs via [i-1, j-1]) is optional."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "regime", "H_reconstructed", "H_true_if_known",
                         "C_ij", "Re_W", "Im_W", "flags"])
        for r in results:
            true_s = ""
            if h_true is not None:
                true_s = f"{h_true[r.i - 1, r.j - 1]:.17g}"
            writer.writerow([
                r.i, r.j, r.regime,
                f"{r.H_ij_reconstructed:.17g}", true_s, f"{r.C_ij:.17g}",
                f"{r.W_ij.real:.17g}", f"{r.W_ij.imag:.17g}",
                ";".join(r.condition_flags),
            ])
