"""udwtomo: non-perturbative detector-lattice tomography of scalar-field correlators.

A numpy/scipy toolkit that simulates lattices of gapless two-level detectors
coupled to a massless scalar field in 3+1 Minkowski spacetime, evaluates the
field's smeared two-point functions for vacuum, thermal, coherent and
one-particle states, inverts exact detector correlators back into the
anticommutator kernel, and quantifies finite-region effects through a
spacetime multipole expansion.
"""

from . import (detector, errors, kernels, multipole, numerics, scenarios,
               smearing, spacetime, tomography)
from .detector import (CorrelationRecord, DensityMatrix, PauliLabel,
                       correlation_record, density_matrix, pauli_ev_closed,
                       pauli_ev_oracle, random_kernel_matrix, sample_correlator,
                       sample_record)
from .kernels import (FieldState, KernelMatrix, assemble_kernels,
                      commutator_smeared, hadamard_point, phi0_coherent,
                      F_oneparticle, retarded_smeared,
                      wightman_smeared_closed, wightman_smeared_quadrature)
from .multipole import (DerivativeBundle, MultipoleEstimate, convergence_order,
                        derivatives, estimate)
from .numerics import (QuadratureResult, SlopeFit, erf, erfi, erfi_scaled,
                       fit_loglog_slope, integrate_semi_infinite)
from .smearing import GaussianRegion, MomentSet, evaluate, moments
from .spacetime import (Event, Interval, LatticeSpec, Separation, build_lattice,
                        classify, interval)
from .tomography import (ReconstructionResult, assemble_wightman,
                         causal_correction, reconstruct_general,
                         reconstruct_record, reconstruct_spacelike)

__version__ = "0.1.0"

__all__ = [
    "detector", "errors", "kernels", "multipole", "numerics", "scenarios",
    "smearing", "spacetime", "tomography",
    "CorrelationRecord", "DensityMatrix", "PauliLabel", "correlation_record",
    "density_matrix", "pauli_ev_closed", "pauli_ev_oracle",
    "random_kernel_matrix", "sample_correlator", "sample_record",
    "FieldState", "KernelMatrix", "assemble_kernels", "commutator_smeared",
    "hadamard_point", "phi0_coherent", "F_oneparticle", "retarded_smeared",
    "wightman_smeared_closed", "wightman_smeared_quadrature",
    "DerivativeBundle", "MultipoleEstimate", "convergence_order",
    "derivatives", "estimate",
    "QuadratureResult", "SlopeFit", "erf", "erfi", "erfi_scaled",
    "fit_loglog_slope", "integrate_semi_infinite",
    "GaussianRegion", "MomentSet", "evaluate", "moments",
    "Event", "Interval", "LatticeSpec", "Separation", "build_lattice",
    "classify", "interval",
    "ReconstructionResult", "assemble_wightman", "causal_correction",
    "reconstruct_general", "reconstruct_record", "reconstruct_spacelike",
    "__version__",
]
