"""Writing, read-out and optimization of a short-pulse Lambda-type atomic memory."""

from .kernel import KernelTable, build_table, kernel_point, load_table, save_table, select_order, tabulate
from .optimize import OptimizationReport, loss_column, optimize_write_duration, sweep_loss_vs_length
from .params import (
    DimensionlessConfig,
    PhysicalParams,
    RegimeReport,
    from_dimensionless,
    to_dimensionless,
    validate_regime,
)
from .readout import (
    MemoryRun,
    RetrievalResult,
    readout_coherences,
    retrieval_efficiency,
    retrieve,
    write_then_read,
)
from .specfun import bessel_j0, bessel_j1
from .transverse import CapacityReport, TransverseMode, diffraction_phase, mode_capacity, paraxial_ok
from .writing import WriteSolution, coherence_peak, leakage_series, solve_write, stored_excitation, write, write_loss

__all__ = [
    "CapacityReport",
    "DimensionlessConfig",
    "KernelTable",
    "MemoryRun",
    "OptimizationReport",
    "PhysicalParams",
    "RegimeReport",
    "RetrievalResult",
    "TransverseMode",
    "WriteSolution",
    "bessel_j0",
    "bessel_j1",
    "build_table",
    "coherence_peak",
    "diffraction_phase",
    "from_dimensionless",
    "kernel_point",
    "leakage_series",
    "load_table",
    "loss_column",
    "mode_capacity",
    "optimize_write_duration",
    "paraxial_ok",
    "readout_coherences",
    "retrieval_efficiency",
    "retrieve",
    "save_table",
    "select_order",
    "solve_write",
    "stored_excitation",
    "sweep_loss_vs_length",
    "tabulate",
    "to_dimensionless",
    "validate_regime",
    "write",
    "write_loss",
    "write_then_read",
]
