"""Two-qubit quantum Rabi model: spectra, perturbative branches, recurrences and dynamics."""

from ._core import (
    ConvergenceFailure,
    DegenerateResolvent,
    InvalidDensityMatrix,
    ModelParams,
    NumericalError,
    OverflowDetected,
    Parity,
    SingularCoupling,
    SmallDenominator,
    StepSingular,
    TruncationInsufficient,
    __version__,
    bargmann_chain,
    bargmann_identical,
    concurrence,
    decaying_solution,
    detect_crossings,
    displacement_element,
    dsc_perturbative_spectrum,
    evolve,
    full_hamiltonian,
    lowest_converged,
    parity_hamiltonian,
    quartic_coefficients,
    quartic_roots,
    recurrence_eigenstate,
    reduced_density_matrix,
    residual,
    rwa_hamiltonian,
    rwa_relative_error,
    second_order_correction,
    sweep_spectrum,
    von_neumann_entropy,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
