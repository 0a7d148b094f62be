from .bose_hubbard import (
    DimerParams,
    TrimerParams,
    TrimerSectorResult,
    bose_hubbard_dimer,
    bose_hubbard_trimer,
    current_operator,
    dimer_number_operator,
    fixed_number_spectrum,
    jordan_schwinger_hamiltonian,
    number_expectations,
    project_to_sector,
    sector_indices,
    trimer_number_operator,
    trimer_sector_spectrum,
)
from .lattice import TightBindingParams, tight_binding_hamiltonian
from .oscillator import (
    DoubleWellParams,
    PullenEdmondsParams,
    Symmetry,
    classify_symmetry,
    coefficient_matrix,
    double_well_hamiltonian,
    ho_wavefunctions,
    pullen_edmonds_hamiltonian,
    right_well_hamiltonian,
    swap_operator,
    wavefunction_2d,
)
from .rotor import (
    Histogram,
    RotorParams,
    asymmetric_top_j2_levels,
    level_density_histogram,
    rotor_hamiltonian,
    symmetric_top_levels,
)
