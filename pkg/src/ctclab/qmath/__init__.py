"""Linear algebra, sampling and serialization for finite quantum systems."""

from .checks import (MAX_DIM_ENV, as_matrix, as_square, as_vector,
                     assert_density_matrix, assert_hermitian,
                     assert_pure_state, assert_unitary, dimension_cap,
                     herm_defect, is_hermitian)
from .gates import (basis_state, cnot, controlled_apply, identity, pauli_x,
                    projector, swap)
from .linalg import (SchmidtDecomposition, clamp_spectrum, dag, eig_hermitian,
                     entropy_of_weights, hermitize, kron_vec, partial_trace,
                     purity, schmidt, spectrum, tensor, trace_distance, unvec,
                     vec, vn_entropy)
from .random import (derived_seed, ginibre, haar_unitary, label_tag,
                     random_density, random_pure, rng_for, seed_sequence)
from .serialize import (load_matrix, load_pure_state, matrix_from_json,
                        matrix_to_json, pure_state_from_json,
                        pure_state_to_json)

__all__ = [
    "MAX_DIM_ENV", "as_matrix", "as_square", "as_vector",
    "assert_density_matrix", "assert_hermitian", "assert_pure_state",
    "assert_unitary", "dimension_cap", "herm_defect", "is_hermitian",
    "basis_state", "cnot", "controlled_apply", "identity", "pauli_x",
    "projector", "swap",
    "SchmidtDecomposition", "clamp_spectrum", "dag", "eig_hermitian",
    "entropy_of_weights", "hermitize", "kron_vec", "partial_trace", "purity",
    "schmidt", "spectrum", "tensor", "trace_distance", "unvec", "vec",
    "vn_entropy",
    "derived_seed", "ginibre", "haar_unitary", "label_tag", "random_density",
    "random_pure", "rng_for", "seed_sequence",
    "load_matrix", "load_pure_state", "matrix_from_json", "matrix_to_json",
    "pure_state_from_json", "pure_state_to_json",
]
