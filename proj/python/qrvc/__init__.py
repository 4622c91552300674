"""VC dimension of power-residue sets in prime fields.

Thin bindings over the C++ core. Conventions are given by name:
"zero-in", "zero-out" or "strict".
"""

from ._core import (
    Error,
    PrimeField,
    ResidueTable,
    Subset,
    char_sum,
    estimate_p,
    floor_log2,
    fold_patterns,
    is_prime,
    is_shattered,
    longest_shattered_ap,
    make_field,
    pattern_counts,
    realized_patterns,
    residue_table,
    shattering_index,
    squares,
    testing_dimension,
    vc_dimension,
    verify_equidistribution,
    verify_fourier_identity,
    verify_shattering_theorem,
    verify_weil,
)

__all__ = [
    "Error",
    "PrimeField",
    "ResidueTable",
    "Subset",
    "char_sum",
    "estimate_p",
    "floor_log2",
    "fold_patterns",
    "is_prime",
    "is_shattered",
    "longest_shattered_ap",
    "make_field",
    "pattern_counts",
    "realized_patterns",
    "residue_table",
    "shattering_index",
    "squares",
    "testing_dimension",
    "vc_dimension",
    "verify_equidistribution",
    "verify_fourier_identity",
    "verify_shattering_theorem",
    "verify_weil",
]
