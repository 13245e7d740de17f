"""Insertion/deletion error-correcting codes with exhaustive verification oracles.

Submodules:

* ``seqkit``: LCS and insdel distance kernels, decodability oracles
* ``gf`` and ``rs``: finite fields, Reed-Solomon encoding, errors-and-erasures
  and Sudan list decoding
* ``innersearch``: greedy search for explicit inner codes
* ``highrate``: binary concatenated code with zero buffers
* ``listconcat``: list decoder for concatenated RS codes
* ``regimes``: parameter wiring and whole-code verification
* ``channel``: budgeted adversarial corruption
* ``cli``: the ``insdel`` command
"""

from .errors import (
    ConstructionFailure,
    ContractViolation,
    DecodeFailure,
    InsdelError,
    InvalidInputError,
    ParameterError,
    ResourceLimitError,
)
from .seqkit import ErrorKind, ErrorModel, SymbolString, decodable_under, insdel_distance, lcs, lcs_of_code

__all__ = [
    "ConstructionFailure",
    "ContractViolation",
    "DecodeFailure",
    "ErrorKind",
    "ErrorModel",
    "InsdelError",
    "InvalidInputError",
    "ParameterError",
    "ResourceLimitError",
    "SymbolString",
    "decodable_under",
    "insdel_distance",
    "lcs",
    "lcs_of_code",
]

__version__ = "0.1.0"
