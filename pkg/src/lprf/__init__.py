"""Cryptanalysis workbench for the Legendre PRF over GF(p^r)."""

from .attacks import (
    ActiveKeyRecovery,
    AttackReport,
    PassiveKeyRecovery,
    WindowTable,
    active_recover,
    bucket_windows,
    build_target_table,
    passive_recover,
)
from .encoding import (
    DifferentialSignature,
    counter_delta,
    encode_counter,
    signature,
    signature_class_count,
)
from .field import FieldElement, FieldParams, dlog_bruteforce, find_generator, is_irreducible, make_field
from .prf import (
    Keystream,
    PrfKey,
    keystream_counter,
    keystream_geometric,
    prf_eval,
    random_key,
    reference_bit,
)
from .stats import pattern_census, period_probe, weil_check

__version__ = "0.1.0"
