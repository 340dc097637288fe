from ._core import AttackReport, WindowTable, sliding_windows
from .active import ActiveKeyRecovery, active_recover, build_target_table, reference_window
from .passive import PassiveKeyRecovery, bucket_windows, passive_recover, select_bucket

__all__ = [
    "AttackReport",
    "WindowTable",
    "sliding_windows",
    "ActiveKeyRecovery",
    "active_recover",
    "build_target_table",
    "reference_window",
    "PassiveKeyRecovery",
    "bucket_windows",
    "passive_recover",
    "select_bucket",
]
