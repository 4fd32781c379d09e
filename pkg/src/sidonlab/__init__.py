"""Construction, verification, exact search and measurement of finite Sidon sets."""

from .core import (
    DefectValue,
    NotSidonError,
    SidonSet,
    counting_function,
    ding_condition,
    discrepancy_sweep,
    element_errors,
    interval_discrepancy,
    power_sum,
    verify_sidon,
)
from .constructions import bose, construct, erdos_turan, mian_chowla, singer

__version__ = "0.1.0"
