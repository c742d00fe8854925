from .closed_form import gamma4_derivative_closed_form, gamma4_norm_closed_form
from .scan import ScanReport, norm_derivative_scan

__all__ = [
    "ScanReport",
    "norm_derivative_scan",
    "gamma4_norm_closed_form",
    "gamma4_derivative_closed_form",
]
