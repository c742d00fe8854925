from .counterexample import MapParams, QutritCounterexample
from .verifier import Verifier

__all__ = ["Verifier", "QutritCounterexample", "MapParams"]
