from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List

from multimethod import multimethod
from pandas import DataFrame

from ..family import DynamicalMapAbs

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
STATUSES = (PASS, FAIL, INCONCLUSIVE)


class CheckAbs(ABC):
    """Abstract Check class

    Check is a description of a property of a DynamicalMapAbs object. It has
    no additional methods, however in order to be used one has to dispatch
    run(family, check) -> CheckResult for each new check or family. The
    method run is responsible for evaluating the property, and it should not
    modify the family.

    Optionally, one can implement can_run(family, check) -> bool which
    verifies if the check is meaningful for the family.

    Each check has a tag under which it is reported, and a dictionary data
    in which run may store auxiliary information.
    """

    tag = "check"

    @abstractmethod
    def __init__(self) -> None:
        self.data = {}  # type: Dict[str, Any]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.tag})"


@dataclass(eq=False)
class CheckResult:
    """Outcome of a check

    :param tag: tag of the check
    :param status: one of "pass", "fail", "inconclusive"
    :param details: table of evaluated points
    :param summary: scalar results of the check
    """

    tag: str
    status: str
    details: DataFrame = field(default_factory=DataFrame, repr=False)
    summary: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"Unknown status {self.status}")

    @property
    def passed(self) -> bool:
        return self.status == PASS


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


@multimethod
def run(family: DynamicalMapAbs, check: CheckAbs) -> CheckResult:
    raise NotImplementedError(f"{type(check)} cannot be run on {type(family)}")


@multimethod
def can_run(family: DynamicalMapAbs, check: CheckAbs) -> bool:
    raise NotImplementedError(f"can_run not implemented for {type(check)} and {type(family)}")


@multimethod
def default_checks(family: DynamicalMapAbs) -> List[CheckAbs]:
    raise NotImplementedError(f"No default checks for {type(family)}")
