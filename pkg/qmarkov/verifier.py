import logging
from typing import Any, Dict, List, Sequence

from pandas import DataFrame

from .checks import CheckAbs, CheckResult, can_run, default_checks, run
from .checks.check import INCONCLUSIVE, PASS
from .family import DynamicalMapAbs

logger = logging.getLogger(__name__)


class Verifier:
    """Check running managing class

    Core class of the qmarkov package. It runs checks on a family, keeps the
    log of every check run together with its result, and aggregates the
    outcome.

    :param family: family to be verified
    :param checks: checks run by verify, defaults to default_checks(family)
    """

    def __init__(self, family: DynamicalMapAbs, checks: Sequence[CheckAbs] = None) -> None:
        self.family = family
        self.checks = list(default_checks(family) if checks is None else checks)
        self.logs = []  # type: List[CheckAbs]
        self.results = []  # type: List[CheckResult]

    def run(self, check: CheckAbs) -> CheckResult:
        """Run a single check on the family

        The check and its result are logged.

        :param check: chosen check
        :raises ValueError: if the check cannot be run on the family
        :return: the result
        """
        if not can_run(self.family, check):
            raise ValueError(f"{check} cannot be run on {type(self.family).__name__}")
        logger.info("Running %s", check)
        result = run(self.family, check)
        self.logs.append(check)
        self.results.append(result)
        if result.status == PASS:
            logger.info("%s: %s", check.tag, result.status)
        else:
            logger.warning("%s: %s %s", check.tag, result.status, result.summary)
        return result

    def verify(self) -> List[CheckResult]:
        """Run every check of the suite

        :return: results in the order of the checks
        """
        return [self.run(check) for check in self.checks]

    @property
    def passed(self) -> bool:
        """Flag stating that checks were run and all of them passed

        Inconclusive results do not pass.
        """
        return bool(self.results) and all(r.passed for r in self.results)

    @property
    def failing_tags(self) -> List[str]:
        return [r.tag for r in self.results if not r.passed]

    @property
    def inconclusive_tags(self) -> List[str]:
        return [r.tag for r in self.results if r.status == INCONCLUSIVE]

    def table(self) -> DataFrame:
        """Results as a table with columns tag, status"""
        return DataFrame(
            [{"tag": r.tag, "status": r.status} for r in self.results], columns=["tag", "status"]
        )

    def summary(self) -> Dict[str, Any]:
        """Summary of the run, suitable for a JSON report"""
        return {
            "passed": self.passed,
            "failing_tags": self.failing_tags,
            "checks": {r.tag: {"status": r.status, **r.summary} for r in self.results},
        }
