"""Instrumental objects used to report on verification checks

   Copyright 2023 The polyfus Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from collections.abc import Mapping


class Status(enum.Enum):
    """Outcome of a verification check."""

    VERIFIED = "verified"
    FAILED = "failed"
    SKIPPED_SIZE = "skipped(size)"
    SKIPPED_RANGE = "skipped(range)"

    @property
    def passed(self) -> bool:
        """Does this status count as a pass (verified or skipped)?"""
        return self is not Status.FAILED

    def __str__(self) -> str:
        return self.value


@dataclasses.dataclass(frozen=True)
class CheckReport:
    """Result of a named verification check at fixed parameters.

    A report is "verified" when every one of its named conditions holds.  The names of failed
    conditions are collected in the witness.
    """

    check: str
    params: Mapping[str, object]
    status: Status
    counts: Mapping[str, object] = dataclasses.field(default_factory=dict)
    witness: Mapping[str, object] | None = None

    @staticmethod
    def from_conditions(
        check: str,
        params: Mapping[str, object],
        conditions: Mapping[str, bool],
        counts: Mapping[str, object] | None = None,
        witness: Mapping[str, object] | None = None,
    ) -> CheckReport:
        """Build a report from named boolean conditions."""
        failed = sorted(name for name, holds in conditions.items() if not holds)
        status = Status.FAILED if failed else Status.VERIFIED
        if failed:
            witness = {**(witness or {}), "failed": failed}
        counts = {**(counts or {}), "conditions": len(conditions)}
        return CheckReport(check, dict(params), status, counts, witness)

    @staticmethod
    def skipped(
        check: str, params: Mapping[str, object], status: Status, reason: str
    ) -> CheckReport:
        """Build a report for a check that was not run."""
        if status not in (Status.SKIPPED_SIZE, Status.SKIPPED_RANGE):
            raise ValueError(f"Skipped reports need a skipped status (provided: {status})")
        return CheckReport(check, dict(params), status, witness={"reason": reason})

    @property
    def passed(self) -> bool:
        """Did this check pass (or get skipped)?"""
        return self.status.passed

    def to_json(self) -> dict[str, object]:
        """Serialize this report."""
        data: dict[str, object] = {
            "check": self.check,
            "params": dict(self.params),
            "status": self.status.value,
            "counts": dict(self.counts),
        }
        if self.witness is not None:
            data["witness"] = dict(self.witness)
        return data

    def sort_key(self) -> tuple[str, str]:
        """Canonical ordering of reports: by check, then by parameters."""
        return self.check, json.dumps(dict(self.params), sort_keys=True)
