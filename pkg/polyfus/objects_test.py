"""Unit tests for objects.py

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

import pytest

from polyfus import objects


def test_status() -> None:
    """Skipped checks count as passed, and statuses print as their values."""
    assert objects.Status.VERIFIED.passed
    assert objects.Status.SKIPPED_SIZE.passed and objects.Status.SKIPPED_RANGE.passed
    assert not objects.Status.FAILED.passed
    assert str(objects.Status.SKIPPED_SIZE) == "skipped(size)"


def test_check_report() -> None:
    """Reports collect the names of failed conditions."""
    params = {"p": 3, "m": 2, "target": "Sn:1"}
    report = objects.CheckReport.from_conditions("test", params, {"a": True, "b": True})
    assert report.status is objects.Status.VERIFIED
    assert report.to_json() == {
        "check": "test",
        "params": params,
        "status": "verified",
        "counts": {"conditions": 2},
    }

    report = objects.CheckReport.from_conditions(
        "test", params, {"b": False, "a": False, "c": True}, counts={"elements": 9}
    )
    assert report.status is objects.Status.FAILED
    assert not report.passed
    assert report.witness == {"failed": ["a", "b"]}
    assert report.counts == {"elements": 9, "conditions": 3}


def test_skipped_report() -> None:
    """Skipped reports carry a reason."""
    report = objects.CheckReport.skipped("test", {}, objects.Status.SKIPPED_RANGE, "requires q > p")
    assert report.passed
    assert report.to_json()["witness"] == {"reason": "requires q > p"}
    with pytest.raises(ValueError, match="skipped status"):
        objects.CheckReport.skipped("test", {}, objects.Status.VERIFIED, "")


def test_sort_key() -> None:
    """Reports sort by check, then by parameters."""
    reports = [
        objects.CheckReport.from_conditions("b", {"p": 3}, {}),
        objects.CheckReport.from_conditions("a", {"p": 5}, {}),
        objects.CheckReport.from_conditions("a", {"p": 3}, {}),
    ]
    ordered = sorted(reports, key=objects.CheckReport.sort_key)
    assert [(report.check, report.params["p"]) for report in ordered] == [
        ("a", 3),
        ("a", 5),
        ("b", 3),
    ]
