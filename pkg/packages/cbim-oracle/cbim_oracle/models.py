# Copyright 2026 The CBIM Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from typing import Any

from pydantic import BaseModel, Field


class Mismatch(BaseModel):
    """One failing trial, with everything needed to replay it"""

    trial: int
    detail: str
    inputs: dict[str, Any] = Field(default_factory=dict)


class OracleReport(BaseModel):
    suite: str
    trials: int = 0
    mismatches: list[Mismatch] = Field(default_factory=list)
    max_error: float = 0.0
    kinks: int = 0

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def record(self, trial: int, detail: str, **inputs: Any) -> None:
        self.mismatches.append(Mismatch(trial=trial, detail=detail, inputs=inputs))

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.suite}: {self.trials} trials, {len(self.mismatches)} mismatches"
        if self.max_error:
            line += f", max error {self.max_error:.3e}"
        if self.kinks:
            line += f", {self.kinks} kinks skipped"
        return line
