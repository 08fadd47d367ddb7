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

"""
Constants for the CBIM experiment harness
"""

# Prefix of environment variables that set config defaults (CBIM_K=3, ...)
ENV_PREFIX = "CBIM_"

# Output files derived from the run prefix
CSV_SUFFIX = ".csv"
SUMMARY_SUFFIX = ".summary.txt"
CHECKPOINT_SUFFIX = ".ckpt"

# Process exit codes
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

# Budget rules accepted in place of explicit budgets
BUDGET_RULES = {
    "(l+1)/2": lambda l: (l + 1) / 2,
    "l/2": lambda l: l / 2,
}
