#!/usr/bin/env python3
# Copyright 2026 The synthpop Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Standalone reference for household-weight fitting on the 3-household case.

Households: {M}, {F}, {M,F}. Targets M=10, F=6. Weights start at 1 and are
rescaled uniformly so the grand weighted total equals the grand target total,
then alternating multiplicative scaling runs for a fixed 10,000 epochs.
"""
import sys

def fit(targets, epochs=10000):
    a = [[1, 0, 1],   # M
         [0, 1, 1]]   # F
    w = [1.0, 1.0, 1.0]
    total = sum(sum(wj * aj for wj, aj in zip(w, row)) for row in a)
    w = [wj * sum(targets) / total for wj in w]
    for _ in range(epochs):
        for row, t in zip(a, targets):
            s = sum(wj * aj for wj, aj in zip(w, row))
            w = [wj * t / s if aj > 0 else wj for wj, aj in zip(w, row)]
    return w

if __name__ == "__main__":
    scale = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
    for v in fit([10.0 * scale, 6.0 * scale]):
        print(repr(v))
