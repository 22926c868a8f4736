#!/usr/bin/env python3
# Copyright 2026 The mtnoise Authors
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
"""Writes the synthetic demo corpus (source.en.txt) and trajectory.csv."""

import os
import random

SUBJECTS = ["The old fisherman", "My neighbour", "A young student", "The committee",
            "Her brother", "The small dog", "Every engineer", "Our teacher",
            "The mayor", "A tired traveller", "The orchestra", "Nobody"]
VERBS = ["repaired", "painted", "described", "carried", "forgot", "borrowed",
         "translated", "discovered", "cleaned", "admired", "measured", "sold"]
OBJECTS = ["the wooden boat", "a long letter", "the broken window", "three books",
           "the garden fence", "an ancient map", "the kitchen table",
           "a strange melody", "the village bridge", "two red bicycles",
           "the annual report", "a heavy suitcase"]
TAILS = ["yesterday", "before sunrise", "without any help", "in the rain",
         "during the holidays", "after a long discussion", "for the museum",
         "with great care", "last winter", "near the harbour"]


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    rng = random.Random(7)
    lines = []
    for _ in range(500):
        s = f"{rng.choice(SUBJECTS)} {rng.choice(VERBS)} {rng.choice(OBJECTS)}"
        if rng.random() < 0.7:
            s += " " + rng.choice(TAILS)
        lines.append(s + rng.choice([".", ".", ".", "!", "?"]))
    with open(os.path.join(here, "source.en.txt"), "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    # Exactly linear decline of 20 points per unit of noise.
    with open(os.path.join(here, "trajectory.csv"), "w", encoding="utf-8") as f:
        f.write("p,score\n")
        for k in range(11):
            f.write(f"{k / 10},{80 - 2 * k}\n")


if __name__ == "__main__":
    main()
