#!/usr/bin/env python3
# Copyright 2026 The AmrEager Authors.
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

"""Writes golden.amre, the contextual embedding file the C++ tests read.

Values are value(s, t, k) = ((7 s + 13 t + k) % 257 - 128) / 64 for
sentence s, token t and dimension k; all exactly representable as float32.
"""

import os
import struct

DIM = 768
SENTENCES = [("toy.1", 5), ("café-2", 3)]


def value(s, t, k):
    return ((7 * s + 13 * t + k) % 257 - 128) / 64.0


def main():
    out = bytearray(b"AMRE")
    out += struct.pack("<HH", 1, DIM)
    for s, (sid, count) in enumerate(SENTENCES):
        encoded = sid.encode("utf-8")
        out += struct.pack("<I", len(encoded)) + encoded
        out += struct.pack("<I", count)
        for t in range(count):
            out += struct.pack("<%df" % DIM, *(value(s, t, k) for k in range(DIM)))
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden.amre")
    with open(path, "wb") as f:
        f.write(out)


if __name__ == "__main__":
    main()
