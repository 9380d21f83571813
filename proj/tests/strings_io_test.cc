// Copyright 2026 The AmrEager Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>

#include "amreager/errors.h"
#include "amreager/io.h"
#include "amreager/strings.h"
#include "doctest.h"
#include "testing/testing.h"

namespace amreager {
namespace {

TEST_CASE("strings") {
  CHECK(Lowercase("DoG") == "dog");
  CHECK(ParseNumber("4") == 4.0);
  CHECK(ParseNumber("-2.5") == -2.5);
  CHECK_FALSE(ParseNumber("4x").has_value());
  CHECK_FALSE(ParseNumber("").has_value());
  CHECK(CanonicalNumber("4.0") == CanonicalNumber("4"));
  CHECK(CanonicalNumber("0.10") == "0.1");
  CHECK(CanonicalNumber("dog") == "dog");
  CHECK(Split("a\tb\t", '\t') == std::vector<std::string>{"a", "b", ""});
  CHECK(Fingerprint("") == 0xcbf29ce484222325ULL);
  CHECK(Fingerprint("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("byte writer and reader") {
  ByteWriter w;
  w.PutU8(7);
  w.PutU16(0x1234);
  w.PutU32(0xdeadbeef);
  w.PutU64(0x0102030405060708ULL);
  w.PutF32(-1.5f);
  w.PutBytes("xy");
  const std::string bytes = w.Release();
  REQUIRE(bytes.size() == 1 + 2 + 4 + 8 + 4 + 2);
  CHECK(bytes[1] == '\x34');  // little-endian
  ByteReader r(bytes);
  CHECK(r.GetU8("a") == 7);
  CHECK(r.GetU16("b") == 0x1234);
  CHECK(r.GetU32("c") == 0xdeadbeef);
  CHECK(r.GetU64("d") == 0x0102030405060708ULL);
  CHECK(r.GetF32("e") == -1.5f);
  CHECK(r.GetBytes(2, "f") == "xy");
  CHECK(r.done());
  try {
    r.GetU32("tail");
    FAIL("read past the end");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("byte 21") != std::string::npos);
  }
}

TEST_CASE("files") {
  const auto dir = testing::TempDir("io");
  WriteFile(dir / "a" / "b.txt", "hello");
  CHECK(ReadFile(dir / "a" / "b.txt") == "hello");
  CHECK_THROWS_AS(ReadFile(dir / "missing"), DataError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace amreager
