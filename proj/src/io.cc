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

#include "amreager/io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "amreager/errors.h"

namespace amreager {

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path &path, std::string_view data) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("write failed for " + path.string());
  }
  std::filesystem::rename(temp, path);
}

void ByteWriter::PutU16(uint16_t v) {
  PutU8(v & 0xff);
  PutU8(v >> 8);
}

void ByteWriter::PutU32(uint32_t v) {
  for (int i = 0; i < 4; ++i) PutU8((v >> (8 * i)) & 0xff);
}

void ByteWriter::PutU64(uint64_t v) {
  for (int i = 0; i < 8; ++i) PutU8((v >> (8 * i)) & 0xff);
}

void ByteWriter::PutF32(float v) { PutU32(std::bit_cast<uint32_t>(v)); }

void ByteReader::Need(size_t n, const char *what) const {
  if (n > remaining()) {
    throw DataError("truncated input at byte " + std::to_string(offset_) +
                    ": expected " + what);
  }
}

uint8_t ByteReader::GetU8(const char *what) {
  Need(1, what);
  return static_cast<uint8_t>(data_[offset_++]);
}

uint16_t ByteReader::GetU16(const char *what) {
  Need(2, what);
  uint16_t v = GetU8(what);
  v |= static_cast<uint16_t>(GetU8(what)) << 8;
  return v;
}

uint32_t ByteReader::GetU32(const char *what) {
  Need(4, what);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(GetU8(what)) << (8 * i);
  return v;
}

uint64_t ByteReader::GetU64(const char *what) {
  Need(8, what);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(GetU8(what)) << (8 * i);
  return v;
}

float ByteReader::GetF32(const char *what) {
  return std::bit_cast<float>(GetU32(what));
}

std::string_view ByteReader::GetBytes(size_t n, const char *what) {
  Need(n, what);
  std::string_view bytes = data_.substr(offset_, n);
  offset_ += n;
  return bytes;
}

}  // namespace amreager
