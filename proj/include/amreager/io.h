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

// File helpers and little-endian binary encoding.

#ifndef AMREAGER_IO_H_
#define AMREAGER_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace amreager {

// Throws DataError when the file cannot be read.
std::string ReadFile(const std::filesystem::path &path);

// Writes through a temporary file and a rename, creating parent
// directories as needed.
void WriteFile(const std::filesystem::path &path, std::string_view data);

class ByteWriter {
 public:
  void PutU8(uint8_t v) { data_.push_back(static_cast<char>(v)); }
  void PutU16(uint16_t v);
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutF32(float v);
  void PutBytes(std::string_view bytes) { data_.append(bytes); }

  const std::string &data() const { return data_; }
  std::string Release() { return std::move(data_); }

 private:
  std::string data_;
};

// Reads from a byte buffer; running past the end throws DataError naming
// the offset and `what`.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  uint8_t GetU8(const char *what);
  uint16_t GetU16(const char *what);
  uint32_t GetU32(const char *what);
  uint64_t GetU64(const char *what);
  float GetF32(const char *what);
  std::string_view GetBytes(size_t n, const char *what);

  size_t offset() const { return offset_; }
  size_t remaining() const { return data_.size() - offset_; }
  bool done() const { return offset_ == data_.size(); }

 private:
  void Need(size_t n, const char *what) const;

  std::string_view data_;
  size_t offset_ = 0;
};

}  // namespace amreager

#endif  // AMREAGER_IO_H_
