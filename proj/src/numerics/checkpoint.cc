/* Copyright 2026 The docdet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "docdet/numerics/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "docdet/error.h"
#include "docdet/util/atomic_file.h"

namespace docdet::numerics {
namespace {

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

class Reader {
 public:
  Reader(std::span<const unsigned char> bytes, std::string origin)
      : bytes_(bytes), origin_(std::move(origin)) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

  template <typename T>
  T get_le(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  std::string get_string(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError(origin_ + ": corrupt checkpoint at byte offset " +
                    std::to_string(pos_) + ": " + msg);
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      fail(std::string("truncated while reading ") + what + " (need " +
           std::to_string(n) + " bytes, " + std::to_string(bytes_.size() - pos_) +
           " left)");
    }
  }

  std::span<const unsigned char> bytes_;
  std::string origin_;
  std::size_t pos_ = 0;
};

CheckpointContents decode(std::span<const unsigned char> bytes,
                          const std::string& origin) {
  Reader r(bytes, origin);
  const std::string magic = r.get_string(sizeof(kCheckpointMagic), "magic");
  if (std::memcmp(magic.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw DataError(origin + ": corrupt checkpoint at byte offset 0: bad magic");
  }
  const auto version = r.get_le<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  CheckpointContents c;
  const auto meta_len = r.get_le<std::uint32_t>("metadata length");
  c.metadata = r.get_string(meta_len, "metadata");
  const auto count = r.get_le<std::uint32_t>("entry count");
  for (std::uint32_t e = 0; e < count; ++e) {
    const auto name_len = r.get_le<std::uint32_t>("entry name length");
    std::string name = r.get_string(name_len, "entry name");
    const auto rank = r.get_le<std::uint32_t>("tensor rank");
    if (rank == 0 || rank > 8) r.fail("entry '" + name + "' has invalid rank " + std::to_string(rank));
    Shape shape;
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const auto dim = r.get_le<std::uint64_t>("tensor dim");
      if (dim == 0 || dim > (std::uint64_t{1} << 32)) {
        r.fail("entry '" + name + "' has invalid dim " + std::to_string(dim));
      }
      shape.push_back(static_cast<std::size_t>(dim));
      n *= static_cast<std::size_t>(dim);
      if (n > (std::size_t{1} << 34)) r.fail("entry '" + name + "' too large");
    }
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) {
      data[i] = std::bit_cast<double>(r.get_le<std::uint64_t>("tensor data"));
    }
    c.entries.push_back({std::move(name), Tensor(std::move(shape), std::move(data))});
  }
  if (!r.at_end()) r.fail("trailing bytes after last entry");
  return c;
}

}  // namespace

std::string encode_checkpoint(const CheckpointContents& contents) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(contents.metadata.size()));
  out += contents.metadata;
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(contents.entries.size()));
  for (const auto& e : contents.entries) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out += e.name;
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.rank()));
    for (std::size_t d : e.value.shape()) put_le<std::uint64_t>(out, d);
    for (double v : e.value.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

CheckpointContents decode_checkpoint(std::span<const unsigned char> bytes) {
  return decode(bytes, "<memory>");
}

void save_checkpoint(const std::filesystem::path& path,
                     const CheckpointContents& contents) {
  util::write_text_atomically(path, encode_checkpoint(contents));
}

CheckpointContents load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode(bytes, path.string());
}

}  // namespace docdet::numerics
