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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "docdet/error.h"
#include "docdet/numerics/checkpoint.h"
#include "test_util.h"

namespace docdet::numerics {
namespace {

CheckpointContents sample_contents() {
  std::mt19937_64 rng(1);
  CheckpointContents c;
  c.metadata = "{\"k\": 1}";
  c.entries.push_back({"conv.weight", testing::random_tensor({2, 3, 3, 3}, rng)});
  c.entries.push_back({"conv.bias", testing::random_tensor({2}, rng)});
  return c;
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  const CheckpointContents c = sample_contents();
  const std::string bytes = encode_checkpoint(c);
  const auto back = decode_checkpoint(
      std::span(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
  EXPECT_EQ(back.metadata, c.metadata);
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[0].name, "conv.weight");
  EXPECT_EQ(back.entries[0].value, c.entries[0].value);
  EXPECT_EQ(back.entries[1].value, c.entries[1].value);
}

TEST(CheckpointTest, LayoutIsLittleEndianWithMagic) {
  CheckpointContents c;
  c.entries.push_back({"w", Tensor({1}, 1.0)});
  const std::string b = encode_checkpoint(c);
  EXPECT_EQ(b.substr(0, 8), "DOCDETCK");
  EXPECT_EQ(static_cast<unsigned char>(b[8]), 1u);  // version
  // magic 8 + version 4 + meta len 4 + count 4 + name len 4 + "w" 1
  // + rank 4 + dim 8 + data 8
  ASSERT_EQ(b.size(), 45u);
  // 1.0 = 0x3FF0000000000000, little-endian: last byte 0x3F, previous 0xF0.
  EXPECT_EQ(static_cast<unsigned char>(b[44]), 0x3Fu);
  EXPECT_EQ(static_cast<unsigned char>(b[43]), 0xF0u);
}

TEST(CheckpointTest, CorruptionReportsOffset) {
  const std::string bytes = encode_checkpoint(sample_contents());
  auto decode_prefix = [&](std::size_t n) {
    return decode_checkpoint(
        std::span(reinterpret_cast<const unsigned char*>(bytes.data()), n));
  };
  try {
    decode_prefix(bytes.size() - 3);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("byte offset"), std::string::npos);
  }
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_checkpoint(std::span(
                   reinterpret_cast<const unsigned char*>(bad_magic.data()),
                   bad_magic.size())),
               DataError);
  std::string trailing = bytes + "xx";
  EXPECT_THROW(decode_checkpoint(std::span(
                   reinterpret_cast<const unsigned char*>(trailing.data()),
                   trailing.size())),
               DataError);
}

TEST(CheckpointTest, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "docdet_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "m.ckpt";
  save_checkpoint(path, sample_contents());
  EXPECT_FALSE(std::filesystem::exists(dir / "m.ckpt.tmp"));
  EXPECT_EQ(load_checkpoint(path).entries[0].value,
            sample_contents().entries[0].value);
  EXPECT_THROW(load_checkpoint(dir / "missing.ckpt"), DataError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace docdet::numerics
