// Copyright 2026 The bangbang Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bangbang/sequence_io.hpp"

#include <filesystem>

#include <gtest/gtest.h>

#include "bangbang/matrix_io.hpp"
#include "test_util.hpp"

using namespace bb;

namespace {

void expect_parse_error(const std::string& text, const std::string& fragment) {
  try {
    parse_sequence(text);
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(sequence_io, format_small) {
  BBSequence seq(5e-6, 3, 2, {"1H", "13C"});
  seq.set_pulse(0, 0, kPi / 2);
  seq.set_pulse(2, 1, 0.0);
  seq.set_twirl_boundaries({1, 3});
  const std::string expected =
      "# bangbang sequence\n"
      "dt 5.0000000000000004e-06\n"
      "segments 3\n"
      "species 1H 13C\n"
      "P:90 D\n"
      "D D\n"
      "D P:0\n"
      "twirls 1 3\n";
  EXPECT_EQ(format_sequence(seq), expected);
  EXPECT_EQ(parse_sequence(expected), seq);
}

TEST(sequence_io, round_trip_random) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    BBSequence seq = bb::testing::random_single_channel_sequence(3, 500, 0.3, 4e-6, rng);
    // A few simultaneous pulses too.
    seq.set_pulse(7, 0, 1.234567890123);
    seq.set_pulse(7, 2, 6.2831853);
    if (trial % 2) seq.set_twirl_boundaries({0, 17, 250, 500});
    const BBSequence again = parse_sequence(format_sequence(seq));
    EXPECT_EQ(again, seq);
    EXPECT_EQ(format_sequence(again), format_sequence(seq));
  }
}

TEST(sequence_io, save_and_load) {
  const auto path = std::filesystem::temp_directory_path() / "bangbang_seq_io_test.txt";
  BBSequence seq(5e-6, 4, 1, {"1H"});
  seq.set_pulse(1, 0, 3.0);
  save_sequence(path.string(), seq);
  EXPECT_EQ(load_sequence(path.string()), seq);
  std::filesystem::remove(path);
  EXPECT_THROW(load_sequence(path.string()), std::invalid_argument);
}

TEST(sequence_io, errors_name_the_line) {
  const std::string head = "dt 5e-6\nsegments 2\nspecies H C\n";
  expect_parse_error(head + "D D\nD X:1\ntwirls\n", "line 5");
  expect_parse_error(head + "D D\nD\ntwirls\n", "line 5");
  expect_parse_error(head + "D D\nD P:360\ntwirls\n", "[0, 360)");
  expect_parse_error(head + "D D\nD D\ntwirls 2 1\n", "line 6");
  expect_parse_error(head + "D D\nD D\ntwirls 3\n", "line 6");
  expect_parse_error(head + "D D\n", "end of file");
  expect_parse_error("dt -1\nsegments 0\nspecies H\ntwirls\n", "line 1");
  expect_parse_error("dt 1e-6\nsegs 0\n", "line 2");
}

TEST(matrix_io, round_trip_exact) {
  std::mt19937_64 rng(1);
  const CMatrix m = bb::testing::random_complex(5, 5, rng);
  EXPECT_EQ(parse_matrix(format_matrix(m, "random")), m);
  EXPECT_EQ(matrix_comment(format_matrix(m, "random")), "random");
}

TEST(matrix_io, errors_name_the_line) {
  try {
    parse_matrix("# c\n1,0 0,0\n0,0 1,x\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_matrix("1,0 0,0\n0,0\n"), std::invalid_argument);
}
