///////////////////////////////////////////////////////////////////////
// File:        test_support.hpp
// Description: Helpers shared by the unit tests.
//
// (C) Copyright 2026, The ocrtl Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
///////////////////////////////////////////////////////////////////////

#ifndef OCRTL_TESTS_TEST_SUPPORT_HPP
#define OCRTL_TESTS_TEST_SUPPORT_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <system_error>

#include "codec.hpp"
#include "linenet.hpp"

namespace ocrtl::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ocrtl-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Codec {blank, ' ', 'a', 'b', ...} with `letters` letters after the space.
inline Codec letters_codec(int letters) {
  std::vector<char32_t> symbols = {kBlank, kSpace};
  for (int i = 0; i < letters; ++i) symbols.push_back(static_cast<char32_t>(U'a' + i));
  return Codec::from_symbols(symbols, {});
}

inline LineImage random_line(std::mt19937_64& rng, int height, int width) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LineImage line{Eigen::MatrixXd(height, width)};
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) line.pixels(r, c) = u(rng);
  }
  return line;
}

// Network with weights spread wider than the init range so that
// posteriors are far from uniform.
inline Network random_network(std::uint64_t seed, int height, int hidden, const Codec& codec,
                              double scale = 1.0) {
  Network net = init_network(height, hidden, codec, seed);
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  std::uniform_real_distribution<double> u(-scale, scale);
  net.params.for_each([&](std::string_view, auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  });
  return net;
}

}  // namespace ocrtl::testing

#endif  // OCRTL_TESTS_TEST_SUPPORT_HPP
