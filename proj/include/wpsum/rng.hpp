// Copyright 2026 The wpsum Authors.
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

#ifndef WPSUM_RNG_HPP_
#define WPSUM_RNG_HPP_

#include <array>
#include <cstdint>

namespace wpsum {

// Role of a random stream within one replication. Distinct roles of the same
// (seed, replication) pair never share counter blocks.
enum class StreamRole : std::uint32_t {
  kInnovations = 1,
  kPowerIteration = 2,
  kAuxiliary = 3,
};

struct StreamKey {
  std::uint64_t master_seed = 1;
  std::uint64_t replication = 0;
  StreamRole role = StreamRole::kInnovations;
};

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// Counter-based generator: the seed is the Philox key, the replication index
// and role occupy the upper counter words, and a block index runs through the
// lower two. Any replication can be generated independently of the others.
class CounterRng {
 public:
  explicit CounterRng(StreamKey key);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t rep_word_;
  std::uint32_t role_word_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // remaining 64-bit words in buffer_
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wpsum

#endif  // WPSUM_RNG_HPP_
