// Copyright 2026 The qmlab Authors
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

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, event, draw index) through Philox4x32-10, so a run can be
// split into shards over disjoint event ranges and merged without changing
// a single bit of the result.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <thread>
#include <vector>

namespace qmlab {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
constexpr Philox4x32Counter philox4x32(Philox4x32Counter ctr, Philox4x32Key key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u;
  constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

/// Splittable counter-based generator.
///
/// Draws are grouped into events: begin_event() hands out the next event
/// counter and every subsequent uniform() belongs to that event until the
/// next begin_event(). Event k of a given (seed, stream) always produces the
/// same draws, no matter which shard or thread evaluates it.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint32_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t stream() const noexcept { return stream_; }

  /// Independent generator sharing the seed; event counters restart at 0.
  CounterRng split(std::uint32_t stream) const { return CounterRng(seed_, stream); }

  /// Starts a new event and returns its counter.
  std::uint64_t begin_event() {
    current_ = next_++;
    draw_ = 0;
    active_ = true;
    return current_;
  }

  /// Positions the generator so that the next begin_event() returns `event`.
  void seek(std::uint64_t event) {
    next_ = event;
    active_ = false;
  }

  std::uint64_t next_event() const noexcept { return next_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    if (!active_) begin_event();
    const std::uint32_t index = draw_++;
    const auto block = philox4x32(
        {static_cast<std::uint32_t>(current_), static_cast<std::uint32_t>(current_ >> 32),
         index / 2, stream_},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    const std::size_t lane = (index % 2) * 2;
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(block[lane]) << 32) | block[lane + 1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
  std::uint64_t next_ = 0;
  std::uint64_t current_ = 0;
  std::uint32_t draw_ = 0;
  bool active_ = false;
};

/// Splits `total` events into contiguous ranges and calls
/// fn(shard, first_event, count) for each, one thread per shard. Results
/// must be written to per-shard slots and merged by the caller in shard
/// order.
template <class Fn>
void for_each_shard(std::uint64_t total, unsigned shards, Fn&& fn) {
  shards = std::max(1u, shards);
  const std::uint64_t chunk = (total + shards - 1) / shards;
  if (shards == 1) {
    fn(0u, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(shards);
  for (unsigned s = 0; s < shards; ++s) {
    const std::uint64_t first = std::min(total, s * chunk);
    const std::uint64_t count = std::min(chunk, total - first);
    workers.emplace_back([&fn, s, first, count] { fn(s, first, count); });
  }
}

/// Shard count used by Monte Carlo loops: hardware concurrency, capped.
inline unsigned default_shards() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(hw, 1u, 8u);
}

}  // namespace qmlab
