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

#include <set>

#include "doctest.h"
#include "qmlab/measure.hpp"
#include "qmlab/rng.hpp"

using namespace qmlab;

TEST_SUITE("rng") {

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Published reference vectors for the 10-round Philox4x32 block function.
  constexpr auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  static_assert(zero[0] == 0x6627e8d5u && zero[3] == 0x9b00dbd8u);
  CHECK(zero == Philox4x32Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                   {0xffffffffu, 0xffffffffu}) ==
        Philox4x32Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                   {0xa4093822u, 0x299f31d0u}) ==
        Philox4x32Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniform draws lie in [0, 1) and (0, 1]") {
  CounterRng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_open_low();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("events are addressable by counter") {
  CounterRng a(99);
  std::vector<double> first;
  for (int e = 0; e < 5; ++e) {
    CHECK(a.begin_event() == static_cast<std::uint64_t>(e));
    first.push_back(a.uniform());
    a.uniform();
  }
  CounterRng b(99);
  b.seek(3);
  b.begin_event();
  CHECK(b.uniform() == first[3]);
}

TEST_CASE("seeds and streams give distinct sequences") {
  CounterRng a(1), b(2), c = CounterRng(1).split(5);
  std::set<double> seen;
  for (int i = 0; i < 100; ++i) {
    seen.insert(a.uniform());
    seen.insert(b.uniform());
    seen.insert(c.uniform());
  }
  CHECK(seen.size() == 300);
  CHECK(c.seed() == 1);
  CHECK(c.stream() == 5);
}

TEST_CASE("uniform moments") {
  CounterRng rng(2026);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    s += u;
    s2 += u * u;
  }
  CHECK(std::abs(s / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(s2 / n - 1.0 / 3.0) < 4.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST_CASE("sharded sampling is bit-identical to the sequential run") {
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  for (std::uint64_t shots : {1ull, 7ull, 1000ull, 12345ull}) {
    CounterRng seq(11), par(11);
    const auto a = sample_counts(w, shots, seq, 1);
    const auto b = sample_counts(w, shots, par, 5);
    CHECK(a.counts == b.counts);
    CHECK(seq.next_event() == par.next_event());
    CHECK(seq.next_event() == shots);
  }
}

TEST_CASE("for_each_shard covers the range exactly once") {
  std::vector<int> hits(1003, 0);
  for_each_shard(hits.size(), 4, [&](unsigned, std::uint64_t first, std::uint64_t count) {
    for (std::uint64_t i = first; i < first + count; ++i) ++hits[i];
  });
  for (int h : hits) CHECK(h == 1);
}

}  // TEST_SUITE
