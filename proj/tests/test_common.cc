// Copyright (c) 2026 The asvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"

#include "asvkit/common.h"
#include "asvkit/rng.h"
#include "test_util.h"

using namespace asvkit;

TEST_CASE("FormatDouble is shortest round-trip") {
  CHECK(FormatDouble(0.5) == "0.5");
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatDouble(-2.0) == "-2");
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.Normal() * std::pow(10.0, rng.Below(40) - 20.0);
    double back = 0.0;
    REQUIRE(ParseDouble(FormatDouble(v), &back));
    CHECK(back == v);
  }
}

TEST_CASE("ParseDouble is strict") {
  double v = 0.0;
  CHECK(ParseDouble("1e-3", &v));
  CHECK(v == 1e-3);
  CHECK_FALSE(ParseDouble("", &v));
  CHECK_FALSE(ParseDouble("abc", &v));
  CHECK_FALSE(ParseDouble("1.5x", &v));
  CHECK_FALSE(ParseDouble("nan", &v));
  CHECK_FALSE(ParseDouble("inf", &v));
  long long n = 0;
  CHECK(ParseInt("42", &n));
  CHECK(n == 42);
  CHECK_FALSE(ParseInt("4.2", &n));
}

TEST_CASE("CompensatedSum recovers cancelled terms") {
  CompensatedSum s;
  s.Add(1e100);
  s.Add(1.0);
  s.Add(-1e100);
  CHECK(s.Value() == 1.0);
}

TEST_CASE("Rng matches reference xoshiro256** streams") {
  // Reference values from an independent implementation.
  Rng a(0);
  CHECK(a.NextU64() == 0x99ec5f36cb75f2b4ULL);
  CHECK(a.NextU64() == 0xbf6e1f784956452aULL);
  Rng b(42);
  CHECK(b.NextU64() == 0x15780b2e0c2ec716ULL);
  CHECK(b.NextU64() == 0x6104d9866d113a7eULL);
  CHECK(b.NextU64() == 0xae17533239e499a1ULL);
  CHECK(Rng::StreamSeed(7, 1) == 0xec779c3693f88501ULL);
  Rng c(42);
  CHECK(c.Uniform() == 0.08386297105988216);
}

TEST_CASE("Rng derived draws stay in range") {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.Below(7) < 7u);
    const double z = rng.Normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  std::vector<int> v{0, 1, 2, 3, 4, 5};
  rng.Shuffle(&v);
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("WriteFileAtomic replaces contents and ReadFile reports missing") {
  testutil::TempDir dir;
  const auto p = dir.File("x.txt");
  WriteFileAtomic(p, "one");
  WriteFileAtomic(p, "two");
  CHECK(ReadFile(p) == "two");
  CHECK_THROWS_AS(ReadFile(dir.File("missing")), Error);
}
