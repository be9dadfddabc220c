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


#include <cmath>

#include "doctest.h"

#include "asvkit/trainspec.h"

using namespace asvkit;

TEST_CASE("base schedule anchors") {
  CHECK(BaseLr(0) == 1e-5);
  CHECK(BaseMargin(0) == 0.0);
  CHECK(BaseLr(10) == 0.2);
  CHECK(BaseMargin(60) == 0.3);
  CHECK(BaseLr(80) == 0.1);
  CHECK(BaseLr(100) == 0.05);
  CHECK(BaseMargin(35) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK_THROWS(BaseLr(300));
  CHECK_THROWS(BaseLr(-0.5));
}

TEST_CASE("base schedule shape") {
  for (double b : {10.0, 60.0}) {
    CHECK(std::abs(BaseLr(b) - BaseLr(std::nextafter(b, 0.0))) < 1e-15);
  }
  double prev_margin = -1, prev_lr = 1;
  for (double e = 0; e < 300; e += 0.25) {
    CHECK(BaseMargin(e) >= prev_margin);
    prev_margin = BaseMargin(e);
    if (e >= 10) {
      CHECK(BaseLr(e) <= prev_lr);
      prev_lr = BaseLr(e);
    }
  }
}

TEST_CASE("fine-tune schedule") {
  CHECK(FinetuneLr(0) == 1e-5);
  CHECK(FinetuneLr(1) == 1e-2);
  CHECK(FinetuneLr(6) == 5e-3);
  CHECK(FinetuneLr(0.5) == doctest::Approx(5.005e-3).epsilon(1e-15));
  CHECK(FinetuneMargin(0) == 0.3);
  CHECK(FinetuneMargin(29) == 0.3);
  CHECK_THROWS(FinetuneLr(30));
}

TEST_CASE("staircase") {
  const StaircaseSpec s;
  CHECK(StaircaseLr(s, 0) == 0.5);
  CHECK(StaircaseLr(s, 1) == 1.0);
  CHECK(StaircaseLr(s, 7) == 1.0);
  CHECK(StaircaseLr(s, 8) == 0.5);
  CHECK(StaircaseLr(s, 9) == 0.5);
  CHECK(StaircaseLr(s, 10) == 0.25);
  for (int e = 9; e < 40; ++e) {
    const double r = StaircaseLr(s, e) / StaircaseLr(s, e - 1);
    CHECK((r == 1.0 || r == 0.5));
  }
  StaircaseSpec flat = s;
  flat.gamma = 1.0;
  for (int e = 2; e < 50; ++e) CHECK(StaircaseLr(flat, e) == 1.0);
  CHECK_THROWS(StaircaseLr(s, -1));
}

TEST_CASE("resnet shapes") {
  const auto sh = ResnetShapes(ResNet100Spec(), 800);
  REQUIRE(sh.layers.size() == 5);
  CHECK(sh.layers[0].channels == 128);
  CHECK(sh.layers[0].freq == 96);
  CHECK(sh.layers[0].time == 800);
  const int want[4][3] = {{128, 96, 800}, {128, 48, 400}, {256, 24, 200},
                          {256, 12, 100}};
  for (int i = 0; i < 4; ++i) {
    CHECK(sh.layers[i + 1].channels == want[i][0]);
    CHECK(sh.layers[i + 1].freq == want[i][1]);
    CHECK(sh.layers[i + 1].time == want[i][2]);
  }
  CHECK(sh.flatten_channels == 3072);
  CHECK(sh.flatten_time == 100);
  CHECK(sh.pooled_dim == 6144);
  CHECK(sh.embedding_dim == 256);
  CHECK(sh.conv_layers == 99);
  CHECK(sh.total_layers == 100);

  const auto tiny = ResnetShapes(ResNet100Spec(), 8);
  CHECK(tiny.layers[1].time == 8);
  CHECK(tiny.layers[2].time == 4);
  CHECK(tiny.layers[3].time == 2);
  CHECK(tiny.layers[4].time == 1);
  CHECK_THROWS(ResnetShapes(ResNet100Spec(), 804));
  CHECK_THROWS(ResnetShapes(ResNet100Spec(), 0));
}
