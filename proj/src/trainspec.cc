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

#include "asvkit/trainspec.h"

#include <algorithm>
#include <cmath>

#include "asvkit/common.h"

namespace asvkit {

PhaseSchedule BaseSchedule() { return PhaseSchedule{}; }

PhaseSchedule FinetuneSchedule() {
  PhaseSchedule s;
  s.warmup_epochs = 1;
  s.plateau_epochs = 0;
  s.lr_start = 1e-5;
  s.lr_max = 1e-2;
  s.decay_gamma = 0.5;
  s.decay_every = 5;
  s.margin_start = 0.3;
  s.margin_max = 0.3;
  s.total_epochs = 30;
  return s;
}

void ValidateSchedule(const PhaseSchedule& s) {
  if (s.warmup_epochs < 0 || s.plateau_epochs < 0 || s.decay_every < 1 ||
      s.total_epochs < 1) {
    throw Error("schedule: invalid epoch counts");
  }
  if (!(s.lr_start > 0.0) || !(s.lr_start <= s.lr_max)) {
    throw Error("schedule: need 0 < lr_start <= lr_max");
  }
  if (!(s.decay_gamma > 0.0 && s.decay_gamma < 1.0)) {
    throw Error("schedule: decay gamma must be in (0, 1)");
  }
  if (!(s.margin_start >= 0.0) || !(s.margin_start <= s.margin_max)) {
    throw Error("schedule: need 0 <= margin_start <= margin_max");
  }
}

namespace {

void CheckEpoch(const PhaseSchedule& s, double epoch) {
  if (!(epoch >= 0.0 && epoch < static_cast<double>(s.total_epochs))) {
    throw Error("schedule: epoch " + FormatDouble(epoch) + " outside [0, " +
                std::to_string(s.total_epochs) + ")");
  }
}

}  // namespace

double PhaseLr(const PhaseSchedule& s, double epoch) {
  ValidateSchedule(s);
  CheckEpoch(s, epoch);
  const double w = s.warmup_epochs;
  const double decay_start = w + s.plateau_epochs;
  if (epoch < w) return std::lerp(s.lr_start, s.lr_max, epoch / w);
  if (epoch < decay_start) return s.lr_max;
  return s.lr_max *
         std::pow(s.decay_gamma, (epoch - decay_start) / s.decay_every);
}

double PhaseMargin(const PhaseSchedule& s, double epoch) {
  ValidateSchedule(s);
  CheckEpoch(s, epoch);
  const double w = s.warmup_epochs;
  const double decay_start = w + s.plateau_epochs;
  if (epoch < w) return s.margin_start;
  if (epoch < decay_start) {
    return std::lerp(s.margin_start, s.margin_max,
                     (epoch - w) / s.plateau_epochs);
  }
  return s.margin_max;
}

double BaseLr(double epoch) { return PhaseLr(BaseSchedule(), epoch); }
double BaseMargin(double epoch) { return PhaseMargin(BaseSchedule(), epoch); }
double FinetuneLr(double epoch) { return PhaseLr(FinetuneSchedule(), epoch); }
double FinetuneMargin(double epoch) {
  return PhaseMargin(FinetuneSchedule(), epoch);
}

void ValidateStaircase(const StaircaseSpec& s) {
  if (!(s.gamma > 0.0 && s.gamma <= 1.0)) {
    throw Error("staircase: gamma must be in (0, 1]");
  }
  if (s.warmup_epochs < 1 || s.plateau_epochs < 0 || s.epochs_per < 1) {
    throw Error("staircase: invalid epoch counts");
  }
  if (!(s.max_lr > 0.0)) throw Error("staircase: max_lr must be positive");
}

double StaircaseLr(const StaircaseSpec& s, int epoch) {
  ValidateStaircase(s);
  if (epoch < 0) throw Error("staircase: negative epoch");
  if (epoch < s.warmup_epochs) {
    return std::min(s.max_lr, s.max_lr / s.warmup_epochs * (epoch + 1));
  }
  const int after = epoch - s.warmup_epochs - s.plateau_epochs;
  if (after < 0) return s.max_lr;
  const int steps = 1 + after / s.epochs_per;
  double lr = s.max_lr;
  for (int i = 0; i < steps; ++i) lr *= s.gamma;
  return lr;
}

ArchSpec ResNet100Spec() {
  ArchSpec spec;
  spec.stages = {{6, 128, 96, 1}, {16, 128, 48, 2}, {24, 256, 24, 4},
                 {3, 256, 12, 8}};
  return spec;
}

ArchShapes ResnetShapes(const ArchSpec& spec, int frames) {
  if (spec.stages.empty()) throw Error("arch: no stages");
  if (spec.stem_channels < 1 || spec.input_freq_bins < 1 ||
      spec.embedding_dim < 1) {
    throw Error("arch: invalid stem/input/embedding sizes");
  }
  int prev_div = 1;
  for (size_t i = 0; i < spec.stages.size(); ++i) {
    const auto& st = spec.stages[i];
    const int d = st.time_divisor;
    if (d != 1 && d != 2 && d != 4 && d != 8) {
      throw Error("arch: time divisor must be one of 1, 2, 4, 8");
    }
    if (d != prev_div && d != 2 * prev_div) {
      throw Error("arch: stage " + std::to_string(i + 1) +
                  " must keep or halve the time axis");
    }
    if (st.blocks < 1 || st.channels < 1) {
      throw Error("arch: stage " + std::to_string(i + 1) +
                  " needs positive blocks and channels");
    }
    if (st.freq_out * d != spec.input_freq_bins) {
      throw Error("arch: stage " + std::to_string(i + 1) +
                  " frequency size does not match its stride");
    }
    prev_div = d;
  }
  const int max_div = spec.stages.back().time_divisor;
  if (frames < 1 || frames % max_div != 0) {
    throw Error("arch: T=" + std::to_string(frames) +
                " must be a positive multiple of " + std::to_string(max_div));
  }

  ArchShapes out;
  out.layers.push_back(
      {"Conv2D", spec.stem_channels, spec.input_freq_bins, frames});
  int blocks = 0;
  for (size_t i = 0; i < spec.stages.size(); ++i) {
    const auto& st = spec.stages[i];
    out.layers.push_back({"ResBlock-" + std::to_string(i + 1), st.channels,
                          st.freq_out, frames / st.time_divisor});
    blocks += st.blocks;
  }
  const LayerShape& last = out.layers.back();
  out.flatten_channels = last.channels * last.freq;
  out.flatten_time = last.time;
  out.pooled_dim = 2 * out.flatten_channels;
  out.embedding_dim = spec.embedding_dim;
  out.conv_layers = 1 + 2 * blocks;
  out.total_layers = out.conv_layers + 1;
  return out;
}

}  // namespace asvkit
