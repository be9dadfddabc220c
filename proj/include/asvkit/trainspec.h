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

// Training recipe as pure functions: learning-rate and AM-Softmax margin
// schedules, and the ResNet-100 tensor shape table. No training happens here.

#ifndef ASVKIT_TRAINSPEC_H_
#define ASVKIT_TRAINSPEC_H_

#include <string>
#include <vector>

namespace asvkit {

// Three phases over a real-valued epoch:
//   warmup  [0, w)        lr: linear lr_start -> lr_max, margin = margin_start
//   plateau [w, w + p)    lr = lr_max, margin: linear margin_start -> max
//   decay   [w + p, end)  lr = lr_max * gamma^((e - w - p) / decay_every),
//                         margin = margin_max
struct PhaseSchedule {
  int warmup_epochs = 10;
  int plateau_epochs = 50;
  double lr_start = 1e-5;
  double lr_max = 0.2;
  double decay_gamma = 0.5;
  int decay_every = 20;
  double margin_start = 0.0;
  double margin_max = 0.3;
  double scale = 30.0;  // AM-Softmax scale, constant
  int total_epochs = 300;
};

// Initial training stage: 300 epochs.
PhaseSchedule BaseSchedule();
// Fine-tuning stage: 30 epochs, one warmup epoch to 1e-2, halving every 5,
// margin fixed at 0.3.
PhaseSchedule FinetuneSchedule();

void ValidateSchedule(const PhaseSchedule& s);
double PhaseLr(const PhaseSchedule& s, double epoch);
double PhaseMargin(const PhaseSchedule& s, double epoch);

double BaseLr(double epoch);
double BaseMargin(double epoch);
double FinetuneLr(double epoch);
double FinetuneMargin(double epoch);

// Stepped exponential schedule with warmup, given as
// (gamma, warmup epochs, plateau epochs, epochs per step) plus max_lr.
struct StaircaseSpec {
  double gamma = 0.5;
  int warmup_epochs = 2;
  int plateau_epochs = 6;
  int epochs_per = 2;
  double max_lr = 1.0;
};

void ValidateStaircase(const StaircaseSpec& s);

// warmup:  min(max_lr, max_lr / warmup * (epoch + 1))
// plateau: max_lr
// after:   max_lr * gamma^(1 + floor((epoch - warmup - plateau) / epochs_per))
double StaircaseLr(const StaircaseSpec& s, int epoch);

struct ArchStage {
  int blocks = 0;  // residual blocks of two 3x3 convs each
  int channels = 0;
  int freq_out = 0;
  int time_divisor = 1;
};

struct ArchSpec {
  int stem_channels = 128;
  int input_freq_bins = 96;
  int embedding_dim = 256;
  std::vector<ArchStage> stages;
};

// Four stages: (6, 128, 96, 1), (16, 128, 48, 2), (24, 256, 24, 4),
// (3, 256, 12, 8).
ArchSpec ResNet100Spec();

struct LayerShape {
  std::string name;
  int channels = 0;
  int freq = 0;
  int time = 0;
};

struct ArchShapes {
  std::vector<LayerShape> layers;  // stem, then one entry per stage
  int flatten_channels = 0;        // C x F of the last stage
  int flatten_time = 0;
  int pooled_dim = 0;              // attentive stats pooling: mean + std
  int embedding_dim = 0;
  int conv_layers = 0;             // stem + 2 per block
  int total_layers = 0;            // conv layers + dense
};

ArchShapes ResnetShapes(const ArchSpec& spec, int frames);

}  // namespace asvkit

#endif  // ASVKIT_TRAINSPEC_H_
