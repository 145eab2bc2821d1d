// Copyright 2026 The OPMP Authors
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

#pragma once

#include <cstdint>
#include <vector>

#include "opmp/geometry.hpp"

namespace opmp {

/// Everything the per-round inequalities need about round t.
///
/// Subscripts follow the round index: queue is Q(t) (built from g(x_{t-1})),
/// queue_next is Q(t+1) (built from g(x_t)).
struct RoundSnapshot {
  int t = 0;
  Vector x_prev;        // x_{t-1}
  Vector x;             // x_t
  Vector anchor;        // x~_t
  Vector anchor_next;   // x~_{t+1}
  Vector mixed;         // y~_t, simplex variant only
  Vector mixed_next;    // y~_{t+1}, simplex variant only
  Vector queue_prev;    // Q(t-1)
  Vector queue;         // Q(t)
  Vector queue_next;    // Q(t+1)
  double alpha = 0.0;   // alpha_t
  double xi = 0.0;      // xi_t
  double gamma = 0.0;
  double mixing = 0.0;  // nu; 0 for the general variant
  Vector grad_prev;     // grad f^{t-1}(x_{t-1})
  Vector grad;          // grad f^t(x_t)
  Vector g_prev;        // g(x_{t-1})
  Vector g;             // g(x_t)
};

struct RoundRecord {
  int t = 0;
  Vector decision;   // x_t
  double loss = 0.0;  // f^t(x_t)
  Vector g_values;   // g(x_t)
  Vector g_fed;      // g(x_{t-1}), the input of this round's queue update
  Vector queue;      // Q(t)
  double queue_l1 = 0.0;
  double queue_l2 = 0.0;
  double alpha = 0.0;
  double xi = 0.0;
  Vector mixed;      // y~_t (simplex variant only)
};

struct Fingerprint {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  bool operator==(const Fingerprint&) const = default;
};

/// Per-round history of one run.
struct RunTrace {
  std::vector<RoundRecord> rounds;
  Vector final_queue;  // Q(T+1)
  double gamma = 0.0;
  double mixing = 0.0;
  int num_constraints = 0;
  Fingerprint fingerprint;
  std::vector<RoundSnapshot> snapshots;  // filled on request

  int length() const { return static_cast<int>(rounds.size()); }
};

}  // namespace opmp
