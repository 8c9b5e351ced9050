// Copyright 2026 The fedfeare Authors
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

// Races the production depth-1 split search (sorted sweep, OpenMP across
// features) against the quadratic serial reference on growing tables, and
// checks that they still pick the same split while at it.
//
//   split_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fedfeare/reference_splitter.hpp"
#include "fedfeare/splitter.hpp"
#include "fedfeare/synthetic.hpp"

using namespace fedfeare;

namespace {

double run_ms(const std::function<void()>& fn) {
  auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

bool same_pick(const std::optional<SplitEval>& a,
               const std::optional<SplitEval>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->candidate.feature == b->candidate.feature &&
         a->candidate.split_index == b->candidate.split_index &&
         a->candidate.direction == b->candidate.direction &&
         a->f_score == b->f_score;
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
  if (repeats < 1) repeats = 1;

#ifdef _OPENMP
  std::printf("kernel threads: %d (set OMP_NUM_THREADS to vary)\n",
              omp_get_max_threads());
#else
  std::printf("kernel threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%8s %9s %12s %14s %9s %6s\n", "rows", "features", "kernel_ms",
              "reference_ms", "speedup", "agree");

  const int features = 16;
  for (uint64_t rows : {uint64_t{1000}, uint64_t{4000}, uint64_t{16000}}) {
    SyntheticSpec spec;
    spec.n_rows = rows;
    spec.n_features = features;
    spec.value_levels = 0;  // continuous: one candidate per row boundary
    spec.auto_rules = 2;
    spec.rule_depth = 2;
    spec.positive_rate = 0.05;
    spec.seed = rows;
    auto made = gen_synthetic(spec);

    std::vector<uint32_t> all(made.data.n_rows());
    std::iota(all.begin(), all.end(), 0u);
    uint64_t target = made.data.positive_count();

    std::optional<SplitEval> fast, slow;
    double kernel_ms = 0;
    for (int r = 0; r < repeats; ++r) {
      kernel_ms +=
          run_ms([&] { fast = find_depth_best(made.data, all, target, 1.0); });
    }
    kernel_ms /= repeats;
    double reference_ms = run_ms(
        [&] { slow = reference::find_depth_best(made.data, all, target, 1.0); });

    std::printf("%8llu %9d %12.2f %14.2f %8.1fx %6s\n",
                static_cast<unsigned long long>(rows), features, kernel_ms,
                reference_ms, reference_ms / kernel_ms,
                same_pick(fast, slow) ? "yes" : "NO");
  }
  return 0;
}
