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

// End-to-end acceptance checks. Each prints exactly one [PASS]/[FAIL] line;
// the exit status is nonzero when anything failed. An optional argv[1] names
// the CLI binary so the throughput check can time the real subcommand.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fedfeare/channel.hpp"
#include "fedfeare/csv.hpp"
#include "fedfeare/error.hpp"
#include "fedfeare/framing.hpp"
#include "fedfeare/horizontal.hpp"
#include "fedfeare/inducer.hpp"
#include "fedfeare/metrics.hpp"
#include "fedfeare/paillier.hpp"
#include "fedfeare/rule.hpp"
#include "fedfeare/ruleset_json.hpp"
#include "fedfeare/socket_channel.hpp"
#include "fedfeare/splitter.hpp"
#include "fedfeare/synthetic.hpp"
#include "fedfeare/vertical.hpp"

using namespace fedfeare;

namespace {

int g_failed = 0;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

// A check body returns ok plus a short note ("200 trials, 0.4 s"); throwing
// counts as a failure with the message as the note.
void run_check(const char* tag,
               const std::function<std::pair<bool, std::string>()>& body) {
  bool ok = false;
  std::string note;
  try {
    auto [good, text] = body();
    ok = good;
    note = text;
  } catch (const std::exception& e) {
    ok = false;
    note = strf("unexpected exception: %s", e.what());
  }
  std::string line = std::string(ok ? "[PASS] " : "[FAIL] ") + tag;
  if (!note.empty()) line += " (" + note + ")";
  std::printf("%s\n", line.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

bool near(double value, double want, double tol) {
  return std::fabs(value - want) <= tol;
}

// ---------------------------------------------------------------------------
// Shared fixtures and session drivers.

Dataset table_of(const std::vector<std::vector<double>>& cols,
                 const std::vector<uint8_t>& labels) {
  Dataset d;
  for (size_t f = 0; f < cols.size(); ++f) {
    d.feature_names.push_back("f" + std::to_string(f));
    d.feature_kinds.push_back(FeatureKind::Numeric);
    d.numeric.push_back(cols[f]);
    d.categorical.emplace_back();
  }
  for (size_t r = 0; r < labels.size(); ++r) {
    d.instance_ids.push_back(std::to_string(r));
  }
  d.labels = labels;
  return d;
}

bool same_model(const RuleSet& a, const RuleSet& b) {
  if (a.rules != b.rules) return false;
  if (a.metrics.size() != b.metrics.size()) return false;
  for (size_t k = 0; k < a.metrics.size(); ++k) {
    const RuleMetrics& x = a.metrics[k];
    const RuleMetrics& y = b.metrics[k];
    if (x.pi != y.pi || x.cpi != y.cpi || x.f_score != y.f_score ||
        x.precision != y.precision || x.recall != y.recall || x.cp != y.cp ||
        x.cr != y.cr || x.cl != y.cl) {
      return false;
    }
  }
  return true;
}

struct VerticalOut {
  RuleSet fed;
  RuleSet central;
  std::unique_ptr<TranscriptLog> log = std::make_unique<TranscriptLog>();
  Dataset passive_view;
  uint64_t n_rows = 0;
};

VerticalOut vertical_session(const Dataset& full,
                             const std::vector<int>& active_cols,
                             const std::vector<int>& passive_cols,
                             const HyperParams& params, uint64_t seed) {
  VerticalOut out;
  out.n_rows = full.n_rows();
  Dataset active_view = subset_columns(full, active_cols, true);
  out.passive_view = subset_columns(full, passive_cols, false);

  auto [to_passive, to_active] =
      make_inproc_pair("active->passive", "passive->active");
  to_passive->attach_transcript(out.log.get());
  to_active->attach_transcript(out.log.get());

  VerticalConfig config;
  config.params = params;
  config.seed = seed;

  auto passive_fut = std::async(std::launch::async, [&] {
    return run_vertical_passive(*to_active, out.passive_view);
  });
  out.fed = run_vertical_active(*to_passive, active_view, config);
  PassiveSplitTable table = passive_fut.get();
  out.fed = substitute_opaque(out.fed, table, out.passive_view.feature_names);

  // Peer candidates rank after local ones, so the centralized twin is one
  // table with the active columns first.
  std::vector<int> joined = active_cols;
  joined.insert(joined.end(), passive_cols.begin(), passive_cols.end());
  out.central = learn_rule_set(subset_columns(full, joined, true), params);
  return out;
}

struct HorizontalOut {
  RuleSet coordinator_set;
  std::vector<RuleSet> guest_sets;
  RuleSet central;
  std::unique_ptr<TranscriptLog> log = std::make_unique<TranscriptLog>();
};

std::vector<Dataset> row_shards(const Dataset& full, size_t k) {
  std::vector<Dataset> shards;
  size_t n = full.n_rows();
  for (size_t i = 0; i < k; ++i) {
    std::vector<uint32_t> rows;
    for (size_t r = i * n / k; r < (i + 1) * n / k; ++r) {
      rows.push_back(static_cast<uint32_t>(r));
    }
    shards.push_back(subset_rows(full, rows));
  }
  return shards;
}

HorizontalOut horizontal_session(const Dataset& full, size_t k,
                                 const HyperParams& params, uint64_t seed) {
  HorizontalOut out;
  std::vector<Dataset> shards = row_shards(full, k);

  std::vector<std::unique_ptr<Channel>> keep;
  std::vector<Channel*> coordinator_ends(k);
  std::vector<GuestEndpoints> eps(k);
  for (size_t i = 0; i < k; ++i) {
    auto [c_to_g, g_to_c] =
        make_inproc_pair("coordinator->guest" + std::to_string(i),
                         "guest" + std::to_string(i) + "->coordinator");
    c_to_g->attach_transcript(out.log.get());
    g_to_c->attach_transcript(out.log.get());
    coordinator_ends[i] = c_to_g.get();
    eps[i].coordinator = g_to_c.get();
    eps[i].ring_in = g_to_c.get();
    eps[i].ring_out = g_to_c.get();
    keep.push_back(std::move(c_to_g));
    keep.push_back(std::move(g_to_c));
  }
  for (size_t i = 0; i + 1 < k; ++i) {
    auto [fwd, bwd] = make_inproc_pair(
        "guest" + std::to_string(i) + "->guest" + std::to_string(i + 1),
        "guest" + std::to_string(i + 1) + "->guest" + std::to_string(i));
    fwd->attach_transcript(out.log.get());
    eps[i].ring_out = fwd.get();
    eps[i + 1].ring_in = bwd.get();
    keep.push_back(std::move(fwd));
    keep.push_back(std::move(bwd));
  }

  HorizontalConfig config;
  config.params = params;
  config.seed = seed;

  std::vector<std::future<RuleSet>> guest_futs;
  for (size_t i = 0; i < k; ++i) {
    guest_futs.push_back(std::async(std::launch::async, [&, i] {
      return run_horizontal_guest(eps[i], shards[i], seed + 1 + i);
    }));
  }
  out.coordinator_set = run_horizontal_coordinator(coordinator_ends, config);
  for (auto& f : guest_futs) out.guest_sets.push_back(f.get());

  std::vector<std::vector<std::vector<double>>> announced;
  for (const Dataset& shard : shards) {
    announced.push_back(distinct_feature_values(shard));
  }
  CandidateGrid grid = merge_candidate_grid(announced);
  out.central = learn_rule_set(full, params, &grid);
  return out;
}

// Every passive-side candidate threshold, in both renderings a leak could
// take. Integer-free by construction: midpoints of adjacent distinct values
// always keep a fractional part, so substring matching cannot collide with
// ids, counts, or sequence numbers.
std::vector<std::string> passive_threshold_strings(const Dataset& passive) {
  std::vector<std::string> out;
  for (const auto& col : passive.numeric) {
    if (col.empty()) continue;
    for (double t : candidate_splits(col)) {
      std::string a = strf("%.17g", t);
      std::string b = nlohmann::json(t).dump();
      if (a.find('.') != std::string::npos ||
          a.find('e') != std::string::npos) {
        out.push_back(a);
      }
      if (b != a && (b.find('.') != std::string::npos ||
                     b.find('e') != std::string::npos)) {
        out.push_back(b);
      }
    }
  }
  return out;
}

std::optional<std::string> vertical_privacy_leak(const VerticalOut& run) {
  std::vector<std::string> forbidden =
      passive_threshold_strings(run.passive_view);
  for (const TranscriptEntry& entry : run.log->entries()) {
    for (const std::string& secret : forbidden) {
      if (entry.frame.find(secret) != std::string::npos) {
        return strf("threshold %s visible on %s", secret.c_str(),
                    entry.channel.c_str());
      }
    }
  }

  // Labels cross once, as one fat randomized ciphertext per row.
  size_t label_frames = 0;
  auto chans = run.log->by_channel();
  for (const std::string& frame : chans["active->passive"]) {
    ProtocolMessage m = decode_frame(frame);
    if (m.kind != MsgKind::EncryptedLabels) continue;
    ++label_frames;
    if (!m.body["cts"].is_array() || m.body["cts"].size() != run.n_rows) {
      return "encrypted label vector has the wrong length";
    }
    std::set<std::string> seen;
    for (const auto& ct : m.body["cts"]) {
      std::string hex = ct.get<std::string>();
      if (hex.size() < 64) return "label ciphertext suspiciously short";
      if (!seen.insert(hex).second) return "repeated label ciphertext";
    }
  }
  if (label_frames != 1) return "labels were shipped more than once";
  return std::nullopt;
}

std::optional<std::string> horizontal_privacy_leak(const HorizontalOut& run) {
  size_t histogram_frames = 0;
  for (const TranscriptEntry& entry : run.log->entries()) {
    if (entry.channel.rfind("guest", 0) != 0) continue;
    ProtocolMessage m = decode_frame(entry.frame);
    if (m.kind != MsgKind::MaskedHistogram &&
        m.kind != MsgKind::HistogramReturn) {
      continue;
    }
    ++histogram_frames;
    if (!m.body["bins"].is_array()) return "histogram frame without bins";
    for (const auto& bin : m.body["bins"]) {
      for (const char* key : {"t", "p"}) {
        std::string hex = bin.at(key).get<std::string>();
        if (hex.size() < 64 ||
            hex.find_first_not_of("0123456789abcdef") != std::string::npos) {
          return strf("per-bin %s value is not a ciphertext on %s", key,
                      entry.channel.c_str());
        }
      }
    }
  }
  if (histogram_frames == 0) return "no histogram traffic was recorded";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// The checks, in order.

std::pair<bool, std::string> check_fscore_set_one() {
  bool ok = near(f_beta(0.83, 0.68, 1.0), 0.75, 0.01) &&
            near(f_beta(0.90, 0.29, 1.0), 0.44, 0.01) &&
            near(f_beta(0.888, 0.363, 1.0), 0.52, 0.01);
  return {ok, "three operating points, tolerance 0.01"};
}

std::pair<bool, std::string> check_fscore_set_two() {
  bool ok = near(f_beta(0.923, 0.60, 1.0), 0.72, 0.01) &&
            near(f_beta(1.0, 0.25, 1.0), 0.40, 0.01) &&
            near(f_beta(1.0, 0.166, 1.0), 0.28, 0.01);
  return {ok, "three operating points, tolerance 0.01"};
}

std::pair<bool, std::string> check_lift() {
  const uint64_t positives = 51203;
  const uint64_t rows = 5438267;
  std::vector<SplitStats> high{{1000, 47, positives}};
  std::vector<SplitStats> low{{1000, 32, positives}};
  double cl_high = compose_rule_metrics(high, rows, positives, 1.0)[0].cl;
  double cl_low = compose_rule_metrics(low, rows, positives, 1.0)[0].cl;
  bool ok = near(cl_high, 4.99, 0.01) &&
            std::fabs(cl_high / 4.96 - 1.0) <= 0.02 &&
            std::fabs(cl_low / 3.4 - 1.0) <= 0.03;
  return {ok, strf("cl(4.7%%) = %.4f, cl(3.2%%) = %.4f", cl_high, cl_low)};
}

std::pair<bool, std::string> check_exhaustive_equivalence() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(41);
  const int trials = 200;

  for (int trial = 0; trial < trials; ++trial) {
    Dataset d;
    uint64_t n_pos = 0;
    for (int attempt = 0;; ++attempt) {
      size_t n = 1 + rng() % 40;
      size_t n_feat = 1 + rng() % 3;
      std::vector<std::vector<double>> cols(n_feat);
      for (auto& col : cols) {
        int levels = 1 + static_cast<int>(rng() % 6);
        for (size_t r = 0; r < n; ++r) {
          col.push_back(static_cast<double>(rng() % levels));
        }
      }
      std::vector<uint8_t> y;
      for (size_t r = 0; r < n; ++r) y.push_back(rng() % 3 == 0 ? 1 : 0);
      y[rng() % n] = 1;

      bool splittable = false;
      for (const auto& col : cols) {
        if (std::set<double>(col.begin(), col.end()).size() > 1) {
          splittable = true;
        }
      }
      if (splittable || attempt > 200) {
        d = table_of(cols, y);
        n_pos = static_cast<uint64_t>(
            std::count(y.begin(), y.end(), uint8_t{1}));
        break;
      }
    }

    // The oracle: walk every (feature, threshold, direction) in comparator
    // order and keep the strictly best F.
    struct Best {
      double f = 0;
      int feature = -1;
      double threshold = 0;
      Direction dir = Direction::LE;
    } best;
    for (size_t f = 0; f < d.numeric.size(); ++f) {
      for (double t : candidate_splits(d.numeric[f])) {
        for (Direction dir : {Direction::LE, Direction::GT}) {
          SplitStats st;
          st.n_target = n_pos;
          for (size_t r = 0; r < d.n_rows(); ++r) {
            double v = d.numeric[f][r];
            bool covered = dir == Direction::LE ? v <= t : v > t;
            if (!covered) continue;
            ++st.n_cover;
            st.n_correct += (*d.labels)[r];
          }
          double score = f_of(st, 1.0);
          if (score > best.f) {
            best = {score, static_cast<int>(f), t, dir};
          }
        }
      }
    }

    HyperParams hp;
    hp.max_depth = 1;
    hp.tree_number = 1;
    hp.pruning_min = 0.0;
    std::vector<uint32_t> rows(d.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    SplitStats st;
    auto rule = learn_single_rule(d, rows, hp, nullptr, &st);

    if (best.f <= 0.0) {
      if (rule.has_value()) return {false, strf("trial %d: rule from nothing", trial)};
      continue;
    }
    if (!rule || rule->conditions.size() != 1) {
      return {false, strf("trial %d: no single condition", trial)};
    }
    const Condition& cond = rule->conditions[0];
    if (cond.is_opaque() ||
        cond.plain().feature != d.feature_names[best.feature] ||
        cond.plain().threshold != best.threshold ||
        cond.direction != best.dir || f_of(st, 1.0) != best.f) {
      return {false, strf("trial %d: argmax mismatch", trial)};
    }
  }

  double secs = elapsed_s(start);
  return {secs < 10.0, strf("%d datasets, %.2f s", trials, secs)};
}

std::pair<bool, std::string> check_planted_recovery() {
  auto start = std::chrono::steady_clock::now();
  SyntheticSpec spec;
  spec.n_rows = 10000;
  spec.n_features = 10;
  spec.value_levels = 20;
  spec.auto_rules = 2;
  spec.rule_depth = 2;
  spec.positive_rate = 0.01;
  spec.noise_rate = 0.0;
  spec.seed = 2026;

  HyperParams defaults;
  auto clean = gen_synthetic(spec);
  RuleSet learned = learn_rule_set(clean.data, defaults);
  bool exact = predict(clean.data, learned) == clean.clean_labels;

  spec.noise_rate = 0.01;
  auto noisy = gen_synthetic(spec);
  RuleSet from_noisy = learn_rule_set(noisy.data, defaults);
  double cr = 0, cp = 0;
  if (!from_noisy.metrics.empty()) {
    cr = from_noisy.metrics.back().cr;
    cp = from_noisy.metrics.back().cp;
  }

  double secs = elapsed_s(start);
  bool ok = exact && cr >= 0.9 && cp >= 0.8 && secs < 30.0;
  return {ok, strf("clean exact: %s, noisy cr = %.3f, cp = %.3f, %.1f s",
                   exact ? "yes" : "no", cr, cp, secs)};
}

std::pair<bool, std::string> check_pruning_gate() {
  // Depth 1 reaches F = 0.9424 with f0 > 5; adding f1 > 5 reaches 0.9474,
  // a gain of about 0.005. The gate must block it at 0.01 and pass it at
  // 0.001.
  struct Block {
    double x, z;
    uint8_t y;
    int count;
  };
  std::vector<Block> blocks = {{10, 10, 1, 900},
                               {10, 0, 0, 10},
                               {0, 10, 1, 100},
                               {0, 10, 0, 200},
                               {0, 0, 0, 90}};
  std::vector<double> x, z;
  std::vector<uint8_t> y;
  for (const Block& b : blocks) {
    for (int i = 0; i < b.count; ++i) {
      x.push_back(b.x);
      z.push_back(b.z);
      y.push_back(b.y);
    }
  }
  Dataset d = table_of({x, z}, y);
  std::vector<uint32_t> rows(d.n_rows());
  std::iota(rows.begin(), rows.end(), 0);

  HyperParams strict;
  strict.pruning_min = 0.01;
  SplitStats st1;
  auto shallow = learn_single_rule(d, rows, strict, nullptr, &st1);

  HyperParams loose;
  loose.pruning_min = 0.001;
  SplitStats st2;
  auto deep = learn_single_rule(d, rows, loose, nullptr, &st2);

  bool ok = shallow && shallow->conditions.size() == 1 &&
            shallow->conditions[0].plain().feature == "f0" &&
            shallow->conditions[0].direction == Direction::GT &&
            shallow->conditions[0].plain().threshold == 5.0 &&
            near(f_of(st1, 1.0), 0.9424083769633509, 1e-12) && deep &&
            deep->conditions.size() == 2 &&
            deep->conditions[1].plain().feature == "f1" &&
            near(f_of(st2, 1.0), 0.9473684210526316, 1e-12);
  double gain = f_of(st2, 1.0) - f_of(st1, 1.0);
  return {ok, strf("depth 1 at 0.01, depth 2 at 0.001, gain = %.6f", gain)};
}

std::pair<bool, std::string> check_paillier_laws() {
  auto start = std::chrono::steady_clock::now();
  Rng keyrng(2026);
  auto [pk, sk] = keygen(512, keyrng);
  Rng rng(99);
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    mpz_class m1 = rng.below(pk.n);
    mpz_class m2 = rng.below(pk.n);
    mpz_class k = rng.below(pk.n);

    auto c1 = encrypt(pk, m1, rng);
    auto c2 = encrypt(pk, m2, rng);
    if (decrypt(sk, pk, c1) != m1) return {false, "round trip broke"};
    if (decrypt(sk, pk, c_add(pk, c1, c2)) != (m1 + m2) % pk.n) {
      return {false, "additive law broke"};
    }
    if (decrypt(sk, pk, c_scalar_mul(pk, c1, k)) != (m1 * k) % pk.n) {
      return {false, "scalar law broke"};
    }
    if (encrypt(pk, m1, rng).value == c1.value) {
      return {false, "two encryptions of one plaintext collided"};
    }
  }
  double secs = elapsed_s(start);
  return {secs < 30.0, strf("%d trials at 512 bits, %.1f s", trials, secs)};
}

std::pair<bool, std::string> check_vertical_equivalence() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(310);
  const int sessions = 50;

  for (int i = 0; i < sessions; ++i) {
    SyntheticSpec spec;
    spec.n_rows = 40 + rng() % 120;
    spec.n_features = 4 + static_cast<int>(rng() % 3);
    spec.value_levels = i % 2 == 0 ? 0 : 5 + static_cast<int>(rng() % 6);
    spec.auto_rules = 2;
    spec.rule_depth = 2;
    spec.positive_rate = 0.10 + static_cast<double>(rng() % 10) / 100.0;
    spec.noise_rate = static_cast<double>(rng() % 4) / 100.0;
    spec.seed = 1000 + i;
    auto made = gen_synthetic(spec);

    std::vector<int> order(spec.n_features);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    size_t split = 1 + rng() % (order.size() - 1);
    std::vector<int> active(order.begin(), order.begin() + split);
    std::vector<int> passive(order.begin() + split, order.end());

    HyperParams params;
    VerticalOut run =
        vertical_session(made.data, active, passive, params, 50 + i);
    if (!same_model(run.fed, run.central)) {
      return {false, strf("session %d diverged from centralized", i)};
    }
    if (auto leak = vertical_privacy_leak(run)) {
      return {false, strf("session %d: %s", i, leak->c_str())};
    }
  }

  double secs = elapsed_s(start);
  return {secs < 180.0, strf("%d sessions at 256-bit keys, %.1f s", sessions,
                             secs)};
}

std::pair<bool, std::string> check_horizontal_equivalence() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(620);
  const int tables = 50;

  for (int i = 0; i < tables; ++i) {
    SyntheticSpec spec;
    spec.n_rows = 50 + rng() % 100;
    spec.n_features = 4 + static_cast<int>(rng() % 3);
    spec.value_levels = 6 + static_cast<int>(rng() % 3);
    spec.auto_rules = 2;
    spec.rule_depth = 2;
    spec.positive_rate = 0.10 + static_cast<double>(rng() % 6) / 100.0;
    spec.noise_rate = static_cast<double>(rng() % 3) / 100.0;
    spec.seed = 2000 + i;
    auto made = gen_synthetic(spec);

    HyperParams params;
    for (size_t k : {size_t{2}, size_t{3}}) {
      HorizontalOut run = horizontal_session(made.data, k, params, 70 + i);
      if (!same_model(run.coordinator_set, run.central)) {
        return {false, strf("table %d, %zu-way: coordinator diverged", i, k)};
      }
      for (size_t g = 0; g < run.guest_sets.size(); ++g) {
        if (!same_model(run.guest_sets[g], run.central)) {
          return {false,
                  strf("table %d, %zu-way: guest %zu diverged", i, k, g)};
        }
      }
      if (auto leak = horizontal_privacy_leak(run)) {
        return {false, strf("table %d, %zu-way: %s", i, k, leak->c_str())};
      }
    }
  }

  double secs = elapsed_s(start);
  return {secs < 300.0,
          strf("%d tables, 2-way and 3-way, %.1f s", tables, secs)};
}

std::pair<bool, std::string> check_transport_parity() {
  // Vertical, in-process baseline.
  SyntheticSpec vspec;
  vspec.n_rows = 90;
  vspec.n_features = 5;
  vspec.value_levels = 8;
  vspec.auto_rules = 2;
  vspec.rule_depth = 2;
  vspec.positive_rate = 0.12;
  vspec.noise_rate = 0.02;
  vspec.seed = 77;
  auto vmade = gen_synthetic(vspec);
  std::vector<int> active{0, 1};
  std::vector<int> passive{2, 3, 4};
  HyperParams params;
  VerticalOut inproc = vertical_session(vmade.data, active, passive, params, 5);

  // Same session over loopback TCP.
  Dataset active_view = subset_columns(vmade.data, active, true);
  Dataset passive_view = subset_columns(vmade.data, passive, false);
  TranscriptLog socket_log;
  auto listener = socket_listen("127.0.0.1:0");
  std::string addr = "127.0.0.1:" + std::to_string(listener->port());
  auto passive_fut = std::async(std::launch::async, [&] {
    auto ch = socket_connect(addr, "passive->active");
    ch->attach_transcript(&socket_log);
    return run_vertical_passive(*ch, passive_view);
  });
  auto active_ch = listener->accept("active->passive");
  active_ch->attach_transcript(&socket_log);
  VerticalConfig vconfig;
  vconfig.params = params;
  vconfig.seed = 5;
  run_vertical_active(*active_ch, active_view, vconfig);
  passive_fut.get();

  bool vertical_same = inproc.log->by_channel() == socket_log.by_channel();

  // Horizontal, in-process baseline, three guests.
  SyntheticSpec hspec;
  hspec.n_rows = 80;
  hspec.n_features = 4;
  hspec.value_levels = 6;
  hspec.auto_rules = 2;
  hspec.rule_depth = 2;
  hspec.positive_rate = 0.12;
  hspec.noise_rate = 0.01;
  hspec.seed = 88;
  auto hmade = gen_synthetic(hspec);
  const size_t k = 3;
  const uint64_t seed = 9;
  HorizontalOut hinproc = horizontal_session(hmade.data, k, params, seed);

  std::vector<Dataset> shards = row_shards(hmade.data, k);
  TranscriptLog hsocket_log;
  std::vector<std::unique_ptr<SocketListener>> coord_ls;
  std::vector<std::unique_ptr<SocketListener>> ring_ls;
  for (size_t i = 0; i < k; ++i) {
    coord_ls.push_back(socket_listen("127.0.0.1:0"));
  }
  for (size_t i = 0; i + 1 < k; ++i) {
    ring_ls.push_back(socket_listen("127.0.0.1:0"));
  }

  std::vector<std::future<RuleSet>> guest_futs;
  for (size_t i = 0; i < k; ++i) {
    guest_futs.push_back(std::async(std::launch::async, [&, i] {
      std::string self = "guest" + std::to_string(i);
      auto coord = socket_connect(
          "127.0.0.1:" + std::to_string(coord_ls[i]->port()),
          self + "->coordinator");
      coord->attach_transcript(&hsocket_log);
      std::unique_ptr<SocketChannel> rin, rout;
      GuestEndpoints ep;
      ep.coordinator = coord.get();
      ep.ring_in = coord.get();
      ep.ring_out = coord.get();
      if (i > 0) {
        rin = ring_ls[i - 1]->accept(self + "->guest" + std::to_string(i - 1));
        rin->attach_transcript(&hsocket_log);
        ep.ring_in = rin.get();
      }
      if (i + 1 < k) {
        rout = socket_connect(
            "127.0.0.1:" + std::to_string(ring_ls[i]->port()),
            self + "->guest" + std::to_string(i + 1));
        rout->attach_transcript(&hsocket_log);
        ep.ring_out = rout.get();
      }
      return run_horizontal_guest(ep, shards[i], seed + 1 + i);
    }));
  }
  std::vector<std::unique_ptr<SocketChannel>> coord_chans;
  std::vector<Channel*> ends;
  for (size_t i = 0; i < k; ++i) {
    auto ch = coord_ls[i]->accept("coordinator->guest" + std::to_string(i));
    ch->attach_transcript(&hsocket_log);
    ends.push_back(ch.get());
    coord_chans.push_back(std::move(ch));
  }
  HorizontalConfig hconfig;
  hconfig.params = params;
  hconfig.seed = seed;
  run_horizontal_coordinator(ends, hconfig);
  for (auto& f : guest_futs) f.get();

  bool horizontal_same =
      hinproc.log->by_channel() == hsocket_log.by_channel();

  bool ok = vertical_same && horizontal_same;
  return {ok, strf("vertical %s, horizontal %s",
                   vertical_same ? "identical" : "diverged",
                   horizontal_same ? "identical" : "diverged")};
}

std::pair<bool, std::string> check_throughput(const char* cli) {
  SyntheticSpec spec;
  spec.n_rows = 100000;
  spec.n_features = 25;
  spec.value_levels = 0;
  spec.auto_rules = 2;
  spec.rule_depth = 2;
  spec.positive_rate = 0.01;
  spec.noise_rate = 0.01;
  spec.seed = 2026;
  auto made = gen_synthetic(spec);

  std::string data_path = "acceptance_throughput.csv";
  std::string model_path = "acceptance_throughput_model.json";
  std::string report_path = "acceptance_throughput_report.csv";
  write_csv(made.data, data_path);

  auto start = std::chrono::steady_clock::now();
  bool ran = false;
  if (cli != nullptr) {
    std::string cmd = std::string(cli) + " train --data " + data_path +
                      " --label-col label --id-col id --out " + model_path +
                      " --report " + report_path + " > /dev/null";
    ran = std::system(cmd.c_str()) == 0;
  } else {
    DataSchema schema;
    schema.label_column = "label";
    schema.id_column = "id";
    Dataset d = load_csv(data_path, schema);
    HyperParams defaults;
    RuleSet set = learn_rule_set(d, defaults);
    ran = !ruleset_to_json(set).empty();
  }
  double secs = elapsed_s(start);

  std::remove(data_path.c_str());
  std::remove(model_path.c_str());
  std::remove(report_path.c_str());
  return {ran && secs < 60.0,
          strf("100,000 x 25 via %s, %.1f s", cli ? "the CLI" : "the library",
               secs)};
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;

  run_check("01 f-beta matches pinned operating points, set one",
            check_fscore_set_one);
  run_check("02 f-beta matches pinned operating points, set two",
            check_fscore_set_two);
  run_check("03 cumulative lift at the 51203/5438267 base rate", check_lift);
  run_check("04 depth-1 rule equals exhaustive split search",
            check_exhaustive_equivalence);
  run_check("05 planted rules recovered from a 10,000 x 10 table",
            check_planted_recovery);
  run_check("06 pruning gate separates a 0.005 depth-2 gain",
            check_pruning_gate);
  run_check("07 Paillier laws hold across random 512-bit trials",
            check_paillier_laws);
  run_check("08 vertical training matches centralized on 50 tables",
            check_vertical_equivalence);
  run_check("09 horizontal training matches centralized on 50 tables",
            check_horizontal_equivalence);
  run_check("10 socket transcripts equal in-process transcripts",
            check_transport_parity);
  run_check("11 training throughput on 100,000 x 25",
            [cli] { return check_throughput(cli); });

  if (g_failed > 0) {
    std::printf("%d acceptance check(s) failed\n", g_failed);
    return 1;
  }
  std::printf("all acceptance checks passed\n");
  return 0;
}
