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

#include "fedfeare/horizontal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fed_util.hpp"
#include "fedfeare/error.hpp"
#include "fedfeare/json_model.hpp"
#include "fedfeare/paillier.hpp"

namespace fedfeare {

using detail::Peer;
using detail::require_all_numeric;
using detail::wire_code;

std::vector<std::vector<double>> distinct_feature_values(const Dataset& data) {
  std::vector<std::vector<double>> out(data.n_features());
  for (size_t f = 0; f < data.n_features(); ++f) {
    if (data.feature_kinds[f] != FeatureKind::Numeric) continue;
    std::vector<double> values;
    values.reserve(data.numeric[f].size());
    for (double v : data.numeric[f]) {
      if (!std::isnan(v)) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    out[f] = std::move(values);
  }
  return out;
}

CandidateGrid merge_candidate_grid(
    const std::vector<std::vector<std::vector<double>>>& per_guest_values) {
  if (per_guest_values.empty()) {
    throw Error(Errc::Precondition, "no guests to merge");
  }
  const size_t n_features = per_guest_values[0].size();
  CandidateGrid grid;
  grid.edges.resize(n_features);
  for (size_t f = 0; f < n_features; ++f) {
    std::vector<double> merged;
    for (const auto& guest : per_guest_values) {
      if (guest.size() != n_features) {
        throw Error(Errc::Protocol, "guests disagree on feature count");
      }
      merged.insert(merged.end(), guest[f].begin(), guest[f].end());
    }
    // Union of distinct values equals the distinct values of the pooled
    // table, so these midpoints are exactly the single-table candidates.
    grid.edges[f] = candidate_splits(merged);
  }
  return grid;
}

namespace {

struct MaskedBin {
  Ciphertext total;
  Ciphertext positive;
};

nlohmann::json bins_to_json(int feature_id,
                            const std::vector<MaskedBin>& bins) {
  nlohmann::json arr = nlohmann::json::array();
  for (const MaskedBin& b : bins) {
    arr.push_back({{"t", to_hex(b.total.value)},
                   {"p", to_hex(b.positive.value)}});
  }
  return nlohmann::json{{"feature_id", feature_id}, {"bins", std::move(arr)}};
}

std::vector<MaskedBin> bins_from_json(const nlohmann::json& body,
                                      int expect_feature,
                                      const PublicKey& pk) {
  if (body.value("feature_id", -2) != expect_feature) {
    throw Error(Errc::Protocol, "histogram answers a different feature");
  }
  if (!body.contains("bins") || !body["bins"].is_array()) {
    throw Error(Errc::MalformedFrame, "histogram lacks bins");
  }
  std::vector<MaskedBin> bins;
  for (const nlohmann::json& bj : body["bins"]) {
    MaskedBin b;
    b.total = Ciphertext{from_hex(bj["t"].get<std::string>()), pk.key_id};
    b.positive = Ciphertext{from_hex(bj["p"].get<std::string>()), pk.key_id};
    bins.push_back(std::move(b));
  }
  return bins;
}

}  // namespace

// ---------------------------------------------------------------------------
// Coordinator.

RuleSet run_horizontal_coordinator(const std::vector<Channel*>& guests,
                                   const HorizontalConfig& config,
                                   FedReport* report) {
  config.params.check();
  if (guests.size() < 2) {
    throw Error(Errc::Precondition, "at least two guests are required");
  }
  std::vector<std::unique_ptr<Peer>> peers;
  for (Channel* ch : guests) {
    peers.push_back(std::make_unique<Peer>(*ch, config.session, report));
  }
  auto broadcast = [&](MsgKind kind, const nlohmann::json& body) {
    for (auto& p : peers) p->send(kind, body);
  };
  try {
    Rng rng(config.seed);
    auto [pk, sk] = keygen(config.key_bits, rng);

    for (size_t i = 0; i < peers.size(); ++i) {
      peers[i]->send(MsgKind::SessionStart,
                     {{"mode", "horizontal"},
                      {"params", params_to_json(config.params)},
                      {"guest_index", i},
                      {"guest_count", peers.size()}});
    }

    // One-time grid agreement: guests announce distinct values, the
    // coordinator merges and fixes the edges everyone scans against.
    std::vector<std::vector<std::vector<double>>> announced;
    std::vector<std::string> feature_names;
    for (size_t i = 0; i < peers.size(); ++i) {
      ProtocolMessage msg = peers[i]->expect(MsgKind::CandidateValues);
      std::vector<std::vector<double>> values;
      std::vector<std::string> names;
      for (const nlohmann::json& fj : msg.body["features"]) {
        names.push_back(fj["name"].get<std::string>());
        std::vector<double> v;
        for (const nlohmann::json& x : fj["values"]) {
          double d = x.get<double>();
          if (!std::isfinite(d)) {
            throw Error(Errc::Protocol, "non-finite announced value");
          }
          v.push_back(d);
        }
        values.push_back(std::move(v));
      }
      if (i == 0) {
        feature_names = names;
      } else if (names != feature_names) {
        throw Error(Errc::Protocol, "guests disagree on the feature schema");
      }
      announced.push_back(std::move(values));
    }
    CandidateGrid grid = merge_candidate_grid(announced);

    broadcast(MsgKind::PublicKey, {{"n", to_hex(pk.n)}});
    {
      nlohmann::json edges = nlohmann::json::array();
      for (const std::vector<double>& e : grid.edges) edges.push_back(e);
      broadcast(MsgKind::CandidateValues, {{"edges", std::move(edges)}});
    }

    // One ring pass: everyone is told the feature, then the masked bins
    // visit each guest in order and come back aggregated.
    auto masked_pass = [&](int feature_id,
                           size_t nbins) -> std::vector<BinCounts> {
      broadcast(MsgKind::ScanRequest, {{"feature_id", feature_id}});
      std::vector<mpz_class> mask_t(nbins), mask_p(nbins);
      std::vector<MaskedBin> bins(nbins);
      mpz_class bound = pk.n / 4;
      for (size_t b = 0; b < nbins; ++b) {
        mask_t[b] = rng.below(bound);
        mask_p[b] = rng.below(bound);
        bins[b].total = encrypt(pk, mask_t[b], rng);
        bins[b].positive = encrypt(pk, mask_p[b], rng);
      }
      peers.front()->send(MsgKind::MaskedHistogram,
                          bins_to_json(feature_id, bins));
      ProtocolMessage back = peers.back()->expect(MsgKind::HistogramReturn);
      std::vector<MaskedBin> returned =
          bins_from_json(back.body, feature_id, pk);
      if (returned.size() != nbins) {
        throw Error(Errc::ProtocolIntegrity, "bin count changed in flight");
      }
      std::vector<BinCounts> out(nbins);
      for (size_t b = 0; b < nbins; ++b) {
        mpz_class t = decrypt(sk, pk, returned[b].total) - mask_t[b];
        mpz_class p = decrypt(sk, pk, returned[b].positive) - mask_p[b];
        if (t < 0 || p < 0 || p > t) {
          throw Error(Errc::ProtocolIntegrity,
                      "unmasked counts are inconsistent");
        }
        out[b].total = t.get_ui();
        out[b].positive = p.get_ui();
      }
      return out;
    };

    RuleSet set;
    set.params = config.params;
    std::vector<SplitStats> per_rule;
    uint64_t total_rows = 0;
    uint64_t total_positives = 0;

    for (int t = 0; t < config.params.tree_number; ++t) {
      // Node totals ride a single-bin pass under feature -1; receiving it
      // is also what tells guests a new rule is starting.
      std::vector<BinCounts> node = masked_pass(-1, 1);
      if (t == 0) {
        total_rows = node[0].total;
        total_positives = node[0].positive;
      }
      const uint64_t tree_target = node[0].positive;
      if (node[0].total == 0 || tree_target == 0) break;

      Rule rule;
      double max_f = 0.0;
      SplitStats last_stats;
      for (int depth = 0; depth < config.params.max_depth; ++depth) {
        std::vector<std::optional<SplitEval>> per_feature(grid.edges.size());
        for (size_t f = 0; f < grid.edges.size(); ++f) {
          if (grid.edges[f].empty()) continue;
          auto bins = masked_pass(static_cast<int>(f),
                                  grid.edges[f].size() + 1);
          per_feature[f] =
              best_from_histogram(static_cast<int>(f), grid.edges[f], bins,
                                  tree_target, config.params.beta);
        }
        auto best = pick_best(per_feature);
        if (!best) break;
        if (!(best->f_score > max_f + config.params.pruning_min)) break;
        Condition cond;
        cond.direction = best->candidate.direction;
        cond.term = Condition::Plain{feature_names[best->candidate.feature],
                                     best->candidate.threshold};
        broadcast(MsgKind::ConditionBroadcast,
                  {{"event", "accept"},
                   {"condition", condition_to_json(cond)}});
        rule.conditions.push_back(std::move(cond));
        max_f = best->f_score;
        last_stats = best->stats;
      }
      if (rule.conditions.empty()) {
        broadcast(MsgKind::ConditionBroadcast, {{"event", "no_rule"}});
        break;
      }
      broadcast(MsgKind::ConditionBroadcast, {{"event", "tree_end"}});
      set.rules.push_back(std::move(rule));
      per_rule.push_back(last_stats);
    }

    if (!set.rules.empty()) {
      if (total_positives == 0) {
        throw Error(Errc::ProtocolIntegrity, "rules without positives");
      }
      set.metrics = compose_rule_metrics(per_rule, total_rows,
                                         total_positives, config.params.beta);
    }
    broadcast(MsgKind::RuleSetBroadcast,
              {{"ruleset", ruleset_to_json_value(set)}});
    broadcast(MsgKind::SessionEnd, {{"status", "ok"}});
    if (report) {
      report->total_rows = total_rows;
      report->total_positives = total_positives;
      report->per_rule = per_rule;
    }
    return set;
  } catch (const Error& e) {
    if (e.code() != Errc::ChannelClosed && e.code() != Errc::Transport) {
      for (auto& p : peers) p->send_error(wire_code(e.code()), e.what());
    }
    throw;
  }
}

// ---------------------------------------------------------------------------
// Guest.

RuleSet run_horizontal_guest(const GuestEndpoints& endpoints,
                             const Dataset& data, uint64_t seed) {
  if (!endpoints.coordinator || !endpoints.ring_in || !endpoints.ring_out) {
    throw Error(Errc::Precondition, "guest endpoints are incomplete");
  }
  data.check();
  require_all_numeric(data);
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "guests hold labeled rows");
  }
  Peer coord(*endpoints.coordinator, "horizontal", nullptr);
  // Ring neighbors may be the coordinator channel itself; reuse the peer
  // in that case so sequence tracking stays consistent per channel.
  std::optional<Peer> ring_in_store, ring_out_store;
  Peer* ring_in = &coord;
  Peer* ring_out = &coord;
  if (endpoints.ring_in != endpoints.coordinator) {
    ring_in_store.emplace(*endpoints.ring_in, "horizontal", nullptr);
    ring_in = &*ring_in_store;
  }
  if (endpoints.ring_out != endpoints.coordinator) {
    ring_out_store.emplace(*endpoints.ring_out, "horizontal", nullptr);
    ring_out = &*ring_out_store;
  }

  try {
    Rng rng(seed);
    PublicKey pk;
    bool have_key = false;
    CandidateGrid grid;
    bool have_grid = false;
    bool last_in_ring = false;

    std::vector<uint32_t> residual(data.n_rows());
    std::iota(residual.begin(), residual.end(), 0u);
    std::vector<uint32_t> working = residual;
    RuleSet received_set;
    bool have_set = false;

    for (;;) {
      ProtocolMessage msg = coord.recv();
      raise_if_error_end(msg);
      switch (msg.kind) {
        case MsgKind::SessionStart: {
          if (msg.body.value("mode", "") != "horizontal") {
            throw Error(Errc::Protocol, "wrong mode for this party");
          }
          coord.set_session(msg.session);
          if (ring_out != &coord) ring_out->set_session(msg.session);
          size_t index = msg.body.value("guest_index", size_t{0});
          size_t count = msg.body.value("guest_count", size_t{1});
          last_in_ring = index + 1 == count;
          nlohmann::json features = nlohmann::json::array();
          auto values = distinct_feature_values(data);
          for (size_t f = 0; f < data.n_features(); ++f) {
            features.push_back({{"name", data.feature_names[f]},
                                {"values", values[f]}});
          }
          coord.send(MsgKind::CandidateValues,
                     {{"features", std::move(features)}});
          break;
        }
        case MsgKind::PublicKey: {
          pk.n = from_hex(msg.body["n"].get<std::string>());
          pk.n_squared = pk.n * pk.n;
          pk.key_id = fingerprint_modulus(pk.n);
          have_key = true;
          break;
        }
        case MsgKind::CandidateValues: {
          grid.edges.clear();
          for (const nlohmann::json& ej : msg.body["edges"]) {
            grid.edges.push_back(ej.get<std::vector<double>>());
          }
          if (grid.edges.size() != data.n_features()) {
            throw Error(Errc::Protocol, "grid does not match the schema");
          }
          have_grid = true;
          break;
        }
        case MsgKind::ScanRequest: {
          if (!have_key || !have_grid) {
            throw Error(Errc::Protocol, "scan before key or grid");
          }
          int feature_id = msg.body.value("feature_id", -2);
          std::vector<BinCounts> local;
          if (feature_id == -1) {
            // Node-totals pass; it opens a rule, so the working set resets.
            working = residual;
            BinCounts all;
            all.total = working.size();
            all.positive = data.positive_count(working);
            local = {all};
          } else {
            if (feature_id < 0 ||
                static_cast<size_t>(feature_id) >= grid.edges.size()) {
              throw Error(Errc::Protocol, "scan of an unknown feature");
            }
            local = build_histogram(data, working, feature_id,
                                    grid.edges[feature_id]);
          }
          ProtocolMessage ring_msg = ring_in->recv();
          raise_if_error_end(ring_msg);
          if (ring_msg.kind != MsgKind::MaskedHistogram) {
            throw Error(Errc::Protocol, "expected a masked histogram");
          }
          std::vector<MaskedBin> bins =
              bins_from_json(ring_msg.body, feature_id, pk);
          if (bins.size() != local.size()) {
            throw Error(Errc::Protocol, "bin count does not match the grid");
          }
          for (size_t b = 0; b < bins.size(); ++b) {
            // Fresh encryptions make every hop's output unlinkable to its
            // input even for equal counts.
            bins[b].total = c_add(
                pk, bins[b].total,
                encrypt(pk, mpz_class(local[b].total), rng));
            bins[b].positive = c_add(
                pk, bins[b].positive,
                encrypt(pk, mpz_class(local[b].positive), rng));
          }
          ring_out->send(last_in_ring ? MsgKind::HistogramReturn
                                      : MsgKind::MaskedHistogram,
                         bins_to_json(feature_id, bins));
          break;
        }
        case MsgKind::ConditionBroadcast: {
          std::string event = msg.body.value("event", "");
          if (event == "accept") {
            Condition cond = condition_from_json(msg.body["condition"]);
            int f = data.feature_index(cond.plain().feature);
            if (f < 0) {
              throw Error(Errc::Protocol, "accepted an unknown feature");
            }
            std::vector<uint32_t> narrowed;
            narrowed.reserve(working.size());
            for (uint32_t r : working) {
              double v = data.numeric[f][r];
              if (std::isnan(v)) continue;
              bool covered = cond.direction == Direction::LE
                                 ? v <= cond.plain().threshold
                                 : v > cond.plain().threshold;
              if (covered) narrowed.push_back(r);
            }
            working = std::move(narrowed);
          } else if (event == "tree_end") {
            std::vector<uint32_t> rest;
            rest.reserve(residual.size());
            size_t c = 0;
            for (uint32_t r : residual) {
              if (c < working.size() && working[c] == r) {
                ++c;
              } else {
                rest.push_back(r);
              }
            }
            residual = std::move(rest);
            working = residual;
          } else if (event == "no_rule") {
            // Nothing to apply; the session is about to wind down.
          } else {
            throw Error(Errc::Protocol, "unknown broadcast event");
          }
          break;
        }
        case MsgKind::RuleSetBroadcast: {
          received_set = ruleset_from_json_value(msg.body["ruleset"]);
          have_set = true;
          break;
        }
        case MsgKind::SessionEnd: {
          if (!have_set) {
            throw Error(Errc::Protocol, "session ended before the rule set");
          }
          return received_set;
        }
        default:
          throw Error(Errc::Protocol,
                      std::string("unexpected ") + msg_kind_name(msg.kind));
      }
    }
  } catch (const Error& e) {
    if (e.code() != Errc::ChannelClosed && e.code() != Errc::Transport) {
      coord.send_error(wire_code(e.code()), e.what());
    }
    throw;
  }
}

}  // namespace fedfeare
