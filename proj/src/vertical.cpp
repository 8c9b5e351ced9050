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

#include "fedfeare/vertical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "fed_util.hpp"
#include "fedfeare/error.hpp"
#include "fedfeare/json_model.hpp"
#include "fedfeare/paillier.hpp"

namespace fedfeare {

using detail::Peer;
using detail::parse_count;
using detail::require_all_numeric;
using detail::wire_code;

namespace {

nlohmann::json ids_json(const Dataset& data,
                        std::span<const uint32_t> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (uint32_t r : rows) out.push_back(data.instance_ids[r]);
  return out;
}

// Candidate scored by the passive party; the active side knows everything
// about it except the threshold.
struct RemoteCandidate {
  int j = 0;
  Direction direction = Direction::LE;
  uint64_t cover = 0;
  Ciphertext label_sum;
};

}  // namespace

// ---------------------------------------------------------------------------
// Active party (holds labels and its own features).

RuleSet run_vertical_active(Channel& peer_ch, const Dataset& data,
                            const VerticalConfig& config,
                            FedReport* report) {
  config.params.check();
  data.check();
  require_all_numeric(data);
  if (!data.has_labels()) {
    throw Error(Errc::MissingLabels, "active party must hold labels");
  }
  Peer peer(peer_ch, config.session, report);
  try {
    Rng rng(config.seed);
    auto [pk, sk] = keygen(config.key_bits, rng);

    peer.send(MsgKind::SessionStart,
              {{"mode", "vertical"}, {"params", params_to_json(config.params)}});
    peer.send(MsgKind::PublicKey, {{"n", to_hex(pk.n)}});

    {
      nlohmann::json cts = nlohmann::json::array();
      for (uint32_t r = 0; r < data.n_rows(); ++r) {
        Ciphertext c = encrypt(pk, mpz_class((*data.labels)[r]), rng);
        cts.push_back(to_hex(c.value));
      }
      std::vector<uint32_t> all(data.n_rows());
      std::iota(all.begin(), all.end(), 0u);
      peer.send(MsgKind::EncryptedLabels,
                {{"ids", ids_json(data, all)}, {"cts", std::move(cts)}});
    }

    std::unordered_map<std::string, uint32_t> row_of;
    row_of.reserve(data.n_rows());
    for (uint32_t r = 0; r < data.n_rows(); ++r) {
      row_of[data.instance_ids[r]] = r;
    }

    const int n_local = static_cast<int>(data.n_features());
    const uint64_t total_positives = data.positive_count();
    std::vector<uint32_t> residual(data.n_rows());
    std::iota(residual.begin(), residual.end(), 0u);

    // Scan-relative candidate indices alias across scans, so the model
    // stores a per-feature ordinal instead; the peer counts the same
    // notifications and assigns the same ordinals.
    std::map<int, int> chosen_of_feature;

    RuleSet set;
    set.params = config.params;
    std::vector<SplitStats> per_rule;

    for (int t = 0; t < config.params.tree_number; ++t) {
      if (residual.empty()) break;
      const uint64_t tree_target = data.positive_count(residual);
      if (tree_target == 0) break;

      std::vector<uint32_t> working = residual;
      Rule rule;
      double max_f = 0.0;
      SplitStats last_stats;

      for (int depth = 0; depth < config.params.max_depth; ++depth) {
        peer.send(MsgKind::ScanRequest, {{"ids", ids_json(data, working)}});
        ProtocolMessage reply = peer.expect(MsgKind::ScanReply);

        // Local candidates first, peer features after them; the shared
        // comparator then ranks exactly as a single-table run would with
        // the peer's columns appended to ours.
        auto combined = scan_features(data, working, tree_target,
                                      config.params.beta);
        std::vector<std::vector<RemoteCandidate>> remote_of_feature;
        if (!reply.body.contains("features") ||
            !reply.body["features"].is_array()) {
          throw Error(Errc::MalformedFrame, "scan reply lacks features");
        }
        for (const nlohmann::json& fj : reply.body["features"]) {
          int fid = fj.value("feature_id", -1);
          if (fid < 0) {
            throw Error(Errc::MalformedFrame, "bad feature_id in scan reply");
          }
          std::optional<SplitEval> best_here;
          std::vector<RemoteCandidate> kept;
          int expected_j = 0;
          for (const nlohmann::json& cj : fj["candidates"]) {
            int j = cj.value("j", -1);
            if (j != expected_j++) {
              throw Error(Errc::MalformedFrame,
                          "candidate indices out of order");
            }
            for (const char* dir_key : {"le", "gt"}) {
              const nlohmann::json& side = cj[dir_key];
              RemoteCandidate rc;
              rc.j = j;
              rc.direction = direction_from_name(dir_key);
              rc.cover = parse_count(side, "cover");
              rc.label_sum =
                  Ciphertext{from_hex(side["sum"].get<std::string>()),
                             pk.key_id};
              if (rc.cover > working.size()) {
                throw Error(Errc::ProtocolIntegrity,
                            "candidate covers more rows than requested");
              }
              mpz_class sum = decrypt(sk, pk, rc.label_sum);
              if (sum > rc.cover || sum > tree_target) {
                throw Error(Errc::ProtocolIntegrity,
                            "label sum exceeds cover or target");
              }
              SplitEval eval;
              eval.candidate = {n_local + fid, j, 0.0, rc.direction};
              eval.stats = {rc.cover, sum.get_ui(), tree_target};
              eval.f_score = f_of(eval.stats, config.params.beta);
              if (!best_here || split_eval_less(eval, *best_here)) {
                best_here = eval;
              }
              kept.push_back(std::move(rc));
            }
          }
          size_t slot = static_cast<size_t>(n_local) + fid;
          if (combined.size() <= slot) combined.resize(slot + 1);
          if (combined[slot].has_value()) {
            throw Error(Errc::Protocol, "duplicate feature in scan reply");
          }
          combined[slot] = best_here;
          if (remote_of_feature.size() <= static_cast<size_t>(fid)) {
            remote_of_feature.resize(fid + 1);
          }
          remote_of_feature[fid] = std::move(kept);
        }

        auto best = pick_best(combined);
        if (!best) break;
        if (!(best->f_score > max_f + config.params.pruning_min)) break;

        if (best->candidate.feature < n_local) {
          Condition cond;
          cond.direction = best->candidate.direction;
          cond.term = Condition::Plain{
              data.feature_names[best->candidate.feature],
              best->candidate.threshold};
          rule.conditions.push_back(std::move(cond));
          const std::vector<double>& column =
              data.numeric[best->candidate.feature];
          std::vector<uint32_t> narrowed;
          narrowed.reserve(working.size());
          for (uint32_t r : working) {
            double v = column[r];
            if (std::isnan(v)) continue;
            bool covered = best->candidate.direction == Direction::LE
                               ? v <= best->candidate.threshold
                               : v > best->candidate.threshold;
            if (covered) narrowed.push_back(r);
          }
          working = std::move(narrowed);
        } else {
          int fid = best->candidate.feature - n_local;
          peer.send(MsgKind::SplitChosen,
                    {{"feature_id", fid},
                     {"j", best->candidate.split_index},
                     {"op", direction_name(best->candidate.direction)}});
          ProtocolMessage covered_msg = peer.expect(MsgKind::CoveredSet);
          const nlohmann::json& sets = covered_msg.body["sets"];
          if (!sets.is_array() || sets.size() != 1) {
            throw Error(Errc::MalformedFrame, "covered set missing");
          }
          std::unordered_set<uint32_t> allowed(working.begin(),
                                               working.end());
          std::vector<uint32_t> narrowed;
          for (const nlohmann::json& idj : sets[0]) {
            auto it = row_of.find(idj.get<std::string>());
            if (it == row_of.end() || !allowed.count(it->second)) {
              throw Error(Errc::ProtocolIntegrity,
                          "covered id outside the requested subset");
            }
            narrowed.push_back(it->second);
          }
          if (narrowed.size() != best->stats.n_cover) {
            throw Error(Errc::ProtocolIntegrity,
                        "covered set size disagrees with scan reply");
          }
          std::sort(narrowed.begin(), narrowed.end());
          Condition cond;
          cond.direction = best->candidate.direction;
          cond.term =
              OpaqueSplit{config.passive_party, fid, chosen_of_feature[fid]++};
          rule.conditions.push_back(std::move(cond));
          working = std::move(narrowed);
        }
        max_f = best->f_score;
        last_stats = best->stats;
      }

      if (rule.conditions.empty()) break;
      set.rules.push_back(std::move(rule));
      per_rule.push_back(last_stats);

      std::unordered_set<uint32_t> covered(working.begin(), working.end());
      std::vector<uint32_t> rest;
      rest.reserve(residual.size());
      for (uint32_t r : residual) {
        if (!covered.count(r)) rest.push_back(r);
      }
      residual = std::move(rest);
    }

    peer.send(MsgKind::SessionEnd, {{"status", "ok"}});
    if (!set.rules.empty()) {
      set.metrics = compose_rule_metrics(per_rule, data.n_rows(),
                                         total_positives, config.params.beta);
    }
    if (report) {
      report->total_rows = data.n_rows();
      report->total_positives = total_positives;
      report->per_rule = per_rule;
    }
    return set;
  } catch (const Error& e) {
    if (e.code() != Errc::ChannelClosed && e.code() != Errc::Transport) {
      peer.send_error(wire_code(e.code()), e.what());
    }
    throw;
  }
}

// ---------------------------------------------------------------------------
// Passive party (features only).

namespace {

// Everything the passive side keeps between messages.
struct PassiveState {
  const Dataset& data;
  std::unordered_map<std::string, uint32_t> row_of;
  PublicKey pk;
  bool have_key = false;
  std::vector<Ciphertext> label_ct;  // row-aligned, may be shorter than data
  std::unordered_map<uint32_t, size_t> ct_of_row;
  // Last scan, per feature: candidate thresholds and the subset scanned.
  std::vector<uint32_t> scan_rows;
  std::map<int, std::vector<double>> scan_thresholds;
  // Mirrors the trainer's per-feature chosen-split ordinals, so both sides
  // agree on the stored key without the threshold ever crossing the wire.
  std::map<int, int> chosen_of_feature;
  PassiveSplitTable table;

  explicit PassiveState(const Dataset& d) : data(d) {
    for (uint32_t r = 0; r < d.n_rows(); ++r) row_of[d.instance_ids[r]] = r;
  }

  uint32_t resolve(const std::string& id) const {
    auto it = row_of.find(id);
    if (it == row_of.end()) {
      throw Error(Errc::Alignment, "instance '" + id + "' is unknown here");
    }
    return it->second;
  }
};

nlohmann::json scan_feature(PassiveState& st, int feature,
                            const std::vector<uint32_t>& rows) {
  const std::vector<double>& column = st.data.numeric[feature];
  std::vector<std::pair<double, uint32_t>> present;
  present.reserve(rows.size());
  for (uint32_t r : rows) {
    if (!std::isnan(column[r])) present.emplace_back(column[r], r);
  }
  nlohmann::json candidates = nlohmann::json::array();
  std::vector<double> thresholds;
  if (present.size() >= 2) {
    std::sort(present.begin(), present.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const size_t m = present.size();
    // Running homomorphic sums from both ends; a boundary's LE sum is the
    // prefix product, its GT sum the suffix product.
    std::vector<Ciphertext> prefix(m), suffix(m);
    for (size_t i = 0; i < m; ++i) {
      const Ciphertext& ct = st.label_ct[st.ct_of_row.at(present[i].second)];
      prefix[i] = i == 0 ? ct : c_add(st.pk, prefix[i - 1], ct);
    }
    for (size_t i = m; i-- > 0;) {
      const Ciphertext& ct = st.label_ct[st.ct_of_row.at(present[i].second)];
      suffix[i] = i + 1 == m ? ct : c_add(st.pk, suffix[i + 1], ct);
    }
    int j = 0;
    for (size_t i = 0; i + 1 < m; ++i) {
      if (present[i].first == present[i + 1].first) continue;
      double lo = present[i].first;
      double hi = present[i + 1].first;
      double threshold = lo + (hi - lo) / 2.0;
      thresholds.push_back(threshold);
      nlohmann::json cj;
      cj["j"] = j++;
      cj["le"] = {{"cover", std::to_string(i + 1)},
                  {"sum", to_hex(prefix[i].value)}};
      cj["gt"] = {{"cover", std::to_string(m - i - 1)},
                  {"sum", to_hex(suffix[i + 1].value)}};
      candidates.push_back(std::move(cj));
    }
  }
  st.scan_thresholds[feature] = std::move(thresholds);
  return nlohmann::json{{"feature_id", feature},
                        {"candidates", std::move(candidates)}};
}

std::vector<std::string> covered_ids(const PassiveState& st,
                                     const std::vector<uint32_t>& rows,
                                     int feature, double threshold,
                                     Direction dir) {
  const std::vector<double>& column = st.data.numeric[feature];
  std::vector<std::string> out;
  for (uint32_t r : rows) {
    double v = column[r];
    if (std::isnan(v)) continue;
    bool covered = dir == Direction::LE ? v <= threshold : v > threshold;
    if (covered) out.push_back(st.data.instance_ids[r]);
  }
  return out;
}

void serve_predict_request(PassiveState& st, Peer& peer,
                           const ProtocolMessage& msg) {
  if (msg.body.value("event", "") != "predict") {
    throw Error(Errc::Protocol, "unexpected broadcast event");
  }
  std::vector<uint32_t> rows;
  for (const nlohmann::json& idj : msg.body["ids"]) {
    rows.push_back(st.resolve(idj.get<std::string>()));
  }
  nlohmann::json sets = nlohmann::json::array();
  for (const nlohmann::json& cj : msg.body["conditions"]) {
    int fid = cj.value("feature_id", -1);
    int j = cj.value("split_index", -1);
    Direction dir = direction_from_name(cj.value("op", ""));
    auto it = st.table.thresholds.find({fid, j});
    if (it == st.table.thresholds.end()) {
      throw Error(Errc::StaleModel,
                  "no recorded threshold for this opaque split");
    }
    if (fid < 0 || static_cast<size_t>(fid) >= st.data.n_features()) {
      throw Error(Errc::StaleModel, "opaque split names a missing feature");
    }
    sets.push_back(covered_ids(st, rows, fid, it->second, dir));
  }
  peer.send(MsgKind::CoveredSet, {{"sets", std::move(sets)}});
}

}  // namespace

PassiveSplitTable run_vertical_passive(Channel& peer_ch, const Dataset& data) {
  data.check();
  require_all_numeric(data);
  if (data.has_labels()) {
    throw Error(Errc::Precondition,
                "the passive party must not hold labels");
  }
  PassiveState st(data);
  Peer peer(peer_ch, "vertical", nullptr);
  try {
    for (;;) {
      ProtocolMessage msg = peer.recv();
      raise_if_error_end(msg);
      switch (msg.kind) {
        case MsgKind::SessionStart: {
          if (msg.body.value("mode", "") != "vertical") {
            throw Error(Errc::Protocol, "wrong mode for this party");
          }
          peer.set_session(msg.session);
          break;
        }
        case MsgKind::PublicKey: {
          st.pk.n = from_hex(msg.body["n"].get<std::string>());
          st.pk.n_squared = st.pk.n * st.pk.n;
          st.pk.key_id = fingerprint_modulus(st.pk.n);
          st.have_key = true;
          break;
        }
        case MsgKind::EncryptedLabels: {
          if (!st.have_key) {
            throw Error(Errc::Protocol, "labels arrived before the key");
          }
          const nlohmann::json& ids = msg.body["ids"];
          const nlohmann::json& cts = msg.body["cts"];
          if (!ids.is_array() || !cts.is_array() ||
              ids.size() != cts.size()) {
            throw Error(Errc::MalformedFrame, "ids and cts disagree");
          }
          st.label_ct.clear();
          st.ct_of_row.clear();
          for (size_t i = 0; i < ids.size(); ++i) {
            uint32_t row = st.resolve(ids[i].get<std::string>());
            st.ct_of_row[row] = st.label_ct.size();
            st.label_ct.push_back(
                Ciphertext{from_hex(cts[i].get<std::string>()), st.pk.key_id});
          }
          break;
        }
        case MsgKind::ScanRequest: {
          if (st.label_ct.empty()) {
            throw Error(Errc::Protocol, "scan requested before labels");
          }
          st.scan_rows.clear();
          for (const nlohmann::json& idj : msg.body["ids"]) {
            uint32_t row = st.resolve(idj.get<std::string>());
            if (!st.ct_of_row.count(row)) {
              throw Error(Errc::Alignment,
                          "scan subset includes an unlabeled instance");
            }
            st.scan_rows.push_back(row);
          }
          st.scan_thresholds.clear();
          nlohmann::json features = nlohmann::json::array();
          for (size_t f = 0; f < data.n_features(); ++f) {
            features.push_back(
                scan_feature(st, static_cast<int>(f), st.scan_rows));
          }
          peer.send(MsgKind::ScanReply, {{"features", std::move(features)}});
          break;
        }
        case MsgKind::SplitChosen: {
          int fid = msg.body.value("feature_id", -1);
          int j = msg.body.value("j", -1);
          Direction dir = direction_from_name(msg.body.value("op", ""));
          auto it = st.scan_thresholds.find(fid);
          if (it == st.scan_thresholds.end() || j < 0 ||
              static_cast<size_t>(j) >= it->second.size()) {
            throw Error(Errc::Protocol,
                        "chosen split does not match the last scan");
          }
          double threshold = it->second[j];
          st.table.thresholds[{fid, st.chosen_of_feature[fid]++}] = threshold;
          nlohmann::json sets = nlohmann::json::array();
          sets.push_back(covered_ids(st, st.scan_rows, fid, threshold, dir));
          peer.send(MsgKind::CoveredSet, {{"sets", std::move(sets)}});
          break;
        }
        case MsgKind::SessionEnd:
          return st.table;
        default:
          throw Error(Errc::Protocol,
                      std::string("unexpected ") + msg_kind_name(msg.kind));
      }
    }
  } catch (const Error& e) {
    if (e.code() != Errc::ChannelClosed && e.code() != Errc::Transport) {
      peer.send_error(wire_code(e.code()), e.what());
    }
    throw;
  }
}

std::vector<uint8_t> joint_predict_vertical(Channel& peer_ch,
                                            const RuleSet& set,
                                            const Dataset& local,
                                            const std::string& session) {
  local.check();
  Peer peer(peer_ch, session, nullptr);

  // One batched query: every opaque condition in the set, all rows.
  std::vector<const Condition*> opaque;
  nlohmann::json conditions = nlohmann::json::array();
  for (const Rule& rule : set.rules) {
    for (const Condition& cond : rule.conditions) {
      if (!cond.is_opaque()) continue;
      opaque.push_back(&cond);
      conditions.push_back({{"party", cond.opaque().party},
                            {"feature_id", cond.opaque().feature_id},
                            {"split_index", cond.opaque().split_index},
                            {"op", direction_name(cond.direction)}});
    }
  }

  std::vector<std::unordered_set<std::string>> covered_by(opaque.size());
  if (!opaque.empty()) {
    nlohmann::json ids = nlohmann::json::array();
    for (const std::string& id : local.instance_ids) ids.push_back(id);
    peer.send(MsgKind::ConditionBroadcast, {{"event", "predict"},
                                            {"ids", std::move(ids)},
                                            {"conditions", conditions}});
    ProtocolMessage reply = peer.expect(MsgKind::CoveredSet);
    const nlohmann::json& sets = reply.body["sets"];
    if (!sets.is_array() || sets.size() != opaque.size()) {
      throw Error(Errc::MalformedFrame,
                  "covered sets do not match the query");
    }
    for (size_t i = 0; i < opaque.size(); ++i) {
      for (const nlohmann::json& idj : sets[i]) {
        covered_by[i].insert(idj.get<std::string>());
      }
    }
    peer.send(MsgKind::SessionEnd, {{"status", "ok"}});
  }

  // Flat query order maps back to rules by a running offset.
  std::vector<size_t> rule_base(set.rules.size(), 0);
  {
    size_t k = 0;
    for (size_t i = 0; i < set.rules.size(); ++i) {
      rule_base[i] = k;
      for (const Condition& c : set.rules[i].conditions) k += c.is_opaque();
    }
  }

  std::vector<uint8_t> out(local.n_rows(), 0);
  for (uint32_t r = 0; r < local.n_rows(); ++r) {
    const std::string& id = local.instance_ids[r];
    for (size_t i = 0; i < set.rules.size(); ++i) {
      bool covers = true;
      size_t k = rule_base[i];
      for (const Condition& cond : set.rules[i].conditions) {
        if (cond.is_opaque()) {
          if (!covered_by[k++].count(id)) {
            covers = false;
            break;
          }
        } else if (!condition_covers(local, cond, r)) {
          covers = false;
          break;
        }
      }
      if (covers) {
        out[r] = 1;
        break;
      }
    }
  }
  return out;
}

void serve_vertical_predict(Channel& peer_ch, const Dataset& data,
                            const PassiveSplitTable& table) {
  data.check();
  require_all_numeric(data);
  PassiveState st(data);
  st.table = table;
  Peer peer(peer_ch, "vertical.predict", nullptr);
  try {
    for (;;) {
      ProtocolMessage msg = peer.recv();
      raise_if_error_end(msg);
      if (msg.kind == MsgKind::SessionEnd) return;
      if (msg.kind != MsgKind::ConditionBroadcast) {
        throw Error(Errc::Protocol,
                    std::string("unexpected ") + msg_kind_name(msg.kind));
      }
      peer.set_session(msg.session);
      serve_predict_request(st, peer, msg);
    }
  } catch (const Error& e) {
    if (e.code() == Errc::ChannelClosed) return;  // peer is simply done
    if (e.code() != Errc::Transport) {
      peer.send_error(wire_code(e.code()), e.what());
    }
    throw;
  }
}

RuleSet substitute_opaque(const RuleSet& set, const PassiveSplitTable& table,
                          const std::vector<std::string>& passive_features) {
  RuleSet out = set;
  for (Rule& rule : out.rules) {
    for (Condition& cond : rule.conditions) {
      if (!cond.is_opaque()) continue;
      const OpaqueSplit o = cond.opaque();
      auto it = table.thresholds.find({o.feature_id, o.split_index});
      if (it == table.thresholds.end()) {
        throw Error(Errc::StaleModel, "split table lacks this condition");
      }
      if (o.feature_id < 0 ||
          static_cast<size_t>(o.feature_id) >= passive_features.size()) {
        throw Error(Errc::StaleModel, "feature id outside the passive schema");
      }
      cond.term = Condition::Plain{passive_features[o.feature_id],
                                   it->second};
    }
  }
  return out;
}

}  // namespace fedfeare
