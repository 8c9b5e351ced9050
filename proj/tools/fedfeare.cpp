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

// Command-line front end. Subcommands:
//   train      learn an ordered rule set from a labeled CSV
//   evaluate   score an existing rule set against labeled data
//   predict    emit one 0/1 line per row of a CSV
//   gen-data   synthesize an imbalanced table with planted ground truth
//   fed-train  one party of a federated training session over TCP
//   simulate   run every party of a federated session in-process and
//              check the result against centralized training
//
// Any failure prints a single machine-readable JSON line on stderr and
// exits nonzero (2 for usage problems, 1 otherwise).

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "fedfeare/channel.hpp"
#include "fedfeare/csv.hpp"
#include "fedfeare/error.hpp"
#include "fedfeare/horizontal.hpp"
#include "fedfeare/inducer.hpp"
#include "fedfeare/json_model.hpp"
#include "fedfeare/report.hpp"
#include "fedfeare/rule.hpp"
#include "fedfeare/ruleset_json.hpp"
#include "fedfeare/socket_channel.hpp"
#include "fedfeare/synthetic.hpp"
#include "fedfeare/vertical.hpp"

namespace {

using namespace fedfeare;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidData, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidData, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(Errc::InvalidData, "short write to '" + path + "'");
}

uint64_t parse_u64(const std::string& text, const std::string& what) {
  if (text.empty() || text[0] == '-') {
    throw Error(Errc::Usage, what + " must be an unsigned integer");
  }
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') {
    throw Error(Errc::Usage, what + " must be an unsigned integer");
  }
  return v;
}

// Seed precedence: an explicit --seed wins, then the FEDFEARE_SEED
// environment override, then the command's own fallback.
uint64_t resolve_seed(bool flag_given, uint64_t flag_value, uint64_t fallback) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("FEDFEARE_SEED")) {
    return parse_u64(env, "FEDFEARE_SEED");
  }
  return fallback;
}

// Flags shared by every subcommand that reads a CSV.
struct TableOpts {
  std::string data;
  std::string label_col;
  std::string id_col;
  std::vector<std::string> categorical;
  std::vector<std::string> numeric;
};

void add_table_flags(CLI::App* cmd, TableOpts& t, bool with_label) {
  cmd->add_option("--data", t.data, "Input CSV")->required();
  if (with_label) {
    cmd->add_option("--label-col", t.label_col, "Name of the 0/1 label column");
  }
  cmd->add_option("--id-col", t.id_col,
                  "Instance id column (default: row numbers)");
  cmd->add_option("--categorical", t.categorical,
                  "Force a column to be treated as categorical");
  cmd->add_option("--numeric", t.numeric,
                  "Force a column to be treated as numeric");
}

DataSchema schema_of(const TableOpts& t, bool with_labels) {
  DataSchema s;
  if (with_labels) s.label_column = t.label_col;
  s.id_column = t.id_col;
  for (const std::string& f : t.categorical) {
    s.kind_overrides[f] = FeatureKind::Categorical;
  }
  for (const std::string& f : t.numeric) {
    s.kind_overrides[f] = FeatureKind::Numeric;
  }
  return s;
}

// Loads and, when any column is categorical, frequency-encodes in place.
Dataset load_table(const TableOpts& t, bool with_labels) {
  Dataset data = load_csv(t.data, schema_of(t, with_labels));
  bool any_categorical = std::any_of(
      data.feature_kinds.begin(), data.feature_kinds.end(),
      [](FeatureKind k) { return k == FeatureKind::Categorical; });
  if (any_categorical) data = encode_categoricals(data);
  return data;
}

struct HyperOpts {
  int max_depth = 3;
  int trees = 3;
  double pruning_min = 0.01;
  double beta = 1.0;
};

void add_hyper_flags(CLI::App* cmd, HyperOpts& h) {
  cmd->add_option("--max-depth", h.max_depth, "Conditions per rule")
      ->capture_default_str();
  cmd->add_option("--trees", h.trees, "Rules per set")->capture_default_str();
  cmd->add_option("--pruning-min", h.pruning_min,
                  "Minimum F-score gain to accept a condition")
      ->capture_default_str();
  cmd->add_option("--beta", h.beta, "Recall weight of the F-score")
      ->capture_default_str();
}

HyperParams params_of(const HyperOpts& h) {
  HyperParams p;
  p.max_depth = h.max_depth;
  p.tree_number = h.trees;
  p.pruning_min = h.pruning_min;
  p.beta = h.beta;
  return p;
}

void print_rule_set(std::ostream& out, const std::string& title,
                    const RuleSet& set) {
  out << title << ": " << set.rules.size()
      << (set.rules.size() == 1 ? " rule\n" : " rules\n");
  for (size_t i = 0; i < set.rules.size(); ++i) {
    out << "  " << (i + 1) << ". ";
    const Rule& rule = set.rules[i];
    for (size_t c = 0; c < rule.conditions.size(); ++c) {
      if (c) out << " AND ";
      out << condition_text(rule.conditions[c]);
    }
    if (i < set.metrics.size()) {
      const RuleMetrics& m = set.metrics[i];
      out << "   [f=" << m.f_score << " cp=" << m.cp << " cr=" << m.cr
          << " cl=" << m.cl << "]";
    }
    out << "\n";
  }
}

void write_report_file(const std::string& path, const RuleSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidData, "cannot write '" + path + "'");
  write_report(out, set);
}

// One replay line per frame: microsecond timestamp, direction, frame bytes.
void dump_transcript(const std::string& path, const TranscriptLog& log) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidData, "cannot write '" + path + "'");
  for (const TranscriptEntry& e : log.entries()) {
    out << e.micros << ' ' << e.channel << ' ' << e.frame << '\n';
  }
}

// ---------------------------------------------------------------- train

struct TrainOpts {
  TableOpts table;
  HyperOpts hyper;
  std::string out = "rules.json";
  std::string report = "report.csv";
};

int run_train(const TrainOpts& o) {
  if (o.table.label_col.empty()) {
    throw Error(Errc::Usage, "train requires --label-col");
  }
  Dataset data = load_table(o.table, true);
  RuleSet set = learn_rule_set(data, params_of(o.hyper));
  set.encodings = data.encodings;
  spit(o.out, ruleset_to_json(set));
  write_report_file(o.report, set);
  print_rule_set(std::cout, "learned", set);
  std::cout << "rules written to " << o.out << ", report to " << o.report
            << "\n";
  return 0;
}

// ------------------------------------------------------------- evaluate

struct EvaluateOpts {
  TableOpts table;
  std::string rules;
};

int run_evaluate(const EvaluateOpts& o) {
  if (o.table.label_col.empty()) {
    throw Error(Errc::Usage, "evaluate requires --label-col");
  }
  RuleSet set = ruleset_from_json(slurp(o.rules));
  Dataset data = load_csv(o.table.data, schema_of(o.table, true));
  if (!set.encodings.empty()) data = apply_encodings(data, set.encodings);
  RuleSet scored = set;
  scored.metrics = evaluate_rule_set(data, set);
  write_report(std::cout, scored);
  return 0;
}

// -------------------------------------------------------------- predict

struct PredictOpts {
  TableOpts table;
  std::string rules;
};

int run_predict(const PredictOpts& o) {
  RuleSet set = ruleset_from_json(slurp(o.rules));
  // A label column, when named, is stripped from the features and ignored.
  Dataset data = load_csv(o.table.data, schema_of(o.table, true));
  if (!set.encodings.empty()) data = apply_encodings(data, set.encodings);
  for (uint8_t p : predict(data, set)) {
    std::cout << static_cast<int>(p) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------- gen-data

struct GenDataOpts {
  std::string spec_path;
  std::string out = "data.csv";
  std::string truth = "truth.json";
  uint64_t seed = 0;
  bool seed_given = false;
};

uint64_t spec_u64(const nlohmann::json& j, const char* key, uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_unsigned()) {
    throw Error(Errc::SchemaViolation,
                std::string("spec key '") + key + "' must be a nonnegative integer");
  }
  return j[key].get<uint64_t>();
}

double spec_double(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw Error(Errc::SchemaViolation,
                std::string("spec key '") + key + "' must be a number");
  }
  return j[key].get<double>();
}

SyntheticSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(Errc::SchemaViolation, "spec must be a JSON object");
  }
  static const char* known[] = {"n_rows",       "n_features", "value_levels",
                                "planted_rules", "auto_rules", "rule_depth",
                                "positive_rate", "noise_rate", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return key == k;
        }) == std::end(known)) {
      throw Error(Errc::SchemaViolation, "unknown spec key '" + key + "'");
    }
  }
  if (!j.contains("n_rows") || !j.contains("n_features")) {
    throw Error(Errc::SchemaViolation, "spec requires n_rows and n_features");
  }
  SyntheticSpec s;
  s.n_rows = spec_u64(j, "n_rows", 0);
  s.n_features = static_cast<int>(spec_u64(j, "n_features", 0));
  s.value_levels = static_cast<int>(spec_u64(j, "value_levels", 0));
  s.auto_rules = static_cast<int>(spec_u64(j, "auto_rules", 0));
  s.rule_depth = static_cast<int>(spec_u64(j, "rule_depth", s.rule_depth));
  s.positive_rate = spec_double(j, "positive_rate", s.positive_rate);
  s.noise_rate = spec_double(j, "noise_rate", s.noise_rate);
  s.seed = spec_u64(j, "seed", 0);
  if (j.contains("planted_rules")) {
    if (!j["planted_rules"].is_array()) {
      throw Error(Errc::SchemaViolation, "planted_rules must be an array");
    }
    for (const nlohmann::json& r : j["planted_rules"]) {
      s.planted_rules.push_back(rule_from_json(r));
    }
  }
  return s;
}

int run_gen_data(const GenDataOpts& o) {
  nlohmann::json j = nlohmann::json::parse(slurp(o.spec_path), nullptr, false);
  if (j.is_discarded()) {
    throw Error(Errc::SchemaViolation, "spec file is not valid JSON");
  }
  SyntheticSpec spec = spec_from_json(j);
  spec.seed = resolve_seed(o.seed_given, o.seed, spec.seed);
  SyntheticData gen = gen_synthetic(spec);
  write_csv(gen.data, o.out);
  spit(o.truth, ruleset_to_json(gen.truth));
  std::cout << "rows: " << gen.data.n_rows()
            << " features: " << gen.data.n_features()
            << " positives: " << gen.data.positive_count()
            << " noise-flipped: " << gen.flipped << "\n"
            << "data written to " << o.out << ", truth to " << o.truth << "\n";
  return 0;
}

// ------------------------------------------------------------ fed-train

struct FedOpts {
  std::string mode;
  std::string role;
  std::string listen;
  std::string connect;
  TableOpts table;
  HyperOpts hyper;
  unsigned key_bits = 256;
  uint64_t seed = 1;
  bool seed_given = false;
  std::string session;
  std::string out;
  std::string report;
  std::string transcript;
  int guests = 0;
  int index = -1;
  std::string ring_listen = "127.0.0.1:0";
};

// Establishes the single peer link for the two-party roles: whoever got
// --listen binds and accepts, whoever got --connect dials.
std::unique_ptr<SocketChannel> one_peer(const FedOpts& o,
                                        const std::string& name) {
  if (o.listen.empty() == o.connect.empty()) {
    throw Error(Errc::Usage, "exactly one of --listen and --connect is required");
  }
  if (!o.listen.empty()) {
    auto listener = socket_listen(o.listen);
    std::cout << "listening on port " << listener->port() << std::endl;
    return listener->accept(name);
  }
  return socket_connect(o.connect, name);
}

int fed_vertical_active(const FedOpts& o) {
  if (o.table.data.empty()) {
    throw Error(Errc::Usage, "the active party requires --data");
  }
  if (o.table.label_col.empty()) {
    throw Error(Errc::Usage, "the active party requires --label-col");
  }
  Dataset data = load_table(o.table, true);
  auto peer = one_peer(o, "active->passive");
  TranscriptLog log;
  if (!o.transcript.empty()) peer->attach_transcript(&log);

  VerticalConfig cfg;
  cfg.params = params_of(o.hyper);
  cfg.key_bits = o.key_bits;
  cfg.seed = resolve_seed(o.seed_given, o.seed, 1);
  if (!o.session.empty()) cfg.session = o.session;
  FedReport fed;
  RuleSet set = run_vertical_active(*peer, data, cfg, &fed);
  set.encodings = data.encodings;

  if (!o.out.empty()) spit(o.out, ruleset_to_json(set));
  if (!o.report.empty()) write_report_file(o.report, set);
  print_rule_set(std::cout, "learned", set);
  std::cout << "frames sent: " << fed.frames_sent
            << " received: " << fed.frames_received << "\n";
  dump_transcript(o.transcript, log);
  return 0;
}

int fed_vertical_passive(const FedOpts& o) {
  if (!o.table.label_col.empty()) {
    throw Error(Errc::Usage, "labels must not be supplied to a passive party");
  }
  if (o.table.data.empty()) {
    throw Error(Errc::Usage, "the passive party requires --data");
  }
  Dataset data = load_table(o.table, false);
  auto peer = one_peer(o, "passive->active");
  TranscriptLog log;
  if (!o.transcript.empty()) peer->attach_transcript(&log);

  PassiveSplitTable table = run_vertical_passive(*peer, data);
  std::cout << "session complete; " << table.thresholds.size()
            << " thresholds retained locally\n";
  dump_transcript(o.transcript, log);
  return 0;
}

int fed_horizontal_coordinator(const FedOpts& o) {
  if (!o.table.data.empty() || !o.table.label_col.empty()) {
    throw Error(Errc::Usage, "the coordinator holds no data");
  }
  if (o.guests < 2) {
    throw Error(Errc::Usage, "the coordinator requires --guests >= 2");
  }
  if (o.listen.empty()) {
    throw Error(Errc::Usage, "the coordinator requires --listen");
  }
  auto listener = socket_listen(o.listen);
  std::cout << "listening on port " << listener->port() << std::endl;

  // Guests may dial in any order; each announces its ring index and where
  // its ring listener lives, then learns who its successor is. These raw
  // lines precede the protocol and never enter transcripts.
  std::vector<std::unique_ptr<SocketChannel>> slots(
      static_cast<size_t>(o.guests));
  std::vector<std::string> ring_addr(static_cast<size_t>(o.guests));
  for (int i = 0; i < o.guests; ++i) {
    auto ch = listener->accept("coordinator->?");
    std::istringstream hello(ch->recv_raw_line());
    std::string word, addr;
    int index = -1;
    hello >> word >> index >> addr;
    if (word != "guest" || index < 0 || index >= o.guests || addr.empty()) {
      throw Error(Errc::Protocol, "bad guest hello");
    }
    if (slots[index]) {
      throw Error(Errc::Protocol,
                  "two guests announced index " + std::to_string(index));
    }
    ch->rename("coordinator->guest" + std::to_string(index));
    slots[index] = std::move(ch);
    ring_addr[index] = addr;
  }
  for (int i = 0; i < o.guests; ++i) {
    slots[i]->send_raw_line("peers " + std::to_string(o.guests));
    slots[i]->send_raw_line(i + 1 < o.guests ? "next " + ring_addr[i + 1]
                                             : "next end");
  }

  TranscriptLog log;
  std::vector<Channel*> channels;
  for (auto& ch : slots) {
    if (!o.transcript.empty()) ch->attach_transcript(&log);
    channels.push_back(ch.get());
  }

  HorizontalConfig cfg;
  cfg.params = params_of(o.hyper);
  cfg.key_bits = o.key_bits;
  cfg.seed = resolve_seed(o.seed_given, o.seed, 1);
  if (!o.session.empty()) cfg.session = o.session;
  FedReport fed;
  RuleSet set = run_horizontal_coordinator(channels, cfg, &fed);

  if (!o.out.empty()) spit(o.out, ruleset_to_json(set));
  if (!o.report.empty()) write_report_file(o.report, set);
  print_rule_set(std::cout, "learned", set);
  std::cout << "rows: " << fed.total_rows
            << " positives: " << fed.total_positives
            << " frames sent: " << fed.frames_sent
            << " received: " << fed.frames_received << "\n";
  dump_transcript(o.transcript, log);
  return 0;
}

int fed_horizontal_guest(const FedOpts& o) {
  if (o.index < 0) {
    throw Error(Errc::Usage, "guests require --index (0-based ring position)");
  }
  if (o.connect.empty()) {
    throw Error(Errc::Usage, "guests connect to the coordinator with --connect");
  }
  if (o.table.data.empty() || o.table.label_col.empty()) {
    throw Error(Errc::Usage, "guests require --data and --label-col");
  }
  Dataset data = load_table(o.table, true);

  // Bind the ring listener before saying hello so the advertised address is
  // already live when a predecessor dials it.
  auto ring_listener = socket_listen(o.ring_listen);
  std::string host = o.ring_listen.substr(0, o.ring_listen.rfind(':'));
  std::string advertise = host + ":" + std::to_string(ring_listener->port());
  std::string me = "guest" + std::to_string(o.index);

  auto coordinator = socket_connect(o.connect, me + "->coordinator");
  coordinator->send_raw_line("guest " + std::to_string(o.index) + " " +
                             advertise);
  std::istringstream peers_line(coordinator->recv_raw_line());
  std::string word;
  int peers = 0;
  peers_line >> word >> peers;
  if (word != "peers" || peers < 1 || o.index >= peers) {
    throw Error(Errc::Protocol, "bad coordinator reply");
  }
  std::string next_line = coordinator->recv_raw_line();
  std::unique_ptr<SocketChannel> ring_out;
  if (next_line.rfind("next ", 0) != 0) {
    throw Error(Errc::Protocol, "bad coordinator reply");
  }
  std::string next = next_line.substr(5);
  if (next != "end") {
    ring_out = socket_connect(next,
                              me + "->guest" + std::to_string(o.index + 1));
  }
  std::unique_ptr<SocketChannel> ring_in;
  if (o.index > 0) {
    ring_in = ring_listener->accept(me + "->guest" +
                                    std::to_string(o.index - 1));
  }

  TranscriptLog log;
  if (!o.transcript.empty()) {
    coordinator->attach_transcript(&log);
    if (ring_out) ring_out->attach_transcript(&log);
  }

  GuestEndpoints ep;
  ep.coordinator = coordinator.get();
  ep.ring_in = o.index == 0 ? coordinator.get() : ring_in.get();
  ep.ring_out = next == "end" ? coordinator.get() : ring_out.get();
  RuleSet set =
      run_horizontal_guest(ep, data, resolve_seed(o.seed_given, o.seed, 1));

  if (!o.out.empty()) spit(o.out, ruleset_to_json(set));
  print_rule_set(std::cout, "received", set);
  dump_transcript(o.transcript, log);
  return 0;
}

int run_fed_train(const FedOpts& o) {
  if (o.mode == "vertical") {
    if (o.role == "active") return fed_vertical_active(o);
    if (o.role == "passive") return fed_vertical_passive(o);
    throw Error(Errc::Usage, "vertical roles are active|passive");
  }
  if (o.mode == "horizontal") {
    if (o.role == "coordinator") return fed_horizontal_coordinator(o);
    if (o.role == "guest") return fed_horizontal_guest(o);
    throw Error(Errc::Usage, "horizontal roles are guest|coordinator");
  }
  throw Error(Errc::Usage, "--mode must be vertical or horizontal");
}

// ------------------------------------------------------------- simulate

struct SimOpts {
  std::string mode;
  int parts = 2;
  TableOpts table;
  HyperOpts hyper;
  unsigned key_bits = 256;
  uint64_t seed = 1;
  bool seed_given = false;
  std::string session;
  std::string transcript;
};

int simulate_vertical(const SimOpts& o) {
  if (o.parts != 2) {
    throw Error(Errc::Usage, "vertical simulation is two-party; use --parts 2");
  }
  Dataset full = load_table(o.table, true);
  full.check();
  if (full.n_features() < 2) {
    throw Error(Errc::Usage, "need at least 2 features to split vertically");
  }
  // The active party keeps the first half of the columns, in order, so the
  // joined candidate enumeration matches the single-table one.
  int n = static_cast<int>(full.n_features());
  int m = (n + 1) / 2;
  std::vector<int> left(m), right(n - m);
  std::iota(left.begin(), left.end(), 0);
  std::iota(right.begin(), right.end(), m);
  Dataset active = subset_columns(full, left, true);
  Dataset passive = subset_columns(full, right, false);

  auto [ach, pch] = make_inproc_pair("active->passive", "passive->active");
  TranscriptLog log;
  ach->attach_transcript(&log);
  pch->attach_transcript(&log);

  VerticalConfig cfg;
  cfg.params = params_of(o.hyper);
  cfg.key_bits = o.key_bits;
  cfg.seed = resolve_seed(o.seed_given, o.seed, 1);
  if (!o.session.empty()) cfg.session = o.session;

  PassiveSplitTable table;
  std::exception_ptr passive_err;
  std::thread passive_thread([&] {
    try {
      table = run_vertical_passive(*pch, passive);
    } catch (...) {
      passive_err = std::current_exception();
    }
  });
  RuleSet fed;
  std::exception_ptr active_err;
  try {
    fed = run_vertical_active(*ach, active, cfg);
  } catch (...) {
    active_err = std::current_exception();
  }
  passive_thread.join();
  if (active_err) std::rethrow_exception(active_err);
  if (passive_err) std::rethrow_exception(passive_err);

  RuleSet plain = substitute_opaque(fed, table, passive.feature_names);
  RuleSet central = learn_rule_set(full, cfg.params);

  // Prediction must agree too: the active party asks the peer which rows
  // its opaque splits cover and combines with its own conditions.
  std::exception_ptr serve_err;
  std::thread serve_thread([&] {
    try {
      serve_vertical_predict(*pch, passive, table);
    } catch (...) {
      serve_err = std::current_exception();
    }
  });
  std::vector<uint8_t> joint =
      joint_predict_vertical(*ach, fed, active, cfg.session + ".predict");
  serve_thread.join();
  if (serve_err) std::rethrow_exception(serve_err);
  std::vector<uint8_t> local = predict(full, plain);

  print_rule_set(std::cout, "federated", plain);
  print_rule_set(std::cout, "centralized", central);
  dump_transcript(o.transcript, log);
  if (ruleset_to_json(plain) != ruleset_to_json(central)) {
    throw Error(Errc::ProtocolIntegrity,
                "federated and centralized rule sets differ");
  }
  if (joint != local) {
    throw Error(Errc::ProtocolIntegrity,
                "joint prediction diverged from local prediction");
  }
  std::cout << "equivalent: rule sets and predictions match\n";
  return 0;
}

int simulate_horizontal(const SimOpts& o) {
  if (o.parts < 2) throw Error(Errc::Usage, "--parts must be at least 2");
  Dataset full = load_table(o.table, true);
  full.check();
  size_t k = static_cast<size_t>(o.parts);
  if (full.n_rows() < k) {
    throw Error(Errc::Usage, "--parts exceeds the row count");
  }

  std::vector<Dataset> parts;
  for (size_t i = 0; i < k; ++i) {
    size_t lo = i * full.n_rows() / k;
    size_t hi = (i + 1) * full.n_rows() / k;
    std::vector<uint32_t> rows(hi - lo);
    std::iota(rows.begin(), rows.end(), static_cast<uint32_t>(lo));
    parts.push_back(subset_rows(full, rows));
  }

  TranscriptLog log;
  std::vector<std::unique_ptr<Channel>> owned;
  std::vector<Channel*> coordinator_side(k);
  std::vector<GuestEndpoints> ep(k);
  for (size_t i = 0; i < k; ++i) {
    std::string g = "guest" + std::to_string(i);
    auto [c, e] = make_inproc_pair("coordinator->" + g, g + "->coordinator");
    coordinator_side[i] = c.get();
    ep[i].coordinator = e.get();
    owned.push_back(std::move(c));
    owned.push_back(std::move(e));
  }
  for (size_t i = 0; i + 1 < k; ++i) {
    std::string a = "guest" + std::to_string(i);
    std::string b = "guest" + std::to_string(i + 1);
    auto [out_end, in_end] = make_inproc_pair(a + "->" + b, b + "->" + a);
    ep[i].ring_out = out_end.get();
    ep[i + 1].ring_in = in_end.get();
    owned.push_back(std::move(out_end));
    owned.push_back(std::move(in_end));
  }
  ep[0].ring_in = ep[0].coordinator;
  ep[k - 1].ring_out = ep[k - 1].coordinator;
  for (auto& ch : owned) ch->attach_transcript(&log);

  HorizontalConfig cfg;
  cfg.params = params_of(o.hyper);
  cfg.key_bits = o.key_bits;
  cfg.seed = resolve_seed(o.seed_given, o.seed, 1);
  if (!o.session.empty()) cfg.session = o.session;

  std::vector<RuleSet> guest_sets(k);
  std::vector<std::exception_ptr> guest_err(k);
  std::vector<std::thread> threads;
  for (size_t i = 0; i < k; ++i) {
    threads.emplace_back([&, i] {
      try {
        guest_sets[i] = run_horizontal_guest(ep[i], parts[i], cfg.seed + 1 + i);
      } catch (...) {
        guest_err[i] = std::current_exception();
      }
    });
  }
  RuleSet fed;
  std::exception_ptr coord_err;
  try {
    fed = run_horizontal_coordinator(coordinator_side, cfg);
  } catch (...) {
    coord_err = std::current_exception();
  }
  for (std::thread& t : threads) t.join();
  if (coord_err) std::rethrow_exception(coord_err);
  for (const std::exception_ptr& err : guest_err) {
    if (err) std::rethrow_exception(err);
  }

  CandidateGrid grid = merge_candidate_grid({distinct_feature_values(full)});
  RuleSet central = learn_rule_set(full, cfg.params, &grid);

  print_rule_set(std::cout, "federated", fed);
  print_rule_set(std::cout, "centralized", central);
  dump_transcript(o.transcript, log);
  std::string fed_bytes = ruleset_to_json(fed);
  if (fed_bytes != ruleset_to_json(central)) {
    throw Error(Errc::ProtocolIntegrity,
                "federated and centralized rule sets differ");
  }
  for (size_t i = 0; i < k; ++i) {
    if (ruleset_to_json(guest_sets[i]) != fed_bytes) {
      throw Error(Errc::ProtocolIntegrity,
                  "guest " + std::to_string(i) +
                      " received a different rule set");
    }
  }
  std::cout << "equivalent: all parties and the centralized run match\n";
  return 0;
}

int run_simulate(const SimOpts& o) {
  if (o.mode == "vertical") return simulate_vertical(o);
  if (o.mode == "horizontal") return simulate_horizontal(o);
  throw Error(Errc::Usage, "--mode must be vertical or horizontal");
}

// ----------------------------------------------------------------- main

int fail_line(const std::string& code, std::string message) {
  std::string prefix = code + ": ";
  if (message.rfind(prefix, 0) == 0) message = message.substr(prefix.size());
  nlohmann::json j{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
  return code == "usage" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"F-score-driven rule sets for imbalanced data, centralized or federated"};
  app.require_subcommand(1);

  TrainOpts train_opts;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Learn a rule set from a labeled CSV");
  add_table_flags(train_cmd, train_opts.table, true);
  add_hyper_flags(train_cmd, train_opts.hyper);
  train_cmd->add_option("--out", train_opts.out, "Rule-set JSON output")
      ->capture_default_str();
  train_cmd->add_option("--report", train_opts.report, "Training report CSV")
      ->capture_default_str();

  EvaluateOpts eval_opts;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "Score a rule set against labeled data (report to stdout)");
  add_table_flags(eval_cmd, eval_opts.table, true);
  eval_cmd->add_option("--rules", eval_opts.rules, "Rule-set JSON")->required();

  PredictOpts predict_opts;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Emit one 0/1 line per row");
  add_table_flags(predict_cmd, predict_opts.table, true);
  predict_cmd->add_option("--rules", predict_opts.rules, "Rule-set JSON")
      ->required();

  GenDataOpts gen_opts;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-data", "Synthesize an imbalanced table with planted rules");
  gen_cmd->add_option("--spec", gen_opts.spec_path, "Generator spec JSON")
      ->required();
  gen_cmd->add_option("--out", gen_opts.out, "Output CSV")
      ->capture_default_str();
  gen_cmd->add_option("--truth", gen_opts.truth, "Planted rule-set JSON")
      ->capture_default_str();
  CLI::Option* gen_seed =
      gen_cmd->add_option("--seed", gen_opts.seed, "Overrides the spec's seed");

  FedOpts fed_opts;
  CLI::App* fed_cmd = app.add_subcommand(
      "fed-train", "Run one party of a federated training session");
  fed_cmd->add_option("--mode", fed_opts.mode, "vertical|horizontal")
      ->required();
  fed_cmd->add_option("--role", fed_opts.role,
                      "active|passive (vertical), guest|coordinator (horizontal)")
      ->required();
  fed_cmd->add_option("--listen", fed_opts.listen, "host:port to bind (0 = ephemeral)");
  fed_cmd->add_option("--connect", fed_opts.connect, "host:port to dial");
  fed_cmd->add_option("--data", fed_opts.table.data, "Input CSV (data-holding roles)");
  fed_cmd->add_option("--label-col", fed_opts.table.label_col,
                      "Label column (active and guest roles only)");
  fed_cmd->add_option("--id-col", fed_opts.table.id_col, "Instance id column");
  fed_cmd->add_option("--categorical", fed_opts.table.categorical,
                      "Force a column categorical");
  fed_cmd->add_option("--numeric", fed_opts.table.numeric,
                      "Force a column numeric");
  add_hyper_flags(fed_cmd, fed_opts.hyper);
  fed_cmd->add_option("--key-bits", fed_opts.key_bits, "Paillier modulus bits")
      ->capture_default_str();
  CLI::Option* fed_seed =
      fed_cmd->add_option("--seed", fed_opts.seed, "Randomness seed")
          ->capture_default_str();
  fed_cmd->add_option("--session", fed_opts.session, "Session identifier");
  fed_cmd->add_option("--out", fed_opts.out, "Rule-set JSON output");
  fed_cmd->add_option("--report", fed_opts.report, "Training report CSV");
  fed_cmd->add_option("--transcript", fed_opts.transcript,
                      "Write sent frames to a replay file");
  fed_cmd->add_option("--guests", fed_opts.guests,
                      "Guest count (coordinator role)");
  fed_cmd->add_option("--index", fed_opts.index,
                      "Ring position, 0-based (guest role)");
  fed_cmd->add_option("--ring-listen", fed_opts.ring_listen,
                      "host:port for the guest-to-guest link")
      ->capture_default_str();

  SimOpts sim_opts;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate",
      "Run all parties in-process and check against centralized training");
  sim_cmd->add_option("--mode", sim_opts.mode, "vertical|horizontal")
      ->required();
  sim_cmd->add_option("--parts", sim_opts.parts, "Party count")
      ->capture_default_str();
  add_table_flags(sim_cmd, sim_opts.table, true);
  add_hyper_flags(sim_cmd, sim_opts.hyper);
  sim_cmd->add_option("--key-bits", sim_opts.key_bits, "Paillier modulus bits")
      ->capture_default_str();
  CLI::Option* sim_seed =
      sim_cmd->add_option("--seed", sim_opts.seed, "Randomness seed")
          ->capture_default_str();
  sim_cmd->add_option("--session", sim_opts.session, "Session identifier");
  sim_cmd->add_option("--transcript", sim_opts.transcript,
                      "Write sent frames to a replay file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_line("usage", e.what());
  }

  gen_opts.seed_given = gen_seed->count() > 0;
  fed_opts.seed_given = fed_seed->count() > 0;
  sim_opts.seed_given = sim_seed->count() > 0;

  try {
    if (train_cmd->parsed()) return run_train(train_opts);
    if (eval_cmd->parsed()) return run_evaluate(eval_opts);
    if (predict_cmd->parsed()) return run_predict(predict_opts);
    if (gen_cmd->parsed()) return run_gen_data(gen_opts);
    if (fed_cmd->parsed()) return run_fed_train(fed_opts);
    if (sim_cmd->parsed()) return run_simulate(sim_opts);
    return fail_line("usage", "no subcommand given");
  } catch (const Error& e) {
    return fail_line(errc_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail_line("internal", e.what());
  }
}
