// Copyright 2026 The nashplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "nashplay/snapshot.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nashplay {
namespace {

constexpr char kMagic[8] = {'N', 'A', 'S', 'H', 'S', 'N', 'A', 'P'};

class Writer {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void I32(int v) { U32(static_cast<std::uint32_t>(v)); }
  void I64(long long v) { U64(static_cast<std::uint64_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Bytes(std::string_view s) { out_.append(s); }
  void String(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    Bytes(s);
  }
  void Doubles(const std::vector<double>& v) {
    U64(v.size());
    for (double x : v) F64(x);
  }
  void Ints(const std::vector<int>& v) {
    U64(v.size());
    for (int x : v) I32(x);
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t U8() {
    Need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t U32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(U8()) << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(U8()) << (8 * i);
    return v;
  }
  int I32() { return static_cast<int>(U32()); }
  long long I64() { return static_cast<long long>(U64()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string_view Bytes(std::size_t n) {
    Need(n);
    auto out = in_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::string String() { return std::string(Bytes(U32())); }
  std::size_t Count(std::size_t element_size) {
    const std::uint64_t n = U64();
    if (n > (in_.size() - pos_) / element_size) Fail();
    return static_cast<std::size_t>(n);
  }
  std::vector<double> Doubles() {
    std::vector<double> v(Count(8));
    for (double& x : v) x = F64();
    return v;
  }
  std::vector<int> Ints() {
    std::vector<int> v(Count(4));
    for (int& x : v) x = I32();
    return v;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void Need(std::size_t n) {
    if (in_.size() - pos_ < n) Fail();
  }
  [[noreturn]] void Fail() {
    throw std::runtime_error("snapshot: truncated or malformed input");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

void WriteHeader(Writer& w, const SnapshotHeader& header) {
  w.Bytes({kMagic, sizeof(kMagic)});
  w.U32(kSnapshotFormatVersion);
  w.U8(header.algorithm == Algorithm::kNashQ ? 0 : 1);
  w.U64(header.config_hash);
  w.String(header.version);
}

void WriteGame(Writer& w, const MarkovGame& game) {
  w.I32(game.horizon());
  w.I32(game.num_states());
  w.I32(game.num_max_actions());
  w.I32(game.num_min_actions());
  w.I32(game.initial_state());
  w.Doubles(game.transitions());
  w.Doubles(game.rewards());
}

MarkovGame ReadGame(Reader& r) {
  const int H = r.I32(), S = r.I32(), A = r.I32(), B = r.I32(), s1 = r.I32();
  auto transitions = r.Doubles();
  auto rewards = r.Doubles();
  return MarkovGame(H, S, A, B, std::move(transitions), std::move(rewards),
                    s1);
}

void WriteHyperparams(Writer& w, const Hyperparams& hp) {
  w.I32(hp.horizon);
  w.I32(hp.num_states);
  w.I32(hp.num_max_actions);
  w.I32(hp.num_min_actions);
  w.I32(hp.episodes);
  w.F64(hp.c);
  w.F64(hp.p);
  w.F64(hp.iota);
}

Hyperparams ReadHyperparams(Reader& r) {
  Hyperparams hp;
  hp.horizon = r.I32();
  hp.num_states = r.I32();
  hp.num_max_actions = r.I32();
  hp.num_min_actions = r.I32();
  hp.episodes = r.I32();
  hp.c = r.F64();
  hp.p = r.F64();
  hp.iota = r.F64();
  return hp;
}

void WriteVisits(Writer& w, const VisitLog& log) {
  w.U64(log.num_keys());
  for (std::size_t key = 0; key < log.num_keys(); ++key) {
    w.Ints(log.episodes(key));
  }
}

VisitLog ReadVisits(Reader& r) {
  VisitLog log(r.Count(8));
  for (std::size_t key = 0; key < log.num_keys(); ++key) {
    for (int k : r.Ints()) log.Record(key, k);
  }
  return log;
}

void WritePolicyLog(Writer& w, const PolicyLog& log) {
  w.I32(log.horizon());
  w.I32(log.num_states());
  w.Doubles(log.initial_row());
  for (int h = 0; h < log.horizon(); ++h) {
    for (int s = 0; s < log.num_states(); ++s) {
      const auto& changes = log.changes(h, s);
      w.U64(changes.size());
      for (const auto& change : changes) {
        w.I32(change.episode);
        w.Doubles(change.row);
      }
    }
  }
}

PolicyLog ReadPolicyLog(Reader& r) {
  const int H = r.I32();
  const int S = r.I32();
  if (H < 0 || S < 0) throw std::runtime_error("snapshot: bad policy log");
  PolicyLog log(H, S, r.Doubles());
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      const std::size_t n = r.Count(12);
      for (std::size_t i = 0; i < n; ++i) {
        const int k = r.I32();
        log.Record(h, s, k, r.Doubles());
      }
    }
  }
  return log;
}

void WriteTrajectories(Writer& w, const std::vector<Trajectory>& list) {
  w.U64(list.size());
  for (const auto& trajectory : list) {
    w.U64(trajectory.steps.size());
    for (const Step& step : trajectory.steps) {
      w.I32(step.state);
      w.I32(step.max_action);
      w.I32(step.min_action);
      w.F64(step.reward);
    }
    w.I32(trajectory.terminal_state);
  }
}

std::vector<Trajectory> ReadTrajectories(Reader& r) {
  std::vector<Trajectory> list(r.Count(12));
  for (auto& trajectory : list) {
    trajectory.steps.resize(r.Count(20));
    for (Step& step : trajectory.steps) {
      step.state = r.I32();
      step.max_action = r.I32();
      step.min_action = r.I32();
      step.reward = r.F64();
    }
    trajectory.terminal_state = r.I32();
  }
  return list;
}

}  // namespace

const char* AlgorithmName(Algorithm algorithm) {
  return algorithm == Algorithm::kNashQ ? "nash_q" : "nash_v";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "nash_q") return Algorithm::kNashQ;
  if (name == "nash_v") return Algorithm::kNashV;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

std::string SerializeSnapshot(const SnapshotHeader& header,
                              const NashQHistory& history) {
  if (header.algorithm != Algorithm::kNashQ) {
    throw std::invalid_argument("snapshot header is not nash_q");
  }
  Writer w;
  WriteHeader(w, header);
  WriteGame(w, history.game);
  WriteHyperparams(w, history.hp);
  w.I32(history.episodes);
  w.Doubles(history.upper_trace);
  w.Doubles(history.lower_trace);
  WriteVisits(w, history.visits);
  WritePolicyLog(w, history.joint_policy);
  WritePolicyLog(w, history.max_marginal);
  WritePolicyLog(w, history.min_marginal);
  WriteTrajectories(w, history.trajectories);
  return w.Take();
}

std::string SerializeSnapshot(const SnapshotHeader& header,
                              const NashVHistory& history) {
  if (header.algorithm != Algorithm::kNashV) {
    throw std::invalid_argument("snapshot header is not nash_v");
  }
  Writer w;
  WriteHeader(w, header);
  WriteGame(w, history.game);
  WriteHyperparams(w, history.hp);
  w.I32(history.episodes);
  w.Doubles(history.upper_trace);
  w.Doubles(history.lower_trace);
  WriteVisits(w, history.visits);
  WritePolicyLog(w, history.max_policy);
  WritePolicyLog(w, history.min_policy);
  w.I64(history.upper_clip_events);
  w.I64(history.lower_clip_events);
  WriteTrajectories(w, history.trajectories);
  return w.Take();
}

namespace {

Snapshot Deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.Bytes(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw std::runtime_error("snapshot: bad magic");
  }
  const std::uint32_t format = r.U32();
  if (format != kSnapshotFormatVersion) {
    throw std::runtime_error("snapshot: unsupported format version " +
                             std::to_string(format));
  }
  Snapshot snapshot;
  const std::uint8_t tag = r.U8();
  if (tag > 1) throw std::runtime_error("snapshot: unknown algorithm tag");
  snapshot.header.algorithm = tag == 0 ? Algorithm::kNashQ : Algorithm::kNashV;
  snapshot.header.config_hash = r.U64();
  snapshot.header.version = r.String();
  MarkovGame game = ReadGame(r);
  const Hyperparams hp = ReadHyperparams(r);
  if (tag == 0) {
    NashQHistory& h = snapshot.q.emplace(std::move(game), hp);
    h.episodes = r.I32();
    h.upper_trace = r.Doubles();
    h.lower_trace = r.Doubles();
    h.visits = ReadVisits(r);
    h.joint_policy = ReadPolicyLog(r);
    h.max_marginal = ReadPolicyLog(r);
    h.min_marginal = ReadPolicyLog(r);
    h.trajectories = ReadTrajectories(r);
  } else {
    NashVHistory& h = snapshot.v.emplace(std::move(game), hp);
    h.episodes = r.I32();
    h.upper_trace = r.Doubles();
    h.lower_trace = r.Doubles();
    h.visits = ReadVisits(r);
    h.max_policy = ReadPolicyLog(r);
    h.min_policy = ReadPolicyLog(r);
    h.upper_clip_events = r.I64();
    h.lower_clip_events = r.I64();
    h.trajectories = ReadTrajectories(r);
  }
  if (!r.done()) throw std::runtime_error("snapshot: trailing bytes");
  return snapshot;
}

}  // namespace

Snapshot DeserializeSnapshot(std::string_view bytes) {
  try {
    return Deserialize(bytes);
  } catch (const std::logic_error& e) {
    // Inconsistent sizes or logs surface from the constructors.
    throw std::runtime_error(std::string("snapshot: ") + e.what());
  }
}

void WriteSnapshot(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

Snapshot ReadSnapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return DeserializeSnapshot(buffer.str());
}

}  // namespace nashplay
