// Copyright 2026 The gotext Authors
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

#include "gotext/rl/models.h"

#include <algorithm>

#include "gotext/engine/rng.h"
#include "gotext/nn/checkpoint.h"
#include "gotext/nn/gradcheck.h"

namespace gotext::rl {

nlohmann::json RlConfigToJson(const RlConfig& c) {
  return {{"emb_dim", c.emb_dim},
          {"hidden", c.hidden},
          {"max_input_tokens", c.max_input_tokens},
          {"freeze_embeddings", c.freeze_embeddings},
          {"seed", c.seed}};
}

RlConfig RlConfigFromJson(const nlohmann::json& j) {
  RlConfig c;
  c.emb_dim = j.value("emb_dim", c.emb_dim);
  c.hidden = j.value("hidden", c.hidden);
  c.max_input_tokens = j.value("max_input_tokens", c.max_input_tokens);
  c.freeze_embeddings = j.value("freeze_embeddings", c.freeze_embeddings);
  c.seed = j.value("seed", c.seed);
  return c;
}

int ArgMax(const Vector& v) {
  int best = 0;
  for (int k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

// ---- encoder ---------------------------------------------------------------

ObservationEncoder::ObservationEncoder(nn::ParameterStore& store, int vocab_size, int emb_dim, int hidden) {
  store.Add("embedding", vocab_size, emb_dim);
  nn::AddLstm(store, "encoder", emb_dim, hidden);
  Bind(store);
}

void ObservationEncoder::Bind(nn::ParameterStore& store) {
  embedding = &store.Get("embedding");
  lstm = nn::FindLstm(store, "encoder");
}

Vector ObservationEncoder::Forward(const std::vector<int>& raw, Trace* trace) const {
  const std::vector<int> ids = raw.empty() ? std::vector<int>{nn::kPadId} : raw;
  const int h = lstm.hidden;
  Vector hs = Vector::Zero(h), cs = Vector::Zero(h), sum = Vector::Zero(h);
  if (trace) {
    trace->ids = ids;
    trace->caches.assign(ids.size(), {});
    trace->rows = static_cast<int>(ids.size());
  }
  for (std::size_t t = 0; t < ids.size(); ++t) {
    nn::LstmState st = nn::LstmStep(lstm, nn::EmbeddingRow(*embedding, ids[t]), hs, cs,
                                    trace ? &trace->caches[t] : nullptr);
    hs = std::move(st.h);
    cs = std::move(st.c);
    sum += hs;
  }
  return sum / static_cast<double>(ids.size());
}

void ObservationEncoder::Backward(const Trace& trace, const Vector& dpooled) const {
  const int h = lstm.hidden;
  const Vector drow = dpooled / static_cast<double>(trace.rows);
  Vector dh = Vector::Zero(h), dc = Vector::Zero(h);
  for (std::size_t t = trace.ids.size(); t-- > 0;) {
    nn::LstmStepGrads g = nn::LstmStepBackward(lstm, trace.caches[t], drow + dh, dc);
    nn::EmbeddingBackward(*embedding, trace.ids[t], g.dx);
    dh = std::move(g.dh_prev);
    dc = std::move(g.dc_prev);
  }
}

namespace {

void InitCommon(nn::ParameterStore& store, const nn::Vocab& vocab, const RlConfig& config,
                const WordVectors* pretrained, ObservationEncoder& encoder, SplitMix64& rng) {
  nn::EmbeddingInit init = nn::InitEmbeddings(vocab, config.emb_dim, pretrained,
                                              DeriveSeed(config.seed, "embedding"));
  encoder.embedding->value = std::move(init.table);
  nn::InitLstm(encoder.lstm, rng);
  (void)store;
}

std::vector<int> EncodeObs(const nn::Vocab& vocab, const Observation& obs, int max_tokens) {
  return vocab.Encode(nn::AssembleInput(obs, max_tokens));
}

}  // namespace

// ---- slot model -------------------------------------------------------------

SlotQModel::SlotQModel(nn::Vocab vocab, SlotVocab slots, RlConfig config, const WordVectors* pretrained)
    : vocab_(std::move(vocab)),
      slots_(std::move(slots)),
      config_(config),
      store_(std::make_unique<nn::ParameterStore>()) {
  encoder_ = ObservationEncoder(*store_, static_cast<int>(vocab_.size()), config_.emb_dim, config_.hidden);
  for (int s = 0; s < kNumSlots; ++s) {
    nn::AddLinear(*store_, "head." + std::string(kSlotNames[s]), config_.hidden, slots_.size(s));
  }
  Bind();
  SplitMix64 rng(DeriveSeed(config_.seed, "slot-q"));
  InitCommon(*store_, vocab_, config_, pretrained, encoder_, rng);
  for (auto& head : heads_) nn::InitLinear(head, rng);
}

void SlotQModel::Bind() {
  encoder_.Bind(*store_);
  encoder_.embedding->trainable = !config_.freeze_embeddings;
  for (int s = 0; s < kNumSlots; ++s) heads_[s] = nn::FindLinear(*store_, "head." + std::string(kSlotNames[s]));
}

SlotQModel::SlotValues SlotQModel::QValues(const std::vector<int>& ids) const {
  const Vector h = encoder_.Forward(ids);
  SlotValues q;
  for (int s = 0; s < kNumSlots; ++s) q[s] = nn::LinearForward(heads_[s], h);
  return q;
}

SlotQModel::SlotValues SlotQModel::Backprop(const std::vector<int>& ids,
                                            const std::function<SlotValues(const SlotValues&)>& dq_fn) {
  ObservationEncoder::Trace trace;
  const Vector h = encoder_.Forward(ids, &trace);
  SlotValues q;
  for (int s = 0; s < kNumSlots; ++s) q[s] = nn::LinearForward(heads_[s], h);
  const SlotValues dq = dq_fn(q);
  Vector dh = Vector::Zero(h.size());
  for (int s = 0; s < kNumSlots; ++s) {
    if (dq[s].size() == 0) continue;
    dh += nn::LinearBackward(heads_[s], h, dq[s]);
  }
  encoder_.Backward(trace, dh);
  return q;
}

std::vector<int> SlotQModel::EncodeObservation(const Observation& obs) const {
  return EncodeObs(vocab_, obs, config_.max_input_tokens);
}

std::unique_ptr<SlotQModel> SlotQModel::Clone() const {
  auto copy = std::make_unique<SlotQModel>(vocab_, slots_, config_);
  copy->CopyValuesFrom(*this);
  return copy;
}

void SlotQModel::Save(const std::filesystem::path& path, nlohmann::json extra) const {
  extra["model"] = "slot-q";
  extra["config"] = RlConfigToJson(config_);
  extra["vocab"] = vocab_.ToJson();
  extra["vocab_hash"] = vocab_.HashHex();
  extra["slots"] = slots_.ToJson();
  nn::SaveCheckpoint(path, *store_, std::move(extra));
}

SlotQModel SlotQModel::Load(const std::filesystem::path& path) {
  const nlohmann::json m = nn::LoadManifest(path);
  if (m.value("model", "") != "slot-q") throw nn::CheckpointError("not a slot-q checkpoint");
  nn::Vocab vocab = nn::Vocab::FromJson(m.at("vocab"));
  if (vocab.HashHex() != m.value("vocab_hash", "")) throw nn::CheckpointError("vocabulary hash mismatch");
  SlotQModel model(std::move(vocab), SlotVocab::FromJson(m.at("slots")), RlConfigFromJson(m.at("config")));
  nn::LoadCheckpoint(path, *model.store_);
  return model;
}

// ---- DRRN -------------------------------------------------------------------

DrrnModel::DrrnModel(nn::Vocab vocab, RlConfig config, const WordVectors* pretrained)
    : vocab_(std::move(vocab)), config_(config), store_(std::make_unique<nn::ParameterStore>()) {
  if (config_.emb_dim != config_.hidden) {
    throw nn::ShapeMismatch("drrn needs emb_dim == hidden for the dot product");
  }
  encoder_ = ObservationEncoder(*store_, static_cast<int>(vocab_.size()), config_.emb_dim, config_.hidden);
  Bind();
  SplitMix64 rng(DeriveSeed(config_.seed, "drrn"));
  InitCommon(*store_, vocab_, config_, pretrained, encoder_, rng);
}

void DrrnModel::Bind() {
  encoder_.Bind(*store_);
  encoder_.embedding->trainable = !config_.freeze_embeddings;
}

Vector DrrnModel::Scores(const std::vector<int>& ids, const std::vector<std::vector<int>>& actions) const {
  if (actions.empty()) throw EmptyAdmissibleSet();
  const Vector h = encoder_.Forward(ids);
  Vector scores(static_cast<Eigen::Index>(actions.size()));
  for (std::size_t i = 0; i < actions.size(); ++i) {
    Vector c = Vector::Zero(h.size());
    for (int id : actions[i]) c += nn::EmbeddingRow(*encoder_.embedding, id);
    scores[static_cast<Eigen::Index>(i)] = h.dot(c);
  }
  return scores;
}

Vector DrrnModel::Backprop(const std::vector<int>& ids, const std::vector<std::vector<int>>& actions,
                           const std::function<Vector(const Vector&)>& dscores_fn) {
  if (actions.empty()) throw EmptyAdmissibleSet();
  ObservationEncoder::Trace trace;
  const Vector h = encoder_.Forward(ids, &trace);
  std::vector<Vector> cs;
  Vector scores(static_cast<Eigen::Index>(actions.size()));
  for (std::size_t i = 0; i < actions.size(); ++i) {
    Vector c = Vector::Zero(h.size());
    for (int id : actions[i]) c += nn::EmbeddingRow(*encoder_.embedding, id);
    scores[static_cast<Eigen::Index>(i)] = h.dot(c);
    cs.push_back(std::move(c));
  }
  const Vector ds = dscores_fn(scores);
  Vector dh = Vector::Zero(h.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const double d = ds[static_cast<Eigen::Index>(i)];
    if (d == 0) continue;
    dh += d * cs[i];
    for (int id : actions[i]) nn::EmbeddingBackward(*encoder_.embedding, id, d * h);
  }
  encoder_.Backward(trace, dh);
  return scores;
}

std::vector<int> DrrnModel::EncodeObservation(const Observation& obs) const {
  return EncodeObs(vocab_, obs, config_.max_input_tokens);
}

std::unique_ptr<DrrnModel> DrrnModel::Clone() const {
  auto copy = std::make_unique<DrrnModel>(vocab_, config_);
  copy->CopyValuesFrom(*this);
  return copy;
}

void DrrnModel::Save(const std::filesystem::path& path, nlohmann::json extra) const {
  extra["model"] = "drrn";
  extra["config"] = RlConfigToJson(config_);
  extra["vocab"] = vocab_.ToJson();
  extra["vocab_hash"] = vocab_.HashHex();
  nn::SaveCheckpoint(path, *store_, std::move(extra));
}

DrrnModel DrrnModel::Load(const std::filesystem::path& path) {
  const nlohmann::json m = nn::LoadManifest(path);
  if (m.value("model", "") != "drrn") throw nn::CheckpointError("not a drrn checkpoint");
  nn::Vocab vocab = nn::Vocab::FromJson(m.at("vocab"));
  if (vocab.HashHex() != m.value("vocab_hash", "")) throw nn::CheckpointError("vocabulary hash mismatch");
  DrrnModel model(std::move(vocab), RlConfigFromJson(m.at("config")));
  nn::LoadCheckpoint(path, *model.store_);
  return model;
}

// ---- gradient checks -----------------------------------------------------------

namespace {

nn::Vocab RandomVocab(SplitMix64& rng) {
  std::set<std::string> words;
  const int n = 2 + rng.BelowInt(5);
  for (int k = 0; k < n; ++k) words.insert("w" + std::to_string(k));
  return nn::Vocab::Build(words);
}

std::vector<int> RandomIds(SplitMix64& rng, int vocab, int max_len) {
  std::vector<int> ids;
  const int len = 1 + rng.BelowInt(max_len);
  for (int k = 0; k < len; ++k) ids.push_back(rng.BelowInt(vocab));
  return ids;
}

}  // namespace

double SlotModelGradientCheck(int draws, std::uint64_t seed) {
  SplitMix64 rng(DeriveSeed(seed, "slot-gradcheck"));
  double worst = 0;
  for (int d = 0; d < draws; ++d) {
    nn::Vocab vocab = RandomVocab(rng);
    std::array<std::set<std::string>, kNumSlots> words;
    for (int s = 0; s < kNumSlots; ++s) {
      const int n = rng.BelowInt(3);
      for (int k = 0; k < n; ++k) words[s].insert("s" + std::to_string(k));
    }
    RlConfig cfg;
    cfg.emb_dim = 1 + rng.BelowInt(3);
    cfg.hidden = 1 + rng.BelowInt(3);
    cfg.seed = rng.Next();
    SlotQModel model(vocab, SlotVocab::FromWords(words), cfg);
    for (int s = 0; s < kNumSlots; ++s) nn::FillUniform(model.params().Get("head." + std::string(kSlotNames[s]) + ".b").value, 0.5, rng);
    const std::vector<int> ids = RandomIds(rng, static_cast<int>(vocab.size()), 4);
    SlotQModel::SlotValues r;
    for (int s = 0; s < kNumSlots; ++s) {
      r[s].resize(model.slots().size(s));
      for (int k = 0; k < r[s].size(); ++k) r[s][k] = rng.Uniform(-1, 1);
    }
    // Squared TD-style loss on one slot plus a linear term on all.
    const int slot = rng.BelowInt(kNumSlots);
    const int word = rng.BelowInt(model.slots().size(slot));
    const double target = rng.Uniform(-1, 1);
    auto loss_of = [&](const SlotQModel::SlotValues& q) {
      double l = 0.5 * (q[slot][word] - target) * (q[slot][word] - target);
      for (int s = 0; s < kNumSlots; ++s) l += r[s].dot(q[s]);
      return l;
    };
    worst = std::max(worst, nn::CheckGradients(
                                model.params(), [&] { return loss_of(model.QValues(ids)); },
                                [&] {
                                  model.Backprop(ids, [&](const SlotQModel::SlotValues& q) {
                                    SlotQModel::SlotValues dq = r;
                                    dq[slot][word] += q[slot][word] - target;
                                    return dq;
                                  });
                                }));
  }
  return worst;
}

double DrrnGradientCheck(int draws, std::uint64_t seed) {
  SplitMix64 rng(DeriveSeed(seed, "drrn-gradcheck"));
  double worst = 0;
  for (int d = 0; d < draws; ++d) {
    nn::Vocab vocab = RandomVocab(rng);
    RlConfig cfg;
    cfg.emb_dim = cfg.hidden = 1 + rng.BelowInt(3);
    cfg.seed = rng.Next();
    DrrnModel model(vocab, cfg);
    const int v = static_cast<int>(vocab.size());
    const std::vector<int> ids = RandomIds(rng, v, 4);
    std::vector<std::vector<int>> actions;
    const int n = 1 + rng.BelowInt(4);
    for (int k = 0; k < n; ++k) actions.push_back(RandomIds(rng, v, 3));
    Vector r(n);
    for (int k = 0; k < n; ++k) r[k] = rng.Uniform(-1, 1);
    const int chosen = rng.BelowInt(n);
    const double target = rng.Uniform(-1, 1);
    auto loss_of = [&](const Vector& s) { return r.dot(s) + 0.5 * (s[chosen] - target) * (s[chosen] - target); };
    worst = std::max(worst, nn::CheckGradients(
                                model.params(), [&] { return loss_of(model.Scores(ids, actions)); },
                                [&] {
                                  model.Backprop(ids, actions, [&](const Vector& s) {
                                    Vector ds = r;
                                    ds[chosen] += s[chosen] - target;
                                    return ds;
                                  });
                                }));
  }
  return worst;
}

}  // namespace gotext::rl
