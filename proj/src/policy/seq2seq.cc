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

#include "gotext/policy/seq2seq.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "gotext/engine/rng.h"
#include "gotext/nn/checkpoint.h"
#include "gotext/nn/gradcheck.h"

namespace gotext::policy {

using nn::LstmCache;
using nn::LstmState;
using nn::Vocab;

nlohmann::json PolicyConfigToJson(const PolicyConfig& c) {
  return {{"emb_dim", c.emb_dim},
          {"hidden", c.hidden},
          {"max_decode_len", c.max_decode_len},
          {"max_input_tokens", c.max_input_tokens},
          {"freeze_embeddings", c.freeze_embeddings},
          {"seed", c.seed}};
}

PolicyConfig PolicyConfigFromJson(const nlohmann::json& j) {
  PolicyConfig c;
  c.emb_dim = j.value("emb_dim", c.emb_dim);
  c.hidden = j.value("hidden", c.hidden);
  c.max_decode_len = j.value("max_decode_len", c.max_decode_len);
  c.max_input_tokens = j.value("max_input_tokens", c.max_input_tokens);
  c.freeze_embeddings = j.value("freeze_embeddings", c.freeze_embeddings);
  c.seed = j.value("seed", c.seed);
  return c;
}

ImitationDataset BuildDataset(const std::vector<Trajectory>& trajectories, const Vocab& vocab,
                              int max_input_tokens) {
  ImitationDataset data;
  for (const Trajectory& traj : trajectories) {
    for (const TrajectoryStep& step : traj.steps) {
      Example ex;
      ex.input = vocab.Encode(AssembleInput(step.observation, max_input_tokens));
      for (const std::string& t : step.action) {
        if (!vocab.Contains(t)) throw OutOfVocabularyTarget("action token '" + t + "' not in vocabulary");
        ex.target.push_back(vocab.Id(t));
      }
      data.push_back(std::move(ex));
    }
  }
  return data;
}

PolicyModel::PolicyModel(Vocab vocab, PolicyConfig config, const WordVectors* pretrained)
    : vocab_(std::move(vocab)), config_(config), store_(std::make_unique<nn::ParameterStore>()) {
  const int v = static_cast<int>(vocab_.size());
  const int e = config_.emb_dim, h = config_.hidden;
  if (e <= 0 || h <= 0) throw nn::ShapeMismatch("policy sizes must be positive");
  store_->Add("embedding", v, e);
  nn::AddLstm(*store_, "encoder", e, h);
  nn::AddLstm(*store_, "decoder", e, h);
  nn::AddLinear(*store_, "head", 2 * h, v);
  Bind();

  nn::EmbeddingInit init = nn::InitEmbeddings(vocab_, e, pretrained, DeriveSeed(config_.seed, "embedding"));
  embedding_->value = std::move(init.table);
  pretrained_rows_ = init.pretrained;
  random_rows_ = init.random;
  SplitMix64 rng(DeriveSeed(config_.seed, "policy"));
  nn::InitLstm(encoder_, rng);
  nn::InitLstm(decoder_, rng);
  nn::InitLinear(head_, rng);
}

void PolicyModel::Bind() {
  embedding_ = &store_->Get("embedding");
  embedding_->trainable = !config_.freeze_embeddings;
  encoder_ = nn::FindLstm(*store_, "encoder");
  decoder_ = nn::FindLstm(*store_, "decoder");
  head_ = nn::FindLinear(*store_, "head");
}

PolicyModel::Encoding PolicyModel::Encode(const std::vector<int>& input) const {
  const std::vector<int> ids = input.empty() ? std::vector<int>{nn::kPadId} : input;
  const int h = config_.hidden;
  Encoding enc;
  enc.H.resize(static_cast<Eigen::Index>(ids.size()), h);
  Vector hs = Vector::Zero(h), cs = Vector::Zero(h);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    LstmState st = nn::LstmStep(encoder_, nn::EmbeddingRow(*embedding_, ids[t]), hs, cs);
    hs = std::move(st.h);
    cs = std::move(st.c);
    enc.H.row(static_cast<Eigen::Index>(t)) = hs.transpose();
  }
  enc.h_last = std::move(hs);
  enc.c_last = std::move(cs);
  return enc;
}

void PolicyModel::CheckTarget(const std::vector<int>& target) const {
  if (static_cast<int>(target.size()) > config_.max_decode_len) {
    throw OutOfVocabularyTarget("target longer than the decode limit");
  }
  for (int id : target) {
    if (id < 0 || id >= static_cast<int>(vocab_.size()) || id == nn::kUnkId) {
      throw OutOfVocabularyTarget("target token id " + std::to_string(id) + " not in vocabulary");
    }
  }
}

double PolicyModel::Run(const std::vector<int>& input_raw, const std::vector<int>& target,
                        double scale, bool backward) const {
  CheckTarget(target);
  const std::vector<int> input = input_raw.empty() ? std::vector<int>{nn::kPadId} : input_raw;
  const int h = config_.hidden;
  const std::size_t len = input.size();

  std::vector<LstmCache> enc_cache(backward ? len : 0);
  Matrix H(static_cast<Eigen::Index>(len), h);
  Vector hs = Vector::Zero(h), cs = Vector::Zero(h);
  for (std::size_t t = 0; t < len; ++t) {
    LstmState st = nn::LstmStep(encoder_, nn::EmbeddingRow(*embedding_, input[t]), hs, cs,
                                backward ? &enc_cache[t] : nullptr);
    hs = std::move(st.h);
    cs = std::move(st.c);
    H.row(static_cast<Eigen::Index>(t)) = hs.transpose();
  }

  const std::size_t m = target.size() + 1;
  std::vector<LstmCache> dec_cache(backward ? m : 0);
  std::vector<nn::AttentionCache> att_cache(m);
  std::vector<Vector> zs(m), dlogits(m), dec_h(m);
  double loss = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const int prev = j == 0 ? nn::kSosId : target[j - 1];
    const int gold = j < target.size() ? target[j] : nn::kEosId;
    LstmState st = nn::LstmStep(decoder_, nn::EmbeddingRow(*embedding_, prev), hs, cs,
                                backward ? &dec_cache[j] : nullptr);
    hs = std::move(st.h);
    cs = std::move(st.c);
    const Vector ctx = nn::Attention(hs, H, &att_cache[j]);
    zs[j].resize(2 * h);
    zs[j] << hs, ctx;
    dec_h[j] = hs;
    loss += nn::SoftmaxNll(nn::LinearForward(head_, zs[j]), gold, backward ? &dlogits[j] : nullptr);
  }
  if (!backward) return loss;

  nn::Parameter& emb = *embedding_;
  Matrix dH = Matrix::Zero(H.rows(), H.cols());
  Vector dh_next = Vector::Zero(h), dc_next = Vector::Zero(h);
  for (std::size_t jj = m; jj-- > 0;) {
    const Vector dz = nn::LinearBackward(head_, zs[jj], scale * dlogits[jj]);
    Vector dh = dz.head(h) + dh_next;
    nn::AttentionBackward(dec_h[jj], H, att_cache[jj], dz.tail(h), dh, dH);
    nn::LstmStepGrads g = nn::LstmStepBackward(decoder_, dec_cache[jj], dh, dc_next);
    nn::EmbeddingBackward(emb, jj == 0 ? nn::kSosId : target[jj - 1], g.dx);
    dh_next = std::move(g.dh_prev);
    dc_next = std::move(g.dc_prev);
  }
  for (std::size_t t = len; t-- > 0;) {
    const Vector dh = dH.row(static_cast<Eigen::Index>(t)).transpose() + dh_next;
    nn::LstmStepGrads g = nn::LstmStepBackward(encoder_, enc_cache[t], dh, dc_next);
    nn::EmbeddingBackward(emb, input[t], g.dx);
    dh_next = std::move(g.dh_prev);
    dc_next = std::move(g.dc_prev);
  }
  return loss;
}

double PolicyModel::TeacherForcedLoss(const std::vector<int>& input, const std::vector<int>& target) const {
  return Run(input, target, 1.0, false);
}

double PolicyModel::AccumulateGradients(const std::vector<int>& input, const std::vector<int>& target,
                                        double scale) {
  return Run(input, target, scale, true);
}

DecodeResult PolicyModel::DecodeGreedy(const std::vector<int>& input) const {
  Encoding enc = Encode(input);
  Vector hs = enc.h_last, cs = enc.c_last;
  const int h = config_.hidden;
  DecodeResult out;
  int prev = nn::kSosId;
  Vector z(2 * h);
  for (int j = 0; j < config_.max_decode_len; ++j) {
    LstmState st = nn::LstmStep(decoder_, nn::EmbeddingRow(*embedding_, prev), hs, cs);
    hs = std::move(st.h);
    cs = std::move(st.c);
    z << hs, nn::Attention(hs, enc.H);
    const Vector logits = nn::LinearForward(head_, z);
    int best = 0;
    for (int k = 1; k < logits.size(); ++k) {
      if (logits[k] > logits[best]) best = k;
    }
    if (best == nn::kEosId) break;
    out.ids.push_back(best);
    if (!Vocab::IsReserved(best)) out.action.push_back(vocab_.Token(best));
    prev = best;
  }
  out.empty = out.action.empty();
  return out;
}

std::vector<int> PolicyModel::EncodeObservation(const Observation& obs) const {
  return vocab_.Encode(AssembleInput(obs, config_.max_input_tokens));
}

Tokens PolicyModel::Act(const Observation& obs) const {
  DecodeResult r = DecodeGreedy(EncodeObservation(obs));
  if (r.empty) return {"look"};
  return r.action;
}

void PolicyModel::Save(const std::filesystem::path& path, nlohmann::json extra) const {
  extra["model"] = "seq2seq";
  extra["config"] = PolicyConfigToJson(config_);
  extra["vocab"] = vocab_.ToJson();
  extra["vocab_hash"] = vocab_.HashHex();
  extra["embedding_rows"] = {{"pretrained", pretrained_rows_}, {"random", random_rows_}};
  nn::SaveCheckpoint(path, *store_, std::move(extra));
}

PolicyModel PolicyModel::Load(const std::filesystem::path& path) {
  const nlohmann::json manifest = nn::LoadManifest(path);
  if (manifest.value("model", "") != "seq2seq") throw nn::CheckpointError("not a seq2seq checkpoint");
  Vocab vocab = Vocab::FromJson(manifest.at("vocab"));
  if (vocab.HashHex() != manifest.value("vocab_hash", "")) throw nn::CheckpointError("vocabulary hash mismatch");
  PolicyModel model(std::move(vocab), PolicyConfigFromJson(manifest.at("config")));
  nn::LoadCheckpoint(path, *model.store_);
  if (manifest.contains("embedding_rows")) {
    model.pretrained_rows_ = manifest["embedding_rows"].value("pretrained", std::size_t{0});
    model.random_rows_ = manifest["embedding_rows"].value("random", std::size_t{0});
  }
  return model;
}

nlohmann::json TrainConfigToJson(const TrainConfig& c) {
  return {{"epochs", c.epochs},           {"batch_size", c.batch_size},
          {"adam", nn::AdamConfigToJson(c.adam)}, {"seed", c.seed},
          {"target_loss", c.target_loss}, {"patience", c.patience}};
}

double MeanLoss(const PolicyModel& model, const ImitationDataset& data) {
  if (data.empty()) return 0;
  double total = 0;
  for (const Example& ex : data) total += model.TeacherForcedLoss(ex.input, ex.target);
  return total / static_cast<double>(data.size());
}

TrainResult Train(PolicyModel& model, const ImitationDataset& data, const TrainConfig& config,
                  const ImitationDataset* validation) {
  if (data.empty()) throw std::invalid_argument("empty imitation dataset");
  TrainResult result;
  nn::Adam adam(config.adam);
  SplitMix64 rng(DeriveSeed(config.seed, "seq2seq-train"));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(std::max(1, config.batch_size));

  std::unique_ptr<nn::ParameterStore> best;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    double total = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      model.params().ZeroGrad();
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const Example& ex = data[order[k]];
        total += model.AccumulateGradients(ex.input, ex.target, scale);
      }
      adam.Step(model.params());
    }
    result.epoch_loss.push_back(total / static_cast<double>(data.size()));

    if (validation && !validation->empty()) {
      const double v = MeanLoss(model, *validation);
      result.validation_loss.push_back(v);
      if (v < best_val) {
        best_val = v;
        result.best_epoch = epoch;
        since_best = 0;
        if (!best) {
          best = std::make_unique<nn::ParameterStore>();
          for (const nn::Parameter* p : model.params().All()) {
            best->Add(p->name, p->value.rows(), p->value.cols());
          }
        }
        best->CopyValuesFrom(model.params());
      } else if (config.patience > 0 && ++since_best >= config.patience) {
        break;
      }
    } else {
      result.best_epoch = epoch;
    }
    if (result.epoch_loss.back() < config.target_loss) break;
  }
  if (best) model.params().CopyValuesFrom(*best);
  return result;
}

PlayResult Play(const PolicyModel& model, std::shared_ptr<const GameSpec> spec, int max_steps) {
  TextGame game(spec);
  PlayResult r;
  r.max_score = spec->max_score;
  const Observation* obs = &game.Reset();
  while (!game.state().done && r.steps < max_steps) {
    Tokens action = model.Act(*obs);
    game.Step(action);
    r.actions.push_back(std::move(action));
    ++r.steps;
    obs = &game.observation();
  }
  r.score = game.state().cumulative_reward;
  r.win = r.max_score > 0 && r.score >= r.max_score;
  return r;
}

double PolicyGradientCheck(int draws, std::uint64_t seed) {
  SplitMix64 rng(DeriveSeed(seed, "policy-gradcheck"));
  double worst = 0;
  for (int d = 0; d < draws; ++d) {
    std::set<std::string> words;
    const int n_words = 2 + rng.BelowInt(5);
    for (int k = 0; k < n_words; ++k) words.insert("w" + std::to_string(k));
    PolicyConfig cfg;
    cfg.emb_dim = 1 + rng.BelowInt(3);
    cfg.hidden = 1 + rng.BelowInt(3);
    cfg.seed = rng.Next();
    PolicyModel model(Vocab::Build(words), cfg);
    nn::FillUniform(model.params().Get("head.w").value, 1.0, rng);
    nn::FillUniform(model.params().Get("head.b").value, 0.5, rng);
    const int v = static_cast<int>(model.vocab().size());
    std::vector<int> input, target;
    const int len = 1 + rng.BelowInt(4);
    for (int k = 0; k < len; ++k) input.push_back(rng.BelowInt(v));
    const int tl = rng.BelowInt(3);
    for (int k = 0; k < tl; ++k) target.push_back(nn::kNumReserved + rng.BelowInt(v - nn::kNumReserved));
    worst = std::max(worst, nn::CheckGradients(
                                model.params(), [&] { return model.TeacherForcedLoss(input, target); },
                                [&] { model.AccumulateGradients(input, target); }));
  }
  return worst;
}

}  // namespace gotext::policy
