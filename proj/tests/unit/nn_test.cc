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

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "gotext/nn/adam.h"
#include "gotext/nn/checkpoint.h"
#include "gotext/nn/gradcheck.h"
#include "gotext/nn/layers.h"
#include "gotext/nn/vocab.h"

namespace gotext::nn {
namespace {

TEST_CASE("lstm step with zero parameters outputs zero") {
  ParameterStore s;
  LstmParams p = AddLstm(s, "enc", 3, 4);
  Vector x(3);
  x << 1.5, -2.0, 0.3;
  LstmState st = LstmStep(p, x, Vector::Zero(4), Vector::Zero(4));
  CHECK(st.h.isZero(0));
  CHECK(st.c.isZero(0));
}

TEST_CASE("lstm step hand-computed single unit") {
  ParameterStore s;
  LstmParams p = AddLstm(s, "enc", 1, 1);
  p.wx->value << 0.5, -0.25, 1.0, 0.75;  // i f g o
  p.wh->value << 0.1, 0.2, -0.3, 0.4;
  p.b->value << 0.0, 1.0, 0.0, 0.0;
  Vector x(1), h(1), c(1);
  x << 2.0;
  h << 0.5;
  c << -1.0;
  const auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  const double i = sig(1.0 + 0.05), f = sig(-0.5 + 0.1 + 1.0), g = std::tanh(2.0 - 0.15),
               o = sig(1.5 + 0.2);
  const double c_new = f * -1.0 + i * g;
  LstmState st = LstmStep(p, x, h, c);
  CHECK(st.c[0] == doctest::Approx(c_new).epsilon(1e-14));
  CHECK(st.h[0] == doctest::Approx(o * std::tanh(c_new)).epsilon(1e-14));
}

TEST_CASE("lstm step is deterministic and rejects bad shapes") {
  ParameterStore s;
  LstmParams p = AddLstm(s, "enc", 2, 3);
  SplitMix64 rng(7);
  InitLstm(p, rng);
  Vector x(2);
  x << 0.3, -0.9;
  LstmState a = LstmStep(p, x, Vector::Zero(3), Vector::Zero(3));
  LstmState b = LstmStep(p, x, Vector::Zero(3), Vector::Zero(3));
  CHECK(a.h == b.h);
  CHECK(a.c == b.c);
  CHECK_THROWS_AS(LstmStep(p, Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)), ShapeMismatch);
  CHECK_THROWS_AS(LstmStep(p, x, Vector::Zero(2), Vector::Zero(3)), ShapeMismatch);
}

TEST_CASE("lstm init ranges and forget bias") {
  ParameterStore s;
  LstmParams p = AddLstm(s, "enc", 5, 16);
  SplitMix64 rng(3);
  InitLstm(p, rng);
  CHECK(p.wx->value.cwiseAbs().maxCoeff() <= 0.25);
  CHECK(p.wh->value.cwiseAbs().maxCoeff() <= 0.25);
  CHECK(p.b->value.block(0, 0, 16, 1).isZero(0));
  CHECK(p.b->value.block(16, 0, 16, 1).isOnes(0));
  CHECK(p.b->value.block(32, 0, 32, 1).isZero(0));
}

TEST_CASE("attention trivial cases") {
  SplitMix64 rng(11);
  Matrix one(1, 4);
  FillUniform(one, 1.0, rng);
  Vector q(4);
  q << 3, -1, 2, 0.5;
  CHECK((Attention(q, one) - one.row(0).transpose()).cwiseAbs().maxCoeff() == 0.0);

  Matrix same(5, 4);
  for (int r = 0; r < 5; ++r) same.row(r) = one.row(0);
  CHECK((Attention(q, same) - one.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-15);

  Matrix H(6, 4);
  FillUniform(H, 2.0, rng);
  AttentionCache cache;
  Attention(q, H, &cache);
  CHECK(std::abs(cache.weights.sum() - 1.0) < 1e-12);
  CHECK(cache.weights.minCoeff() > 0);
  CHECK_THROWS_AS(Attention(q, Matrix(0, 4)), ShapeMismatch);
  CHECK_THROWS_AS(Attention(Vector::Zero(3), H), ShapeMismatch);
}

TEST_CASE("output distribution") {
  ParameterStore s;
  LinearParams head = AddLinear(s, "head", 6, 9);
  Vector h = Vector::Ones(3), c = Vector::Constant(3, -2.0);
  Vector uniform = OutputDistribution(head, h, c);
  for (int i = 0; i < 9; ++i) CHECK(uniform[i] == doctest::Approx(1.0 / 9).epsilon(1e-15));
  SplitMix64 rng(5);
  InitLinear(head, rng);
  FillUniform(head.b->value, 4.0, rng);
  Vector p = OutputDistribution(head, h, c);
  CHECK(std::abs(p.sum() - 1.0) < 1e-12);
  CHECK(p.minCoeff() > 0);
  CHECK_THROWS_AS(OutputDistribution(head, h, Vector::Zero(4)), ShapeMismatch);
}

TEST_CASE("softmax is stable for large logits") {
  Vector z(3);
  z << 1000, 1000, -1000;
  Vector p = Softmax(z);
  CHECK(p.allFinite());
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(LogSoftmax(z).allFinite());
}

TEST_CASE("nll loss trivial cases") {
  const int v = 7;
  std::vector<Vector> uniform(4, Vector::Constant(v, 1.0 / v));
  CHECK(NllLoss(uniform, {0, 3, 6, 2}) == doctest::Approx(4 * std::log(7.0)).epsilon(1e-14));
  std::vector<Vector> exact;
  for (int t : {1, 4}) {
    Vector d = Vector::Zero(v);
    d[t] = 1.0;
    exact.push_back(d);
  }
  CHECK(NllLoss(exact, {1, 4}) == 0.0);
  CHECK_THROWS_AS(NllLoss(uniform, {0, 1}), LengthMismatch);
  Vector logits = Vector::Zero(v);
  CHECK(SoftmaxNll(logits, 2) == doctest::Approx(std::log(7.0)));
}

TEST_CASE("gradient checks over random draws") {
  for (const OpGradCheck& r : CoreGradientChecks(120, 2024)) {
    INFO(r.op << " max relative error " << r.max_rel_error);
    CHECK(r.draws >= 100);
    CHECK(r.passed());
  }
}

TEST_CASE("relative error floor") {
  CHECK(RelativeError(1.0, 1.0) == 0.0);
  CHECK(RelativeError(2.0, 1.0) == doctest::Approx(0.5));
  CHECK(RelativeError(0.0, 1e-12) < 1e-6);
  CHECK(RelativeError(1e-7, 2e-7) == doctest::Approx(1e-2));
}

TEST_CASE("adam properties") {
  SUBCASE("zero gradients leave parameters unchanged") {
    ParameterStore s;
    Parameter& p = s.Add("w", 3, 2);
    p.value << 1, 2, 3, 4, 5, 6;
    const Matrix before = p.value;
    p.Grad();
    Adam adam;
    for (int t = 0; t < 10; ++t) adam.Step(s);
    CHECK(p.value == before);
  }
  SUBCASE("constant gradient gives steps of lr * sign") {
    ParameterStore s;
    Parameter& p = s.Add("w", 2, 1);
    Adam adam(AdamConfig{.lr = 1e-3, .clip = 0});
    Matrix prev = p.value;
    for (int t = 0; t < 2000; ++t) {
      p.Grad() << 0.3, -2.0;
      adam.Step(s);
      if (t == 1999) {
        const Matrix step = p.value - prev;
        CHECK(step(0, 0) == doctest::Approx(-1e-3).epsilon(1e-4));
        CHECK(step(1, 0) == doctest::Approx(1e-3).epsilon(1e-4));
      }
      prev = p.value;
    }
  }
  SUBCASE("missing gradient") {
    ParameterStore s;
    s.Add("w", 2, 2);
    Adam adam;
    CHECK_THROWS_AS(adam.Step(s), MissingGradient);
  }
  SUBCASE("clipping bounds the global norm") {
    ParameterStore s;
    Parameter& a = s.Add("a", 2, 1);
    Parameter& b = s.Add("b", 1, 1);
    a.Grad() << 30, 40;
    b.Grad() << 0;
    CHECK(s.ClipGradNorm(5.0) == doctest::Approx(50.0));
    CHECK(s.GradNorm() == doctest::Approx(5.0));
  }
  SUBCASE("determinism") {
    auto run = [] {
      ParameterStore s;
      LstmParams p = AddLstm(s, "l", 2, 3);
      SplitMix64 rng(99);
      InitLstm(p, rng);
      Adam adam;
      for (int t = 0; t < 20; ++t) {
        s.ZeroGrad();
        LstmCache cache;
        Vector x(2);
        x << 0.1 * t, -0.2;
        LstmStep(p, x, Vector::Zero(3), Vector::Zero(3), &cache);
        LstmStepBackward(p, cache, Vector::Ones(3), Vector::Zero(3));
        adam.Step(s);
      }
      return p.wx->value;
    };
    CHECK(run() == run());
  }
  SUBCASE("frozen parameters stay fixed") {
    ParameterStore s;
    Parameter& a = s.Add("a", 2, 1);
    Parameter& b = s.Add("b", 2, 1);
    b.trainable = false;
    a.Grad().setOnes();
    b.Grad().setOnes();
    Adam adam;
    adam.Step(s);
    CHECK(!a.value.isZero(0));
    CHECK(b.value.isZero(0));
  }
}

TEST_CASE("checkpoint round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "gotext_nn_test";
  std::filesystem::remove_all(dir);
  ParameterStore s;
  LstmParams p = AddLstm(s, "enc", 3, 2);
  SplitMix64 rng(1);
  InitLstm(p, rng);
  SaveCheckpoint(dir / "m.bin", s, {{"hidden", 2}});
  CHECK(std::filesystem::exists(dir / "m.json"));

  ParameterStore t;
  LstmParams q = AddLstm(t, "enc", 3, 2);
  nlohmann::json manifest = LoadCheckpoint(dir / "m.bin", t);
  CHECK(manifest["hidden"] == 2);
  CHECK(manifest["format_version"] == kCheckpointVersion);
  CHECK(manifest["tensors"].size() == 3);
  CHECK((q.wx->value - p.wx->value).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(q.b->value == p.b->value);

  ParameterStore wrong;
  AddLstm(wrong, "enc", 4, 2);
  CHECK_THROWS_AS(LoadCheckpoint(dir / "m.bin", wrong), ShapeMismatch);
  ParameterStore missing;
  AddLstm(missing, "dec", 3, 2);
  CHECK_THROWS_AS(LoadCheckpoint(dir / "m.bin", missing), CheckpointError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("vocab") {
  Vocab v = Vocab::Build({"take", "coin", "go", "<s>"});
  REQUIRE(v.size() == 9);
  CHECK(v.Token(kPadId) == "<pad>");
  CHECK(v.Token(kUnkId) == "<unk>");
  CHECK(v.Token(kSosId) == "<sos>");
  CHECK(v.Token(kEosId) == "<eos>");
  CHECK(v.Token(kSepId) == "<sep>");
  CHECK(v.Token(kNoneId) == "<s>");
  CHECK(v.Token(6) == "coin");
  CHECK(v.Token(8) == "take");
  CHECK(v.Id("dragon") == kUnkId);
  CHECK(Vocab::FromJson(v.ToJson()).Hash() == v.Hash());
  Vocab padded = Vocab::Build({"coin"}, 50);
  CHECK(padded.size() == 50);
  CHECK(padded.Contains("filler00000"));
  CHECK(padded.Hash() != v.Hash());
  CHECK_THROWS(Vocab::FromTokens({"coin"}));
}

TEST_CASE("embedding init") {
  Vocab v = Vocab::Build({"apple", "knife"});
  WordVectors glove(2);
  glove.Set("apple", std::vector<double>{0.5, -0.5});
  EmbeddingInit e = InitEmbeddings(v, 2, &glove, 4);
  CHECK(e.pretrained == 1);
  CHECK(e.random == v.size() - 2);
  CHECK(e.table.row(kPadId).isZero(0));
  CHECK(e.table(v.Id("apple"), 0) == 0.5);
  EmbeddingInit again = InitEmbeddings(v, 2, nullptr, 4);
  CHECK(again.table.row(v.Id("knife")) == e.table.row(v.Id("knife")));
  CHECK_THROWS_AS(InitEmbeddings(v, 3, &glove, 4), ShapeMismatch);
}

}  // namespace
}  // namespace gotext::nn
