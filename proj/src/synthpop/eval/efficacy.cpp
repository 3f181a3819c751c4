// Copyright 2026 The synthpop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthpop/eval/efficacy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "synthpop/common/error.hpp"
#include "synthpop/common/rng.hpp"

namespace synthpop::eval {

void BodyTable::push(double a, std::string s, double h, double w) {
  age.push_back(a);
  sex.push_back(std::move(s));
  height.push_back(h);
  weight.push_back(w);
}

BodyTable BodyTable::subset(std::span<const std::size_t> rows) const {
  BodyTable out;
  for (const auto r : rows) out.push(age[r], sex[r], height[r], weight[r]);
  return out;
}

std::string_view target_name(Target t) { return t == Target::kHeight ? "Height" : "Weight"; }
std::string_view model_name(ModelKind m) { return m == ModelKind::kLinear ? "linear" : "mlp"; }

FeatureEncoder::FeatureEncoder(const BodyTable& reference, Target target) : target_(target) {
  std::set<std::string> levels(reference.sex.begin(), reference.sex.end());
  sex_levels_.assign(levels.begin(), levels.end());
}

std::vector<double> FeatureEncoder::features(const BodyTable& t, std::size_t row) const {
  std::vector<double> f;
  f.reserve(width());
  f.push_back(t.age[row]);
  for (std::size_t k = 1; k < sex_levels_.size(); ++k) f.push_back(t.sex[row] == sex_levels_[k] ? 1.0 : 0.0);
  f.push_back(target_ == Target::kHeight ? t.weight[row] : t.height[row]);
  return f;
}

std::vector<double> FeatureEncoder::target(const BodyTable& t, Target target) {
  return target == Target::kHeight ? t.height : t.weight;
}

double r2_score(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.size() != predicted.size() || truth.empty()) throw InputError("r2_score needs equal nonempty samples");
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (!(ss_tot > 0.0)) throw InputError("test target has zero variance");
  return 1.0 - ss_res / ss_tot;
}

void LinearModel::fit(const std::vector<std::vector<double>>& x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) throw InputError("linear model needs matching nonempty x and y");
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto k = static_cast<Eigen::Index>(x[0].size());
  Eigen::MatrixXd a(n, k + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) a(i, j + 1) = x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd beta = a.colPivHouseholderQr().solve(b);
  beta_.assign(beta.data(), beta.data() + beta.size());
}

double LinearModel::predict(std::span<const double> x) const {
  double v = beta_.at(0);
  for (std::size_t j = 0; j < x.size(); ++j) v += beta_[j + 1] * x[j];
  return v;
}

void Mlp::fit(const std::vector<std::vector<double>>& x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) throw InputError("mlp needs matching nonempty x and y");
  const std::size_t n = x.size();
  inputs_ = x[0].size();
  x_mean_.assign(inputs_, 0.0);
  x_std_.assign(inputs_, 0.0);
  for (const auto& row : x) {
    for (std::size_t j = 0; j < inputs_; ++j) x_mean_[j] += row[j];
  }
  for (auto& m : x_mean_) m /= static_cast<double>(n);
  for (const auto& row : x) {
    for (std::size_t j = 0; j < inputs_; ++j) x_std_[j] += (row[j] - x_mean_[j]) * (row[j] - x_mean_[j]);
  }
  for (auto& s : x_std_) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 0.0)) s = 1.0;  // constant column
  }
  y_mean_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : y) var += (v - y_mean_) * (v - y_mean_);
  y_std_ = std::sqrt(var / static_cast<double>(n));
  if (!(y_std_ > 0.0)) y_std_ = 1.0;

  std::vector<std::vector<double>> z(n, std::vector<double>(inputs_));
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < inputs_; ++j) z[i][j] = (x[i][j] - x_mean_[j]) / x_std_[j];
    t[i] = (y[i] - y_mean_) / y_std_;
  }

  const std::size_t h = options_.hidden;
  Rng rng = make_rng(options_.seed, Stream::kEvalModel);
  // He initialisation for the ReLU layer, Glorot-style for the output.
  const double s1 = std::sqrt(2.0 / static_cast<double>(inputs_));
  const double s2 = h ? std::sqrt(1.0 / static_cast<double>(h)) : 0.0;
  w1_.resize(h * inputs_);
  for (auto& w : w1_) w = s1 * standard_normal(rng);
  b1_.assign(h, 0.0);
  // Without a hidden layer w2_ holds the input weights of the linear model.
  w2_.resize(h ? h : inputs_);
  for (auto& w : w2_) w = h ? s2 * standard_normal(rng) : 0.0;
  b2_ = 0.0;

  std::vector<double> v_w1(w1_.size(), 0.0), v_b1(h, 0.0), v_w2(w2_.size(), 0.0);
  double v_b2 = 0.0;
  std::vector<double> g_w1(w1_.size()), g_b1(h), g_w2(w2_.size());
  std::vector<double> act(h);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = options_.batch_size ? std::min(options_.batch_size, n) : n;

  for (std::size_t epoch = 0; epoch < options_.epochs; ++epoch) {
    if (batch < n) shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(start + batch, n);
      std::fill(g_w1.begin(), g_w1.end(), 0.0);
      std::fill(g_b1.begin(), g_b1.end(), 0.0);
      std::fill(g_w2.begin(), g_w2.end(), 0.0);
      double g_b2 = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto& zi = z[order[k]];
        const double err = forward(zi, h ? &act : nullptr) - t[order[k]];
        g_b2 += err;
        if (!h) {
          for (std::size_t j = 0; j < inputs_; ++j) g_w2[j] += err * zi[j];
          continue;
        }
        for (std::size_t u = 0; u < h; ++u) {
          g_w2[u] += err * act[u];
          if (act[u] <= 0.0) continue;
          const double d = err * w2_[u];
          g_b1[u] += d;
          double* gw = &g_w1[u * inputs_];
          for (std::size_t j = 0; j < inputs_; ++j) gw[j] += d * zi[j];
        }
      }
      // Gradient of 0.5 * mean squared error.
      const double scale = 1.0 / static_cast<double>(end - start);
      const double lr = options_.learning_rate;
      const double mu = options_.momentum;
      auto update = [&](std::vector<double>& w, std::vector<double>& v, const std::vector<double>& g) {
        for (std::size_t q = 0; q < w.size(); ++q) {
          v[q] = mu * v[q] - lr * g[q] * scale;
          w[q] += v[q];
        }
      };
      update(w1_, v_w1, g_w1);
      update(b1_, v_b1, g_b1);
      update(w2_, v_w2, g_w2);
      v_b2 = mu * v_b2 - lr * g_b2 * scale;
      b2_ += v_b2;
    }
  }
}

double Mlp::forward(const std::vector<double>& z, std::vector<double>* hidden_act) const {
  const std::size_t h = options_.hidden;
  double out = b2_;
  if (!h) {
    for (std::size_t j = 0; j < inputs_; ++j) out += w2_[j] * z[j];
    return out;
  }
  for (std::size_t u = 0; u < h; ++u) {
    double a = b1_[u];
    const double* w = &w1_[u * inputs_];
    for (std::size_t j = 0; j < inputs_; ++j) a += w[j] * z[j];
    a = a > 0.0 ? a : 0.0;
    if (hidden_act) (*hidden_act)[u] = a;
    out += w2_[u] * a;
  }
  return out;
}

double Mlp::predict(std::span<const double> x) const {
  if (x.size() != inputs_) throw InputError("mlp input width mismatch");
  std::vector<double> z(inputs_);
  for (std::size_t j = 0; j < inputs_; ++j) z[j] = (x[j] - x_mean_[j]) / x_std_[j];
  return forward(z, nullptr) * y_std_ + y_mean_;
}

double EfficacyScore::gap() const { return std::fabs(real_trained - synth_trained); }

namespace {

std::vector<std::vector<double>> design(const FeatureEncoder& enc, const BodyTable& t) {
  std::vector<std::vector<double>> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = enc.features(t, i);
  return x;
}

template <typename Model>
double train_and_score(Model model, const FeatureEncoder& enc, const BodyTable& train, const BodyTable& test,
                       Target target) {
  const auto y = FeatureEncoder::target(train, target);
  model.fit(design(enc, train), y);
  const auto x_test = design(enc, test);
  std::vector<double> pred(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) pred[i] = model.predict(x_test[i]);
  return r2_score(FeatureEncoder::target(test, target), pred);
}

}  // namespace

EfficacyScore ml_efficacy(const BodyTable& real_train, const BodyTable& real_test, const BodyTable& synth_train,
                          Target target, ModelKind model, const MlpOptions& mlp) {
  if (real_train.size() == 0 || real_test.size() == 0 || synth_train.size() == 0) {
    throw InputError("ml_efficacy needs nonempty train and test sets");
  }
  // One encoding for both fits so the feature layout is identical.
  const FeatureEncoder enc(real_train, target);
  EfficacyScore s;
  if (model == ModelKind::kLinear) {
    s.real_trained = train_and_score(LinearModel{}, enc, real_train, real_test, target);
    s.synth_trained = train_and_score(LinearModel{}, enc, synth_train, real_test, target);
  } else {
    s.real_trained = train_and_score(Mlp(mlp), enc, real_train, real_test, target);
    s.synth_trained = train_and_score(Mlp(mlp), enc, synth_train, real_test, target);
  }
  return s;
}

}  // namespace synthpop::eval
