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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synthpop::eval {

// Rows usable for the efficacy regressions: no missing age, sex, height or
// weight.
struct BodyTable {
  std::vector<double> age;
  std::vector<std::string> sex;
  std::vector<double> height;
  std::vector<double> weight;

  std::size_t size() const { return age.size(); }
  void push(double a, std::string s, double h, double w);
  BodyTable subset(std::span<const std::size_t> rows) const;
};

enum class Target { kHeight, kWeight };
enum class ModelKind { kLinear, kMlp };

std::string_view target_name(Target t);  // "Height" / "Weight"
std::string_view model_name(ModelKind m);  // "linear" / "mlp"

// Design matrix: age, sex dummies (drop-first over the sorted levels of the
// encoding sample) and the other body measure.
class FeatureEncoder {
 public:
  FeatureEncoder(const BodyTable& reference, Target target);
  std::size_t width() const { return 2 + (sex_levels_.empty() ? 0 : sex_levels_.size() - 1); }
  std::vector<double> features(const BodyTable& t, std::size_t row) const;
  static std::vector<double> target(const BodyTable& t, Target target);

 private:
  std::vector<std::string> sex_levels_;
  Target target_;
};

double r2_score(std::span<const double> truth, std::span<const double> predicted);

// Ordinary least squares with an intercept, solved by column-pivoting QR.
class LinearModel {
 public:
  void fit(const std::vector<std::vector<double>>& x, std::span<const double> y);
  double predict(std::span<const double> x) const;
  const std::vector<double>& coefficients() const { return beta_; }  // intercept first

 private:
  std::vector<double> beta_;
};

struct MlpOptions {
  std::size_t hidden = 32;  // 0: plain linear model trained by gradient descent
  std::size_t epochs = 60;
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 32;  // 0: full batch
  std::uint64_t seed = 1;
};

// One hidden ReLU layer on standardized inputs and target, mean squared
// error, mini-batch gradient descent with momentum.
class Mlp {
 public:
  explicit Mlp(MlpOptions options = {}) : options_(options) {}
  void fit(const std::vector<std::vector<double>>& x, std::span<const double> y);
  double predict(std::span<const double> x) const;

 private:
  double forward(const std::vector<double>& z, std::vector<double>* hidden_act) const;

  MlpOptions options_;
  std::size_t inputs_ = 0;
  std::vector<double> x_mean_, x_std_;
  double y_mean_ = 0.0, y_std_ = 1.0;
  std::vector<double> w1_, b1_, w2_;  // w1: hidden x inputs, row-major
  double b2_ = 0.0;
};

struct EfficacyScore {
  double real_trained = 0.0;
  double synth_trained = 0.0;
  double gap() const;
};

// Trains the model on real_train and on synth_train and scores both on
// real_test by R^2. Throws InputError if the test target has no variance.
EfficacyScore ml_efficacy(const BodyTable& real_train, const BodyTable& real_test, const BodyTable& synth_train,
                          Target target, ModelKind model, const MlpOptions& mlp = {});

}  // namespace synthpop::eval
