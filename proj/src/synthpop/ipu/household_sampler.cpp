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

#include "synthpop/ipu/household_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synthpop/common/error.hpp"

namespace synthpop::ipu {

namespace {

constexpr std::size_t kMaxBlock = std::size_t{1} << 20;

}  // namespace

SystematicDrawStream::SystematicDrawStream(std::span<const double> weights, std::vector<std::size_t> order,
                                           std::size_t block_size, std::uint64_t seed)
    : weights_(weights.begin(), weights.end()),
      order_(std::move(order)),
      block_size_(std::clamp<std::size_t>(block_size, 1, kMaxBlock)),
      rng_(seed) {
  if (order_.size() != weights_.size()) throw PipelineError("household order does not match weight count");
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw PipelineError("household weights must be finite and >= 0");
    total_ += w;
  }
  if (!(total_ > 0.0)) throw PipelineError("all household weights are zero");
}

void SystematicDrawStream::refill() {
  block_.clear();
  const double step = static_cast<double>(block_size_) / total_;
  const double start = uniform01(rng_);
  double cum = 0.0;
  // Household k in `order_` receives floor(C_k*step + u) - floor(C_{k-1}*step + u) draws.
  auto prev = static_cast<std::int64_t>(std::floor(start));
  for (std::size_t k = 0; k < order_.size(); ++k) {
    const std::size_t j = order_[k];
    cum += weights_[j];
    const double x = (k + 1 == order_.size()) ? static_cast<double>(block_size_) : cum * step;
    const auto cur = static_cast<std::int64_t>(std::floor(x + start));
    for (auto c = prev; c < cur; ++c) block_.push_back(static_cast<std::uint32_t>(j));
    prev = cur;
  }
  shuffle(block_.begin(), block_.end(), rng_);
  pos_ = 0;
}

std::size_t SystematicDrawStream::next() {
  while (pos_ >= block_.size()) refill();
  return block_[pos_++];
}

std::vector<std::size_t> composition_order(const io::MicroSample& sample) {
  std::vector<std::string> key(sample.households.size());
  for (std::size_t j = 0; j < sample.households.size(); ++j) {
    std::vector<std::string> members;
    for (auto m : sample.households[j].members) {
      const auto& p = sample.persons[m];
      std::string age = std::to_string(p.age);
      members.push_back(p.sex + ":" + std::string(3 - std::min<std::size_t>(3, age.size()), '0') + age);
    }
    std::sort(members.begin(), members.end());
    std::string k = std::string(4 - std::min<std::size_t>(4, std::to_string(members.size()).size()), '0') +
                    std::to_string(members.size());
    for (const auto& m : members) k += "|" + m;
    key[j] = std::move(k);
  }
  std::vector<std::size_t> order(sample.households.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return order;
}

HouseholdStream::HouseholdStream(std::span<const double> weights, const io::MicroSample& sample,
                                 std::uint64_t target_persons, std::uint64_t seed)
    : sample_(&sample), target_(target_persons) {
  if (weights.size() != sample.households.size()) throw PipelineError("weight count does not match household count");
  if (target_persons < 1) throw PipelineError("target population must be >= 1");
  double wsum = 0.0;
  double wsize = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    wsum += weights[j];
    wsize += weights[j] * static_cast<double>(sample.households[j].size());
  }
  if (!(wsum > 0.0)) throw PipelineError("all household weights are zero");
  // One block holds about as many households as the target needs.
  const double expected = static_cast<double>(target_persons) * wsum / wsize;
  const auto block = static_cast<std::size_t>(std::min(std::ceil(expected), static_cast<double>(kMaxBlock)));
  draws_.emplace(weights, composition_order(sample), block, seed);
}

std::optional<HouseholdTemplate> HouseholdStream::next() {
  if (persons_ >= target_) return std::nullopt;
  HouseholdTemplate t;
  t.source = draws_->next();
  t.size = sample_->households[t.source].size();
  t.household_seq = ++households_;
  t.first_person_seq = persons_ + 1;
  persons_ += t.size;
  return t;
}

std::vector<HouseholdTemplate> sample_households(std::span<const double> weights, const io::MicroSample& sample,
                                                 std::uint64_t target_persons, std::uint64_t seed) {
  HouseholdStream stream(weights, sample, target_persons, seed);
  std::vector<HouseholdTemplate> out;
  while (auto t = stream.next()) out.push_back(*t);
  return out;
}

}  // namespace synthpop::ipu
