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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "synthpop/common/rng.hpp"
#include "synthpop/io/microdata.hpp"

namespace synthpop::ipu {

// Endless stream of household indices; every draw selects household j with
// probability w_j / sum(w). Draws are produced in blocks of fixed size using
// systematic sampling along a caller-supplied household order (a random start
// per block), then shuffled within the block. Per-draw probabilities are
// unchanged; the realised per-household counts stay within one of their
// expectation, which keeps sampled marginals close to the fitted weights.
class SystematicDrawStream {
 public:
  // order: permutation of household indices used for the systematic pass
  // (households with similar composition should be adjacent).
  SystematicDrawStream(std::span<const double> weights, std::vector<std::size_t> order, std::size_t block_size,
                       std::uint64_t seed);

  std::size_t next();

 private:
  void refill();

  std::vector<double> weights_;
  std::vector<std::size_t> order_;
  double total_ = 0.0;
  std::size_t block_size_;
  Rng rng_;
  std::vector<std::uint32_t> block_;
  std::size_t pos_ = 0;
};

// Composition-sorted order: by size, then member (sex, age) signature.
std::vector<std::size_t> composition_order(const io::MicroSample& sample);

// A sampled household. Synthetic ids are sequence numbers (1-based); the
// assembler turns them into region-prefixed identifiers.
struct HouseholdTemplate {
  std::uint64_t household_seq = 0;
  std::uint64_t first_person_seq = 0;
  std::size_t source = 0;  // index into MicroSample::households
  std::size_t size = 0;
};

// Draws households until the running person count reaches target_persons;
// the household that crosses the target is still emitted whole.
class HouseholdStream {
 public:
  HouseholdStream(std::span<const double> weights, const io::MicroSample& sample, std::uint64_t target_persons,
                  std::uint64_t seed);

  std::optional<HouseholdTemplate> next();
  std::uint64_t persons_emitted() const { return persons_; }
  std::uint64_t households_emitted() const { return households_; }

 private:
  const io::MicroSample* sample_;
  std::uint64_t target_;
  std::optional<SystematicDrawStream> draws_;
  std::uint64_t persons_ = 0;
  std::uint64_t households_ = 0;
};

// Convenience wrapper returning every template of the stream.
std::vector<HouseholdTemplate> sample_households(std::span<const double> weights, const io::MicroSample& sample,
                                                 std::uint64_t target_persons, std::uint64_t seed);

}  // namespace synthpop::ipu
