// Copyright 2026 The fgel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>

namespace fgel {

/// Limits on exhaustive work. Exceeding one raises BudgetExceeded instead of
/// silently truncating.
struct Budgets {
  /// Materialized atom tables (subtree marginals, ball weights).
  std::uint64_t atoms = std::uint64_t{1} << 20;
  /// Observed configurations visited by the streaming entropy enumerator.
  std::uint64_t streaming_atoms = std::uint64_t{1} << 28;
  /// Exhaustive enumeration of labelings or homomorphisms.
  std::uint64_t enumeration = 10'000'000;
  /// Proposals tried by the rejection sampler before giving up.
  std::uint64_t reject_tries = 1'000'000;
};

}  // namespace fgel
