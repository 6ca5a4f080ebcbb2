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

#include <stdexcept>
#include <string>

namespace fgel {

enum class ErrorKind {
  axiom_violation,
  not_normalized,
  shape_mismatch,
  not_denominator_n,
  budget_exceeded,
  marginal_not_denominator_n,
  infeasible_repair,
  frequency_mismatch,
  empty_fiber,
  reject_budget_exceeded,
  non_integer_result,
  inconsistent,
  parse_error,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::axiom_violation: return "AxiomViolation";
    case ErrorKind::not_normalized: return "NotNormalized";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::not_denominator_n: return "NotDenominatorN";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::marginal_not_denominator_n: return "MarginalNotDenominatorN";
    case ErrorKind::infeasible_repair: return "InfeasibleRepair";
    case ErrorKind::frequency_mismatch: return "FrequencyMismatch";
    case ErrorKind::empty_fiber: return "EmptyFiber";
    case ErrorKind::reject_budget_exceeded: return "RejectBudgetExceeded";
    case ErrorKind::non_integer_result: return "NonIntegerResult";
    case ErrorKind::inconsistent: return "Inconsistent";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Library error. Every failure mode of the public operations maps to one
/// ErrorKind; the message carries the offending indices where there are any.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  bool is_budget() const noexcept {
    return kind_ == ErrorKind::budget_exceeded || kind_ == ErrorKind::reject_budget_exceeded;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fgel
