// Copyright 2026 The toolrobust Authors.
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

#ifndef TOOLROBUST_STATUS_H_
#define TOOLROBUST_STATUS_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

// Error conventions used across the library:
//   kInvalidArgument / kNotFound / kAlreadyExists / kOutOfRange  validation
//   kFailedPrecondition   a perturbation does not apply to a sample
//   kAborted              text generation failed (rewriter, judge)
//   kUnavailable          transport or endpoint failure (retryable)
//   kInternal             bugs

#define TR_STATUS_CONCAT_INNER_(x, y) x##y
#define TR_STATUS_CONCAT_(x, y) TR_STATUS_CONCAT_INNER_(x, y)

#define TR_RETURN_IF_ERROR(expr)                  \
  do {                                            \
    ::absl::Status tr_status_ = (expr);           \
    if (!tr_status_.ok()) return tr_status_;      \
  } while (0)

#define TR_ASSIGN_OR_RETURN(lhs, expr) \
  TR_ASSIGN_OR_RETURN_IMPL_(TR_STATUS_CONCAT_(tr_statusor_, __LINE__), lhs, expr)

#define TR_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, expr) \
  auto statusor = (expr);                              \
  if (!statusor.ok()) return statusor.status();        \
  lhs = std::move(statusor).value()

namespace toolrobust {

inline absl::Status NotApplicableError(const std::string& message) {
  return absl::FailedPreconditionError(message);
}

inline bool IsNotApplicable(const absl::Status& status) {
  return status.code() == absl::StatusCode::kFailedPrecondition;
}

inline absl::Status GenerationError(const std::string& message) {
  return absl::AbortedError(message);
}

}  // namespace toolrobust

#endif  // TOOLROBUST_STATUS_H_
