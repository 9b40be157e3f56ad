#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lexcase {

enum class ErrorCode {
  io,
  encoding,
  malformed_query,
  duplicate_id,
  gold_mismatch,
  parse,
  invalid_label,
  invalid_config,
  empty_corpus,
  missing_document,
  degenerate_corpus,
  precondition,
  fusion_mismatch,
  empty_selection,
  undefined_metric,
  degenerate_labels,
  configuration,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lexcase
