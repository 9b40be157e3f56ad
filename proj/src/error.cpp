#include "lexcase/error.hpp"

namespace lexcase {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::encoding: return "encoding";
    case ErrorCode::malformed_query: return "malformed-query";
    case ErrorCode::duplicate_id: return "duplicate-id";
    case ErrorCode::gold_mismatch: return "gold-mismatch";
    case ErrorCode::parse: return "parse";
    case ErrorCode::invalid_label: return "invalid-label";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::empty_corpus: return "empty-corpus";
    case ErrorCode::missing_document: return "missing-document";
    case ErrorCode::degenerate_corpus: return "degenerate-corpus";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::fusion_mismatch: return "fusion-mismatch";
    case ErrorCode::empty_selection: return "empty-selection";
    case ErrorCode::undefined_metric: return "undefined-metric";
    case ErrorCode::degenerate_labels: return "degenerate-labels";
    case ErrorCode::configuration: return "configuration";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace lexcase
