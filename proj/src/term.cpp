#include "vocabx/term.hpp"

#include <algorithm>

#include "vocabx/error.hpp"

namespace vocabx {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Trims and collapses whitespace runs into `sep`.
std::string collapse(std::string_view raw, char sep, bool lower) {
  std::string out;
  out.reserve(raw.size());
  bool pending_sep = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) {
      out.push_back(sep);
      pending_sep = false;
    }
    out.push_back(lower ? ascii_lower(c) : c);
  }
  return out;
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidTerm: return "invalid_term";
    case ErrorCode::kInvalidParams: return "invalid_params";
    case ErrorCode::kUnknownModel: return "unknown_model";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kNotAccepted: return "term_not_accepted";
    case ErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ErrorCode::kMalformedPayload: return "malformed_payload";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kMalformedModel: return "malformed_model";
    case ErrorCode::kSessionNotFound: return "session_not_found";
  }
  return "unknown";
}

std::string normalize_term(std::string_view raw) {
  std::string out = collapse(raw, '_', true);
  if (out.empty()) throw Error(ErrorCode::kInvalidTerm, "term is empty");
  return out;
}

std::string display_form(std::string_view raw) {
  std::string out = collapse(raw, ' ', false);
  if (out.empty()) throw Error(ErrorCode::kInvalidTerm, "term is empty");
  return out;
}

std::string display_from_key(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

}  // namespace vocabx
