#pragma once

#include <string>
#include <string_view>

namespace vocabx {

/// Canonical key form of a term: trimmed, ASCII-lowercased, internal
/// whitespace runs replaced by one underscore. Throws Error(kInvalidTerm)
/// when nothing is left after trimming.
std::string normalize_term(std::string_view raw);

/// Trimmed input with whitespace runs collapsed to single spaces; case kept.
std::string display_form(std::string_view raw);

/// Human-readable form of a model key ("smart_cities" -> "smart cities").
std::string display_from_key(std::string_view key);

}  // namespace vocabx
