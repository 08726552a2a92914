#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "vocabx/ensemble.hpp"
#include "vocabx/session.hpp"

namespace vocabx {

struct ModelSpec {
  std::string id;
  std::filesystem::path path;
};

/// Parses "id=path". Throws Error(kInvalidParams).
ModelSpec parse_model_spec(const std::string& text);

/// Loads all models (in parallel) into a registry, in spec order. Load
/// warnings are written to `log`. Errors name the offending file and line.
std::shared_ptr<ModelRegistry> load_registry(const std::vector<ModelSpec>& specs, std::ostream& log);

struct ExpandOptions {
  std::filesystem::path seeds_file;
  std::size_t rounds = 0;
  std::size_t top_n = 20;
  SessionParams params;  // model_ids empty means every registry model
};

/// Seeds a session from a term-list file, auto-accepts the top suggestion
/// `rounds` times, and returns the session.
Session expand_session(const ExpandOptions& options, const ModelRegistry& registry);

/// "term<TAB>score" lines, score with six decimals, at most top_n lines.
std::string format_ranked(const std::vector<Suggestion>& ranked, std::size_t top_n);

std::string run_expand(const ExpandOptions& options, const ModelRegistry& registry);

}  // namespace vocabx
