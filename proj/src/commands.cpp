#include "vocabx/commands.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "vocabx/error.hpp"
#include "vocabx/snapshot.hpp"

namespace vocabx {

ModelSpec parse_model_spec(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error(ErrorCode::kInvalidParams, "model spec must look like id=path, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::shared_ptr<ModelRegistry> load_registry(const std::vector<ModelSpec>& specs,
                                             std::ostream& log) {
  if (specs.empty()) throw Error(ErrorCode::kInvalidParams, "at least one --model is required");
  std::vector<std::future<EmbeddingModel>> pending;
  for (const auto& spec : specs) {
    pending.push_back(std::async(std::launch::async,
                                 [spec] { return load_model(spec.path, spec.id); }));
  }
  auto registry = std::make_shared<ModelRegistry>();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    EmbeddingModel model = pending[i].get();
    for (const auto& w : model.warnings()) {
      log << "warning: " << specs[i].path.string() << ":" << w.line << ": " << w.message << "\n";
    }
    registry->add(std::make_shared<const EmbeddingModel>(std::move(model)));
  }
  return registry;
}

Session expand_session(const ExpandOptions& options, const ModelRegistry& registry) {
  std::ifstream in(options.seeds_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read seeds file " + options.seeds_file.string());
  std::stringstream buf;
  buf << in.rdbuf();

  SessionParams params = options.params;
  if (params.model_ids.empty()) params.model_ids = registry.ids();
  Session session = import_term_list(buf.str(), params, registry);
  if (session.accepted().empty()) {
    throw Error(ErrorCode::kInvalidTerm, "seeds file " + options.seeds_file.string() + " has no terms");
  }
  for (std::size_t round = 0; round < options.rounds; ++round) {
    auto ranked = session.ranked_suggestions();
    if (ranked.empty()) break;
    session.accept(ranked.front().term);
  }
  return session;
}

std::string format_ranked(const std::vector<Suggestion>& ranked, std::size_t top_n) {
  std::string out;
  char score[64];
  for (std::size_t i = 0; i < ranked.size() && i < top_n; ++i) {
    std::snprintf(score, sizeof score, "%.6f", ranked[i].score);
    out += ranked[i].term;
    out += '\t';
    out += score;
    out += '\n';
  }
  return out;
}

std::string run_expand(const ExpandOptions& options, const ModelRegistry& registry) {
  return format_ranked(expand_session(options, registry).ranked_suggestions(), options.top_n);
}

}  // namespace vocabx
