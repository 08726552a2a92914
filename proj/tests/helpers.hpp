#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vocabx/embedding_model.hpp"
#include "vocabx/ensemble.hpp"
#include "vocabx/error.hpp"

namespace testutil {

using Rows = std::vector<std::pair<std::string, std::vector<float>>>;

inline vocabx::ModelPtr make_model(const std::string& id, std::size_t dim, Rows rows) {
  return std::make_shared<const vocabx::EmbeddingModel>(
      vocabx::EmbeddingModel::from_rows(id, dim, std::move(rows)));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

/// Error code thrown by `f`, or nullopt if it returned normally.
inline std::optional<vocabx::ErrorCode> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const vocabx::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs a shell command with stdout/stderr captured through files in `scratch`.
inline CommandResult run_command(const std::string& cmd, const std::string& scratch) {
  const std::string out = scratch + "/cmd.out";
  const std::string err = scratch + "/cmd.err";
  const int status = std::system((cmd + " >" + out + " 2>" + err).c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

}  // namespace testutil
