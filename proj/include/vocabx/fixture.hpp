#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

namespace vocabx {

struct FixtureSpec {
  std::uint64_t seed = 42;
  std::size_t n = 100;
  std::size_t dim = 16;
  std::size_t clusters = 5;
};

/// Deterministic clustered embedding file in word2vec text format. Term i is
/// "term_" followed by i zero-padded to at least three digits and belongs to
/// cluster i % clusters.
std::string fixture_text(const FixtureSpec& spec);

/// Writes fixture_text(spec) to `out` and returns `out`.
std::filesystem::path generate_fixture(const FixtureSpec& spec, const std::filesystem::path& out);

}  // namespace vocabx
