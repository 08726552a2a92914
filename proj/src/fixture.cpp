#include "vocabx/fixture.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "vocabx/error.hpp"

namespace vocabx {
namespace {

// Per-component noise scale relative to the unit centroid.
constexpr double kSpread = 0.35;

std::string term_name(std::size_t i, std::size_t width) {
  std::string digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "term_" + digits;
}

}  // namespace

std::string fixture_text(const FixtureSpec& spec) {
  if (spec.n == 0 || spec.dim == 0 || spec.clusters == 0 || spec.clusters > spec.n) {
    throw Error(ErrorCode::kInvalidParams, "fixture requires n, dim >= 1 and 1 <= clusters <= n");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::vector<double>> centroids(spec.clusters, std::vector<double>(spec.dim));
  for (auto& c : centroids) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : c) {
        v = gauss(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& v : c) v /= norm;
  }

  const std::size_t width = std::max<std::size_t>(3, std::to_string(spec.n - 1).size());
  const double sigma = kSpread / std::sqrt(static_cast<double>(spec.dim));

  std::string out = std::to_string(spec.n) + " " + std::to_string(spec.dim) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < spec.n; ++i) {
    out += term_name(i, width);
    const auto& c = centroids[i % spec.clusters];
    for (std::size_t d = 0; d < spec.dim; ++d) {
      std::snprintf(buf, sizeof buf, " %.6f", c[d] + sigma * gauss(rng));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path generate_fixture(const FixtureSpec& spec, const std::filesystem::path& out) {
  const std::string text = fixture_text(spec);
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write fixture to " + out.string());
  f << text;
  f.close();
  if (!f) throw Error(ErrorCode::kIo, "failed writing fixture to " + out.string());
  return out;
}

}  // namespace vocabx
