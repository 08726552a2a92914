#include "vocabx/embedding_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>

#include "vocabx/error.hpp"
#include "vocabx/term.hpp"

namespace vocabx {

double dot(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

EmbeddingModel EmbeddingModel::from_rows(
    std::string id, std::size_t dimension,
    std::vector<std::pair<std::string, std::vector<float>>> rows) {
  if (dimension == 0) throw Error(ErrorCode::kMalformedModel, "dimension must be positive");
  EmbeddingModel model;
  model.id_ = std::move(id);
  model.dimension_ = dimension;
  model.terms_.reserve(rows.size());
  model.values_.reserve(rows.size() * dimension);

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& [raw_term, vec] = rows[i];
    if (vec.size() != dimension) {
      throw Error(ErrorCode::kMalformedModel,
                  "row " + std::to_string(i + 1) + " has " + std::to_string(vec.size()) +
                      " components, expected " + std::to_string(dimension));
    }
    std::string term = normalize_term(raw_term);
    if (seen.contains(term)) {
      model.warnings_.push_back({i + 1, "duplicate term '" + term + "' ignored"});
      continue;
    }
    double norm = std::sqrt(dot(vec, vec));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      model.warnings_.push_back({i + 1, "term '" + term + "' has a zero or non-finite vector"});
      continue;
    }
    for (float v : vec) model.values_.push_back(static_cast<float>(v / norm));
    seen.insert(term);
    model.terms_.push_back(std::move(term));
  }

  model.index_.reserve(model.terms_.size());
  for (std::uint32_t i = 0; i < model.terms_.size(); ++i) {
    model.index_.emplace(model.terms_[i], i);
  }
  return model;
}

std::optional<std::uint32_t> EmbeddingModel::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingModel::vector(std::string_view term) const {
  auto idx = find(term);
  if (!idx) return {};
  return row(*idx);
}

std::optional<double> EmbeddingModel::similarity(std::string_view a, std::string_view b) const {
  auto ia = find(a);
  auto ib = find(b);
  if (!ia || !ib) return std::nullopt;
  return dot(row(*ia), row(*ib));
}

std::vector<Neighbor> EmbeddingModel::top_k(std::string_view query, std::size_t k,
                                            const std::unordered_set<std::string>& exclude) const {
  auto q = find(query);
  if (!q || k == 0) return {};

  std::vector<bool> skip(terms_.size(), false);
  skip[*q] = true;
  for (const auto& term : exclude) {
    if (auto idx = find(term)) skip[*idx] = true;
  }

  struct Entry {
    double score;
    std::uint32_t index;
  };
  // Min-heap on rank: the top is the weakest of the kept entries.
  auto weaker = [this](const Entry& a, const Entry& b) {
    return ranks_before(a.score, terms_[a.index], b.score, terms_[b.index]);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(weaker)> heap(weaker);

  const auto qv = row(*q);
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    if (skip[i]) continue;
    Entry e{dot(qv, row(i)), i};
    if (heap.size() < k) {
      heap.push(e);
    } else if (weaker(e, heap.top())) {
      heap.pop();
      heap.push(e);
    }
  }

  std::vector<Neighbor> out(heap.size());
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    *it = Neighbor{terms_[heap.top().index], heap.top().score};
    heap.pop();
  }
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view field, T& value) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

EmbeddingModel load_model(const std::filesystem::path& path, std::string id) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedModel, path.string() + ": missing header line");
  }
  auto header = split_fields(line);
  std::size_t count = 0;
  std::size_t dimension = 0;
  if (header.size() != 2 || !parse_number(header[0], count) ||
      !parse_number(header[1], dimension) || dimension == 0) {
    throw Error(ErrorCode::kMalformedModel,
                path.string() + ":1: malformed header, expected \"<count> <dimension>\"");
  }

  std::vector<std::pair<std::string, std::vector<float>>> rows;
  rows.reserve(count);
  std::vector<std::size_t> line_of_row;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != dimension + 1) {
      throw Error(ErrorCode::kMalformedModel,
                  path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dimension) + " components, found " +
                      std::to_string(fields.size() - 1));
    }
    std::vector<float> vec(dimension);
    for (std::size_t d = 0; d < dimension; ++d) {
      if (!parse_number(fields[d + 1], vec[d])) {
        throw Error(ErrorCode::kMalformedModel, path.string() + ":" + std::to_string(line_no) +
                                                    ": bad component '" +
                                                    std::string(fields[d + 1]) + "'");
      }
    }
    rows.emplace_back(std::string(fields[0]), std::move(vec));
    line_of_row.push_back(line_no);
  }

  const std::size_t parsed = rows.size();
  EmbeddingModel model = EmbeddingModel::from_rows(std::move(id), dimension, std::move(rows));
  // from_rows numbers rows from 1; map back to file lines.
  for (auto& w : model.warnings_) w.line = line_of_row[w.line - 1];
  if (parsed != count) {
    model.warnings_.push_back({1, "header declares " + std::to_string(count) + " rows, found " +
                                      std::to_string(parsed)});
  }
  return model;
}

}  // namespace vocabx
