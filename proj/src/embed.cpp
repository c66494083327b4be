#include "llmrs/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>

#include "atomic_file.hpp"
#include "json.hpp"
#include "llmrs/error.hpp"
#include "llmrs/kernels.hpp"
#include "llmrs/text.hpp"

namespace llmrs {

using nlohmann::json;

namespace {
constexpr std::string_view kFormat = "llmrs-embeddings";
constexpr int kVersion = 1;
constexpr std::size_t kPrecomputeBatch = 256;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ kFallbackHashSeed;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw validation_error("cosine: dimension mismatch " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
  }
  const double na = kernels::l2_norm(a);
  const double nb = kernels::l2_norm(b);
  if (na == 0.0 || nb == 0.0) throw validation_error("cosine: zero vector");
  return std::clamp(kernels::dot(a, b) / (na * nb), -1.0, 1.0);
}

void EmbeddingIndex::add(std::string id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw validation_error("embedding for '" + id + "' has dim " + std::to_string(values.size()) +
                           ", index dim is " + std::to_string(dim_));
  }
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw validation_error("embedding for '" + id + "' has non-finite values");
  }
  const double norm = kernels::l2_norm(values);
  if (norm == 0.0) throw validation_error("embedding for '" + id + "' is all zero");
  const auto row = static_cast<std::uint32_t>(ids_.size());
  if (!rows_.emplace(id, row).second) throw validation_error("duplicate embedding id '" + id + "'");
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), values.begin(), values.end());
  norms_.push_back(norm);
}

std::optional<std::uint32_t> EmbeddingIndex::find(std::string_view id) const {
  auto it = rows_.find(std::string(id));
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

std::vector<Neighbor> top_k_similar(std::span<const double> query, const EmbeddingIndex& index, std::size_t k,
                                    std::optional<std::span<const std::uint32_t>> subset,
                                    const TopKOptions& options) {
  if (k == 0) throw validation_error("top_k_similar: k must be >= 1");
  if (query.size() != index.dim()) {
    throw validation_error("query embedding dim " + std::to_string(query.size()) + " does not match index dim " +
                           std::to_string(index.dim()));
  }
  const double query_norm = kernels::l2_norm(query);
  if (query_norm == 0.0) throw validation_error("top_k_similar: zero query vector");

  std::vector<std::uint32_t> all_rows;
  std::span<const std::uint32_t> rows;
  if (subset) {
    rows = *subset;
  } else {
    all_rows.resize(index.size());
    std::iota(all_rows.begin(), all_rows.end(), 0u);
    rows = all_rows;
  }

  std::vector<double> sims(rows.size());
  const kernels::DenseRows dense{index.data(), index.dim()};
  if (options.parallel) {
    kernels::cosine_scan(query, query_norm, dense, index.norms(), rows, sims);
  } else {
    kernels::serial::cosine_scan(query, query_norm, dense, index.norms(), rows, sims);
  }

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](std::size_t a, std::size_t b) {
    if (sims[a] != sims[b]) return sims[a] > sims[b];
    return index.id(rows[a]) < index.id(rows[b]);
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), better);

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({rows[order[i]], index.id(rows[order[i]]), sims[order[i]]});
  return out;
}

EmbeddingVector fallback_embed(std::string_view text, std::size_t dim) {
  if (dim < 8) throw validation_error("fallback embedding dim must be >= 8");
  EmbeddingVector v{std::vector<double>(dim, 0.0)};
  for (const auto& token : tokenize(text)) {
    const std::uint64_t h = fnv1a(token);
    v.values[h % dim] += (h >> 63) ? -1.0 : 1.0;
  }
  const double norm = kernels::l2_norm(v.values);
  if (norm == 0.0) {
    v.values[0] = 1.0;
    return v;
  }
  for (double& x : v.values) x /= norm;
  return v;
}

FallbackEmbeddingProvider::FallbackEmbeddingProvider(std::size_t dim) : dim_(dim) {
  if (dim < 8) throw provider_error("fallback embedding dim must be >= 8");
}

std::vector<EmbeddingVector> FallbackEmbeddingProvider::embed_batch(std::span<const std::string_view> texts) const {
  std::vector<EmbeddingVector> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) out[i] = fallback_embed(texts[i], dim_);
  return out;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed_batch(std::span<const std::string_view> texts) const {
  const std::size_t batch = std::max<std::size_t>(1, options_.batch_size);
  auto run_batch = [this](std::span<const std::string_view> chunk) {
    json body = {{"texts", json::array()}};
    for (auto t : chunk) body["texts"].push_back(std::string(t));
    json response = post_json_with_retry(options_, body);
    auto vectors = response.find("vectors");
    if (vectors == response.end() || !vectors->is_array() || vectors->size() != chunk.size()) {
      throw provider_error(options_.url + ": response 'vectors' missing or wrong length");
    }
    std::vector<EmbeddingVector> out;
    out.reserve(chunk.size());
    for (const auto& v : *vectors) {
      if (!v.is_array()) throw provider_error(options_.url + ": vector is not an array");
      EmbeddingVector e;
      e.values.reserve(v.size());
      for (const auto& x : v) {
        if (!x.is_number()) throw provider_error(options_.url + ": non-numeric vector component");
        e.values.push_back(x.get<double>());
      }
      out.push_back(std::move(e));
    }
    return out;
  };

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  const std::size_t wave = batch * std::max<std::size_t>(1, options_.max_concurrency);
  for (std::size_t start = 0; start < texts.size(); start += wave) {
    std::vector<std::future<std::vector<EmbeddingVector>>> pending;
    for (std::size_t b = start; b < std::min(texts.size(), start + wave); b += batch) {
      pending.push_back(std::async(std::launch::async, run_batch, texts.subspan(b, std::min(batch, texts.size() - b))));
    }
    for (auto& f : pending) {
      auto part = f.get();
      for (auto& e : part) out.push_back(std::move(e));
    }
  }
  for (const auto& e : out) {
    if (e.dim() != out.front().dim() || e.dim() == 0) throw provider_error(options_.url + ": inconsistent vector dims");
  }
  return out;
}

EmbeddingIndex load_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw missing_store_error("cannot open embedding file " + path.string());
  const std::string name = path.string();
  std::string line;
  if (!std::getline(in, line)) throw validation_error(name + ":1: missing header");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) throw validation_error(name + ":1: header is not a JSON object");
  if (header.value("format", "") != kFormat) throw validation_error(name + ":1: format must be \"llmrs-embeddings\"");
  if (!header.contains("version") || header["version"] != kVersion) {
    throw validation_error(name + ":1: unsupported version");
  }
  if (!header.contains("dim") || !header["dim"].is_number_integer() || header["dim"].get<long long>() <= 0) {
    throw validation_error(name + ":1: dim must be a positive integer");
  }
  if (!header.contains("provider") || !header["provider"].is_string()) {
    throw validation_error(name + ":1: provider must be a string");
  }
  EmbeddingIndex index(header["dim"].get<std::size_t>(), header["provider"].get<std::string>());

  std::size_t lineno = 1;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) throw validation_error(where + ": not a JSON object");
    if (!row.contains("id") || !row["id"].is_string()) throw validation_error(where + ": id must be a string");
    if (!row.contains("vec") || !row["vec"].is_array()) throw validation_error(where + ": vec must be an array");
    values.clear();
    for (const auto& x : row["vec"]) {
      if (!x.is_number()) throw validation_error(where + ": vec holds a non-number");
      values.push_back(x.get<double>());
    }
    try {
      index.add(row["id"].get<std::string>(), values);
    } catch (const Error& e) {
      throw validation_error(where + ": " + e.what());
    }
  }
  return index;
}

namespace {

void write_header(std::ostream& out, std::size_t dim, const std::string& provider) {
  nlohmann::ordered_json header = {{"format", kFormat}, {"version", kVersion}, {"dim", dim}, {"provider", provider}};
  out << header.dump() << '\n';
}

void write_row(std::ostream& out, const std::string& id, std::span<const double> values) {
  nlohmann::ordered_json row = {{"id", id}, {"vec", std::vector<double>(values.begin(), values.end())}};
  out << row.dump() << '\n';
}

}  // namespace

void write_embedding_file(const std::filesystem::path& path, const EmbeddingIndex& index) {
  detail::AtomicFile file(path);
  write_header(file.stream(), index.dim(), index.provider());
  for (std::size_t r = 0; r < index.size(); ++r) write_row(file.stream(), index.id(r), index.row(r));
  file.commit();
}

EmbeddingIndex precompute_embeddings(const Catalog& catalog, const EmbeddingProvider& provider,
                                     const std::filesystem::path& path) {
  std::optional<EmbeddingIndex> index;
  for (std::size_t start = 0; start < catalog.products.size(); start += kPrecomputeBatch) {
    const std::size_t end = std::min(catalog.products.size(), start + kPrecomputeBatch);
    std::vector<std::string_view> texts;
    for (std::size_t i = start; i < end; ++i) texts.push_back(catalog.products[i].description);
    auto vectors = provider.embed_batch(texts);
    if (vectors.size() != texts.size()) throw provider_error(provider.name() + ": wrong number of vectors");
    if (!index) index.emplace(vectors.front().dim(), provider.name());
    for (std::size_t i = start; i < end; ++i) {
      try {
        index->add(catalog.products[i].id, vectors[i - start].values);
      } catch (const Error& e) {
        throw provider_error(provider.name() + ": " + e.what());
      }
    }
  }
  if (!index) {
    // Header-only file; the dim is whatever the provider would produce.
    std::size_t dim = 0;
    if (auto* fallback = dynamic_cast<const FallbackEmbeddingProvider*>(&provider)) dim = fallback->dim();
    else dim = provider.embed("").dim();
    index.emplace(dim, provider.name());
  }
  write_embedding_file(path, *index);
  return std::move(*index);
}

}  // namespace llmrs
