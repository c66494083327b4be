#include "llmrs/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include "json.hpp"
#include "llmrs/error.hpp"

namespace llmrs {

using nlohmann::json;

const Product* Catalog::find(std::string_view id) const {
  auto it = by_id.find(std::string(id));
  return it == by_id.end() ? nullptr : &products[it->second];
}

void Catalog::reindex() {
  by_id.clear();
  by_id.reserve(products.size());
  for (std::size_t i = 0; i < products.size(); ++i) by_id.emplace(products[i].id, i);
}

std::unordered_map<std::string, std::vector<std::size_t>> ReviewStore::by_product() const {
  std::unordered_map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < reviews.size(); ++i) out[reviews[i].product_id].push_back(i);
  return out;
}

std::optional<Money> parse_price(std::string_view raw) {
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (char c : raw) {
    if (c == '$' || c == ',' || c == ' ' || c == '\t') continue;
    cleaned.push_back(c);
  }
  if (cleaned.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = cleaned.data();
  const char* last = first + cleaned.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value) || value < 0.0) return std::nullopt;
  return value;
}

namespace {

// Description arrives either as a string or as a list of fragments.
std::string join_text(const json& field) {
  if (field.is_string()) return field.get<std::string>();
  if (!field.is_array()) return {};
  std::string out;
  for (const auto& part : field) {
    if (!part.is_string()) continue;
    const auto& s = part.get_ref<const std::string&>();
    if (s.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

// Category paths keep only the leaf label.
std::string leaf_category(const json& field) {
  if (field.is_string()) return field.get<std::string>();
  if (!field.is_array()) return {};
  for (auto it = field.rbegin(); it != field.rend(); ++it) {
    if (it->is_string() && !it->get_ref<const std::string&>().empty()) return it->get<std::string>();
  }
  return {};
}

std::string string_or_empty(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it != obj.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

std::optional<json> parse_object(const std::string& line) {
  json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded() || !record.is_object()) return std::nullopt;
  return record;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

IngestResult ingest(std::istream& metadata, std::istream& reviews) {
  IngestResult result;
  IngestCounts& counts = result.counts;

  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(metadata, line)) {
    if (blank(line)) continue;
    ++counts.metadata_records;
    auto record = parse_object(line);
    if (!record) {
      ++counts.metadata_malformed;
      continue;
    }
    auto asin = record->find("asin");
    if (asin == record->end() || !asin->is_string() || asin->get_ref<const std::string&>().empty()) {
      ++counts.metadata_malformed;
      continue;
    }
    std::string id = asin->get<std::string>();
    if (!seen.insert(id).second) {
      ++counts.duplicate_products;
      continue;
    }
    std::optional<Money> price;
    if (auto p = record->find("price"); p != record->end()) {
      if (p->is_string()) {
        price = parse_price(p->get_ref<const std::string&>());
      } else if (p->is_number() && p->get<double>() >= 0.0) {
        price = p->get<double>();
      }
    }
    if (!price) {
      ++counts.price_excluded;
      continue;
    }
    Product product;
    product.id = std::move(id);
    if (auto d = record->find("description"); d != record->end()) product.description = join_text(*d);
    if (auto c = record->find("category"); c != record->end()) product.category = leaf_category(*c);
    product.title = string_or_empty(*record, "title");
    product.brand = string_or_empty(*record, "brand");
    product.price = *price;
    result.catalog.products.push_back(std::move(product));
  }
  if (metadata.bad()) throw io_error("metadata source unreadable");
  result.catalog.reindex();

  // Ordinals count every parseable record carrying the asin, so the scheme
  // can be reproduced without knowing which records the catalog kept.
  std::unordered_map<std::string, std::size_t> ordinals;
  while (std::getline(reviews, line)) {
    if (blank(line)) continue;
    ++counts.review_records;
    auto record = parse_object(line);
    if (!record) {
      ++counts.reviews_malformed;
      continue;
    }
    auto asin = record->find("asin");
    if (asin == record->end() || !asin->is_string() || asin->get_ref<const std::string&>().empty()) {
      ++counts.reviews_malformed;
      continue;
    }
    const std::string product_id = asin->get<std::string>();
    const std::size_t ordinal = ordinals[product_id]++;

    auto overall = record->find("overall");
    if (overall == record->end() || !overall->is_number()) {
      ++counts.reviews_malformed;
      continue;
    }
    const double stars = overall->get<double>();
    if (stars < 1.0 || stars > 5.0 || stars != std::floor(stars)) {
      ++counts.reviews_malformed;
      continue;
    }
    if (!result.catalog.find(product_id)) {
      ++counts.reviews_dropped;
      continue;
    }
    Review review;
    review.review_id = product_id + "#" + std::to_string(ordinal);
    review.product_id = product_id;
    review.text = string_or_empty(*record, "reviewText");
    review.summary = string_or_empty(*record, "summary");
    review.rating = static_cast<int>(stars);
    if (auto v = record->find("verified"); v != record->end() && v->is_boolean()) review.verified = v->get<bool>();
    result.reviews.reviews.push_back(std::move(review));
    ++counts.reviews_linked;
  }
  if (reviews.bad()) throw io_error("reviews source unreadable");

  simulate_costs(result.catalog);
  return result;
}

IngestResult ingest_files(const std::filesystem::path& metadata, const std::filesystem::path& reviews) {
  std::ifstream meta_in(metadata);
  if (!meta_in) throw io_error("cannot open metadata source " + metadata.string());
  std::ifstream reviews_in(reviews);
  if (!reviews_in) throw io_error("cannot open reviews source " + reviews.string());
  return ingest(meta_in, reviews_in);
}

void simulate_costs(Catalog& catalog) {
  std::map<std::string, Money> category_min;
  for (const auto& p : catalog.products) {
    auto [it, inserted] = category_min.emplace(p.category, p.price);
    if (!inserted) it->second = std::min(it->second, p.price);
  }
  for (auto& p : catalog.products) {
    p.license_fee = 0.8 * category_min.at(p.category);
    p.implementation_cost = 0.5 * p.price;
    p.maintenance_cost = 0.01 * p.price;
  }
}

ColumnStats column_stats(std::vector<double> values) {
  ColumnStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
  };
  s.min = values.front();
  s.q25 = quantile(0.25);
  s.q50 = quantile(0.50);
  s.q75 = quantile(0.75);
  s.max = values.back();
  return s;
}

CatalogStats descriptive_stats(const Catalog& catalog) {
  std::vector<double> cols[CatalogStats::kColumns];
  for (const auto& p : catalog.products) {
    if (!p.sentiment) continue;
    cols[0].push_back(p.price);
    cols[1].push_back(p.license_fee);
    cols[2].push_back(p.implementation_cost);
    cols[3].push_back(p.maintenance_cost);
    cols[4].push_back(p.sentiment->positive);
    cols[5].push_back(p.sentiment->negative);
    cols[6].push_back(static_cast<double>(p.sentiment->count));
  }
  if (cols[0].empty()) throw validation_error("descriptive_stats: no products with scored reviews");
  CatalogStats stats;
  for (std::size_t c = 0; c < CatalogStats::kColumns; ++c) stats.columns[c] = column_stats(std::move(cols[c]));
  return stats;
}

}  // namespace llmrs
