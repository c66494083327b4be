#include "llmrs/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace llmrs {

using nlohmann::ordered_json;

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

// Column-aligned text table: first column left aligned, others right aligned.
std::string layout(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += pad(row[c], widths[c], c > 0);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

std::string format_money(Money value, bool x100) {
  const double v = x100 ? value * 100.0 : value;
  std::string digits = fixed2(std::abs(v));
  const auto dot = digits.find('.');
  std::string whole = digits.substr(0, dot);
  std::string grouped;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (i > 0 && (whole.size() - i) % 3 == 0) grouped.push_back(',');
    grouped.push_back(whole[i]);
  }
  return (v < 0 ? "-$" : "$") + grouped + digits.substr(dot);
}

std::string truncate_description(const std::string& text) {
  constexpr std::size_t kMax = 40;
  if (text.size() <= kMax) return text;
  std::size_t cut = kMax;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return text.substr(0, cut) + "...";
}

ordered_json to_json(const Recommendation& rec) {
  ordered_json j = {{"product_id", rec.product_id},
                    {"description", rec.description},
                    {"price", rec.price},
                    {"license_fee", rec.license_fee},
                    {"implementation_cost", rec.implementation_cost},
                    {"maintenance_cost", rec.maintenance_cost}};
  if (rec.rank_score) j["rank_score"] = *rec.rank_score;
  if (rec.avg_rating) j["avg_rating"] = *rec.avg_rating;
  j["similarity"] = rec.similarity;
  if (rec.consistent_rating) j["consistent_rating"] = *rec.consistent_rating;
  return j;
}

ordered_json to_json(const QueryResult& result) {
  ordered_json results = ordered_json::array();
  for (const auto& r : result.results) results.push_back(to_json(r));
  return {{"status", to_string(result.status)},
          {"ranker", to_string(result.ranker)},
          {"within_budget", result.within_budget},
          {"preselected", result.preselected},
          {"excluded_unranked", result.excluded_unranked},
          {"results", std::move(results)}};
}

ordered_json to_json(const ComparisonResult& result) {
  return {{"llmrs", to_json(result.llmrs)},
          {"baseline", to_json(result.baseline)},
          {"symmetric_difference", result.symmetric_difference}};
}

ordered_json to_json(const CatalogStats& stats) {
  ordered_json out = ordered_json::object();
  for (std::size_t c = 0; c < CatalogStats::kColumns; ++c) {
    const auto& s = stats.columns[c];
    out[std::string(CatalogStats::kColumnNames[c])] = {{"count", s.count}, {"mean", s.mean}, {"std", s.std},
                                                        {"min", s.min},     {"25%", s.q25},   {"50%", s.q50},
                                                        {"75%", s.q75},     {"max", s.max}};
  }
  return out;
}

ordered_json to_json(const CrosstabReport& report) {
  ordered_json out = ordered_json::object();
  const char* labels[2] = {"positive", "negative"};
  for (int l = 0; l < 2; ++l) {
    ordered_json row = ordered_json::object();
    for (int r = 0; r < 5; ++r) row[std::to_string(r + 1)] = report.counts[l][r];
    out[labels[l]] = std::move(row);
  }
  out["total"] = report.total();
  return out;
}

std::string render_table(const QueryResult& result, bool x100) {
  const bool llmrs = result.ranker == Ranker::kLlmrs;
  std::vector<std::vector<std::string>> rows = {
      {"Description", "Price", "Licenc. Fee", "Implem Fee", "Main. Fee", llmrs ? "Rank Score" : "Avg Rating"}};
  for (const auto& r : result.results) {
    const double key = llmrs ? r.rank_score.value_or(0.0) : r.avg_rating.value_or(0.0);
    rows.push_back({truncate_description(r.description), format_money(r.price, x100),
                    format_money(r.license_fee, x100), format_money(r.implementation_cost, x100),
                    format_money(r.maintenance_cost, x100), fixed2(key)});
  }
  std::string out = layout(rows);
  if (result.status == QueryStatus::kNoProductsWithinBudget) {
    out += "no products within budget\n";
  } else if (result.results.empty()) {
    out += "no ranked candidates\n";
  }
  return out;
}

std::string render_table(const ComparisonResult& result, bool x100) {
  std::string out = "LLMRS\n" + render_table(result.llmrs, x100) + "\nBaseline\n" + render_table(result.baseline, x100);
  out += "\nOnly in one list:";
  if (result.symmetric_difference.empty()) out += " (none)";
  for (const auto& id : result.symmetric_difference) out += " " + id;
  return out + "\n";
}

std::string render_table(const CatalogStats& stats) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {""};
  for (auto name : CatalogStats::kColumnNames) header.emplace_back(name);
  rows.push_back(header);
  const char* names[] = {"Count", "mean", "std", "min", "25%", "50%", "75%", "max"};
  for (int r = 0; r < 8; ++r) {
    std::vector<std::string> row = {names[r]};
    for (const auto& s : stats.columns) {
      const double values[] = {static_cast<double>(s.count), s.mean, s.std, s.min, s.q25, s.q50, s.q75, s.max};
      row.push_back(r == 0 ? std::to_string(s.count) : fixed2(values[r]));
    }
    rows.push_back(row);
  }
  return layout(rows);
}

std::string render_table(const CrosstabReport& report) {
  std::vector<std::vector<std::string>> rows = {{"label", "1", "2", "3", "4", "5"}};
  const char* labels[2] = {"positive", "negative"};
  for (int l = 0; l < 2; ++l) {
    std::vector<std::string> row = {labels[l]};
    for (int r = 0; r < 5; ++r) row.push_back(std::to_string(report.counts[l][r]));
    rows.push_back(row);
  }
  return layout(rows) + "total " + std::to_string(report.total()) + "\n";
}

}  // namespace llmrs
