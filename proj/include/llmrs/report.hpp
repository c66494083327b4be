#pragma once

#include <string>

#include "json.hpp"
#include "llmrs/catalog.hpp"
#include "llmrs/engine.hpp"
#include "llmrs/rank.hpp"

namespace llmrs {

/// "$1,999.50"; with `x100` the value is scaled to whole dollars first.
std::string format_money(Money value, bool x100);

/// Shortens to at most 40 bytes plus "..." without splitting a UTF-8 sequence.
std::string truncate_description(const std::string& text);

nlohmann::ordered_json to_json(const Recommendation& rec);
nlohmann::ordered_json to_json(const QueryResult& result);
nlohmann::ordered_json to_json(const ComparisonResult& result);
nlohmann::ordered_json to_json(const CatalogStats& stats);
nlohmann::ordered_json to_json(const CrosstabReport& report);

/// Description / Price / Licenc. Fee / Implem Fee / Main. Fee / Rank Score
/// (or Avg Rating), followed by a status line when nothing was returned.
std::string render_table(const QueryResult& result, bool x100);
std::string render_table(const ComparisonResult& result, bool x100);
std::string render_table(const CatalogStats& stats);
std::string render_table(const CrosstabReport& report);

}  // namespace llmrs
