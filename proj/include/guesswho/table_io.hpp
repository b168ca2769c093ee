#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guesswho/core.hpp"
#include "guesswho/solve_table.hpp"

namespace guesswho {

// Decisions on the wire: 0 for Guess, k for Split(k), [i,j,k] for Split3.
nlohmann::json decision_to_json(const Decision& d);
Decision decision_from_json(const nlohmann::json& j);
nlohmann::json decisions_to_json(const std::vector<Decision>& ds);

/// {"mode","n_max","entries":[{"n","m","p","optimal":[...]}]}
nlohmann::json table_to_json(const SolveTable& table);
SolveTable table_from_json(const nlohmann::json& j);

/// Header "n,m,p,optimal"; optimal decisions space-separated, Split3 as "i:j:k".
std::string table_to_csv(const SolveTable& table);
SolveTable table_from_csv(const std::string& text);

enum class TableFormat { Json, Csv };
TableFormat parse_table_format(std::string_view text);

std::string render_table(const SolveTable& table, TableFormat format);

/// Table cache keyed by mode and n_max. Looks in `dir` for a previously
/// written table, otherwise solves and stores one. Unreadable or stale cache
/// files are ignored and overwritten.
SolveTable cached_solve(Mode mode, int n_max, const std::optional<std::filesystem::path>& dir);

}  // namespace guesswho
