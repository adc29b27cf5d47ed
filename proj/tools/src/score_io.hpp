#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isomech/mechanism.hpp"

namespace isomech::tool {

struct ScoreTable {
  std::vector<std::string> ids;  // input order
  std::vector<double> raw;
  std::optional<std::vector<long long>> reviewer_count;

  std::size_t index_of(std::string_view id) const;  // ids.size() if absent
};

// Delimiter-separated text with a header row naming item_id and raw_score
// (reviewer_count optional, other columns ignored). Tab-delimited if the
// header contains a tab, else comma. A file whose first non-blank character
// is '{' is read as the JSON written by `adjust`, taking `adjusted` as the
// raw score.
ScoreTable parse_scores(std::string_view text);
ScoreTable read_scores(const std::filesystem::path& path);

// One id per line, best first. Blank lines and lines starting with '#' are
// skipped.
Ranking parse_ranking(std::string_view text, const ScoreTable& scores);
// One block per line, ids separated by commas, earliest line = top block.
BlockPartition parse_blocks(std::string_view text, const ScoreTable& scores);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace isomech::tool
