#include "score_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tool_error.hpp"

namespace isomech::tool {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Lines with their 1-based numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0, start = 0;
  while (start <= text.size()) {
    ++number;
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    out.emplace_back(number, text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw ToolError(kParseError, "line " + std::to_string(line) + ": " + msg);
}

double parse_real(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    parse_fail(line, "'" + std::string(field) + "' is not a number");
  }
  if (!std::isfinite(v)) parse_fail(line, "score '" + std::string(field) + "' is not finite");
  return v;
}

long long parse_count(std::string_view field, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || v < 0) {
    parse_fail(line, "'" + std::string(field) + "' is not a reviewer count");
  }
  return v;
}

void add_item(ScoreTable& table, std::unordered_set<std::string>& seen, std::string id,
              std::size_t line) {
  if (id.empty()) parse_fail(line, "empty item_id");
  if (!seen.insert(id).second) {
    throw ToolError(kConsistencyError,
                    "line " + std::to_string(line) + ": duplicate item_id '" + id + "'");
  }
  table.ids.push_back(std::move(id));
}

std::size_t line_at(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

ScoreTable parse_adjust_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(line_at(text, e.byte), "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()) {
    parse_fail(1, "JSON score file needs an 'items' array");
  }
  ScoreTable table;
  std::unordered_set<std::string> seen;
  bool any_count = false;
  std::vector<long long> counts;
  for (std::size_t k = 0; k < doc["items"].size(); ++k) {
    const json& item = doc["items"][k];
    const std::size_t where = k + 1;
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string() ||
        !item.contains("adjusted") || !item["adjusted"].is_number()) {
      throw ToolError(kParseError, "item " + std::to_string(where) +
                                       ": expected string 'id' and numeric 'adjusted'");
    }
    add_item(table, seen, item["id"].get<std::string>(), where);
    table.raw.push_back(item["adjusted"].get<double>());
    if (item.contains("reviewer_count")) {
      any_count = true;
      counts.push_back(item["reviewer_count"].get<long long>());
    } else {
      counts.push_back(0);
    }
  }
  if (any_count) table.reviewer_count = std::move(counts);
  if (table.ids.empty()) parse_fail(1, "no items");
  return table;
}

}  // namespace

std::size_t ScoreTable::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return i;
  }
  return ids.size();
}

ScoreTable parse_scores(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') return parse_adjust_json(text);

  const auto lines = lines_of(text);
  std::size_t k = 0;
  while (k < lines.size() && trim(lines[k].second).empty()) ++k;
  if (k == lines.size()) parse_fail(1, "empty score file");

  const std::size_t header_line = lines[k].first;
  const char delim = lines[k].second.find('\t') != std::string_view::npos ? '\t' : ',';
  const auto header = split(lines[k].second, delim);
  std::size_t id_col = header.size(), raw_col = header.size(), count_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "item_id") id_col = c;
    if (header[c] == "raw_score") raw_col = c;
    if (header[c] == "reviewer_count") count_col = c;
  }
  if (id_col == header.size() || raw_col == header.size()) {
    parse_fail(header_line, "header must name item_id and raw_score columns");
  }
  const bool has_count = count_col != header.size();

  ScoreTable table;
  std::vector<long long> counts;
  std::unordered_set<std::string> seen;
  for (++k; k < lines.size(); ++k) {
    const auto [number, line] = lines[k];
    if (trim(line).empty()) continue;
    const auto fields = split(line, delim);
    if (fields.size() != header.size()) {
      parse_fail(number, "expected " + std::to_string(header.size()) + " fields, found " +
                             std::to_string(fields.size()));
    }
    add_item(table, seen, std::string(fields[id_col]), number);
    table.raw.push_back(parse_real(fields[raw_col], number));
    if (has_count) counts.push_back(parse_count(fields[count_col], number));
  }
  if (table.ids.empty()) parse_fail(header_line, "no data rows");
  if (has_count) table.reviewer_count = std::move(counts);
  return table;
}

ScoreTable read_scores(const std::filesystem::path& path) { return parse_scores(read_file(path)); }

namespace {

std::size_t lookup(const ScoreTable& scores, std::string_view id, std::size_t line,
                   std::vector<bool>& used) {
  if (id.empty()) parse_fail(line, "empty id");
  const std::size_t i = scores.index_of(id);
  if (i == scores.ids.size()) {
    throw ToolError(kConsistencyError, "line " + std::to_string(line) + ": item '" +
                                           std::string(id) + "' is not in the score file");
  }
  if (used[i]) {
    throw ToolError(kConsistencyError, "line " + std::to_string(line) + ": item '" +
                                           std::string(id) + "' appears more than once");
  }
  used[i] = true;
  return i;
}

void require_all(const ScoreTable& scores, const std::vector<bool>& used) {
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) {
      throw ToolError(kConsistencyError,
                      "item '" + scores.ids[i] + "' is missing from the ranking file");
    }
  }
}

bool skip(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

Ranking parse_ranking(std::string_view text, const ScoreTable& scores) {
  std::vector<bool> used(scores.ids.size(), false);
  std::vector<std::size_t> order;
  for (const auto& [number, line] : lines_of(text)) {
    if (skip(line)) continue;
    const auto id = trim(line);
    if (id.find(',') != std::string_view::npos) {
      parse_fail(number, "one id per line expected (comma-separated lines are block files)");
    }
    order.push_back(lookup(scores, id, number, used));
  }
  require_all(scores, used);
  return Ranking(std::move(order));
}

BlockPartition parse_blocks(std::string_view text, const ScoreTable& scores) {
  std::vector<bool> used(scores.ids.size(), false);
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& [number, line] : lines_of(text)) {
    if (skip(line)) continue;
    std::vector<std::size_t> block;
    for (const auto id : split(line, ',')) block.push_back(lookup(scores, id, number, used));
    blocks.push_back(std::move(block));
  }
  require_all(scores, used);
  return BlockPartition(std::move(blocks));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ToolError(kParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::random_device rd;
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ToolError(kParseError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ToolError(kParseError, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ToolError(kParseError, "cannot replace " + path.string());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace isomech::tool
