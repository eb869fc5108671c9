#pragma once

#include <boost/tokenizer.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "motionkit/benchmark/pairwise.hpp"

namespace motionkit::bench {

// Rows of a headed CSV as column-name -> value maps. Quoted fields follow
// the usual escaping rules; blank lines are skipped.
inline std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text, const std::string& origin) {
  using Tok = boost::tokenizer<boost::escaped_list_separator<char>>;
  const boost::escaped_list_separator<char> sep('\\', ',', '"');
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    try {
      Tok tok(line, sep);
      cells.assign(tok.begin(), tok.end());
    } catch (const boost::escaped_list_error& e) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
    for (auto& c : cells) {
      const auto b = c.find_first_not_of(" \t"), e = c.find_last_not_of(" \t");
      c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
    }
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size()) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                       " columns, found " + std::to_string(cells.size()));
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {
inline const std::string& column(const std::map<std::string, std::string>& row, const char* name, const std::string& origin) {
  const auto it = row.find(name);
  if (it == row.end()) throw ParseError(origin + ": missing column '" + name + "'");
  return it->second;
}
}  // namespace detail

// Columns prompt_id, model_a, model_b, outcome (a | b | tie).
inline std::vector<PairwiseComparison> parse_pairwise_csv(const std::string& text, const std::string& origin = "<csv>") {
  std::vector<PairwiseComparison> out;
  for (const auto& row : parse_csv(text, origin)) {
    PairwiseComparison c{detail::column(row, "prompt_id", origin), detail::column(row, "model_a", origin),
                         detail::column(row, "model_b", origin), parse_outcome(detail::column(row, "outcome", origin))};
    if (c.model_a == c.model_b) throw ParseError(origin + ": comparison of a model with itself");
    out.push_back(std::move(c));
  }
  return out;
}

// Columns prompt_id, model, video_idx, rating (0 | 1 | 2). Ratings for the
// same (prompt_id, model) are averaged regardless of video_idx.
inline SingleRatings parse_singles_csv(const std::string& text, const std::string& origin = "<csv>") {
  SingleRatings s;
  for (const auto& row : parse_csv(text, origin)) {
    detail::column(row, "video_idx", origin);
    const std::string& r = detail::column(row, "rating", origin);
    if (r != "0" && r != "1" && r != "2") throw ParseError(origin + ": rating must be 0, 1 or 2 (got '" + r + "')");
    s.add(detail::column(row, "prompt_id", origin), detail::column(row, "model", origin), r[0] - '0');
  }
  return s;
}

}  // namespace motionkit::bench
