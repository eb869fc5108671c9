#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "motionkit/util/json_util.hpp"

namespace motionkit::bench {

enum class Dimension { temporal_quality, frame_quality, consistency, generalizability };

inline constexpr Dimension kAllDimensions[4] = {Dimension::temporal_quality, Dimension::frame_quality,
                                                Dimension::consistency, Dimension::generalizability};

inline std::string dimension_name(Dimension d) {
  switch (d) {
    case Dimension::temporal_quality: return "temporal_quality";
    case Dimension::frame_quality: return "frame_quality";
    case Dimension::consistency: return "consistency";
    case Dimension::generalizability: return "generalizability";
  }
  return "?";
}

inline Dimension parse_dimension(const std::string& s) {
  for (Dimension d : kAllDimensions) {
    if (dimension_name(d) == s) return d;
  }
  throw ParseError("unknown prompt dimension '" + s + "'");
}

// Prompt counts per dimension required of the official suite.
inline std::size_t official_count(Dimension d) { return d == Dimension::temporal_quality ? 150 : 100; }

inline constexpr const char* kOfficialSuiteName = "mbench-official";

struct Prompt {
  std::string id;
  std::string text;
  Dimension dimension = Dimension::consistency;
};

struct PromptSuite {
  std::string name;
  std::vector<Prompt> prompts;

  const Prompt* find(const std::string& id) const {
    for (const auto& p : prompts) {
      if (p.id == id) return &p;
    }
    return nullptr;
  }

  std::map<Dimension, std::size_t> counts() const {
    std::map<Dimension, std::size_t> c;
    for (const auto& p : prompts) ++c[p.dimension];
    return c;
  }

  void validate() const {
    std::set<std::string> ids;
    for (const auto& p : prompts) {
      if (p.id.empty()) throw InvalidArgument("prompt with empty id");
      if (!ids.insert(p.id).second) throw InvalidArgument("duplicate prompt id '" + p.id + "'");
    }
    if (name == kOfficialSuiteName) {
      const auto c = counts();
      for (Dimension d : kAllDimensions) {
        const std::size_t have = c.contains(d) ? c.at(d) : 0;
        if (have != official_count(d)) {
          throw InvalidArgument("official suite needs " + std::to_string(official_count(d)) + " " + dimension_name(d) +
                                " prompts, found " + std::to_string(have));
        }
      }
    }
  }
};

// {"name": string, "prompts": [{"id", "text", "dimension"}]}
inline PromptSuite suite_from_json(const json& j) {
  PromptSuite s;
  try {
    s.name = j.value("name", std::string{});
    for (const json& p : j.at("prompts")) {
      s.prompts.push_back({p.at("id").get<std::string>(), p.at("text").get<std::string>(),
                           parse_dimension(p.at("dimension").get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("prompt suite: ") + e.what());
  }
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("prompt suite: ") + e.what());
  }
  return s;
}

inline PromptSuite read_suite(const std::string& path) {
  try {
    return suite_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace motionkit::bench
