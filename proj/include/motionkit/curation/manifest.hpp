#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "motionkit/curation/stages.hpp"
#include "motionkit/util/json_util.hpp"

namespace motionkit {

enum class SourceKind { mocap, video, synthetic };

inline std::string source_kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::mocap: return "mocap";
    case SourceKind::video: return "video";
    case SourceKind::synthetic: return "synthetic";
  }
  return "unknown";
}

inline SourceKind parse_source_kind(const std::string& s) {
  if (s == "mocap") return SourceKind::mocap;
  if (s == "video") return SourceKind::video;
  if (s == "synthetic") return SourceKind::synthetic;
  throw ParseError("unknown source_kind '" + s + "'");
}

// One line of the input manifest.
struct SourceEntry {
  std::string path;      // as written in the manifest
  std::string resolved;  // relative paths resolved against the manifest directory
  SourceKind kind = SourceKind::mocap;
  bool trust_global = true;
  std::optional<std::string> caption;
};

// trust_global defaults to false for video-derived sources, whose global
// trajectories are estimates.
inline SourceEntry source_entry_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object() || !j.contains("path") || !j.at("path").is_string()) {
    throw ParseError("source manifest line needs a string \"path\"");
  }
  SourceEntry e;
  e.path = j.at("path").get<std::string>();
  const std::filesystem::path p(e.path);
  e.resolved = (p.is_absolute() || base_dir.empty()) ? p.string() : (base_dir / p).lexically_normal().string();
  try {
    if (j.contains("source_kind")) e.kind = parse_source_kind(j.at("source_kind").get<std::string>());
    e.trust_global = j.value("trust_global", e.kind != SourceKind::video);
    if (j.contains("caption")) e.caption = j.at("caption").get<std::string>();
  } catch (const json::exception& ex) {
    throw ParseError(std::string("source manifest: ") + ex.what());
  }
  return e;
}

inline ordered_json source_entry_to_json(const SourceEntry& e) {
  ordered_json j;
  j["path"] = e.path;
  j["source_kind"] = source_kind_name(e.kind);
  j["trust_global"] = e.trust_global;
  if (e.caption) j["caption"] = *e.caption;
  return j;
}

inline std::vector<SourceEntry> read_source_manifest(const std::string& path) {
  const auto base = std::filesystem::path(path).parent_path();
  std::vector<SourceEntry> out;
  for (const json& row : read_jsonl_file(path)) {
    try {
      out.push_back(source_entry_from_json(row, base));
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return out;
}

struct ClipEntry {
  std::string clip_id;
  std::string source_file;
  SourceKind source_kind = SourceKind::mocap;
  bool trust_global = true;
  FrameRange frame_range;  // indices into the source after resampling to the target fps
  double fps = 0.0;
  std::optional<std::string> drop_reason;  // empty = kept
  std::optional<MetricReport> metric_summary;
  std::optional<std::string> clip_path;  // kept clips, relative to the output directory
  std::optional<std::string> caption;

  bool kept() const { return !drop_reason.has_value(); }
};

inline ordered_json clip_entry_to_json(const ClipEntry& e) {
  ordered_json j;
  j["clip_id"] = e.clip_id;
  j["source_file"] = e.source_file;
  j["source_kind"] = source_kind_name(e.source_kind);
  j["trust_global"] = e.trust_global;
  j["frame_range"] = {e.frame_range.begin, e.frame_range.end};
  j["fps"] = e.fps;
  j["status"] = e.kept() ? "kept" : "dropped";
  if (e.drop_reason) j["reason"] = *e.drop_reason;
  if (e.metric_summary) j["metric_summary"] = report_to_json(*e.metric_summary, false);
  if (e.clip_path) j["clip_path"] = *e.clip_path;
  if (e.caption) j["caption"] = *e.caption;
  return j;
}

inline ClipEntry clip_entry_from_json(const json& j) {
  try {
    ClipEntry e;
    e.clip_id = j.at("clip_id").get<std::string>();
    e.source_file = j.at("source_file").get<std::string>();
    e.source_kind = parse_source_kind(j.at("source_kind").get<std::string>());
    e.trust_global = j.at("trust_global").get<bool>();
    e.frame_range = {j.at("frame_range").at(0).get<std::size_t>(), j.at("frame_range").at(1).get<std::size_t>()};
    e.fps = j.at("fps").get<double>();
    const std::string status = j.at("status").get<std::string>();
    if (status == "dropped") {
      e.drop_reason = j.at("reason").get<std::string>();
    } else if (status != "kept") {
      throw ParseError("unknown clip status '" + status + "'");
    }
    if (j.contains("metric_summary")) e.metric_summary = report_from_json(j.at("metric_summary"));
    if (j.contains("clip_path")) e.clip_path = j.at("clip_path").get<std::string>();
    if (j.contains("caption")) e.caption = j.at("caption").get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("clip manifest: ") + ex.what());
  }
}

struct CurationSummary {
  std::size_t kept = 0;
  std::map<std::string, std::size_t> dropped_by_reason;

  std::size_t dropped() const {
    std::size_t n = 0;
    for (const auto& [_, c] : dropped_by_reason) n += c;
    return n;
  }
};

inline CurationSummary summarize(const std::vector<ClipEntry>& entries) {
  CurationSummary s;
  for (const ClipEntry& e : entries) {
    if (e.kept()) {
      ++s.kept;
    } else {
      ++s.dropped_by_reason[*e.drop_reason];
    }
  }
  return s;
}

inline ordered_json summary_to_json(const CurationSummary& s) {
  ordered_json j;
  j["total_clips"] = s.kept + s.dropped();
  j["kept"] = s.kept;
  j["dropped"] = s.dropped();
  ordered_json by = ordered_json::object();
  for (const auto& [r, c] : s.dropped_by_reason) by[r] = c;
  j["dropped_by_reason"] = std::move(by);
  return j;
}

}  // namespace motionkit
