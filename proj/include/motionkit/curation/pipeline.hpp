#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "motionkit/core/canonicalize.hpp"
#include "motionkit/core/motion_io.hpp"
#include "motionkit/core/resample.hpp"
#include "motionkit/core/smooth.hpp"
#include "motionkit/curation/manifest.hpp"
#include "motionkit/util/parallel.hpp"

namespace motionkit {

struct CuratedClip {
  ClipEntry entry;
  std::optional<MotionSequence> motion;  // set for kept clips
};

struct CurationResult {
  std::vector<CuratedClip> clips;  // ordered by source path, then clip index

  std::vector<ClipEntry> entries() const {
    std::vector<ClipEntry> out;
    for (const auto& c : clips) out.push_back(c.entry);
    return out;
  }
};

namespace detail {

inline ClipEntry base_entry(const SourceEntry& src, const std::string& clip_id, FrameRange range, double fps) {
  ClipEntry e;
  e.clip_id = clip_id;
  e.source_file = src.path;
  e.source_kind = src.kind;
  e.trust_global = src.trust_global;
  e.frame_range = range;
  e.fps = fps;
  e.caption = src.caption;
  return e;
}

inline CuratedClip dropped(ClipEntry e, const char* why) {
  e.drop_reason = why;
  return {std::move(e), std::nullopt};
}

}  // namespace detail

// resample -> (video smoothing) -> canonicalize -> trim T-pose -> segment ->
// per-clip T-pose trim -> length filter -> quality filter.
inline std::vector<CuratedClip> curate_source(const SourceEntry& src, const std::string& base_id, const FilterConfig& cfg) {
  const double fps = cfg.target_fps;
  MotionSequence raw;
  try {
    raw = read_motion(src.resolved);
  } catch (const std::exception&) {
    return {detail::dropped(detail::base_entry(src, clip_name(base_id, 0), {0, 0}, fps), reason::parse_error)};
  }
  if (raw.frame_count() < 2) {
    return {detail::dropped(detail::base_entry(src, clip_name(base_id, 0), {0, raw.frame_count()}, fps), reason::too_short)};
  }

  MotionSequence m;
  try {
    m = resample(raw, fps);
    if (src.kind == SourceKind::video && cfg.video_smooth_sigma > 0.0) m = gaussian_smooth(m, cfg.video_smooth_sigma);
    m = canonicalize(m);
  } catch (const Error&) {
    return {detail::dropped(detail::base_entry(src, clip_name(base_id, 0), {0, raw.frame_count()}, fps), reason::invalid_motion)};
  }

  const FrameRange body = tpose_trim_range(m, cfg.tpose_angle_eps);
  if (body.size() == 0) {
    return {detail::dropped(detail::base_entry(src, clip_name(base_id, 0), {0, m.frame_count()}, fps), reason::all_tpose)};
  }

  std::vector<CuratedClip> out;
  const auto windows = segment_ranges(body.size(), clip_window(cfg.clip_len_s, fps));
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const std::string id = clip_name(base_id, i);
    FrameRange r{body.begin + windows[i].begin, body.begin + windows[i].end};
    // A window boundary can land inside an interior T-pose stretch.
    const FrameRange inner = tpose_trim_range(m.slice(r.begin, r.end, id), cfg.tpose_angle_eps);
    if (inner.size() == 0) {
      out.push_back(detail::dropped(detail::base_entry(src, id, r, fps), reason::all_tpose));
      continue;
    }
    r = {r.begin + inner.begin, r.begin + inner.end};
    ClipEntry e = detail::base_entry(src, id, r, fps);
    MotionSequence clip = m.slice(r.begin, r.end, id);
    if (!long_enough(clip, cfg.min_len_s)) {
      out.push_back(detail::dropped(std::move(e), reason::too_short));
      continue;
    }
    e.metric_summary = summarize_clip(clip, cfg);
    e.drop_reason = quality_verdict(*e.metric_summary, cfg);
    if (e.kept()) {
      e.clip_path = "clips/" + id + ".json";
      out.push_back({std::move(e), std::move(clip)});
    } else {
      out.push_back({std::move(e), std::nullopt});
    }
  }
  return out;
}

// Clip ids derive from the source file stem; sources sharing a stem get
// their position in path order appended.
inline std::vector<std::string> source_base_ids(const std::vector<SourceEntry>& sorted) {
  std::map<std::string, std::size_t> stem_count;
  std::vector<std::string> stems;
  for (const auto& s : sorted) {
    stems.push_back(std::filesystem::path(s.path).stem().string());
    ++stem_count[stems.back()];
  }
  for (std::size_t i = 0; i < stems.size(); ++i) {
    if (stem_count[stems[i]] > 1) stems[i] += "-s" + std::to_string(i);
  }
  return stems;
}

inline CurationResult run_pipeline(std::vector<SourceEntry> sources, const FilterConfig& cfg, std::size_t jobs = 1) {
  cfg.validate();
  std::stable_sort(sources.begin(), sources.end(), [](const SourceEntry& a, const SourceEntry& b) { return a.path < b.path; });
  const auto ids = source_base_ids(sources);
  auto per_source = parallel_map(sources.size(), jobs, [&](std::size_t i) { return curate_source(sources[i], ids[i], cfg); });
  CurationResult result;
  for (auto& clips : per_source) {
    for (auto& c : clips) result.clips.push_back(std::move(c));
  }
  return result;
}

// Writes manifest.jsonl, summary.json, clips/<id>.json and
// kept_sources.jsonl (an input manifest over the kept clips) under out_dir.
// Keys of `provenance` (typically the resolved config) are copied into summary.json.
inline void write_curation(const std::filesystem::path& out_dir, const CurationResult& result, const ordered_json& provenance) {
  std::filesystem::create_directories(out_dir / "clips");
  std::vector<ordered_json> manifest, kept_sources;
  for (const CuratedClip& c : result.clips) {
    manifest.push_back(clip_entry_to_json(c.entry));
    if (c.motion) {
      write_motion((out_dir / *c.entry.clip_path).string(), *c.motion);
      SourceEntry s{*c.entry.clip_path, {}, c.entry.source_kind, c.entry.trust_global, c.entry.caption};
      kept_sources.push_back(source_entry_to_json(s));
    }
  }
  write_text_file((out_dir / "manifest.jsonl").string(), to_jsonl(manifest));
  write_text_file((out_dir / "kept_sources.jsonl").string(), to_jsonl(kept_sources));
  ordered_json summary = summary_to_json(summarize(result.entries()));
  for (const auto& [k, v] : provenance.items()) summary[k] = v;
  write_text_file((out_dir / "summary.json").string(), summary.dump(2) + "\n");
}

}  // namespace motionkit
