#include <gtest/gtest.h>

#include "motionkit/core/perturb.hpp"
#include "motionkit/core/synthetic.hpp"
#include "motionkit/curation/pipeline.hpp"
#include "test_util.hpp"

using namespace motionkit;

namespace {

const Skeleton& skel() {
  static const Skeleton s = standard_skeleton();
  return s;
}

MotionSequence walk_frames(std::size_t n, double fps = 20.0, std::string id = "walk") {
  return synthetic::walk(skel(), {.frames = n, .fps = fps}, std::move(id));
}

MotionSequence static_clip(std::size_t n) {
  Frame f = rest_frame(skel(), {0, 0, standard_rest_root_height()});
  (*f.joint_rotations)[*skel().rotation_slot(*skel().find_joint("left_elbow"))] =
      UnitQuat::from_axis_angle({0, 0, -1}, 1.2);
  return MotionSequence("static", 20.0, skel(), std::vector<Frame>(n, f));
}

// Independent joint positions drawn uniformly in a 1 m box every frame.
MotionSequence white_noise_clip(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto m = synthetic::with_fk_positions(walk_frames(n));
  std::vector<Frame> frames = m.frames();
  for (Frame& f : frames) {
    for (Vec3& p : *f.joint_positions) p = {u(rng), u(rng), 0.9 + u(rng)};
  }
  return m.with_frames(frames);
}

// `lead` rest frames, then a walk, then `tail` rest frames.
MotionSequence padded_walk(std::size_t lead, std::size_t body, std::size_t tail) {
  const auto w = walk_frames(body);
  std::vector<Frame> frames(lead, rest_frame(skel(), w.frame(0).root_translation));
  frames.insert(frames.end(), w.frames().begin(), w.frames().end());
  frames.insert(frames.end(), tail, rest_frame(skel(), w.frames().back().root_translation));
  return MotionSequence("padded", 20.0, skel(), frames);
}

std::vector<std::size_t> sizes(const std::vector<MotionSequence>& clips) {
  std::vector<std::size_t> out;
  for (const auto& c : clips) out.push_back(c.frame_count());
  return out;
}

void write_source_manifest(const TempDir& dir, const std::vector<std::pair<std::string, std::string>>& sources) {
  std::string text;
  for (const auto& [path, kind] : sources) text += json{{"path", path}, {"source_kind", kind}}.dump() + "\n";
  spit(dir / "sources.jsonl", text);
}

}  // namespace

TEST(Segment, WindowsAndRemainder) {
  EXPECT_EQ(sizes(segment(walk_frames(230), 5.0)), (std::vector<std::size_t>{100, 100, 30}));
  EXPECT_EQ(sizes(segment(walk_frames(100), 5.0)), (std::vector<std::size_t>{100}));
  EXPECT_EQ(sizes(segment(walk_frames(99), 5.0)), (std::vector<std::size_t>{99}));
  const auto clips = segment(walk_frames(230), 5.0);
  EXPECT_EQ(clips[1].id(), "walk_001");
  EXPECT_EQ(clips[1].frame(0), walk_frames(230).frame(100));
  EXPECT_THROW(segment(MotionSequence("empty", 20.0, skel(), {}), 5.0), InvalidArgument);
}

TEST(Segment, WindowRoundsClipLengthTimesFps) {
  EXPECT_EQ(clip_window(5.0, 20.0), 100u);
  EXPECT_EQ(clip_window(5.0, 30.0), 150u);
  EXPECT_EQ(clip_window(0.99, 10.0), 10u);
  EXPECT_THROW(clip_window(0.01, 20.0), InvalidArgument);
}

TEST(FilterLength, BoundaryArithmetic) {
  const auto out = filter_length({walk_frames(30), walk_frames(61), walk_frames(100), walk_frames(60)}, 3.0);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].drop_reason, std::optional<std::string>("too_short"));  // 1.45 s
  EXPECT_TRUE(out[1].kept());                                              // exactly 3.0 s
  EXPECT_TRUE(out[2].kept());
  EXPECT_EQ(out[3].drop_reason, std::optional<std::string>("too_short"));  // 2.95 s
}

TEST(TrimTPose, LeadingTrailingAndInterior) {
  const auto lead = trim_tpose(padded_walk(10, 50, 0), 0.05);
  ASSERT_TRUE(lead);
  EXPECT_EQ(lead->frame_count(), 50u);
  EXPECT_EQ(lead->frame(0), walk_frames(50).frame(0));

  const auto both = trim_tpose(padded_walk(4, 30, 6), 0.05);
  ASSERT_TRUE(both);
  EXPECT_EQ(both->frame_count(), 30u);

  const auto plain = walk_frames(40);
  EXPECT_EQ(*trim_tpose(plain, 0.05), plain);

  // Rest frames in the middle stay.
  auto frames = walk_frames(20).frames();
  const auto rest = std::vector<Frame>(8, rest_frame(skel(), frames[10].root_translation));
  frames.insert(frames.begin() + 10, rest.begin(), rest.end());
  const MotionSequence interior("interior", 20.0, skel(), frames);
  EXPECT_EQ(trim_tpose(interior, 0.05)->frame_count(), 28u);

  const MotionSequence all("all", 20.0, skel(), std::vector<Frame>(12, rest_frame(skel())));
  EXPECT_FALSE(trim_tpose(all, 0.05).has_value());
}

TEST(TrimTPose, DetectorUsesMeanGeodesicAngle) {
  Frame f = rest_frame(skel());
  EXPECT_EQ(rest_pose_distance(f), 0.0);
  (*f.joint_rotations)[0] = UnitQuat::from_axis_angle({0, 1, 0}, 0.21 * 2);
  EXPECT_NEAR(rest_pose_distance(f), 0.02, 1e-12);
  EXPECT_TRUE(is_tpose_frame(f, 0.05));
  EXPECT_FALSE(is_tpose_frame(f, 0.01));
  // Global root orientation does not count.
  f = rest_frame(skel());
  f.root_orientation = UnitQuat::from_axis_angle({0, 0, 1}, 2.0);
  EXPECT_TRUE(is_tpose_frame(f, 0.05));
}

TEST(QualityFilter, StaticWalkAndNoise) {
  FilterConfig cfg;
  cfg.min_dynamic = 0.01;
  const auto out = quality_filter({static_clip(100), walk_frames(100), white_noise_clip(100, 3)}, cfg);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].drop_reason, std::optional<std::string>("static"));
  EXPECT_TRUE(out[1].kept());
  EXPECT_EQ(out[2].drop_reason, std::optional<std::string>("jitter"));
  for (const auto& o : out) {
    ASSERT_TRUE(o.report);
    EXPECT_TRUE(o.report->jitter_degree && o.report->dynamic_degree);
  }
  EXPECT_GT(*out[2].report->jitter_degree, 10 * cfg.max_jitter);
  EXPECT_LT(*out[1].report->jitter_degree, cfg.max_jitter);
}

TEST(FilterConfig, ValidationAndJson) {
  FilterConfig c;
  EXPECT_NO_THROW(c.validate());
  c.min_len_s = 6.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.target_fps = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);

  FilterConfig d;
  d.max_jitter = 12.5;
  d.thresholds.contact_height = 0.04;
  const auto round = filter_config_from_json(json::parse(filter_config_to_json(d).dump()));
  EXPECT_EQ(round, d);
  EXPECT_THROW(filter_config_from_json(json{{"clip_len", 5.0}}), ParseError);
  EXPECT_THROW(filter_config_from_json(json{{"clip_len_s", "five"}}), ParseError);
}

TEST(Manifest, SourceEntryDefaults) {
  const auto v = source_entry_from_json(json{{"path", "a.json"}, {"source_kind", "video"}}, "/data");
  EXPECT_FALSE(v.trust_global);
  EXPECT_EQ(v.resolved, "/data/a.json");
  EXPECT_TRUE(source_entry_from_json(json{{"path", "/abs/b.json"}}, "/data").trust_global);
  EXPECT_EQ(source_entry_from_json(json{{"path", "/abs/b.json"}}, "/data").resolved, "/abs/b.json");
  EXPECT_THROW(source_entry_from_json(json{{"path", "a"}, {"source_kind", "film"}}), ParseError);
  EXPECT_THROW(source_entry_from_json(json{{"file", "a"}}), ParseError);
}

TEST(Manifest, ClipEntryRoundTrip) {
  ClipEntry e;
  e.clip_id = "walk_001";
  e.source_file = "walk.json";
  e.source_kind = SourceKind::video;
  e.trust_global = false;
  e.frame_range = {100, 200};
  e.fps = 20.0;
  e.drop_reason = "jitter";
  e.metric_summary = MetricReport{"walk_001", 50.0, 1.0, {}, {}, {}, {}, {}, {}, {}};
  const auto j = clip_entry_to_json(e);
  EXPECT_EQ(j["status"], "dropped");
  EXPECT_EQ(j["reason"], "jitter");
  const ClipEntry back = clip_entry_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.drop_reason, e.drop_reason);
  EXPECT_EQ(back.frame_range, e.frame_range);
  EXPECT_EQ(back.metric_summary->jitter_degree, 50.0);
}

TEST(Pipeline, TwoHundredThirtyFrameFixture) {
  TempDir dir("pipe230");
  write_motion(dir / "walk230.json", walk_frames(230));
  write_source_manifest(dir, {{"walk230.json", "mocap"}});
  const auto result = run_pipeline(read_source_manifest(dir / "sources.jsonl"), {});
  const auto entries = result.entries();
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_TRUE(entries[0].kept());
  EXPECT_TRUE(entries[1].kept());
  EXPECT_EQ(entries[2].drop_reason, std::optional<std::string>("too_short"));
  EXPECT_EQ(entries[0].frame_range, (FrameRange{0, 100}));
  EXPECT_EQ(entries[1].frame_range, (FrameRange{100, 200}));
  EXPECT_EQ(entries[2].frame_range, (FrameRange{200, 230}));
  const auto s = summarize(entries);
  EXPECT_EQ(s.kept, 2u);
  EXPECT_EQ(s.dropped_by_reason.at("too_short"), 1u);
}

TEST(Pipeline, ResamplesSixteenFpsSources) {
  TempDir dir("pipe16");
  write_motion(dir / "w16.json", walk_frames(81, 16.0));
  write_source_manifest(dir, {{"w16.json", "mocap"}});
  const auto entries = run_pipeline(read_source_manifest(dir / "sources.jsonl"), {}).entries();
  // 101 frames at 20 fps: one full window plus a one-frame remainder.
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].frame_range, (FrameRange{0, 100}));
  EXPECT_EQ(entries[0].fps, 20.0);
  EXPECT_TRUE(entries[0].kept());
  EXPECT_EQ(entries[1].frame_range, (FrameRange{100, 101}));
  EXPECT_EQ(entries[1].drop_reason, std::optional<std::string>("too_short"));
}

TEST(Pipeline, DropReasonsAndContinuation) {
  TempDir dir("reasons");
  write_motion(dir / "b_walk.json", walk_frames(120));
  write_motion(dir / "c_rest.json", MotionSequence("rest", 20.0, skel(), std::vector<Frame>(80, rest_frame(skel()))));
  write_motion(dir / "d_static.json", static_clip(100));
  write_motion(dir / "e_noise.json", white_noise_clip(100, 9));
  spit(dir / "a_broken.json", "{not json");
  write_source_manifest(dir, {{"e_noise.json", "mocap"},
                              {"d_static.json", "synthetic"},
                              {"c_rest.json", "mocap"},
                              {"b_walk.json", "video"},
                              {"a_broken.json", "mocap"},
                              {"missing.json", "mocap"}});
  const auto entries = run_pipeline(read_source_manifest(dir / "sources.jsonl"), {}).entries();
  std::vector<std::string> got;
  for (const auto& e : entries) got.push_back(e.source_file + ":" + (e.kept() ? "kept" : *e.drop_reason));
  EXPECT_EQ(got, (std::vector<std::string>{"a_broken.json:parse_error", "b_walk.json:kept", "b_walk.json:too_short",
                                            "c_rest.json:all_tpose", "d_static.json:static",
                                            "e_noise.json:jitter", "missing.json:parse_error"}));
  EXPECT_FALSE(entries[1].trust_global);  // video
  EXPECT_TRUE(entries[1].metric_summary.has_value());
  EXPECT_FALSE(entries[2].metric_summary.has_value());
}

TEST(Pipeline, BoundaryInsideInteriorRestIsTrimmedPerClip) {
  // Rest stretch straddling the first window boundary.
  auto frames = walk_frames(95).frames();
  const auto rest = std::vector<Frame>(20, rest_frame(skel(), frames.back().root_translation));
  frames.insert(frames.end(), rest.begin(), rest.end());
  const auto tail = walk_frames(90, 20.0).frames();
  for (Frame f : tail) {
    f.root_translation += frames.back().root_translation;
    frames.push_back(f);
  }
  TempDir dir("interior");
  write_motion(dir / "m.json", MotionSequence("m", 20.0, skel(), frames));
  write_source_manifest(dir, {{"m.json", "mocap"}});
  const auto entries = run_pipeline(read_source_manifest(dir / "sources.jsonl"), {}).entries();
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].frame_range, (FrameRange{0, 95}));
  EXPECT_EQ(entries[1].frame_range, (FrameRange{115, 200}));
  EXPECT_TRUE(entries[0].kept() && entries[1].kept());
}

class PipelineProperties : public ::testing::Test {
 protected:
  void SetUp() override {
    for (int i = 0; i < 6; ++i) {
      synthetic::WalkParams p{.frames = 150 + 40 * static_cast<std::size_t>(i), .speed = 0.8 + 0.1 * i,
                              .cadence_hz = 0.8 + 0.1 * i, .heading_rad = 0.7 * i};
      write_motion(dir_ / ("walk" + std::to_string(i) + ".json"), synthetic::walk(skel(), p, "w"));
      sources_.push_back({"walk" + std::to_string(i) + ".json", i % 2 ? "video" : "mocap"});
    }
    write_motion(dir_ / "padded.json", padded_walk(12, 210, 9));
    sources_.push_back({"padded.json", "synthetic"});
    write_motion(dir_ / "noise.json", white_noise_clip(140, 2));
    sources_.push_back({"noise.json", "mocap"});
    write_source_manifest(dir_, sources_);
  }

  TempDir dir_{"props"};
  std::vector<std::pair<std::string, std::string>> sources_;
};

TEST_F(PipelineProperties, KeptRangesDisjointSortedAndCountsAddUp) {
  const auto entries = run_pipeline(read_source_manifest(dir_ / "sources.jsonl"), {}).entries();
  std::map<std::string, std::vector<FrameRange>> kept;
  std::size_t n_kept = 0, n_dropped = 0;
  for (const auto& e : entries) {
    if (e.kept()) {
      kept[e.source_file].push_back(e.frame_range);
      ++n_kept;
    } else {
      ASSERT_FALSE(e.drop_reason->empty());
      ++n_dropped;
    }
  }
  for (const auto& [src, ranges] : kept) {
    for (std::size_t i = 1; i < ranges.size(); ++i) EXPECT_LE(ranges[i - 1].end, ranges[i].begin) << src;
  }
  const auto s = summarize(entries);
  EXPECT_EQ(s.kept, n_kept);
  EXPECT_EQ(s.dropped(), n_dropped);
  EXPECT_EQ(s.kept + s.dropped(), entries.size());
  EXPECT_GT(n_kept, 5u);
}

TEST_F(PipelineProperties, ByteIdenticalAcrossRunsAndJobs) {
  const auto sources = read_source_manifest(dir_ / "sources.jsonl");
  TempDir a("out-a"), b("out-b");
  write_curation(a.path(), run_pipeline(sources, {}, 1), ordered_json{{"config", filter_config_to_json({})}});
  write_curation(b.path(), run_pipeline(sources, {}, 8), ordered_json{{"config", filter_config_to_json({})}});
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), a.path());
    EXPECT_EQ(slurp(entry.path()), slurp(b.path() / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 5u);
}

TEST_F(PipelineProperties, FixedPointOnKeptOutput) {
  TempDir out("fixed");
  const auto first = run_pipeline(read_source_manifest(dir_ / "sources.jsonl"), {});
  write_curation(out.path(), first, ordered_json{{"config", filter_config_to_json({})}});
  const auto second = run_pipeline(read_source_manifest(out / "kept_sources.jsonl"), {}).entries();
  EXPECT_EQ(second.size(), summarize(first.entries()).kept);
  for (const auto& e : second) EXPECT_TRUE(e.kept()) << e.clip_id << ": " << e.drop_reason.value_or("");
}

TEST(Pipeline, WritesSummaryWithConfig) {
  TempDir dir("summary");
  write_motion(dir / "walk230.json", walk_frames(230));
  write_source_manifest(dir, {{"walk230.json", "mocap"}});
  TempDir out("summary-out");
  write_curation(out.path(), run_pipeline(read_source_manifest(dir / "sources.jsonl"), {}), ordered_json{{"config", filter_config_to_json({})}});
  const json s = json::parse(slurp(out.path() / "summary.json"));
  EXPECT_EQ(s["kept"], 2);
  EXPECT_EQ(s["dropped_by_reason"]["too_short"], 1);
  EXPECT_EQ(s["config"]["clip_len_s"], 5.0);
  const auto rows = parse_jsonl(slurp(out.path() / "manifest.jsonl"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["clip_path"], "clips/walk230_000.json");
  EXPECT_EQ(read_motion(out / "clips/walk230_000.json").frame_count(), 100u);
}
