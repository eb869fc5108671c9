#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "motionkit/core/motion.hpp"
#include "motionkit/util/json_util.hpp"

namespace motionkit {

// JSON motion files:
// {"id", "fps", "skeleton": {"joints", "parents", "rest_offsets", "foot_joints",
//  "capsule_radii"}, "frames": [{"root_t", "root_q", "joint_q", "joint_pos"?}]}
// Quaternions are [w, x, y, z]. Stored quaternions may deviate from unit norm
// by at most kQuatNormTolerance and are renormalized on load.
inline constexpr double kQuatNormTolerance = 1e-3;

namespace detail {

inline double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(where + ": NaN or Inf value");
  return d;
}

inline Vec3 parse_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw ParseError(where + ": expected [x, y, z]");
  return {finite_number(v[0], where), finite_number(v[1], where), finite_number(v[2], where)};
}

inline UnitQuat parse_quat(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) throw ParseError(where + ": expected [w, x, y, z]");
  const double w = finite_number(v[0], where), x = finite_number(v[1], where),
               y = finite_number(v[2], where), z = finite_number(v[3], where);
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (std::abs(n - 1.0) > kQuatNormTolerance) {
    throw ParseError(where + ": non-unit quaternion (norm " + std::to_string(n) + ")");
  }
  return UnitQuat::normalized(w, x, y, z);
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

inline json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
inline json quat_json(const UnitQuat& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

}  // namespace detail

inline Skeleton skeleton_from_json(const json& s) {
  using namespace detail;
  const std::string where = "skeleton";
  try {
    std::vector<std::string> names = require(s, "joints", where).get<std::vector<std::string>>();
    std::vector<int> parents = require(s, "parents", where).get<std::vector<int>>();
    std::vector<Vec3> offsets;
    const json& off = require(s, "rest_offsets", where);
    if (!off.is_array()) throw ParseError(where + ": rest_offsets must be an array");
    for (std::size_t j = 0; j < off.size(); ++j) offsets.push_back(parse_vec3(off[j], where + ".rest_offsets[" + std::to_string(j) + "]"));
    std::set<int> feet;
    if (s.contains("foot_joints")) {
      for (int f : s.at("foot_joints").get<std::vector<int>>()) feet.insert(f);
    }
    std::vector<double> radii;
    if (s.contains("capsule_radii")) {
      const json& r = s.at("capsule_radii");
      for (std::size_t b = 0; b < r.size(); ++b) radii.push_back(finite_number(r[b], where + ".capsule_radii"));
    }
    return Skeleton(std::move(names), std::move(parents), std::move(offsets), std::move(feet), std::move(radii));
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline json skeleton_to_json(const Skeleton& s) {
  json offsets = json::array();
  for (const Vec3& v : s.rest_offsets()) offsets.push_back(detail::vec3_json(v));
  return json{{"joints", s.joint_names()},
              {"parents", s.parents()},
              {"rest_offsets", std::move(offsets)},
              {"foot_joints", std::vector<int>(s.foot_joints().begin(), s.foot_joints().end())},
              {"capsule_radii", s.capsule_radii()}};
}

inline MotionSequence motion_from_json(const json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw ParseError("motion document must be a JSON object");
  const json& id = require(doc, "id", "motion");
  if (!id.is_string()) throw ParseError("motion: \"id\" must be a string");
  const double fps = finite_number(require(doc, "fps", "motion"), "motion.fps");
  Skeleton skeleton = skeleton_from_json(require(doc, "skeleton", "motion"));

  const json& jframes = require(doc, "frames", "motion");
  if (!jframes.is_array()) throw ParseError("motion: \"frames\" must be an array");
  std::vector<Frame> frames;
  frames.reserve(jframes.size());
  for (std::size_t i = 0; i < jframes.size(); ++i) {
    const std::string where = "frame " + std::to_string(i);
    const json& jf = jframes[i];
    Frame f;
    f.root_translation = parse_vec3(require(jf, "root_t", where), where + ".root_t");
    if (jf.contains("root_q")) f.root_orientation = parse_quat(jf.at("root_q"), where + ".root_q");
    if (jf.contains("joint_q")) {
      const json& q = jf.at("joint_q");
      if (!q.is_array()) throw ParseError(where + ".joint_q: expected an array");
      std::vector<UnitQuat> rot;
      rot.reserve(q.size());
      for (std::size_t j = 0; j < q.size(); ++j) rot.push_back(parse_quat(q[j], where + ".joint_q[" + std::to_string(j) + "]"));
      f.joint_rotations = std::move(rot);
    }
    if (jf.contains("joint_pos")) {
      const json& p = jf.at("joint_pos");
      if (!p.is_array()) throw ParseError(where + ".joint_pos: expected an array");
      std::vector<Vec3> pos;
      pos.reserve(p.size());
      for (std::size_t j = 0; j < p.size(); ++j) pos.push_back(parse_vec3(p[j], where + ".joint_pos[" + std::to_string(j) + "]"));
      f.joint_positions = std::move(pos);
    }
    frames.push_back(std::move(f));
  }
  try {
    return MotionSequence(id.get<std::string>(), fps, std::move(skeleton), std::move(frames));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("motion: ") + e.what());
  }
}

inline json motion_to_json(const MotionSequence& m) {
  json frames = json::array();
  for (const Frame& f : m.frames()) {
    json jf{{"root_t", detail::vec3_json(f.root_translation)}, {"root_q", detail::quat_json(f.root_orientation)}};
    if (f.has_rotations()) {
      json q = json::array();
      for (const UnitQuat& r : *f.joint_rotations) q.push_back(detail::quat_json(r));
      jf["joint_q"] = std::move(q);
    }
    if (f.has_positions()) {
      json p = json::array();
      for (const Vec3& v : *f.joint_positions) p.push_back(detail::vec3_json(v));
      jf["joint_pos"] = std::move(p);
    }
    frames.push_back(std::move(jf));
  }
  return json{{"id", m.id()}, {"fps", m.fps()}, {"skeleton", skeleton_to_json(m.skeleton())}, {"frames", std::move(frames)}};
}

inline MotionSequence motion_from_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("motion: ") + e.what());
  }
  return motion_from_json(doc);
}

inline MotionSequence read_motion(const std::string& path) {
  const json doc = read_json_file(path);
  try {
    return motion_from_json(doc);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_motion(const std::string& path, const MotionSequence& m) {
  write_text_file(path, motion_to_json(m).dump() + "\n");
}

}  // namespace motionkit
