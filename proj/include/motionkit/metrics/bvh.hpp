#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "motionkit/core/vec3.hpp"

namespace motionkit {

struct Aabb {
  Vec3 lo;
  Vec3 hi;

  static Aabb empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {{inf, inf, inf}, {-inf, -inf, -inf}};
  }
  void expand(const Aabb& o) {
    lo = {std::min(lo.x, o.lo.x), std::min(lo.y, o.lo.y), std::min(lo.z, o.lo.z)};
    hi = {std::max(hi.x, o.hi.x), std::max(hi.y, o.hi.y), std::max(hi.z, o.hi.z)};
  }
  Vec3 centre() const { return (lo + hi) * 0.5; }
  bool overlaps(const Aabb& o) const {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y && lo.z <= o.hi.z &&
           o.lo.z <= hi.z;
  }
};

// Static binary AABB tree built by median split on the widest centroid axis.
// Reports every pair of leaves whose boxes overlap.
class AabbTree {
 public:
  explicit AabbTree(std::vector<Aabb> boxes) : boxes_(std::move(boxes)) {
    if (boxes_.empty()) return;
    std::vector<std::size_t> items(boxes_.size());
    std::iota(items.begin(), items.end(), 0);
    nodes_.reserve(2 * boxes_.size());
    build(items, 0, items.size());
  }

  // Calls visit(i, j) with i < j for each overlapping leaf pair, once.
  template <class Visit>
  void for_each_overlapping_pair(Visit&& visit) const {
    if (nodes_.empty()) return;
    self_pairs(0, visit);
  }

 private:
  struct Node {
    Aabb box;
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t item = 0;
    bool leaf = false;
  };

  std::size_t build(std::vector<std::size_t>& items, std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({});
    Aabb box = Aabb::empty();
    for (std::size_t k = begin; k < end; ++k) box.expand(boxes_[items[k]]);
    nodes_[id].box = box;
    if (end - begin == 1) {
      nodes_[id].leaf = true;
      nodes_[id].item = items[begin];
      return id;
    }
    Aabb centres = Aabb::empty();
    for (std::size_t k = begin; k < end; ++k) {
      const Vec3 c = boxes_[items[k]].centre();
      centres.expand({c, c});
    }
    const Vec3 ext = centres.hi - centres.lo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    auto key = [&](std::size_t i) {
      const Vec3 c = boxes_[i].centre();
      return axis == 0 ? c.x : (axis == 1 ? c.y : c.z);
    };
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(items.begin() + static_cast<std::ptrdiff_t>(begin), items.begin() + static_cast<std::ptrdiff_t>(mid),
                     items.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t x, std::size_t y) { return key(x) < key(y) || (key(x) == key(y) && x < y); });
    const std::size_t l = build(items, begin, mid);
    const std::size_t r = build(items, mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  template <class Visit>
  void self_pairs(std::size_t n, Visit& visit) const {
    const Node& node = nodes_[n];
    if (node.leaf) return;
    self_pairs(node.left, visit);
    self_pairs(node.right, visit);
    cross_pairs(node.left, node.right, visit);
  }

  template <class Visit>
  void cross_pairs(std::size_t a, std::size_t b, Visit& visit) const {
    const Node& na = nodes_[a];
    const Node& nb = nodes_[b];
    if (!na.box.overlaps(nb.box)) return;
    if (na.leaf && nb.leaf) {
      visit(std::min(na.item, nb.item), std::max(na.item, nb.item));
    } else if (na.leaf) {
      cross_pairs(a, nb.left, visit);
      cross_pairs(a, nb.right, visit);
    } else {
      cross_pairs(na.left, b, visit);
      cross_pairs(na.right, b, visit);
    }
  }

  std::vector<Aabb> boxes_;
  std::vector<Node> nodes_;
};

}  // namespace motionkit
