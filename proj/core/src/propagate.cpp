#include "repseg/propagate.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "repseg/errors.hpp"

namespace repseg {

SuperpixelGraph build_graph(const SuperpixelMap& spx, std::span<const Hotspot> hotspots,
                            std::span<const Splash> splashes,
                            std::span<const Keypoint> keypoints, int min_support) {
  auto superpixel_of = [&](KeypointId id) {
    if (id < 0 || static_cast<std::size_t>(id) >= keypoints.size()) {
      throw InvalidParam("build_graph: keypoint id " + std::to_string(id) + " out of range");
    }
    const auto& kp = keypoints[static_cast<std::size_t>(id)];
    return spx.at(kp.x, kp.y);
  };

  std::set<std::int32_t> nodes;
  std::map<std::pair<std::int32_t, std::int32_t>, int> links;
  for (const auto& hs : hotspots) {
    if (hs.splash < 0 || static_cast<std::size_t>(hs.splash) >= splashes.size()) {
      throw InvalidParam("build_graph: hotspot splash id " + std::to_string(hs.splash) +
                         " out of range");
    }
    const Splash& s = splashes[static_cast<std::size_t>(hs.splash)];
    const auto a = superpixel_of(s.center);
    nodes.insert(a);
    for (const auto& v : s.vectors) {
      const auto b = superpixel_of(v.neighbor);
      nodes.insert(b);
      if (a == b) continue;
      ++links[{std::min(a, b), std::max(a, b)}];
    }
  }

  SuperpixelGraph g;
  g.nodes.assign(nodes.begin(), nodes.end());
  for (const auto& [edge, count] : links) {
    if (count >= min_support) g.edges.emplace(edge, count);
  }
  return g;
}

ComponentMap connected_components(const SuperpixelGraph& graph) {
  const std::size_t n = graph.nodes.size();
  if (std::adjacent_find(graph.nodes.begin(), graph.nodes.end(), std::greater_equal<>()) !=
      graph.nodes.end()) {
    throw InvalidParam("connected_components: nodes must be strictly ascending");
  }
  auto index_of = [&](std::int32_t node) {
    const auto it = std::lower_bound(graph.nodes.begin(), graph.nodes.end(), node);
    if (it == graph.nodes.end() || *it != node) {
      throw InvalidParam("connected_components: edge endpoint " + std::to_string(node) +
                         " is not a node");
    }
    return static_cast<std::size_t>(it - graph.nodes.begin());
  };

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (const auto& [edge, count] : graph.edges) {
    const auto ra = find(index_of(edge.first));
    const auto rb = find(index_of(edge.second));
    // Keep the lower node index as root so roots are component minima.
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  // Nodes are ascending, so the first time a root shows up is its smallest
  // superpixel id.
  ComponentMap out;
  std::vector<std::uint32_t> label(n, 0);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (label[r] == 0) label[r] = ++next;
    out.emplace(graph.nodes[i], label[r]);
  }
  return out;
}

LabelMask render_mask(const SuperpixelMap& spx, const ComponentMap& components) {
  std::vector<std::uint32_t> by_superpixel(static_cast<std::size_t>(spx.count), 0);
  for (const auto& [node, comp] : components) {
    if (node < 0 || node >= spx.count) {
      throw InvalidParam("render_mask: superpixel id " + std::to_string(node) + " out of range");
    }
    by_superpixel[static_cast<std::size_t>(node)] = comp;
  }
  std::vector<std::uint32_t> labels(spx.assignment.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = by_superpixel[static_cast<std::size_t>(spx.assignment[i])];
  }
  return LabelMask(spx.width, spx.height, std::move(labels));
}

}  // namespace repseg
