#pragma once

// Shared node-deduplicating mesh accumulator for the structured generators.
// Nodes are keyed by exact coordinates: generators must derive shared
// interface nodes from common coordinate arrays so keys match bitwise.

#include <map>
#include <utility>

#include "striphomog/errors.hpp"
#include "striphomog/mesh.hpp"

namespace striphomog {

inline int tag_rank(int tag) {
  switch (tag) {
    case kTagHoleDirichlet:
    case kTagHoleRobin:
      return 4;
    case kTagWall:
      return 3;
    case kTagLateral:
      return 2;
    case kTagCurve:
      return 1;
    default:
      return 0;
  }
}

struct MeshBuilder {
  TriMesh m;
  std::map<std::pair<double, double>, int> index;

  int node(double x, double y, int tag = kTagInterior) {
    const auto key = std::make_pair(x, y);
    const auto it = index.find(key);
    if (it != index.end()) {
      retag(it->second, tag);
      return it->second;
    }
    const int id = m.n_nodes();
    m.xy.push_back({x, y});
    m.node_tag.push_back(tag);
    index.emplace(key, id);
    return id;
  }

  void retag(int id, int tag) {
    if (tag_rank(tag) > tag_rank(m.node_tag[id])) m.node_tag[id] = tag;
  }

  void tri(int a, int b, int c) {
    const Vec2 pa = m.xy[a], pb = m.xy[b], pc = m.xy[c];
    const double ar = (pb - pa).cross(pc - pa);
    if (ar == 0.0) fail(ErrKind::mesh, "degenerate triangle emitted");
    if (ar < 0.0) std::swap(b, c);
    m.tri.push_back({a, b, c});
  }

  void bedge(int a, int b, int tag) { m.bedge.push_back({a, b, tag}); }
};

}  // namespace striphomog
