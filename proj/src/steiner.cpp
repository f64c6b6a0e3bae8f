#include "uavplan/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uavplan {

namespace {
constexpr double kTol = 1e-12;

Point2D sub(const Point2D& a, const Point2D& b) { return {a.x - b.x, a.y - b.y}; }
double dot(const Point2D& a, const Point2D& b) { return a.x * b.x + a.y * b.y; }
double cross(const Point2D& a, const Point2D& b) { return a.x * b.y - a.y * b.x; }
}  // namespace

Point2D fermat_point(const Point2D& a, const Point2D& b, const Point2D& c) {
  const Point2D pts[3] = {a, b, c};
  // Coincident corners collapse the problem to a segment; the shared corner
  // is then optimal.
  for (int i = 0; i < 3; ++i) {
    const Point2D& p = pts[i];
    const Point2D& q = pts[(i + 1) % 3];
    if (distance(p, q) <= kTol) return p;
  }
  // A corner with angle >= 120 degrees is itself the median (this covers
  // collinear triangles: the middle point's angle is 180 degrees).
  for (int i = 0; i < 3; ++i) {
    const Point2D& p = pts[i];
    const Point2D u = sub(pts[(i + 1) % 3], p);
    const Point2D v = sub(pts[(i + 2) % 3], p);
    const double cosang = dot(u, v) / (std::hypot(u.x, u.y) * std::hypot(v.x, v.y));
    if (cosang <= -0.5 + 1e-12) return p;
  }
  // Otherwise intersect the two Simpson lines: corner -> apex of the
  // equilateral triangle erected outward on the opposite side.
  auto apex_opposite = [](const Point2D& p, const Point2D& q, const Point2D& away) {
    const Point2D m{0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
    const Point2D d = sub(q, p);
    Point2D n{-d.y, d.x};  // perpendicular, length |pq|
    const double h = std::sqrt(3.0) / 2.0;
    Point2D cand{m.x + h * n.x, m.y + h * n.y};
    // Choose the side opposite `away`.
    if (dot(sub(cand, m), sub(away, m)) > 0) cand = {m.x - h * n.x, m.y - h * n.y};
    return cand;
  };
  const Point2D a2 = apex_opposite(b, c, a);  // line a -> a2
  const Point2D b2 = apex_opposite(a, c, b);  // line b -> b2
  const Point2D r = sub(a2, a);
  const Point2D s = sub(b2, b);
  const double denom = cross(r, s);
  if (std::abs(denom) <= kTol) return a;  // numerically degenerate; be safe
  const double t = cross(sub(b, a), s) / denom;
  return {a.x + t * r.x, a.y + t * r.y};
}

std::vector<std::pair<int, int>> euclidean_mst(const std::vector<Point2D>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::pair<int, int>> edges;
  if (n <= 1) return edges;

  // Prim's algorithm with deterministic tie-breaks: equal-distance updates
  // keep the smaller parent, and vertex selection prefers the smaller index.
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  best[0] = 0.0;
  for (int step = 0; step < n; ++step) {
    int v = -1;
    for (int j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      if (v == -1 || best[j] < best[v]) v = j;
    }
    in_tree[v] = true;
    if (parent[v] >= 0) edges.push_back({std::min(parent[v], v), std::max(parent[v], v)});
    for (int j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double d = distance(pts[v], pts[j]);
      if (d < best[j] || (d == best[j] && v < parent[j])) {
        best[j] = d;
        parent[j] = v;
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

int relay_count(const Point2D& a, const Point2D& b, double r) {
  const double d = distance(a, b);
  const int hops = static_cast<int>(std::ceil(d / r - 1e-12));
  return std::max(0, hops - 1);
}

std::vector<Point2D> steinerize_edge(const Point2D& a, const Point2D& b, double r) {
  const int k = relay_count(a, b, r);
  std::vector<Point2D> relays;
  relays.reserve(k);
  for (int i = 1; i <= k; ++i) {
    const double f = double(i) / double(k + 1);
    relays.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)});
  }
  return relays;
}

CoverageTree tst(const TerminalSet& ts, double link_rate) {
  if (ts.comm_radius <= 0) throw PlanningError("tst: comm_radius must be positive");
  const double radius = ts.comm_radius;
  const int n = static_cast<int>(ts.terminals.size());

  // Working point list: 0 = base, 1..n = terminals, then added junctions.
  std::vector<Point2D> pts;
  pts.push_back(ts.base);
  for (const auto& [id, p] : ts.terminals) pts.push_back(p);

  std::vector<std::set<int>> adj(pts.size());
  for (const auto& [i, j] : euclidean_mst(pts)) {
    adj[i].insert(j);
    adj[j].insert(i);
  }

  // One sweep over the original vertices in ascending order: replace the two
  // star edges (v,a),(v,b) with a junction at the Fermat point of {v,a,b}
  // whenever that strictly cuts the relay count. Per vertex, take the best
  // improving neighbor pair (first such pair on ties).
  for (int v = 0; v <= n; ++v) {
    if (adj[v].size() < 2) continue;
    std::vector<int> nbrs(adj[v].begin(), adj[v].end());
    int best_a = -1, best_b = -1, best_delta = 0;
    Point2D best_f;
    for (size_t x = 0; x < nbrs.size(); ++x) {
      for (size_t y = x + 1; y < nbrs.size(); ++y) {
        const int a = nbrs[x], b = nbrs[y];
        const Point2D f = fermat_point(pts[v], pts[a], pts[b]);
        const int before = relay_count(pts[v], pts[a], radius) +
                           relay_count(pts[v], pts[b], radius);
        const int after = 1 + relay_count(f, pts[v], radius) +
                          relay_count(f, pts[a], radius) +
                          relay_count(f, pts[b], radius);
        const int delta = after - before;
        if (delta < best_delta) {
          best_delta = delta;
          best_a = a;
          best_b = b;
          best_f = f;
        }
      }
    }
    if (best_a >= 0) {
      const int f_idx = static_cast<int>(pts.size());
      pts.push_back(best_f);
      adj.push_back({});
      adj[v].erase(best_a);
      adj[v].erase(best_b);
      adj[best_a].erase(v);
      adj[best_b].erase(v);
      for (int w : {v, best_a, best_b}) {
        adj[f_idx].insert(w);
        adj[w].insert(f_idx);
      }
    }
  }

  // Emit the tree: base, inspectors in terminal order, junctions, then
  // subdivision relays along each (index-sorted) edge.
  CoverageTree t;
  for (size_t i = 0; i < pts.size(); ++i) {
    NodeRole role = NodeRole::Relay;
    if (i == 0)
      role = NodeRole::Base;
    else if (static_cast<int>(i) <= n)
      role = NodeRole::Inspector;
    t.nodes.push_back({static_cast<int>(i), pts[i], role});
  }
  for (int i = 1; i <= n; ++i) t.covered[i] = ts.terminals[i - 1].first;

  std::vector<std::pair<int, int>> topo_edges;
  for (size_t i = 0; i < adj.size(); ++i)
    for (int j : adj[i])
      if (static_cast<int>(i) < j) topo_edges.push_back({static_cast<int>(i), j});
  std::sort(topo_edges.begin(), topo_edges.end());

  int next_id = static_cast<int>(pts.size());
  for (const auto& [i, j] : topo_edges) {
    const auto relays = steinerize_edge(pts[i], pts[j], radius);
    int prev = i;
    for (const auto& rp : relays) {
      t.nodes.push_back({next_id, rp, NodeRole::Relay});
      t.edges.push_back(edge_key(prev, next_id));
      prev = next_id++;
    }
    t.edges.push_back(edge_key(prev, j));
  }
  for (const auto& e : t.edges) t.weights[e] = link_rate;
  return t;
}

CoverageTree los_tree(const Point2D& base, const Target& t, double r, double link_rate) {
  TerminalSet ts;
  ts.base = base;
  ts.terminals = {{t.id, t.position}};
  ts.comm_radius = r;
  return tst(ts, link_rate);
}

}  // namespace uavplan
