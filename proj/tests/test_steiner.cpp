#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "uavplan/core.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/steiner.hpp"

using namespace uavplan;

namespace {

double dist_sum(const Point2D& p, const Point2D& a, const Point2D& b,
                const Point2D& c) {
  return distance(p, a) + distance(p, b) + distance(p, c);
}

// Coarse-to-fine grid search over the triangle's bounding box: the geometric
// median's distance sum, to 1e-6 positional resolution.
double grid_search_min_sum(const Point2D& a, const Point2D& b, const Point2D& c) {
  double lo_x = std::min({a.x, b.x, c.x}), hi_x = std::max({a.x, b.x, c.x});
  double lo_y = std::min({a.y, b.y, c.y}), hi_y = std::max({a.y, b.y, c.y});
  Point2D best{(lo_x + hi_x) / 2, (lo_y + hi_y) / 2};
  double best_val = dist_sum(best, a, b, c);
  double span = std::max(hi_x - lo_x, hi_y - lo_y);
  if (span == 0.0) return best_val;
  while (span > 1e-6) {
    const double step = span / 20.0;
    Point2D center = best;
    for (int i = -20; i <= 20; ++i)
      for (int j = -20; j <= 20; ++j) {
        const Point2D p{center.x + i * step, center.y + j * step};
        const double v = dist_sum(p, a, b, c);
        if (v < best_val) {
          best_val = v;
          best = p;
        }
      }
    span = step * 2.0;
  }
  return best_val;
}

// Total length of the minimum spanning tree, by exhaustive enumeration of
// all spanning trees (via edge subsets) -- only viable for tiny point sets.
double brute_force_mst_length(const std::vector<Point2D>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.push_back({i, j});
  const int m = static_cast<int>(all.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << m); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != n - 1) continue;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    double len = 0.0;
    int joins = 0;
    for (int e = 0; e < m; ++e) {
      if (!(mask & (1 << e))) continue;
      len += distance(pts[all[e].first], pts[all[e].second]);
      const int ra = find(all[e].first), rb = find(all[e].second);
      if (ra != rb) {
        parent[ra] = rb;
        ++joins;
      }
    }
    if (joins == n - 1) best = std::min(best, len);
  }
  return best;
}

double tree_length(const std::vector<Point2D>& pts,
                   const std::vector<std::pair<int, int>>& edges) {
  double len = 0.0;
  for (const auto& e : edges) len += distance(pts[e.first], pts[e.second]);
  return len;
}

ScenarioConfig wide_config(double comm = 16.0) {
  ScenarioConfig cfg;
  cfg.area = {500, 500};
  cfg.edge = {250, 0};
  UavSpec u;
  u.comm_radius = comm;
  u.sense_radius = 1.0;
  u.speed = 5;
  u.energy = 1e9;
  u.move_cost = 2;
  u.hover_cost = 10;
  for (int i = 0; i < 64; ++i) {
    u.id = i;
    u.start = {(i + 0.5) * 500.0 / 64, 0};
    cfg.uavs.push_back(u);
  }
  return cfg;
}

}  // namespace

TEST_CASE("fermat point of an equilateral triangle is the centroid") {
  const Point2D a{0, 0}, b{10, 0}, c{5, 5 * std::sqrt(3.0)};
  const Point2D f = fermat_point(a, b, c);
  CHECK(f.x == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(f.y == doctest::Approx(5.0 * std::sqrt(3.0) / 3.0).epsilon(1e-9));
}

TEST_CASE("fermat point of collinear points is the middle one") {
  const Point2D f = fermat_point({0, 0}, {4, 0}, {9, 0});
  CHECK(f.x == doctest::Approx(4.0));
  CHECK(f.y == doctest::Approx(0.0));
}

TEST_CASE("fermat point of a wide-angle triangle is the wide vertex") {
  // angle at (0,0) between (10,0) and (-9, 1.5) is far above 120 degrees
  const Point2D f = fermat_point({10, 0}, {0, 0}, {-9, 1.5});
  CHECK(f.x == doctest::Approx(0.0));
  CHECK(f.y == doctest::Approx(0.0));
}

TEST_CASE("fermat point matches grid search on random triangles") {
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t k = static_cast<std::uint64_t>(i);
    const Point2D a{u01(21, 1, k, 0) * 100, u01(21, 1, k, 1) * 100};
    const Point2D b{u01(21, 1, k, 2) * 100, u01(21, 1, k, 3) * 100};
    const Point2D c{u01(21, 1, k, 4) * 100, u01(21, 1, k, 5) * 100};
    const double got = dist_sum(fermat_point(a, b, c), a, b, c);
    const double want = grid_search_min_sum(a, b, c);
    CHECK(got == doctest::Approx(want).epsilon(1e-4));
    CHECK(got <= want + 1e-4);
  }
}

TEST_CASE("euclidean_mst basics") {
  SUBCASE("two points") {
    const auto e = euclidean_mst({{0, 0}, {3, 4}});
    REQUIRE(e.size() == 1);
    CHECK(e[0] == std::pair<int, int>{0, 1});
  }
  SUBCASE("unit square total length 3") {
    const std::vector<Point2D> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto e = euclidean_mst(sq);
    REQUIRE(e.size() == 3);
    CHECK(tree_length(sq, e) == doctest::Approx(3.0));
  }
  SUBCASE("collinear chain") {
    const std::vector<Point2D> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    const auto e = euclidean_mst(pts);
    REQUIRE(e.size() == 3);
    std::set<std::pair<int, int>> got(e.begin(), e.end());
    CHECK(got == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
  }
}

TEST_CASE("euclidean_mst matches exhaustive enumeration") {
  for (int round = 0; round < 50; ++round) {
    const std::uint64_t k = static_cast<std::uint64_t>(round);
    const int n = 3 + static_cast<int>(u01(33, 2, k) * 4);  // 3..6 points
    std::vector<Point2D> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back({u01(33, 3, k, i) * 50, u01(33, 4, k, i) * 50});
    const auto e = euclidean_mst(pts);
    REQUIRE(static_cast<int>(e.size()) == n - 1);
    CHECK(tree_length(pts, e) ==
          doctest::Approx(brute_force_mst_length(pts)).epsilon(1e-9));
  }
}

TEST_CASE("steinerize_edge spacing") {
  SUBCASE("within range: no relays") {
    CHECK(steinerize_edge({0, 0}, {10, 0}, 16.0).empty());
    CHECK(relay_count({0, 0}, {10, 0}, 16.0) == 0);
  }
  SUBCASE("twice the range: midpoint") {
    const auto r = steinerize_edge({0, 0}, {32, 0}, 16.0);
    REQUIRE(r.size() == 1);
    CHECK(r[0].x == doctest::Approx(16.0));
    CHECK(r[0].y == doctest::Approx(0.0));
  }
  SUBCASE("just past twice the range: two relays, equal thirds") {
    const auto r = steinerize_edge({0, 0}, {33, 0}, 16.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0].x == doctest::Approx(11.0));
    CHECK(r[1].x == doctest::Approx(22.0));
    CHECK(relay_count({0, 0}, {33, 0}, 16.0) == 2);
  }
  SUBCASE("count formula on random segments") {
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t k = static_cast<std::uint64_t>(i);
      const double d = u01(5, 5, k, 0) * 200 + 1e-6;
      const double r = u01(5, 5, k, 1) * 30 + 1.0;
      const Point2D b{d, 0};
      const int expect = static_cast<int>(std::ceil(d / r)) - 1;
      CHECK(relay_count({0, 0}, b, r) == expect);
      const auto relays = steinerize_edge({0, 0}, b, r);
      CHECK(static_cast<int>(relays.size()) == expect);
      Point2D prev{0, 0};
      for (const Point2D& p : relays) {
        CHECK(distance(prev, p) <= r + 1e-9);
        prev = p;
      }
      CHECK(distance(prev, b) <= r + 1e-9);
    }
  }
}

TEST_CASE("tst single-terminal shapes") {
  SUBCASE("line of sight") {
    TerminalSet ts{{0, 0}, {{7, {10, 0}}}, 16.0};
    const CoverageTree t = tst(ts, 2e6);
    CHECK(t.nodes.size() == 2);  // base + inspector
    CHECK(t.edges.size() == 1);
    CHECK(t.covered.at(1) == 7);
    CHECK(t.nodes[1].pos == Point2D{10, 0});
  }
  SUBCASE("distance 33 needs two relays") {
    TerminalSet ts{{0, 0}, {{3, {33, 0}}}, 16.0};
    const CoverageTree t = tst(ts, 2e6);
    CHECK(t.nodes.size() == 4);  // base + 2 relays + inspector
    int inspectors = 0, relays = 0;
    for (const auto& n : t.nodes) {
      inspectors += n.role == NodeRole::Inspector;
      relays += n.role == NodeRole::Relay;
    }
    CHECK(inspectors == 1);
    CHECK(relays == 2);
  }
}

TEST_CASE("tst fermat contraction can beat raw MST subdivision") {
  // Three terminals at 120-degree spokes from a point far from the base:
  // the MST chains them pairwise, while a Fermat junction at the hub center
  // shortens total wire enough to save at least one relay.
  const Point2D hub{60, 60};
  const double arm = 15.0;
  TerminalSet ts;
  ts.base = {0, 0};
  ts.comm_radius = 16.0;
  for (int i = 0; i < 3; ++i) {
    const double ang = 2.0 * 3.14159265358979 * i / 3.0 + 0.3;
    ts.terminals.push_back(
        {i, {hub.x + arm * std::cos(ang), hub.y + arm * std::sin(ang)}});
  }
  const CoverageTree with_fermat = tst(ts, 2e6);

  // MST-only construction: spanning tree over base+terminals, subdivided.
  std::vector<Point2D> pts{ts.base};
  for (const auto& t : ts.terminals) pts.push_back(t.second);
  const auto mst = euclidean_mst(pts);
  int mst_nodes = static_cast<int>(pts.size());
  for (const auto& e : mst)
    mst_nodes += relay_count(pts[e.first], pts[e.second], ts.comm_radius);

  CHECK(static_cast<int>(with_fermat.nodes.size()) < mst_nodes);
  ScenarioConfig cfg = wide_config();
  cfg.edge = ts.base;
  for (const auto& term : ts.terminals)
    cfg.targets.push_back({term.first, term.second, "Pets", 0.3});
  CHECK(validate_tree(with_fermat, cfg).empty());
}

TEST_CASE("los_tree shapes") {
  SUBCASE("within range") {
    const CoverageTree t = los_tree({0, 0}, {9, {12, 5}, "Pets", 0.3}, 16.0, 2e6);
    CHECK(t.nodes.size() == 2);
    CHECK(t.covered.at(1) == 9);
  }
  SUBCASE("2.5x range needs inspector plus two relays") {
    const CoverageTree t = los_tree({0, 0}, {4, {40, 0}, "Pets", 0.3}, 16.0, 2e6);
    CHECK(t.nodes.size() == 4);
  }
  SUBCASE("straight-line relay positions") {
    const CoverageTree t = los_tree({0, 0}, {4, {40, 30}, "Pets", 0.3}, 16.0, 2e6);
    for (const auto& n : t.nodes) {
      // every node on the segment: cross product with (40,30) vanishes
      CHECK(std::abs(n.pos.x * 30.0 - n.pos.y * 40.0) < 1e-6);
    }
  }
}

TEST_CASE("tst validates and is deterministic on random instances") {
  ScenarioConfig cfg = wide_config();
  for (int round = 0; round < 1000; ++round) {
    const std::uint64_t k = static_cast<std::uint64_t>(round);
    const int n = 1 + static_cast<int>(u01(9, 1, k) * 8);
    TerminalSet ts;
    ts.base = cfg.edge;
    ts.comm_radius = 16.0;
    cfg.targets.clear();
    for (int i = 0; i < n; ++i) {
      const Point2D p{u01(9, 2, k, i) * 500, u01(9, 3, k, i) * 500};
      ts.terminals.push_back({i, p});
      cfg.targets.push_back({i, p, "Pets", 0.3});
    }
    const CoverageTree t = tst(ts, 2.4e6);
    // enough hypothetical UAVs for any tree this size
    while (cfg.uavs.size() < t.nodes.size()) {
      UavSpec u = cfg.uavs[0];
      u.id = static_cast<int>(cfg.uavs.size());
      cfg.uavs.push_back(u);
    }
    const auto v = validate_tree(t, cfg);
    if (!v.empty()) {
      CAPTURE(round);
      CAPTURE(v[0].code);
      CAPTURE(v[0].detail);
      REQUIRE(v.empty());
    }
    CHECK(t.covered.size() == static_cast<std::size_t>(n));

    const CoverageTree again = tst(ts, 2.4e6);
    REQUIRE(again.nodes.size() == t.nodes.size());
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      CHECK(again.nodes[i].id == t.nodes[i].id);
      CHECK(again.nodes[i].pos == t.nodes[i].pos);
      CHECK(again.nodes[i].role == t.nodes[i].role);
    }
    CHECK(again.edges == t.edges);
  }
}

TEST_CASE("tst never needs more stations than MST subdivision") {
  for (int round = 0; round < 200; ++round) {
    const std::uint64_t k = static_cast<std::uint64_t>(round);
    const int n = 2 + static_cast<int>(u01(13, 1, k) * 6);
    TerminalSet ts;
    ts.base = {250, 0};
    ts.comm_radius = 16.0;
    std::vector<Point2D> pts{ts.base};
    for (int i = 0; i < n; ++i) {
      const Point2D p{u01(13, 2, k, i) * 400 + 50, u01(13, 3, k, i) * 300};
      ts.terminals.push_back({i, p});
      pts.push_back(p);
    }
    const auto mst = euclidean_mst(pts);
    int mst_nodes = static_cast<int>(pts.size());
    for (const auto& e : mst)
      mst_nodes += relay_count(pts[e.first], pts[e.second], ts.comm_radius);
    const CoverageTree t = tst(ts, 2e6);
    CHECK(static_cast<int>(t.nodes.size()) <= mst_nodes);
  }
}
