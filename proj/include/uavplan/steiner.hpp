#pragma once

#include <utility>
#include <vector>

#include "uavplan/core.hpp"

// Connected coverage-tree construction: Euclidean MST over the terminals,
// a Fermat-point contraction pass to cut relay counts, and subdivision of
// long links into evenly spaced relay stations.

namespace uavplan {

// Terminals for one tree: the base plus (target id, position) pairs and the
// link length bound.
struct TerminalSet {
  Point2D base;
  std::vector<std::pair<int, Point2D>> terminals;  // distinct target ids
  double comm_radius = 0.0;                        // > 0
};

// Geometric median of a triangle. When some corner's angle is >= 120 degrees
// (including degenerate/collinear triangles) the median is that corner.
Point2D fermat_point(const Point2D& a, const Point2D& b, const Point2D& c);

// Minimum spanning tree over the points, as index pairs (i < j). Ties in
// edge length resolve toward smaller indices, so the result is unique.
std::vector<std::pair<int, int>> euclidean_mst(const std::vector<Point2D>& pts);

// Relay stations that split segment a-b into hops of length <= r, equally
// spaced; empty when the endpoints already hear each other.
std::vector<Point2D> steinerize_edge(const Point2D& a, const Point2D& b, double r);

// Number of relays steinerize_edge would insert.
int relay_count(const Point2D& a, const Point2D& b, double r);

// Full construction: MST over {base} U terminals, one greedy Fermat-
// contraction sweep over vertices in ascending index order (a contraction is
// accepted only when it strictly reduces the relay count), then subdivision.
// Node 0 is the base; inspectors sit exactly on their targets and keep their
// terminal order; every edge carries `link_rate` capacity. Deterministic.
CoverageTree tst(const TerminalSet& ts, double link_rate);

// Straight base-to-target chain with evenly spaced relays: the line-of-sight
// stripe competing against growing an existing tree.
CoverageTree los_tree(const Point2D& base, const Target& t, double r, double link_rate);

}  // namespace uavplan
