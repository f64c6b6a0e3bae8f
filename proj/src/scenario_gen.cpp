#include "uavplan/scenario_gen.hpp"

#include <cmath>
#include <vector>

#include "uavplan/rng.hpp"

namespace uavplan {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinSpacing = 12.5;  // m between any two targets

const char* kMixedLabels[] = {"Maritime", "Pets", "SaR", "Tools", "Urban", "Wildlife"};

std::string label_for(const std::string& label, int index) {
  if (label == "mixed") return kMixedLabels[index % 6];
  return label;
}

bool clear_of(const std::vector<Target>& placed, const Point2D& p) {
  for (const auto& t : placed)
    if (distance(t.position, p) < kMinSpacing) return false;
  return true;
}

// Uniform scatter over the whole area with minimum spacing; widens nothing
// (the area is fixed) but re-draws until a clear spot is found.
std::vector<Target> scatter_targets(int n, const ScenarioConfig& cfg,
                                    std::uint64_t seed, const std::string& label) {
  std::vector<Target> out;
  const double margin = 5.0;
  for (int i = 0; i < n; ++i) {
    Point2D p;
    bool placed = false;
    for (std::uint64_t a = 0; a < 20000; ++a) {
      p.x = margin + u01(seed, rng_stream::kGen, i, a, 0) * (cfg.area.x - 2 * margin);
      p.y = margin + u01(seed, rng_stream::kGen, i, a, 1) * (cfg.area.y - 2 * margin);
      if (clear_of(out, p)) {
        placed = true;
        break;
      }
    }
    if (!placed)
      throw PlanningError("could not place " + std::to_string(n) +
                          " targets with " + std::to_string(kMinSpacing) +
                          " m spacing in the area");
    out.push_back({i, p, label_for(label, i), 0.3});
  }
  return out;
}

// Concentrated inspection zone: one gateway target 11 m from the edge server,
// optionally two isolated outpost targets 15 m from the edge server on the
// flanks, and the rest in a 150-degree half-annulus r in [24, R]. Only the
// gateway and the outposts sit within comm range of the edge server, so every
// annulus offload flow shares the single gateway trunk; the outposts sit
// strictly closer to the edge server than to the gateway or to any annulus
// target (20 m clearance), so each keeps a private single-hop link. R is
// sized from the annulus target count (286 m^2 per target, comfortably below
// the random-packing limit for 12.5 m spacing) and widened 5% on sampling
// exhaustion.
std::vector<Target> cluster_targets(int n, const ScenarioConfig& cfg,
                                    std::uint64_t seed, const std::string& label,
                                    bool with_outposts) {
  const double r_in = 24.0;
  const double sector_lo = 15.0 * kPi / 180.0;
  const double sector_span = 150.0 * kPi / 180.0;
  const double outpost_clearance = 20.0;
  const int n_outposts = with_outposts ? std::min(2, n - 1) : 0;
  const int n_annulus = n - 1 - n_outposts;
  double r_out = std::sqrt(r_in * r_in +
                           std::max(n_annulus, 1) * 286.0 *
                               (2.0 * kPi / sector_span) / kPi);

  for (std::uint64_t round = 0;; ++round, r_out *= 1.05) {
    if (round > 40)
      throw PlanningError("could not pack " + std::to_string(n) +
                          " targets into the inspection zone");
    std::vector<Target> out;

    const double bearing =
        (80.0 + 20.0 * u01(seed, rng_stream::kGen, round * 1000000, 0, 0)) * kPi / 180.0;
    Point2D gw{cfg.edge.x + 11.0 * std::cos(bearing),
               cfg.edge.y + 11.0 * std::sin(bearing)};
    out.push_back({0, gw, label_for(label, 0), 0.3});

    bool ok = true;
    for (int i = 1; i <= n_outposts && ok; ++i) {
      const std::uint64_t key = round * 1000000 + i;
      const double base_bearing = (i == 1) ? 5.0 : 175.0;
      bool placed = false;
      for (std::uint64_t a = 0; a < 4000; ++a) {
        const double th =
            (base_bearing + 8.0 * (u01(seed, rng_stream::kGen, key, a, 0) - 0.5)) *
            kPi / 180.0;
        const double r = 14.5 + u01(seed, rng_stream::kGen, key, a, 1);
        Point2D p{cfg.edge.x + r * std::cos(th), cfg.edge.y + r * std::sin(th)};
        if (clear_of(out, p)) {
          out.push_back({i, p, label_for(label, i), 0.3});
          placed = true;
          break;
        }
      }
      ok = placed;
    }

    for (int i = n_outposts + 1; i < n && ok; ++i) {
      const std::uint64_t key = round * 1000000 + i;
      bool placed = false;
      for (std::uint64_t a = 0; a < 4000; ++a) {
        const double u = u01(seed, rng_stream::kGen, key, a, 0);
        const double r = std::sqrt(r_in * r_in + u * (r_out * r_out - r_in * r_in));
        const double th = sector_lo + sector_span * u01(seed, rng_stream::kGen, key, a, 1);
        Point2D p{cfg.edge.x + r * std::cos(th), cfg.edge.y + r * std::sin(th)};
        if (p.x < 5.0 || p.x > cfg.area.x - 5.0 || p.y < 5.0 || p.y > cfg.area.y - 5.0)
          continue;
        bool near_outpost = false;
        for (int k = 1; k <= n_outposts; ++k)
          if (distance(out[k].position, p) < outpost_clearance) near_outpost = true;
        if (near_outpost) continue;
        if (clear_of(out, p)) {
          out.push_back({i, p, label_for(label, i), 0.3});
          placed = true;
          break;
        }
      }
      ok = placed;
    }
    if (ok) return out;
  }
}

}  // namespace

ScenarioConfig gen_scenario(const std::string& tmpl, int targets, int uavs,
                            std::uint64_t seed, const std::string& label) {
  if (targets < 1)
    throw PlanningError("target count must be at least 1 (got " +
                        std::to_string(targets) + ")");
  if (label.empty()) throw PlanningError("target label must be non-empty");
  if (tmpl != "urban" && tmpl != "multi" && tmpl != "scalability")
    throw PlanningError("unknown scenario template '" + tmpl +
                        "' (expected urban, multi, or scalability)");

  ScenarioConfig cfg;
  cfg.area = {500.0, 500.0};
  cfg.edge = {250.0, 0.0};
  cfg.deadline = 0.1;
  cfg.channel_error = 0.0;
  cfg.mission_horizon = 600.0;
  cfg.link_rate = (tmpl == "urban") ? 2.4e6 : 3.2e6;

  const int fleet = uavs > 0 ? uavs : targets + (tmpl == "urban" ? 5 : 10);
  for (int i = 0; i < fleet; ++i) {
    UavSpec u;
    u.id = i;
    u.start = {cfg.area.x * (i + 0.5) / fleet, 0.0};
    u.comm_radius = 16.0;
    u.sense_radius = 1.0;
    u.speed = 5.0;
    u.energy = 2.0e4;
    u.move_cost = 2.0;
    u.hover_cost = 10.0;
    cfg.uavs.push_back(u);
  }

  cfg.targets = (tmpl == "urban")
                    ? scatter_targets(targets, cfg, seed, label)
                    : cluster_targets(targets, cfg, seed, label, tmpl == "multi");
  return cfg;
}

}  // namespace uavplan
