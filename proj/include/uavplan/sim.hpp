#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uavplan/core.hpp"
#include "uavplan/profile.hpp"

// Deterministic network simulator. Covered targets emit inspection tasks at
// their task rate; each task's payload is relayed hop by hop along its route
// to the edge server, sharing half-duplex radios with every other flow, and
// counts as accomplished when it arrives within the deadline and the
// classifier (an accuracy-weighted coin) gets it right.
//
// Scheduling model: relays grant airtime in a fixed global order -- each
// (task, hop) transfer is keyed by the time it would start on an idle
// network (task creation plus the unloaded service times of its earlier
// hops), not by instantaneous queue state. A transfer starts at max(payload
// ready, transmitter free, receiver free) and occupies both radios for
// attempts * size / capacity seconds; the base station has dedicated receive
// hardware and is never busy. Retransmission attempts are drawn per (task,
// hop, attempt) from counter-based hashes, so runs with the same seed share
// randomness across plans, deadlines, and channel-error levels. Because the
// grant order is deadline- and error-rate-independent and every event time
// is monotone in the per-hop attempt counts, outcome counts are exactly (not
// just statistically) monotone: raising the deadline never loses an
// accomplished task, and raising the channel error rate never gains one
// (exact so long as no task exhausts its retries; a dropped task stops
// reserving downstream airtime, which can perturb later transfers).

namespace uavplan {

struct SimParams {
  double duration = 60.0;         // s of task generation
  std::uint64_t seed = 1;         // randomness root
  int retry_limit = 7;            // retransmissions per hop before dropping
  double per_hop_overhead = 0.0005;  // s of decode/forward latency per hop
};

struct TargetOutcome {
  long long generated = 0;
  long long correct = 0;
};

struct SimReport {
  long long generated = 0;  // tasks emitted by covered targets
  long long on_time = 0;    // delivered within the deadline
  long long correct = 0;    // on time and classified correctly
  long long late = 0;       // delivered after the deadline
  long long dropped = 0;    // exhausted retries on some hop
  double accomplished_pct = 0.0;  // 100 * correct / generated (0 when idle)
  double mean_latency_s = 0.0;    // mean over delivered tasks (on time + late)
  std::map<int, TargetOutcome> per_target;  // covered target id -> tallies
};

// Run the simulator. Throws InfeasiblePlanError when the plan fails
// validate_plan against the scenario.
SimReport simulate(const Plan& plan, const ScenarioConfig& cfg,
                   const QualityProfile& p, const SimParams& params);

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepRow {
  std::string label;   // plan label
  std::string axis;    // swept parameter name
  double value = 0.0;  // swept parameter value
  long long generated = 0;
  long long on_time = 0;
  long long correct = 0;
  double accomplished_pct = 0.0;
  double mean_latency_s = 0.0;
};

// Simulate every labeled plan at every value of the swept axis and return
// rows sorted by (label, value). Supported axes: "delta" (deadline seconds)
// and "psi" (channel error probability). The "targets" and "uavs" axes
// require regenerating the scenario and replanning per value, which the
// command-line sweep performs; requesting them here throws PlanningError.
// `workers` > 1 runs the (plan, value) simulations concurrently; results are
// identical regardless of worker count.
std::vector<SweepRow> sweep(const std::map<std::string, Plan>& plans,
                            const ScenarioConfig& cfg, const QualityProfile& p,
                            const SimParams& params, const std::string& axis,
                            const std::vector<double>& values, int workers = 1);

// Render sweep rows as CSV with a fixed header and fixed numeric formatting,
// so equal inputs produce byte-identical output.
std::string report_csv(const std::vector<SweepRow>& rows);

}  // namespace uavplan
