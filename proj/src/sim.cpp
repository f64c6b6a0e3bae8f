#include "uavplan/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <limits>

#include "uavplan/rng.hpp"

namespace uavplan {

namespace {

struct TaskEvent {
  double created = 0.0;
  std::uint64_t seq = 0;  // global index over all targets' emission slots
  int target = 0;
};

struct FlowInfo {
  std::vector<int> tx;       // transmitting node per hop
  std::vector<int> rx;       // receiving node per hop
  std::vector<double> rate;  // edge capacity per hop, bytes/s
  double size = 0.0;         // payload bytes at the assigned level
  double accuracy = 0.0;     // classifier accuracy at the assigned level
};

}  // namespace

SimReport simulate(const Plan& plan, const ScenarioConfig& cfg,
                   const QualityProfile& p, const SimParams& params) {
  {
    const auto violations = validate_plan(plan, cfg);
    if (!violations.empty()) {
      std::string what = "plan fails validation:";
      for (size_t i = 0; i < violations.size() && i < 4; ++i)
        what += " [" + violations[i].code + "] " + violations[i].detail + ";";
      throw InfeasiblePlanError(what);
    }
  }
  if (params.duration <= 0.0) throw PlanningError("simulation duration must be positive");
  if (params.retry_limit < 0) throw PlanningError("retry limit must be non-negative");
  if (params.per_hop_overhead < 0.0)
    throw PlanningError("per-hop overhead must be non-negative");

  const double psi = cfg.channel_error;
  const int base = plan.formation.base_id();

  // Per covered target: hop list (tx, rx, capacity) and payload parameters.
  std::map<int, FlowInfo> flows;
  for (const auto& t : cfg.targets) {
    auto rit = plan.routes.find(t.id);
    if (rit == plan.routes.end()) continue;  // uncovered: no tasks
    FlowInfo f;
    const auto& path = rit->second;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      f.tx.push_back(path[i]);
      f.rx.push_back(path[i + 1]);
      f.rate.push_back(plan.formation.weights.at(edge_key(path[i], path[i + 1])));
    }
    const int level = plan.compression.levels.at(t.id);
    const QualityPoint q = query(p, t.scenario, level);
    f.size = q.size;
    f.accuracy = q.accuracy;
    flows[t.id] = std::move(f);
  }

  // Task emission. The global sequence number advances over every target's
  // emission slots -- covered or not -- so a task keeps its identity (and its
  // random draws) across plans that cover different subsets of the targets.
  std::vector<TaskEvent> tasks;
  std::uint64_t seq = 0;
  {
    std::vector<const Target*> ordered;
    for (const auto& t : cfg.targets) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(),
              [](const Target* a, const Target* b) { return a->id < b->id; });
    for (const Target* t : ordered) {
      const double period = 1.0 / t->task_rate;
      const double phase = u01(params.seed, rng_stream::kPhase,
                               static_cast<std::uint64_t>(t->id)) *
                           period;
      const bool covered = flows.count(t->id) != 0;
      for (std::uint64_t k = 0;; ++k) {
        const double created = phase + static_cast<double>(k) * period;
        if (created >= params.duration) break;
        if (covered) tasks.push_back({created, seq, t->id});
        ++seq;
      }
    }
  }
  std::sort(tasks.begin(), tasks.end(), [](const TaskEvent& a, const TaskEvent& b) {
    if (a.created != b.created) return a.created < b.created;
    return a.seq < b.seq;
  });

  SimReport rep;
  for (const auto& kv : flows) rep.per_target[kv.first];  // zero rows up front

  // Unloaded single-shot transmission schedule per flow: the cumulative time
  // offset at which each hop would start on an idle network.  These offsets
  // order the global transmission calendar, so relays grant airtime in
  // nominal-schedule order; the ordering key is load-, deadline- and
  // error-rate-independent, which keeps outcome counts exactly monotone in
  // the deadline and (absent drops) in the channel error rate.
  std::map<int, std::vector<double>> nominal_offset;
  for (const auto& kv : flows) {
    const FlowInfo& f = kv.second;
    std::vector<double> off(f.tx.size(), 0.0);
    double acc = 0.0;
    for (size_t h = 0; h < f.tx.size(); ++h) {
      off[h] = acc;
      acc += f.size / f.rate[h] + params.per_hop_overhead;
    }
    nominal_offset[kv.first] = std::move(off);
  }

  struct HopEvent {
    double vtime;        // nominal (unloaded) start time of this hop
    std::uint32_t task;  // index into `tasks`
    std::uint32_t hop;
  };
  std::vector<HopEvent> calendar;
  double latency_sum = 0.0;
  long long delivered = 0;

  auto deliver = [&](const TaskEvent& task, const FlowInfo& f, double finish) {
    const double latency = finish - task.created;
    latency_sum += latency;
    delivered += 1;
    if (latency <= cfg.deadline + 1e-12) {
      rep.on_time += 1;
      if (u01(params.seed, rng_stream::kClassify, task.seq) < f.accuracy) {
        rep.correct += 1;
        rep.per_target[task.target].correct += 1;
      }
    } else {
      rep.late += 1;
    }
  };

  for (std::uint32_t i = 0; i < tasks.size(); ++i) {
    const TaskEvent& task = tasks[i];
    const FlowInfo& f = flows.at(task.target);
    rep.generated += 1;
    rep.per_target[task.target].generated += 1;
    if (f.tx.empty()) {  // inspector co-located with the base: instant delivery
      deliver(task, f, task.created);
      continue;
    }
    const auto& off = nominal_offset.at(task.target);
    for (std::uint32_t h = 0; h < f.tx.size(); ++h)
      calendar.push_back({task.created + off[h], i, h});
  }
  std::sort(calendar.begin(), calendar.end(), [&](const HopEvent& a, const HopEvent& b) {
    if (a.vtime != b.vtime) return a.vtime < b.vtime;
    if (tasks[a.task].seq != tasks[b.task].seq) return tasks[a.task].seq < tasks[b.task].seq;
    return a.hop < b.hop;
  });

  // A hop's predecessors in the calendar always include the same task's
  // earlier hops (offsets are strictly increasing, ties broken by hop), so
  // per-task progress state is complete when an event is reached.
  std::vector<double> ready(tasks.size());
  std::vector<char> dead(tasks.size(), 0);
  for (std::uint32_t i = 0; i < tasks.size(); ++i) ready[i] = tasks[i].created;

  std::map<int, double> avail;  // node id -> time its radio frees up

  for (const HopEvent& ev : calendar) {
    if (dead[ev.task]) continue;
    const TaskEvent& task = tasks[ev.task];
    const FlowInfo& f = flows.at(task.target);
    const std::uint32_t h = ev.hop;

    // Retransmit until a per-(task, hop, attempt) draw clears the channel
    // error rate, up to retry_limit retries; a draw below psi is a failure.
    int attempts = 0;
    bool delivered_hop = false;
    for (int a = 1; a <= params.retry_limit + 1; ++a) {
      attempts = a;
      if (u01(params.seed, rng_stream::kChannel, task.seq,
              static_cast<std::uint64_t>(h), static_cast<std::uint64_t>(a)) >= psi) {
        delivered_hop = true;
        break;
      }
    }
    const double airtime = attempts * (f.size / f.rate[h]);
    double& tx_free = avail[f.tx[h]];
    double start = std::max(ready[ev.task], tx_free);
    if (f.rx[h] != base) start = std::max(start, avail[f.rx[h]]);
    const double end = start + airtime;
    tx_free = end;
    if (f.rx[h] != base) avail[f.rx[h]] = end;
    if (!delivered_hop) {
      dead[ev.task] = 1;
      rep.dropped += 1;
      continue;
    }
    ready[ev.task] = end + params.per_hop_overhead;
    if (h + 1 == f.tx.size()) deliver(task, f, ready[ev.task]);
  }

  rep.accomplished_pct =
      rep.generated > 0 ? 100.0 * static_cast<double>(rep.correct) /
                              static_cast<double>(rep.generated)
                        : 0.0;
  rep.mean_latency_s = delivered > 0 ? latency_sum / static_cast<double>(delivered) : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepRow> sweep(const std::map<std::string, Plan>& plans,
                            const ScenarioConfig& cfg, const QualityProfile& p,
                            const SimParams& params, const std::string& axis,
                            const std::vector<double>& values, int workers) {
  if (axis == "targets" || axis == "uavs")
    throw PlanningError("axis '" + axis +
                        "' needs a fresh scenario and plan per value; use the "
                        "command-line sweep, which regenerates them");
  if (axis != "delta" && axis != "psi")
    throw PlanningError("unknown sweep axis '" + axis +
                        "' (expected delta, psi, targets, or uavs)");
  if (workers < 1) throw PlanningError("worker count must be at least 1");

  std::vector<double> ordered = values;
  std::sort(ordered.begin(), ordered.end());

  struct Job {
    const std::string* label;
    const Plan* plan;
    double value;
  };
  std::vector<Job> jobs;
  for (const auto& [label, plan] : plans)
    for (double v : ordered) jobs.push_back({&label, &plan, v});

  auto run_one = [&](const Job& j) {
    ScenarioConfig c = cfg;
    if (axis == "delta") {
      if (j.value <= 0.0) throw PlanningError("deadline values must be positive");
      c.deadline = j.value;
    } else {
      if (j.value < 0.0 || j.value >= 1.0)
        throw PlanningError("channel error values must lie in [0, 1)");
      c.channel_error = j.value;
    }
    const SimReport r = simulate(*j.plan, c, p, params);
    SweepRow row;
    row.label = *j.label;
    row.axis = axis;
    row.value = j.value;
    row.generated = r.generated;
    row.on_time = r.on_time;
    row.correct = r.correct;
    row.accomplished_pct = r.accomplished_pct;
    row.mean_latency_s = r.mean_latency_s;
    return row;
  };

  std::vector<SweepRow> rows(jobs.size());
  if (workers == 1) {
    for (size_t i = 0; i < jobs.size(); ++i) rows[i] = run_one(jobs[i]);
  } else {
    // Batches of `workers` async simulations, gathered in job order so the
    // result is independent of scheduling.
    for (size_t b = 0; b < jobs.size(); b += static_cast<size_t>(workers)) {
      const size_t hi = std::min(jobs.size(), b + static_cast<size_t>(workers));
      std::vector<std::future<SweepRow>> batch;
      for (size_t i = b; i < hi; ++i)
        batch.push_back(std::async(std::launch::async, run_one, jobs[i]));
      for (size_t i = b; i < hi; ++i) rows[i] = batch[i - b].get();
    }
  }
  return rows;
}

std::string report_csv(const std::vector<SweepRow>& rows) {
  std::vector<const SweepRow*> ordered;
  for (const auto& r : rows) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SweepRow* a, const SweepRow* b) {
                     if (a->label != b->label) return a->label < b->label;
                     return a->value < b->value;
                   });
  std::string out = "label,axis,value,generated,on_time,correct,accomplished_pct,mean_latency_s\n";
  char buf[256];
  for (const SweepRow* r : ordered) {
    std::snprintf(buf, sizeof(buf), ",%s,%.10g,%lld,%lld,%lld,%.6f,%.9f\n",
                  r->axis.c_str(), r->value, r->generated, r->on_time, r->correct,
                  r->accomplished_pct, r->mean_latency_s);
    out += r->label;
    out += buf;
  }
  return out;
}

}  // namespace uavplan
