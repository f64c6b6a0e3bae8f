#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "uavplan_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = work_dir() / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path err = work_dir() / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string(UAVPLAN_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

constexpr const char* kCsvHeader =
    "label,axis,value,generated,on_time,correct,accomplished_pct,mean_latency_s";

}  // namespace

TEST_CASE("gen-scenario is deterministic and respects its knobs") {
  const fs::path a = work_dir() / "scen_a.json";
  const fs::path b = work_dir() / "scen_b.json";
  const fs::path c = work_dir() / "scen_c.json";

  const std::string knobs = "gen-scenario --template multi --targets 7 --gen-seed 5";
  CHECK(run_cli(knobs + " --out " + a.string()).exit_code == 0);
  CHECK(run_cli(knobs + " --out " + b.string()).exit_code == 0);
  CHECK(run_cli("gen-scenario --template multi --targets 7 --gen-seed 6 --out " +
                c.string())
            .exit_code == 0);

  const std::string text_a = slurp(a);
  CHECK(text_a == slurp(b));       // same seed, same bytes
  CHECK(text_a != slurp(c));       // the seed matters

  const json scen = json::parse(text_a);
  CHECK(scen.at("targets").size() == 7);
  CHECK(scen.at("uavs").size() == 17);  // template default fleet: targets + 10
  CHECK(scen.at("deadline").get<double>() == 0.1);

  SUBCASE("explicit fleet size overrides the template default") {
    const fs::path d = work_dir() / "scen_d.json";
    CHECK(run_cli(knobs + " --uavs 31 --out " + d.string()).exit_code == 0);
    CHECK(json::parse(slurp(d)).at("uavs").size() == 31);
  }
  SUBCASE("a target count is required") {
    const CliResult r = run_cli("gen-scenario --template multi");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("usage error") != std::string::npos);
  }
}

TEST_CASE("plan emits one JSON plan per requested planner") {
  const fs::path scen = work_dir() / "plan_scen.json";
  REQUIRE(run_cli("gen-scenario --template multi --targets 5 --gen-seed 3 --out " +
                  scen.string())
              .exit_code == 0);

  const CliResult r = run_cli("plan --scenario " + scen.string() +
                              " --planner greedy,stba-h,stba-l");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.out);
  REQUIRE(out.contains("plans"));
  CHECK(out["plans"].size() == 3);
  for (const char* label : {"greedy", "stba-h", "stba-l"}) {
    REQUIRE(out["plans"].contains(label));
    const json& plan = out["plans"][label];
    for (const char* key :
         {"nodes", "edges", "covered", "levels", "losses", "routes", "assignment",
          "saturated"}) {
      REQUIRE(plan.contains(key));
      CHECK(plan[key].is_array());
    }
    CHECK(plan["covered"].size() == 5);  // ample fleet: everything covered
    CHECK(!plan["nodes"].empty());
  }
}

TEST_CASE("simulate writes one CSV row per planner") {
  const CliResult r = run_cli(
      "simulate --template multi --targets 6 --gen-seed 2 "
      "--planner greedy,stba-l --seed 3");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == kCsvHeader);
  CHECK(lines[1].rfind("greedy,delta,0.1,", 0) == 0);
  CHECK(lines[2].rfind("stba-l,delta,0.1,", 0) == 0);

  // Each row carries a positive task count and a percentage in [0, 100].
  for (size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 8);
    CHECK(std::stoll(fields[3]) > 0);
    const double pct = std::stod(fields[6]);
    CHECK(pct >= 0.0);
    CHECK(pct <= 100.0);
  }
}

TEST_CASE("repeated runs are byte-identical, regardless of thread count") {
  const std::string sim =
      "simulate --template multi --targets 8 --gen-seed 4 "
      "--planner greedy,stba-h --seed 2";
  const CliResult s1 = run_cli(sim);
  const CliResult s2 = run_cli(sim);
  REQUIRE(s1.exit_code == 0);
  CHECK(s1.out == s2.out);

  const std::string swp =
      "sweep --template multi --targets 8 --gen-seed 4 --planner greedy,stba-h "
      "--seed 2 --axis psi --values 0,0.05,0.1";
  const CliResult w1 = run_cli(swp + " --threads 1");
  const CliResult w4 = run_cli(swp + " --threads 4");
  REQUIRE(w1.exit_code == 0);
  REQUIRE(w4.exit_code == 0);
  CHECK(w1.out == w4.out);
  const auto rows = lines_of(w1.out);
  CHECK(rows.size() == 1 + 2 * 3);  // header + 2 planners x 3 values
}

TEST_CASE("a spec file sets defaults and explicit flags override it") {
  const fs::path spec = work_dir() / "exp.json";
  {
    std::ofstream out(spec);
    out << R"({"command":"simulate","template":"multi","targets":5,)"
        << R"("gen_seed":4,"planners":["greedy"],"seed":9,"duration":30})";
  }
  const CliResult from_spec = run_cli("--spec " + spec.string());
  REQUIRE(from_spec.exit_code == 0);

  const CliResult from_flags = run_cli(
      "simulate --template multi --targets 5 --gen-seed 4 --planner greedy "
      "--seed 9 --duration 30");
  CHECK(from_spec.out == from_flags.out);

  // An explicit flag wins over the spec file's value.
  const CliResult overridden = run_cli("--spec " + spec.string() + " --planner stba-m");
  REQUIRE(overridden.exit_code == 0);
  const auto rows = lines_of(overridden.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].rfind("stba-m,", 0) == 0);

  SUBCASE("malformed spec files are input errors") {
    const fs::path bad = work_dir() / "bad.json";
    std::ofstream(bad) << "{not json";
    CHECK(run_cli("--spec " + bad.string() + " simulate").exit_code == 3);
    const fs::path unknown = work_dir() / "unknown_key.json";
    std::ofstream(unknown) << R"({"command":"simulate","frobs":3})";
    CHECK(run_cli("--spec " + unknown.string()).exit_code == 3);
  }
}

TEST_CASE("the built-in profile round-trips through gen-profile") {
  const fs::path prof = work_dir() / "profile.csv";
  REQUIRE(run_cli("gen-profile --out " + prof.string()).exit_code == 0);

  const CliResult check = run_cli("profile-check --profile " + prof.string());
  CHECK(check.exit_code == 0);
  CHECK(check.out.find("profile OK: 6 scenarios") != std::string::npos);

  // Simulating with the written file matches the built-in default.
  const std::string sim =
      "simulate --template multi --targets 5 --gen-seed 1 --planner greedy --seed 1";
  const CliResult builtin = run_cli(sim);
  const CliResult from_file = run_cli(sim + " --profile " + prof.string());
  REQUIRE(builtin.exit_code == 0);
  REQUIRE(from_file.exit_code == 0);
  CHECK(builtin.out == from_file.out);
}

TEST_CASE("exit codes separate usage, planning, and I/O failures") {
  SUBCASE("usage errors") {
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("sweep --template multi --targets 4 --values 0.1").exit_code == 1);
    CHECK(run_cli("simulate --template multi --targets 4 --planner warp").exit_code == 1);
    CHECK(run_cli("simulate --template multi --targets 4 --planner greedy,greedy")
              .exit_code == 1);
    CHECK(run_cli("sweep --template multi --targets 4 --axis uavs --values 5.5")
              .exit_code == 1);
    const CliResult r = run_cli("simulate --no-such-flag");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("usage error") != std::string::npos);
  }
  SUBCASE("planner infeasibility") {
    // The exhaustive planner refuses more than three targets.
    const fs::path scen = work_dir() / "too_big.json";
    REQUIRE(run_cli("gen-scenario --template multi --targets 4 --gen-seed 1 --out " +
                    scen.string())
                .exit_code == 0);
    const CliResult r = run_cli("plan --scenario " + scen.string() + " --planner exact");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("planning error") != std::string::npos);
  }
  SUBCASE("I/O failures") {
    CHECK(run_cli("plan --scenario /nonexistent/scen.json --planner greedy").exit_code ==
          3);
    CHECK(run_cli("simulate --template multi --targets 4 --planner greedy --out "
                  "/nonexistent/dir/out.csv")
              .exit_code == 3);
    CHECK(run_cli("profile-check --profile /nonexistent/prof.csv").exit_code == 3);
  }
}

TEST_CASE("the exhaustive planner runs end-to-end on a tiny instance") {
  const CliResult r = run_cli(
      "simulate --template multi --targets 2 --uavs 5 --gen-seed 1 "
      "--planner exact,greedy --seed 1");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].rfind("exact,", 0) == 0);
  CHECK(lines[2].rfind("greedy,", 0) == 0);
}

TEST_CASE("instance-size sweeps regenerate the scenario per value") {
  const CliResult r = run_cli(
      "sweep --template multi --targets 5 --gen-seed 2 --planner stba-h "
      "--axis targets --values 4,6 --seed 1");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].rfind("stba-h,targets,4,", 0) == 0);
  CHECK(lines[2].rfind("stba-h,targets,6,", 0) == 0);

  // More targets generate more tasks under the same emission window.
  const auto count_of = [](const std::string& line) {
    std::istringstream in(line);
    std::string f;
    for (int i = 0; i < 4; ++i) std::getline(in, f, ',');
    return std::stoll(f);
  };
  CHECK(count_of(lines[2]) > count_of(lines[1]));

  CHECK(run_cli("sweep --template multi --planner greedy --axis uavs --values 8 "
                "--seed 1")
            .exit_code == 1);  // uavs axis without --targets
}
