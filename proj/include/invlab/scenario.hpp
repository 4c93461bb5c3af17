#pragma once
// Scenario-driven verification harness: scenarios are JSON documents naming
// a base ring, an algebra, an action, and a sequence of checking tasks; a
// run produces a deterministic report (schema 1) whose only
// machine-dependent field is the timing line, which renderers can omit.

#include <string>
#include <utility>
#include <vector>

#include "invlab/parallel.hpp"
#include "json.hpp"

namespace invlab {

struct RunOptions {
  int truncation_override = 0;  // 0 keeps the scenario's own truncation
  Exec exec = Exec::Default;
};

struct TaskResult {
  std::string op;
  std::string outcome;  // "pass" | "fail" | "gated"
  std::string note;     // reason when not "pass"
  std::vector<std::pair<std::string, std::string>> details;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

struct ScenarioReport {
  std::string name;
  std::vector<std::string> tags;
  std::string base;
  int truncation = 0;
  std::vector<TaskResult> tasks;
  long long timing_ms = 0;

  bool failed() const;
  // format is "text" or "tree"; the timing field is emitted only on request
  // so determinism checks can compare full renders byte for byte.
  std::string render(const std::string& format, bool with_timing) const;
  nlohmann::ordered_json tree(bool with_timing) const;
  // First artifact with this name across the tasks, empty when absent.
  std::string artifact(const std::string& name) const;
};

struct Scenario {
  std::string name;
  std::vector<std::string> tags;
  std::string path;
  nlohmann::ordered_json doc;

  bool has_tag(const std::string& t) const;
};

// Throws Error("parse", "<path>: <location and reason>") on any problem.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& path);

// Executes every task in order; library gate refusals become "gated" task
// outcomes, expectation mismatches become "fail".  Never throws for task
// outcomes; throws Error("parse", ...) for malformed task descriptions.
ScenarioReport run_scenario(const Scenario& s, const RunOptions& opt = {});

// The directory compiled in from the build tree, overridable by callers.
std::string default_scenario_dir();
// Sorted *.json paths directly inside dir.
std::vector<std::string> corpus_files(const std::string& dir);

struct CorpusReport {
  std::vector<ScenarioReport> reports;  // sorted by scenario name
  bool failed() const;
  std::string render(const std::string& format, bool with_timing) const;
};

// Runs every corpus scenario (filtered by tag when nonempty); jobs > 1 runs
// scenarios concurrently, and the report is ordered by name either way.
CorpusReport run_corpus(const std::string& dir, const std::string& tag,
                        int jobs, const RunOptions& opt = {});

}  // namespace invlab
