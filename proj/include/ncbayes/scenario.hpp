#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ncbayes/types.hpp"

namespace ncbayes {

using Json = nlohmann::json;

/// Task kinds accepted by parse_scenario, in documentation order.
const std::vector<std::string>& task_kinds();

struct Task {
  std::string kind;
  Json params;  // every key of the task object except "kind"
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::vector<Task> tasks;
};

/// Parses a JSON scenario document. Throws ParseError (the field is a JSON
/// path, or "line N" for syntax errors), UnknownTask and DanglingReference.
Scenario parse_scenario(std::string_view text);

/// Canonical JSON text; parse_scenario(serialize(s)) is equivalent to s.
std::string serialize(const Scenario& s);
bool equivalent(const Scenario& a, const Scenario& b);

/// Matrix literal as used in scenario files: {"re": rows, "im": rows}, a bare
/// array of real rows, or a symbolic string such as "kron(pauli_x, identity(2))"
/// or "gibbs(diag(0, 1, 2), 2*pi)". Throws ParseError naming `field`.
CMatrix parse_matrix(const Json& value, const std::string& field = "matrix");

enum class TaskStatus { Pass, Fail, Infeasible, Error };
std::string to_string(TaskStatus status);

struct Artifact {
  std::string filename;
  std::string content;
};

struct TaskRecord {
  std::size_t index = 0;
  std::string kind;
  std::string name;
  TaskStatus status = TaskStatus::Pass;
  std::string message;
  Json values = Json::object();
  Json table = Json::array();
  std::vector<Artifact> artifacts;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<TaskRecord> records;

  std::size_t count(TaskStatus status) const;
  /// 0 all pass (infeasible counts as a pass unless asserted otherwise),
  /// 1 some task failed, 2 some task raised an error.
  int exit_code() const;
};

/// Executes the tasks in order. Errors are captured per task.
Report run_scenario(const Scenario& s);

/// One JSON object per line, one line per task.
std::string to_records(const Report& report);
std::string to_text(const Report& report);

/// Writes report.jsonl, report.txt and every CSV artifact into `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace ncbayes
