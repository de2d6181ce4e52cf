#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "ncbayes/bundled_scenarios.hpp"
#include "ncbayes/errors.hpp"
#include "ncbayes/scenario.hpp"

namespace {

std::optional<std::string_view> bundled(std::string_view name) {
  for (const auto& [key, text] : ncbayes::bundled::scenarios)
    if (key == name) return text;
  return std::nullopt;
}

std::string load(const std::string& where) {
  if (std::filesystem::exists(where)) {
    std::ifstream f(where, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
  }
  if (auto text = bundled(where)) return std::string(*text);
  throw std::runtime_error("no scenario file or bundled scenario named '" + where + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs noncommutative-probability scenarios and reports the results."};
  std::string scenario_path;
  std::string out_dir;
  std::string format = "text";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool list = false;
  bool run_bundled = false;
  app.add_option("--scenario", scenario_path, "Scenario file, or the name of a bundled scenario");
  app.add_option("--out", out_dir, "Directory for report.jsonl, report.txt and CSV profiles");
  app.add_option("--format", format, "Output on stdout")->check(CLI::IsMember({"text", "records"}));
  app.add_option("--tol", tol, "Override the scenario tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Override the scenario seed");
  app.add_flag("--list-bundled", list, "List bundled scenarios and exit");
  app.add_flag("--run-bundled", run_bundled, "Run every bundled scenario");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& entry : ncbayes::bundled::scenarios) std::cout << entry.first << "\n";
    return 0;
  }

  std::vector<std::pair<std::string, std::string>> jobs;  // (label, text)
  try {
    if (run_bundled) {
      for (const auto& [name, text] : ncbayes::bundled::scenarios) jobs.emplace_back(name, text);
    } else if (!scenario_path.empty()) {
      jobs.emplace_back(scenario_path, load(scenario_path));
    } else {
      std::cerr << "nothing to do: pass --scenario, --run-bundled or --list-bundled\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  int status = 0;
  for (const auto& [label, text] : jobs) {
    ncbayes::Scenario s;
    try {
      s = ncbayes::parse_scenario(text);
    } catch (const ncbayes::ParseError& e) {
      std::cerr << label << ": " << e.what() << "\n";
      status = std::max(status, 2);
      continue;
    }
    if (tol) s.tol = *tol;
    if (seed) s.seed = *seed;
    const ncbayes::Report report = ncbayes::run_scenario(s);
    std::cout << (format == "records" ? ncbayes::to_records(report) : ncbayes::to_text(report));
    if (!out_dir.empty()) {
      try {
        ncbayes::write_report(report, jobs.size() > 1 ? std::filesystem::path(out_dir) / s.name : std::filesystem::path(out_dir));
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = std::max(status, 2);
      }
    }
    status = std::max(status, report.exit_code());
  }
  return status;
}
