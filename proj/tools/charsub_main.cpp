// charsub: batch front end. Reads a spec file, runs one command, prints a
// JSON report and exits with 0 verified, 1 violated, 2 unknown, 3 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "charsub/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw charsub::InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const charsub::Report& rep, const std::string& json_out) {
  const std::string text = rep.json.dump(2) + "\n";
  std::cout << text;
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) {
      std::cerr << "charsub: cannot write '" << json_out << "'\n";
      return charsub::kExitInputError;
    }
    out << text;
  }
  return rep.exit_code;
}

int input_error(const std::string& what) {
  nlohmann::ordered_json j;
  j["schema"] = charsub::kReportSchema;
  j["tool_version"] = charsub::kToolVersion;
  j["status"] = "input_error";
  j["exit_code"] = static_cast<int>(charsub::kExitInputError);
  j["result"] = {{"error", {{"type", "input"}, {"message", what}}}};
  std::cout << j.dump(2) << "\n";
  return charsub::kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characterized subgroups and character separation toolkit"};
  std::string command, spec_path, depth, eps, json_out, seed, height, scan_max;
  std::string group, sequence, prefix, period, report_path;
  std::vector<std::string> points, overrides;

  std::string names;
  for (const auto& n : charsub::command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "One of: " + names + ", recheck; defaults to the spec's top-level command key");
  app.add_option("--spec", spec_path, "Spec file (key = value lines under [section] headers)");
  app.add_option("--depth", depth, "Search depth or orbit budget");
  app.add_option("--eps", eps, "Tolerance as P/Q");
  app.add_option("--json-out", json_out, "Also write the report to FILE");
  app.add_option("--seed", seed, "Seed for randomized checks");
  app.add_option("--height", height, "Coefficient height for relation searches");
  app.add_option("--scan-max", scan_max, "Largest n scanned by kronecker");
  app.add_option("--group", group, "Finite group, e.g. Z4 or Z2xZ6");
  app.add_option("--sequence", sequence, "Integer sequence, e.g. geometric(1,2)");
  app.add_option("--prefix", prefix, "Prefix of a finite eventually periodic sequence");
  app.add_option("--period", period, "Period of a finite eventually periodic sequence");
  app.add_option("--point", points, "Point to test (repeatable)");
  app.add_option("--set", overrides, "Override section.key=value (repeatable)");
  app.add_option("--report", report_path, "Report to re-verify (recheck only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return charsub::kExitInputError;
  }

  try {
    if (command == "recheck") {
      if (report_path.empty()) return input_error("recheck needs --report FILE");
      auto j = nlohmann::ordered_json::parse(read_file(report_path));
      return emit(charsub::recheck_report(j), json_out);
    }
    charsub::SpecFile spec;
    if (!spec_path.empty()) spec = charsub::SpecFile::parse(read_file(spec_path));
    auto set_if = [&](const std::string& section, const std::string& key, const std::string& v) {
      if (!v.empty()) spec.set(section, key, v);
    };
    set_if("params", "depth", depth);
    set_if("params", "eps", eps);
    set_if("params", "seed", seed);
    set_if("params", "height", height);
    set_if("params", "scan_max", scan_max);
    set_if("group", "factors", group);
    set_if("sequence", "u", sequence);
    set_if("sequence", "prefix", prefix);
    set_if("sequence", "period", period);
    for (const auto& p : points) spec.append("points", "x", p);
    for (const auto& o : overrides) {
      const auto dot = o.find('.');
      const auto eq = o.find('=');
      if (dot == std::string::npos || eq == std::string::npos || dot > eq)
        return input_error("--set expects section.key=value, got '" + o + "'");
      spec.set(o.substr(0, dot), charsub::trim(o.substr(dot + 1, eq - dot - 1)), charsub::trim(o.substr(eq + 1)));
    }
    if (command.empty()) {
      const charsub::SpecEntry* e = spec.find("", "command");
      if (!e) return input_error("no command given and the spec has no top-level 'command' key");
      command = e->value;
    }
    return emit(charsub::run_command(command, spec), json_out);
  } catch (const charsub::ParseError& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
}
