// Copyright 2026 The cvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvc/errors.hpp"
#include "cvc/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "cvc — deterministic simulator for continuous-variable coherent "
      "communication circuits built from linear optics"};

  std::string config_path;
  std::string protocol;
  std::string backend;
  std::string format;
  std::string out_path;
  std::vector<std::string> params;
  std::vector<std::string> sweeps;

  app.add_option("--config", config_path,
                 "Config file of key = value lines (# starts a comment)");
  app.add_option("--protocol", protocol,
                 "Protocol: qnd_channel, ccaecc, superdense, "
                 "reduction_check, teleportation");
  app.add_option("--backend", backend, "QND backend: ideal or fma");
  app.add_option("--format", format, "Report format: json or csv");
  app.add_option("--out", out_path, "Write the report here (default stdout)");
  app.add_option("--set", params,
                 "Scenario parameter override, key=value (repeatable)");
  app.add_option("--sweep", sweeps,
                 "Sweep spec key=start:stop:steps[:log] (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 1;
  }

  try {
    cvc::ScenarioConfig config;
    if (!config_path.empty()) config = cvc::parse_config_file(config_path);
    if (!protocol.empty()) cvc::apply_config_entry(config, "protocol", protocol);
    if (!backend.empty()) cvc::apply_config_entry(config, "backend", backend);
    if (!format.empty()) cvc::apply_config_entry(config, "format", format);
    if (!out_path.empty()) cvc::apply_config_entry(config, "out", out_path);
    for (const std::string& entry : params) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos) {
        throw cvc::UsageError("--set expects key=value, got '" + entry + "'");
      }
      cvc::apply_config_entry(config, entry.substr(0, eq),
                              entry.substr(eq + 1));
    }
    for (const std::string& spec : sweeps) {
      cvc::apply_config_entry(config, "sweep", spec);
    }

    const cvc::RunOutcome outcome = cvc::run(config);
    if (!outcome.diagnostics.empty()) {
      std::cerr << "error: " << outcome.diagnostics << "\n";
    }
    if (!outcome.report.empty()) {
      if (config.out_path.empty()) {
        std::cout << outcome.report;
      } else {
        std::ofstream file(config.out_path);
        if (!file) {
          std::cerr << "error: cannot write '" << config.out_path << "'\n";
          return 1;
        }
        file << outcome.report;
      }
    }
    return outcome.exit_code;
  } catch (const cvc::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
