// Copyright 2026 The ipcauth Authors
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

#include "ipcauth/cli.hpp"

#include <csignal>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipcauth/error.hpp"
#include "ipcauth/registry_http.hpp"
#include "ipcauth/report.hpp"

#ifndef IPCAUTH_DEFAULT_FIXTURE
#define IPCAUTH_DEFAULT_FIXTURE "tests/fixtures/table1.json"
#endif

namespace ipcauth {

namespace {

struct RunArgs {
  std::string scenario;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> platform;
  std::optional<std::string> mutability;
  std::string format = "json";
  std::optional<std::string> out;
  std::optional<std::string> spec;
};

struct MatrixArgs {
  std::string fixture = IPCAUTH_DEFAULT_FIXTURE;
  std::uint64_t seed = 1;
};

struct Table3Args {
  std::uint64_t trials = 50;
  std::uint64_t seed = 1;
};

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string db;
  std::string credentialFile;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioSpec spec = default_spec(a.scenario);
  if (a.spec) {
    nlohmann::json overrides = nlohmann::json::parse(read_file(*a.spec), nullptr, false);
    if (overrides.is_discarded()) throw Error(Errc::InvalidSpec, *a.spec + ": not valid JSON");
    spec = apply_overrides(std::move(spec), overrides);
  }
  // Command-line flags win over the spec file.
  nlohmann::json flags = nlohmann::json::object();
  if (a.trials) flags["trials"] = *a.trials;
  if (a.seed) flags["seed"] = *a.seed;
  if (a.platform) flags["platform"] = *a.platform;
  if (a.mutability) flags["mutability"] = *a.mutability;
  spec = apply_overrides(std::move(spec), flags);
  const ReportFormat format = parse_report_format(a.format);

  const ScenarioReport report = run_scenario(spec);
  const std::string text = render(report, format);
  if (a.out) {
    write_text_file(*a.out, text);
  } else {
    out << text;
  }
  if (!report.passed) {
    for (const auto& c : report.checks) {
      if (!c.passed) err << "check failed: " << c.name << " (" << c.detail << ")\n";
    }
    if (report.timing && !report.timing->within_budget()) {
      err << "verification time over budget: " << report.timing->meanNanos << " ns\n";
    }
    return kExitMismatch;
  }
  return kExitOk;
}

int do_matrix(const MatrixArgs& a, std::ostream& out, std::ostream& err) {
  const PropertyMatrix fixture = PropertyMatrix::load_fixture(a.fixture);
  ScenarioSpec spec = default_spec("mechanism_matrix");
  spec.seed = a.seed;
  const ScenarioReport report = run_scenario(spec);
  out << report.matrix->to_markdown();
  const auto diffs = report.matrix->diff_marks(fixture);
  for (const auto& d : diffs) err << "mismatch: " << d << '\n';
  if (!diffs.empty() || !report.passed) return kExitMismatch;
  out << "matrix matches " << a.fixture << '\n';
  return kExitOk;
}

int do_table3(const Table3Args& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ScenarioReport> reports;
  for (const char* name : {"table3_vulnerable", "table3_secure"}) {
    ScenarioSpec spec = default_spec(name);
    spec.trials = a.trials;
    spec.seed = a.seed;
    reports.push_back(run_scenario(spec));
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  out << table3_markdown(reports);
  out << "elapsed: " << elapsed.count() << " ms\n";
  const bool exact = reports[0].successes == a.trials && reports[1].successes == 0;
  return exact ? kExitOk : kExitMismatch;
}

std::string trim(std::string s) {
  const auto end = s.find_last_not_of(" \t\r\n");
  s.erase(end == std::string::npos ? 0 : end + 1);
  const auto begin = s.find_first_not_of(" \t\r\n");
  return begin == std::string::npos ? std::string{} : s.substr(begin);
}

int do_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  const std::string credential = trim(read_file(a.credentialFile));
  if (credential.empty()) {
    err << "provider credential file is empty\n";
    return kExitUsage;
  }
  RegistryState state;
  if (std::filesystem::exists(a.db)) state = load_registry_state(a.db);
  PartnerRegistry registry(credential, wall_clock_millis(), std::move(state));
  RegistryHttpServer server(registry, a.db);

  // Deliver SIGINT/SIGTERM to a waiting thread instead of a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = server.bind(a.host, a.port);
  out << "registry listening on " << a.host << ':' << port << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  // listen() can also end on its own; wake the waiter so it can be joined.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  registry.persist(a.db);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Android IPC authentication simulator", "ipcauth"};
  app.require_subcommand(1);

  RunArgs run;
  auto* runCmd = app.add_subcommand("run", "Run one catalog scenario");
  runCmd->add_option("scenario", run.scenario, "Scenario name")->required();
  runCmd->add_option("--trials", run.trials, "Number of trials")->check(CLI::PositiveNumber);
  runCmd->add_option("--seed", run.seed, "Seed for incidental variety");
  runCmd->add_option("--platform", run.platform, "android14 or android15")
      ->check(CLI::IsMember({"android14", "android15"}));
  runCmd->add_option("--mutability", run.mutability, "immutable or mutable")
      ->check(CLI::IsMember({"immutable", "mutable"}));
  runCmd->add_option("--format", run.format, "json or md")
      ->check(CLI::IsMember({"json", "md"}));
  runCmd->add_option("--out", run.out, "Write the report here instead of stdout");
  runCmd->add_option("--spec", run.spec, "JSON file overriding trials/seed/platform");

  MatrixArgs matrix;
  auto* matrixCmd = app.add_subcommand("matrix", "Compare the live property matrix to a fixture");
  matrixCmd->add_option("--fixture", matrix.fixture, "Fixture JSON")->capture_default_str();
  matrixCmd->add_option("--seed", matrix.seed, "Scenario seed")->capture_default_str();

  Table3Args table3;
  auto* table3Cmd = app.add_subcommand("table3", "Run both attack-success rows");
  table3Cmd->add_option("--trials", table3.trials, "Trials per row")->capture_default_str()
      ->check(CLI::PositiveNumber);
  table3Cmd->add_option("--seed", table3.seed, "Seed")->capture_default_str();

  ServeArgs serve;
  auto* serveCmd = app.add_subcommand("serve-registry", "Serve the partner registry over HTTP");
  serveCmd->add_option("--port", serve.port, "TCP port, 0 for any")->required();
  serveCmd->add_option("--db", serve.db, "Registry JSON file")->required();
  serveCmd->add_option("--provider-credential-file", serve.credentialFile,
                       "File holding the provider credential")
      ->required();
  serveCmd->add_option("--host", serve.host, "Bind address")->capture_default_str();

  auto* listCmd = app.add_subcommand("list", "List catalog scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*runCmd) return do_run(run, out, err);
    if (*matrixCmd) return do_matrix(matrix, out, err);
    if (*table3Cmd) return do_table3(table3, out);
    if (*serveCmd) return do_serve(serve, out, err);
    if (*listCmd) {
      for (const auto& name : scenario_catalog()) out << name << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    switch (e.code()) {
      case Errc::UnknownScenario:
      case Errc::InvalidSpec:
      case Errc::InvalidArgument:
      case Errc::IoError:
      case Errc::CorruptFile:
        return kExitUsage;
      default:
        return kExitMismatch;
    }
  }
  return kExitUsage;
}

}  // namespace ipcauth
