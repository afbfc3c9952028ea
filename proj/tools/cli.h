//
// Copyright 2026 The dpsurv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSURV_TOOLS_CLI_H_
#define DPSURV_TOOLS_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsurv/dataset.h"
#include "dpsurv/harness.h"

namespace dpsurv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

enum class Subcommand { kKm, kMedian, kLogrank, kHazard, kCumInc, kBench, kDatasets };
enum class OutputFormat { kJson, kCsv, kTable };

struct CommandPlan {
  Subcommand subcommand = Subcommand::kKm;
  // Set when the user asked for --help; nothing else is meaningful then.
  std::optional<std::string> help_text;

  // Input: a CSV path or a bundled fixture name (exactly one).
  std::string input;
  std::string dataset;
  SchemaConfig schema;

  // Absent epsilon means a non-private analysis.
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  bool seed_from_entropy = false;

  double alpha = 0.05;
  OutputFormat format = OutputFormat::kJson;
  std::optional<int> event_type;
  std::optional<double> time_scale;

  // bench
  ExperimentConfig experiment;
  std::string export_dir;
  CurveKind export_kind = CurveKind::kSurvival;

  // datasets: "list" or "export"
  std::string datasets_action;
};

// Parses arguments after the program name. Usage problems come back as
// InvalidArgument and map to exit code 2.
absl::StatusOr<CommandPlan> ParseArgs(std::span<const std::string> args);

// Runs a validated plan. Results go to `out`; diagnostics, the privacy line
// and drawn seeds go to `err`. Returns 0 on success, 1 on data or
// estimation errors.
int Execute(const CommandPlan& plan, std::ostream& out, std::ostream& err);

// ParseArgs + Execute with exit codes 0 / 1 / 2.
int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err);

}  // namespace dpsurv::cli

#endif  // DPSURV_TOOLS_CLI_H_
