#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lindcorr/serialize.hpp"

namespace lindcorr {

enum class Command { Steady, Gap, GapPath, Decay, Figure };
enum class OutputFormat { Json, Csv };

struct RunConfig {
  Command command = Command::Steady;
  std::string model_path;                     // exclusive with preset
  std::string preset;
  std::map<std::string, std::string> params;  // preset parameters
  std::vector<int> grid;                      // momentum grid or finite extent
  double tol = 1e-9;
  std::string out_path;                       // empty: the given stream
  OutputFormat format = OutputFormat::Json;

  std::string method = "auto";                // steady: auto | dense | momentum
  std::string figure;                         // figure name
  std::string sweep;                          // gap: key=start:stop:count
  std::map<std::string, std::string> to_params;  // gap-path end point overrides
  std::string to_model_path;
  double kappa = 1.0;                         // gap-path auxiliary rate
  int samples = 41;                           // gap-path samples per leg
};

const char* command_name(Command c);

/// Process exit codes.
constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitUsage = 4;

/// Runs one command and writes the artifact to config.out_path or `out`.
/// Errors are reported as a JSON object on `err`; the return value is the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line into a RunConfig and runs it.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Config echo embedded in every artifact.
Json config_json(const RunConfig& config);

}  // namespace lindcorr
