#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pna/approach.hpp"
#include "pna/harness/adversary.hpp"

namespace pna::harness {

enum class Application { External, Swap, Procrustes, Bayes, Cmdp };
enum class AlgoPath { LinfNegentropy, PseudoQuadratic, PseudoMaxent };

Application parseApplication(const std::string& name);
AlgoPath parseAlgoPath(const std::string& name);

struct ExperimentConfig {
  Application app = Application::Swap;
  int K = 3;                 // actions (external/swap/bayes)
  int C = 2;                 // types (bayes)
  int n = 3;                 // dimension (procrustes)
  std::string mdpFile;       // cmdp instance path
  int T = 1024;
  AlgoPath algo = AlgoPath::PseudoMaxent;
  AdversaryKind adversary = AdversaryKind::IidUniform;
  std::string lossFile;      // for fixed-file adversaries
  std::uint64_t seed = 1;
  std::string tracePath;     // empty = do not write
  std::string summaryPath;
  double eps0 = 0;           // cmdp oracle noise
  double eps1 = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct RunOutput {
  std::vector<RoundRecord> trace;
  double finalRegret = 0;
  double finalDistance = 0;
  double rateConstant = 0;   // finalRegret / √T
  double wallSeconds = 0;
  std::vector<Vector> plays;
  std::vector<Vector> losses;
};

// Runs the configured experiment, deterministic given the seed (wall time is
// reported but not part of any determinism contract).
RunOutput runExperiment(const ExperimentConfig& config);

void writeTraceCsv(const std::string& path, const std::vector<RoundRecord>& rows);
void writeSummaryJson(const std::string& path, const ExperimentConfig& config,
                      const RunOutput& output);

}  // namespace pna::harness
