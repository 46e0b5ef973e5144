#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pna/harness/experiment.hpp"
#include "pna/harness/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Approachability experiment runner"};
  app.require_subcommand(1);

  // ---- run ----------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run one experiment configuration");
  std::string appName = "swap";
  std::string algoName = "pseudo-maxent";
  std::string adversaryName = "iid";
  pna::harness::ExperimentConfig config;
  std::string tracePath, summaryPath, mdpFile, lossFile;

  run->add_option("--app", appName, "external|swap|procrustes|bayes|cmdp")
      ->capture_default_str();
  run->add_option("--algo", algoName, "linf|pseudo-quadratic|pseudo-maxent")
      ->capture_default_str();
  run->add_option("--adversary", adversaryName, "iid|fixed|worst")->capture_default_str();
  run->add_option("--k", config.K, "actions per player / per type")->capture_default_str();
  run->add_option("--c", config.C, "type count (bayes)")->capture_default_str();
  run->add_option("--n", config.n, "ball dimension (procrustes)")->capture_default_str();
  run->add_option("--t", config.T, "horizon")->capture_default_str();
  run->add_option("--seed", config.seed, "rng seed")->capture_default_str();
  run->add_option("--mdp-file", mdpFile, "layered MDP description (cmdp)");
  run->add_option("--loss-file", lossFile, "CSV loss rows (fixed adversary)");
  run->add_option("--trace", tracePath, "write per-round CSV trace here");
  run->add_option("--summary", summaryPath, "write JSON summary here");
  run->add_option("--eps0", config.eps0, "best-response oracle noise (cmdp)")
      ->capture_default_str();
  run->add_option("--eps1", config.eps1, "estimation oracle noise (cmdp)")
      ->capture_default_str();

  // ---- verify ---------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Run a named verification battery");
  std::string suiteName = "all";
  verify->add_option("--suite", suiteName,
                     "duality|dualset|equivalence|maxent|rates|cmdp|bruteforce|complexity|all")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      config.app = pna::harness::parseApplication(appName);
      config.algo = pna::harness::parseAlgoPath(algoName);
      config.adversary = pna::harness::parseAdversaryKind(adversaryName);
      config.mdpFile = mdpFile;
      config.lossFile = lossFile;
      config.tracePath = tracePath;
      config.summaryPath = summaryPath;
      config.validate();

      pna::harness::RunOutput out = pna::harness::runExperiment(config);
      std::printf("app=%s algo=%s t=%d seed=%llu\n", appName.c_str(), algoName.c_str(), config.T,
                  static_cast<unsigned long long>(config.seed));
      std::printf("final_regret=%.12g\n", out.finalRegret);
      std::printf("final_distance=%.12g\n", out.finalDistance);
      std::printf("rate_constant=%.12g\n", out.rateConstant);
      std::printf("wall_seconds=%.3f\n", out.wallSeconds);
      if (!tracePath.empty()) std::printf("trace=%s\n", tracePath.c_str());
      if (!summaryPath.empty()) std::printf("summary=%s\n", summaryPath.c_str());
      return 0;
    }

    std::vector<std::string> names;
    if (suiteName == "all") {
      names = pna::harness::allSuiteNames();
    } else {
      names.push_back(suiteName);
    }
    bool allPass = true;
    for (const auto& name : names) {
      pna::harness::SuiteResult result = pna::harness::runSuite(name);
      std::fputs(result.detail().c_str(), stdout);
      std::fflush(stdout);
      allPass = allPass && result.pass;
    }
    return allPass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
