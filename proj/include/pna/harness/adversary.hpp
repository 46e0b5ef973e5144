#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pna/approach.hpp"
#include "pna/types.hpp"

namespace pna::harness {

enum class AdversaryKind { IidUniform, FixedFile, AdaptiveWorst };

AdversaryKind parseAdversaryKind(const std::string& name);

// Seeded adversary over a box loss set, usable as an approach-run LossSource.
//   iid-uniform    : every coordinate uniform in [lo, hi]
//   fixed-file     : replays rows of a loss matrix; errors when exhausted
//   adaptive-worst : enumerates the 2^m box vertices and picks the one
//                    maximizing the post-round distance probe
class Adversary {
 public:
  Adversary(AdversaryKind kind, int lossDim, double lo, double hi, std::uint64_t seed);

  void setReplay(Matrix rows);  // for FixedFile: one row per round

  Vector next(int t, const Vector& play, const DistanceProbe& probe);

  LossSource asLossSource();

 private:
  AdversaryKind kind_;
  int dim_;
  double lo_, hi_;
  std::mt19937_64 rng_;
  Matrix replay_;
};

Matrix loadLossFile(const std::string& path);  // CSV rows of losses

}  // namespace pna::harness
