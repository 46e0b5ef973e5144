#include "pna/harness/adversary.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pna::harness {

namespace {

double uniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

AdversaryKind parseAdversaryKind(const std::string& name) {
  if (name == "iid") return AdversaryKind::IidUniform;
  if (name == "fixed") return AdversaryKind::FixedFile;
  if (name == "worst") return AdversaryKind::AdaptiveWorst;
  throw std::invalid_argument("unknown adversary '" + name + "' (expected iid|fixed|worst)");
}

Adversary::Adversary(AdversaryKind kind, int lossDim, double lo, double hi, std::uint64_t seed)
    : kind_(kind), dim_(lossDim), lo_(lo), hi_(hi), rng_(seed) {
  if (lossDim < 1) throw std::invalid_argument("Adversary: loss dimension must be positive");
  if (hi <= lo) throw std::invalid_argument("Adversary: loss box must have hi > lo");
}

void Adversary::setReplay(Matrix rows) {
  if (rows.cols() != dim_) throw std::invalid_argument("Adversary: replay column count mismatch");
  replay_ = std::move(rows);
}

Vector Adversary::next(int t, const Vector& /*play*/, const DistanceProbe& probe) {
  switch (kind_) {
    case AdversaryKind::IidUniform: {
      Vector l(dim_);
      for (int i = 0; i < dim_; ++i) l(i) = lo_ + (hi_ - lo_) * uniformUnit(rng_);
      return l;
    }
    case AdversaryKind::FixedFile: {
      if (t - 1 >= replay_.rows()) {
        throw std::runtime_error("Adversary: loss file exhausted at round " + std::to_string(t));
      }
      return replay_.row(t - 1).transpose();
    }
    case AdversaryKind::AdaptiveWorst: {
      if (dim_ > 20) throw std::invalid_argument("Adversary: box-vertex search needs m ≤ 20");
      const long long verts = 1LL << dim_;
      Vector best = Vector::Constant(dim_, lo_);
      double bestValue = -std::numeric_limits<double>::infinity();
      for (long long mask = 0; mask < verts; ++mask) {
        Vector cand(dim_);
        for (int i = 0; i < dim_; ++i) cand(i) = (mask >> i) & 1 ? hi_ : lo_;
        double value = probe(cand);
        if (value > bestValue) {
          bestValue = value;
          best = cand;
        }
      }
      return best;
    }
  }
  throw std::logic_error("Adversary: unknown kind");
}

LossSource Adversary::asLossSource() {
  return [this](int t, const Vector& play, const DistanceProbe& probe) {
    return next(t, play, probe);
  };
}

Matrix loadLossFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open loss file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    if (row.empty()) continue;
    if (!rows.empty() && rows.front().size() != row.size()) {
      throw std::runtime_error("loss file rows have inconsistent lengths");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("loss file is empty: " + path);
  Matrix out(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) out(r, c) = rows[r][c];
  }
  return out;
}

}  // namespace pna::harness
