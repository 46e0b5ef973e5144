#include "pna/harness/mdp_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pna::harness {

apps::LayeredMdp parseMdp(std::istream& input) {
  apps::LayeredMdp mdp;
  struct Entry {
    int x, a, j;
    double v;
  };
  std::vector<Entry> transEntries, lossEntries;
  std::vector<std::pair<int, double>> threshEntries;

  std::string line;
  int lineNo = 0;
  while (std::getline(input, line)) {
    ++lineNo;
    std::string trimmed = line.substr(0, line.find('#'));
    std::istringstream ss(trimmed);
    std::string tag;
    if (!(ss >> tag)) continue;
    auto fail = [&](const std::string& why) {
      throw std::runtime_error("mdp parse error at line " + std::to_string(lineNo) + ": " + why);
    };
    if (tag == "layer") {
      int size;
      if (!(ss >> size)) fail("layer needs a state count");
      mdp.layerSizes.push_back(size);
    } else if (tag == "actions") {
      if (!(ss >> mdp.actions)) fail("actions needs a count");
    } else if (tag == "dims") {
      if (!(ss >> mdp.d)) fail("dims needs a count");
    } else if (tag == "trans") {
      Entry e;
      if (!(ss >> e.x >> e.a >> e.j >> e.v)) fail("trans needs x a x' prob");
      transEntries.push_back(e);
    } else if (tag == "loss") {
      Entry e;
      if (!(ss >> e.x >> e.a >> e.j >> e.v)) fail("loss needs x a i v");
      lossEntries.push_back(e);
    } else if (tag == "thresh") {
      int i;
      double v;
      if (!(ss >> i >> v)) fail("thresh needs i v");
      threshEntries.emplace_back(i, v);
    } else if (tag == "eps0") {
      if (!(ss >> mdp.eps0)) fail("eps0 needs a value");
    } else if (tag == "eps1") {
      if (!(ss >> mdp.eps1)) fail("eps1 needs a value");
    } else {
      fail("unknown record '" + tag + "'");
    }
  }

  if (mdp.layerSizes.empty()) throw std::runtime_error("mdp parse error: no layers");
  if (mdp.actions < 1) throw std::runtime_error("mdp parse error: no actions record");
  if (mdp.d < 1) throw std::runtime_error("mdp parse error: no dims record");

  const int total = mdp.states();
  mdp.transition.assign(total, {});
  mdp.loss.assign(total, {});
  for (int x = 0; x < total; ++x) {
    if (!mdp.acting(x)) continue;
    mdp.transition[x].assign(mdp.actions, Vector::Zero(total));
    mdp.loss[x].assign(mdp.actions, Vector::Zero(mdp.d));
  }
  auto checkActing = [&](int x, int a) {
    if (x < 0 || x >= total || !mdp.acting(x)) {
      throw std::runtime_error("mdp parse error: state " + std::to_string(x) + " cannot act");
    }
    if (a < 0 || a >= mdp.actions) {
      throw std::runtime_error("mdp parse error: bad action " + std::to_string(a));
    }
  };
  for (const auto& e : transEntries) {
    checkActing(e.x, e.a);
    if (e.j < 0 || e.j >= total) throw std::runtime_error("mdp parse error: bad target state");
    mdp.transition[e.x][e.a](e.j) = e.v;
  }
  for (const auto& e : lossEntries) {
    checkActing(e.x, e.a);
    if (e.j < 0 || e.j >= mdp.d) throw std::runtime_error("mdp parse error: bad loss index");
    mdp.loss[e.x][e.a](e.j) = e.v;
  }
  mdp.thresholds = Vector::Zero(mdp.d);
  for (const auto& [i, v] : threshEntries) {
    if (i < 0 || i >= mdp.d) throw std::runtime_error("mdp parse error: bad threshold index");
    mdp.thresholds(i) = v;
  }
  mdp.validate();
  return mdp;
}

apps::LayeredMdp loadMdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mdp file: " + path);
  return parseMdp(in);
}

std::string formatMdp(const apps::LayeredMdp& mdp) {
  std::ostringstream out;
  out.precision(17);
  for (int size : mdp.layerSizes) out << "layer " << size << "\n";
  out << "actions " << mdp.actions << "\n";
  out << "dims " << mdp.d << "\n";
  for (int x = 0; x < mdp.states(); ++x) {
    if (!mdp.acting(x)) continue;
    for (int a = 0; a < mdp.actions; ++a) {
      for (int xp = 0; xp < mdp.states(); ++xp) {
        if (mdp.transition[x][a](xp) != 0) {
          out << "trans " << x << " " << a << " " << xp << " " << mdp.transition[x][a](xp) << "\n";
        }
      }
      for (int i = 0; i < mdp.d; ++i) {
        if (mdp.loss[x][a](i) != 0) {
          out << "loss " << x << " " << a << " " << i << " " << mdp.loss[x][a](i) << "\n";
        }
      }
    }
  }
  for (int i = 0; i < mdp.d; ++i) out << "thresh " << i << " " << mdp.thresholds(i) << "\n";
  if (mdp.eps0 > 0) out << "eps0 " << mdp.eps0 << "\n";
  if (mdp.eps1 > 0) out << "eps1 " << mdp.eps1 << "\n";
  return out.str();
}

}  // namespace pna::harness
