// mwassoc-model: tabulate the bundled model curves from a parameter file.
//
// The parameter file is INI-like:
//
//   [potential a3Sigma]          -> writes a3Sigma.pot
//   label = a3Sigma
//   depth_cm1 = 250
//   ...
//   [dipole a3Sigma]             -> writes a3Sigma.dip
//
// Potentials are a Morse well switched onto a dispersion tail,
//   V(R) = asym + f(R) Morse(R) - (1 - f(R)) (c6/R^6 + c8/R^8),
//   f(R) = (1 - tanh((R - switch_r) / switch_width)) / 2,
// dipoles a Fermi-like step  d(R) = d0 / (1 + exp((R - r_d) / width)).

#include "mwassoc/units.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Section {
  std::string kind;
  std::string name;
  std::map<std::string, std::string> values;

  const std::string& text(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw std::runtime_error("[" + kind + " " + name + "] missing '" + key + "'");
    return it->second;
  }
  double number(const std::string& key) const {
    const auto& s = text(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::runtime_error("[" + kind + " " + name + "] bad number for '" + key + "'");
    }
    return v;
  }
  double number_or(const std::string& key, double fallback) const {
    return values.contains(key) ? number(key) : fallback;
  }
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<Section> read_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Section> sections;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      std::istringstream head(line.substr(1, line.find(']') - 1));
      Section s;
      head >> s.kind >> s.name;
      sections.push_back(s);
      continue;
    }
    if (sections.empty()) throw std::runtime_error("key outside of a section: " + line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("expected key = value: " + line);
    sections.back().values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return sections;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", x);
  return buf;
}

void write_potential(const Section& s, const std::filesystem::path& dir) {
  const double cm1 = mwassoc::units::codata2018.cm1_per_hartree;
  const double depth = s.number("depth_cm1") / cm1;
  const double r_eq = s.number("r_eq");
  const double range = s.number("range");
  const double asym_cm1 = s.number_or("asymptote_cm1", 0.0);
  const double c6 = s.number("c6");
  const double c8 = s.number_or("c8", 0.0);
  const double r_sw = s.number("switch_r");
  const double w_sw = s.number("switch_width");
  const double r_first = s.number("r_first");
  const double r_last = s.number("r_last");
  const int points = static_cast<int>(s.number("points"));

  std::ofstream out(dir / (s.name + ".pot"));
  out << "# Model curve generated by mwassoc-model; Morse well switched onto a dispersion tail.\n";
  out << "# depth_cm1=" << s.text("depth_cm1") << " r_eq=" << s.text("r_eq") << " range=" << s.text("range")
      << " switch_r=" << s.text("switch_r") << " switch_width=" << s.text("switch_width") << "\n";
  out << "label=" << s.text("label") << "\n";
  out << "unit_R=bohr\nunit_V=cm-1\n";
  out << "asymptote=" << s.text("asymptote_cm1") << "\n";
  out << "c6=" << s.text("c6") << "\n";
  out << "c8=" << (s.values.contains("c8") ? s.text("c8") : "0") << "\n";
  for (int i = 0; i < points; ++i) {
    const double r = r_first + (r_last - r_first) * i / (points - 1);
    const double x = 1.0 - std::exp(-range * (r - r_eq));
    const double morse = depth * (x * x - 1.0);
    const double disp = -(c6 / std::pow(r, 6) + c8 / std::pow(r, 8));
    const double f = 0.5 * (1.0 - std::tanh((r - r_sw) / w_sw));
    const double v = f * morse + (1.0 - f) * disp;
    out << fmt(r) << " " << fmt(asym_cm1 + v * cm1) << "\n";
  }
}

void write_dipole(const Section& s, const std::filesystem::path& dir) {
  const double d0 = s.number("d0");
  const double r_d = s.number("r_d");
  const double width = s.number("width");
  const double r_first = s.number("r_first");
  const double r_last = s.number("r_last");
  const int points = static_cast<int>(s.number("points"));

  std::ofstream out(dir / (s.name + ".dip"));
  out << "# Model dipole generated by mwassoc-model: d0 / (1 + exp((R - r_d) / width)).\n";
  out << "# d0=" << s.text("d0") << " r_d=" << s.text("r_d") << " width=" << s.text("width") << "\n";
  out << "kind=" << s.text("kind") << "\n";
  out << "couples=" << s.text("couples") << "\n";
  out << "unit_R=bohr\nunit_d=au\n";
  for (int i = 0; i < points; ++i) {
    const double r = r_first + (r_last - r_first) * i / (points - 1);
    out << fmt(r) << " " << fmt(d0 / (1.0 + std::exp((r - r_d) / width))) << "\n";
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabulate model potential and dipole curves from a parameter file"};
  std::string params;
  std::string outdir = ".";
  app.add_option("params", params, "parameter file")->required()->check(CLI::ExistingFile);
  app.add_option("-o,--outdir", outdir, "output directory");
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(outdir);
    for (const auto& s : read_params(params)) {
      if (s.kind == "potential") {
        write_potential(s, outdir);
      } else if (s.kind == "dipole") {
        write_dipole(s, outdir);
      } else if (s.kind != "system") {
        throw std::runtime_error("unknown section kind '" + s.kind + "'");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "mwassoc-model: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
