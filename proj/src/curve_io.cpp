#include "mwassoc/errors.hpp"
#include "mwassoc/potentials.hpp"
#include "mwassoc/units.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mwassoc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line, std::string_view what) {
  double value = 0.0;
  // from_chars rejects a leading '+', which is common in hand-written files.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError(line, "cannot parse " + std::string(what) + " from '" + std::string(token) + "'");
  }
  return value;
}

struct RawTable {
  std::map<std::string, std::pair<std::string, std::size_t>> header; // key -> (value, line)
  std::vector<CurvePoint> rows;
  std::vector<std::size_t> row_lines;
};

RawTable read_table(std::string_view source, const std::set<std::string>& allowed_keys) {
  RawTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    const auto end = source.find('\n', pos);
    std::string_view line = source.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? source.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (const auto eq = line.find('='); eq != std::string_view::npos) {
      if (!table.rows.empty()) throw ParseError(line_no, "header line after data");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (!allowed_keys.contains(key)) throw ParseError(line_no, "unknown header field '" + key + "'");
      if (table.header.contains(key)) throw ParseError(line_no, "duplicate header field '" + key + "'");
      table.header[key] = {value, line_no};
      continue;
    }

    std::istringstream fields{std::string(line)};
    std::string r_tok, v_tok, extra;
    fields >> r_tok >> v_tok;
    if (v_tok.empty() || (fields >> extra)) throw ParseError(line_no, "expected two columns 'R value'");
    const double r = parse_number(r_tok, line_no, "R");
    const double v = parse_number(v_tok, line_no, "value");
    if (!table.rows.empty() && !(r > table.rows.back().r)) {
      throw ParseError(line_no, "R values must be strictly increasing");
    }
    if (!(r > 0.0)) throw ParseError(line_no, "R must be positive");
    table.rows.push_back({r, v});
    table.row_lines.push_back(line_no);
  }
  return table;
}

const std::string& require(const RawTable& t, const std::string& key, std::size_t last_line) {
  const auto it = t.header.find(key);
  if (it == t.header.end()) throw ParseError(last_line, "missing header field '" + key + "'");
  return it->second.first;
}

std::size_t line_of(const RawTable& t, const std::string& key) { return t.header.at(key).second; }

double length_factor(const RawTable& t, std::size_t last_line) {
  const auto& unit = require(t, "unit_R", last_line);
  if (unit == "bohr") return 1.0;
  if (unit == "angstrom") return units::codata2018.bohr_per_angstrom;
  throw ParseError(line_of(t, "unit_R"), "unit_R must be 'bohr' or 'angstrom', got '" + unit + "'");
}

std::size_t last_line(std::string_view source) {
  std::size_t n = 1;
  for (char c : source) n += c == '\n';
  return n;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

PotentialCurve load_tabulated(std::string_view source) {
  const RawTable t = read_table(source, {"label", "unit_R", "unit_V", "asymptote", "c6", "c8"});
  const std::size_t end = last_line(source);

  const double to_bohr = length_factor(t, end);
  const auto& unit_v = require(t, "unit_V", end);
  double to_hartree = 1.0;
  if (unit_v == "cm-1") {
    to_hartree = 1.0 / units::codata2018.cm1_per_hartree;
  } else if (unit_v != "hartree") {
    throw ParseError(line_of(t, "unit_V"), "unit_V must be 'hartree' or 'cm-1', got '" + unit_v + "'");
  }
  const std::string label = require(t, "label", end);
  if (label.empty()) throw ParseError(line_of(t, "label"), "label must not be empty");
  const std::string& asym_text = require(t, "asymptote", end);
  const double asymptote = parse_number(asym_text, line_of(t, "asymptote"), "asymptote") * to_hartree;
  const std::string& c6_text = require(t, "c6", end);
  const double c6 = parse_number(c6_text, line_of(t, "c6"), "c6");
  if (c6 < 0.0) throw ParseError(line_of(t, "c6"), "c6 must be >= 0");
  double c8 = 0.0;
  if (t.header.contains("c8")) {
    c8 = parse_number(t.header.at("c8").first, line_of(t, "c8"), "c8");
    if (c8 < 0.0) throw ParseError(line_of(t, "c8"), "c8 must be >= 0");
  }
  if (t.rows.size() < 8) {
    throw ParseError(end, "need at least 8 data points, found " + std::to_string(t.rows.size()));
  }

  std::vector<CurvePoint> points;
  points.reserve(t.rows.size());
  for (const auto& row : t.rows) points.push_back({row.r * to_bohr, row.value * to_hartree});
  try {
    return make_tabulated(label, std::move(points), asymptote, c6, c8);
  } catch (const std::invalid_argument& e) {
    throw ParseError(t.row_lines.front(), e.what());
  }
}

PotentialCurve load_tabulated_file(const std::string& path) {
  try {
    return load_tabulated(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(path, e.line(), e.message());
  }
}

DipoleCurve load_dipole(std::string_view source) {
  const RawTable t = read_table(source, {"label", "kind", "couples", "unit_R", "unit_d"});
  const std::size_t end = last_line(source);

  const double to_bohr = length_factor(t, end);
  double to_au = 1.0;
  if (t.header.contains("unit_d")) {
    const auto& unit = t.header.at("unit_d").first;
    if (unit == "debye") {
      to_au = 1.0e-21 / 299792458.0 / units::codata2018.ea0_in_Cm;
    } else if (unit != "au") {
      throw ParseError(line_of(t, "unit_d"), "unit_d must be 'au' or 'debye', got '" + unit + "'");
    }
  }
  const auto& kind_text = require(t, "kind", end);
  DipoleKind kind;
  if (kind_text == "permanent") {
    kind = DipoleKind::permanent;
  } else if (kind_text == "transition") {
    kind = DipoleKind::transition;
  } else {
    throw ParseError(line_of(t, "kind"), "kind must be 'permanent' or 'transition', got '" + kind_text + "'");
  }
  const std::string couples_text = require(t, "couples", end);
  std::pair<std::string, std::string> couples;
  if (const auto comma = couples_text.find(','); comma != std::string::npos) {
    couples = {std::string(trim(std::string_view(couples_text).substr(0, comma))),
               std::string(trim(std::string_view(couples_text).substr(comma + 1)))};
  } else {
    couples = {couples_text, couples_text};
  }
  if (couples.first.empty() || couples.second.empty()) {
    throw ParseError(line_of(t, "couples"), "couples must name one or two electronic states");
  }
  if (t.rows.size() < 4) {
    throw ParseError(end, "need at least 4 data points, found " + std::to_string(t.rows.size()));
  }
  std::vector<CurvePoint> points;
  for (const auto& row : t.rows) points.push_back({row.r * to_bohr, row.value * to_au});
  try {
    return make_dipole(kind, std::move(couples), std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ParseError(t.row_lines.front(), e.what());
  }
}

DipoleCurve load_dipole_file(const std::string& path) {
  try {
    return load_dipole(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(path, e.line(), e.message());
  }
}

} // namespace mwassoc
