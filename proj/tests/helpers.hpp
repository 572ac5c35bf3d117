#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline const std::string source_dir = MWASSOC_SOURCE_DIR;

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string model_path(const std::string& model, const std::string& file) {
  return source_dir + "/models/" + model + "/" + file;
}

} // namespace testing
