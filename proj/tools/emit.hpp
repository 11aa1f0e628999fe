#pragma once

// CSV/JSON output helpers for the wallsol tool. CSV numbers carry 17
// significant digits so files round-trip bit-exactly.

#include "walls/grid.hpp"
#include "walls/residual_check.hpp"
#include "walls/tail_fit.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace wallsol {

using Json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<walls::Field> columns;

  void add(std::string name, walls::Field col) {
    header.push_back(std::move(name));
    columns.push_back(std::move(col));
  }

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    for (std::size_t c = 0; c < header.size(); ++c)
      os << (c ? "," : "") << header[c];
    os << "\n";
    const Eigen::Index rows = columns.empty() ? 0 : columns.front().size();
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < columns.size(); ++c)
        os << (c ? "," : "") << fmt17(columns[c][r]);
      os << "\n";
    }
    if (!os) throw std::ios_base::failure("write failed for '" + path + "'");
  }
};

inline void write_json(const std::string& path, const Json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  os << j.dump(2) << "\n";
  if (!os) throw std::ios_base::failure("write failed for '" + path + "'");
}

inline Json tail_fit_json(const walls::TailFit& f) {
  Json j;
  j["model"] = f.model == walls::TailModel::linear ? "linear" : "linear_plus_quadratic";
  j["window"] = {f.x_lo, f.x_hi};
  std::vector<double> c(f.coeffs.data(), f.coeffs.data() + f.coeffs.size());
  j["coeffs"] = c;
  j["residual_rms"] = f.residual_rms;
  j["n_points"] = f.n_points;
  return j;
}

inline Json residual_json(const walls::verify::ResidualReport& r) {
  Json j;
  j["equation"] = r.equation;
  j["sup_norm"] = r.sup_norm;
  j["h"] = r.h;
  j["c_measured"] = r.c_measured;
  j["excluded"] = r.excluded;
  return j;
}

inline Json grid_json(const walls::Grid& g) {
  Json j;
  j["x_min"] = g.x_min();
  j["x_max"] = g.x_max();
  j["n"] = g.n();
  return j;
}

}  // namespace wallsol
