#include "hirota/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "hirota/presets.hpp"
#include "hirota/version.hpp"

namespace hirota {

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

double parse_double(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw Error(ErrorCode::BadConfig, "bad number '" + s + "'");
  return v;
}

bool has_nan(const FieldValue& v) {
  for (cplx c : {v.q1, v.q0, v.qm1})
    if (std::isnan(c.real()) || std::isnan(c.imag())) return true;
  return false;
}

}  // namespace

void write_csv(std::ostream& os, const FieldGrid& grid) {
  grid.validate();
  os << kCsvHeader << '\n';
  const double nan = std::nan("");
  for (std::size_t it = 0; it < grid.t.size(); ++it) {
    for (std::size_t ix = 0; ix < grid.x.size(); ++ix) {
      const std::size_t k = it * grid.x.size() + ix;
      const FieldValue& v = grid.values[k];
      const bool masked = grid.mask[k] != 0;
      put(os, grid.x[ix]);
      os << ',';
      put(os, grid.t[it]);
      for (cplx c : {v.q1, v.q0, v.qm1}) {
        os << ',';
        put(os, masked ? nan : c.real());
        os << ',';
        put(os, masked ? nan : c.imag());
      }
      os << '\n';
    }
  }
}

std::string to_csv(const FieldGrid& grid) {
  std::ostringstream os;
  write_csv(os, grid);
  return os.str();
}

FieldGrid read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw Error(ErrorCode::BadConfig, "missing CSV header");
  FieldGrid g;
  g.version = kVersion;
  std::vector<double> xs, ts;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(parse_double(cell));
    if (cols.size() != 8) throw Error(ErrorCode::BadConfig, "CSV row must have 8 columns");
    xs.push_back(cols[0]);
    ts.push_back(cols[1]);
    FieldValue v{{cols[2], cols[3]}, {cols[4], cols[5]}, {cols[6], cols[7]}};
    g.mask.push_back(has_nan(v) ? 1 : 0);
    g.values.push_back(v);
  }
  if (xs.empty()) throw Error(ErrorCode::BadConfig, "CSV has no rows");

  std::size_t nx = 1;
  while (nx < ts.size() && ts[nx] == ts[0]) ++nx;
  if (ts.size() % nx != 0) throw Error(ErrorCode::BadConfig, "CSV rows do not form a grid");
  const std::size_t nt = ts.size() / nx;
  g.x.assign(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(nx));
  for (std::size_t it = 0; it < nt; ++it) {
    g.t.push_back(ts[it * nx]);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = it * nx + ix;
      if (xs[k] != g.x[ix] || ts[k] != g.t[it]) throw Error(ErrorCode::BadConfig, "CSV rows do not form a grid");
    }
  }
  return g;
}

nlohmann::json field_to_json(const FieldGrid& grid) {
  grid.validate();
  nlohmann::json q1 = nlohmann::json::array(), q0 = nlohmann::json::array(), qm1 = nlohmann::json::array();
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    const FieldValue& v = grid.values[k];
    if (grid.mask[k]) {
      q1.push_back(nullptr);
      q0.push_back(nullptr);
      qm1.push_back(nullptr);
    } else {
      q1.push_back(complex_to_json(v.q1));
      q0.push_back(complex_to_json(v.q0));
      qm1.push_back(complex_to_json(v.qm1));
    }
  }
  return {{"schema_version", kSchemaVersion},
          {"version", grid.version},
          {"preset", grid.preset},
          {"layout", "t_outer"},
          {"x", grid.x},
          {"t", grid.t},
          {"q1", q1},
          {"q0", q0},
          {"qm1", qm1}};
}

FieldGrid field_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema_version").get<std::string>() != kSchemaVersion)
      throw Error(ErrorCode::BadConfig, "unsupported schema_version");
    FieldGrid g;
    g.version = doc.value("version", std::string(kVersion));
    g.preset = doc.value("preset", std::string());
    g.x = doc.at("x").get<std::vector<double>>();
    g.t = doc.at("t").get<std::vector<double>>();
    const auto& q1 = doc.at("q1");
    const auto& q0 = doc.at("q0");
    const auto& qm1 = doc.at("qm1");
    const std::size_t n = g.x.size() * g.t.size();
    if (q1.size() != n || q0.size() != n || qm1.size() != n)
      throw Error(ErrorCode::BadConfig, "field arrays do not match the grid");
    const double nan = std::nan("");
    for (std::size_t k = 0; k < n; ++k) {
      if (q1[k].is_null()) {
        g.values.push_back({{nan, nan}, {nan, nan}, {nan, nan}});
        g.mask.push_back(1);
      } else {
        g.values.push_back({complex_from_json(q1[k]), complex_from_json(q0[k]), complex_from_json(qm1[k])});
        g.mask.push_back(0);
      }
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, e.what());
  }
}

}  // namespace hirota
