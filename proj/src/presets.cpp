#include "hirota/presets.hpp"

#include <cmath>

namespace hirota {

namespace {

CMat2 sym(cplx g1, cplx g0, cplx gm1) { return CMat2{{g1, g0, g0, gm1}}; }

Preset make(std::string name, double alpha, double beta, cplx z, CMat2 C, NormingRank rank,
            QuartetPolicy policy = QuartetPolicy::Strict) {
  Preset p;
  p.name = std::move(name);
  p.bg = Background::focusing(alpha, beta, 1.0);
  p.seeds.push_back({z, C, rank});
  p.policy = policy;
  return p;
}

const cplx i1{0.0, 1.0};

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig3a", "fig3d", "fig4",  "fig5",   "fig6",  "fig7",
                                              "fig8",  "fig9",  "fig10a", "fig10d", "fig11"};
  return names;
}

Preset preset(std::string_view name) {
  using R = NormingRank;
  const auto off = QuartetPolicy::OffSpectrum;
  if (name == "fig3a") return make("fig3a", 1, 0.1, 2.0 * i1, sym(1, 1, 1), R::Rank1);
  if (name == "fig3d") return make("fig3d", 1, 1.0, 2.0 * i1, sym(1, 1, 1), R::Rank1);
  if (name == "fig4") return make("fig4", -1, 0.01, 2.0 * i1, sym(1, 2, 1), R::Rank2);
  if (name == "fig5") return make("fig5", -1, 0.01, cplx(0.5, 0.8), sym(0, 1, 0), R::Rank2, off);
  if (name == "fig6") return make("fig6", 1, 0.01, cplx(1.0, 2.0), sym(1, 1, 2), R::Rank2);
  if (name == "fig7") return make("fig7", 1, 0.1, cplx(1.0, 2.0), sym(i1, 1.0 + i1, i1), R::Rank2);
  if (name == "fig8") return make("fig8", -1, 0.1, 2.0 * i1, sym(2.0 * i1, i1, 2.0 * i1), R::Rank2);
  if (name == "fig9") return make("fig9", -1, 0.1, 2.0 * i1, sym(1, i1, 1), R::Rank2);
  if (name == "fig10a") return make("fig10a", 1, 0.1, 2.0 * i1, sym(1, 2, 4), R::Rank1);
  if (name == "fig10d") return make("fig10d", 1, 1.0, 2.0 * i1, sym(1, 2, 4), R::Rank1);
  if (name == "fig11")
    return make("fig11", 1, 0.1, cplx(0.5, std::sqrt(3.0) / 2.0), sym(i1, 2, -4.0 * i1), R::Rank1, off);
  throw Error(ErrorCode::UnknownPreset, std::string(name));
}

nlohmann::json complex_to_json(cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::BadConfig, "complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json matrix_to_json(const CMat2& m) {
  return nlohmann::json::array({nlohmann::json::array({complex_to_json(m(0, 0)), complex_to_json(m(0, 1))}),
                                nlohmann::json::array({complex_to_json(m(1, 0)), complex_to_json(m(1, 1))})});
}

CMat2 matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2)
    throw Error(ErrorCode::BadConfig, "matrix must be [[c, c], [c, c]]");
  return CMat2{{complex_from_json(j[0][0]), complex_from_json(j[0][1]), complex_from_json(j[1][0]),
                complex_from_json(j[1][1])}};
}

namespace {

template <class T>
T field_or(const nlohmann::json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::BadConfig, std::string("bad value for '") + key + "'");
  }
}

}  // namespace

Preset preset_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::BadConfig, "config must be a JSON object");
  Preset p;
  p.name = field_or<std::string>(doc, "name", "config");
  p.bg.sigma = field_or<int>(doc, "sigma", -1);
  p.bg.k0 = field_or<double>(doc, "k0", 1.0);
  p.bg.alpha = field_or<double>(doc, "alpha", 1.0);
  p.bg.beta = field_or<double>(doc, "beta", 0.0);
  p.bg.Qplus = doc.contains("Qplus") ? matrix_from_json(doc["Qplus"]) : CMat2::diag(p.bg.k0);
  p.bg.Qminus = doc.contains("Qminus") ? matrix_from_json(doc["Qminus"]) : p.bg.Qplus;

  const std::string policy = field_or<std::string>(doc, "policy", "strict");
  if (policy == "strict")
    p.policy = QuartetPolicy::Strict;
  else if (policy == "off_spectrum")
    p.policy = QuartetPolicy::OffSpectrum;
  else
    throw Error(ErrorCode::BadConfig, "policy must be 'strict' or 'off_spectrum'");

  if (doc.contains("seeds")) {
    if (!doc["seeds"].is_array()) throw Error(ErrorCode::BadConfig, "seeds must be an array");
    for (const auto& s : doc["seeds"]) {
      if (!s.is_object() || !s.contains("z") || !s.contains("C"))
        throw Error(ErrorCode::BadConfig, "each seed needs 'z' and 'C'");
      DiscreteEigenpair e;
      e.z = complex_from_json(s["z"]);
      e.C = matrix_from_json(s["C"]);
      const std::string rank = field_or<std::string>(s, "rank", "auto");
      if (rank == "rank1")
        e.rank = NormingRank::Rank1;
      else if (rank == "rank2")
        e.rank = NormingRank::Rank2;
      else if (rank == "auto")
        e.rank = std::abs(det2(e.C)) <= 1e-12 ? NormingRank::Rank1 : NormingRank::Rank2;
      else
        throw Error(ErrorCode::BadConfig, "rank must be 'rank1', 'rank2' or 'auto'");
      p.seeds.push_back(e);
    }
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object()) throw Error(ErrorCode::BadConfig, "grid must be an object");
    p.grid.xmin = field_or<double>(g, "xmin", p.grid.xmin);
    p.grid.xmax = field_or<double>(g, "xmax", p.grid.xmax);
    p.grid.nx = field_or<std::size_t>(g, "nx", p.grid.nx);
    p.grid.tmin = field_or<double>(g, "tmin", p.grid.tmin);
    p.grid.tmax = field_or<double>(g, "tmax", p.grid.tmax);
    p.grid.nt = field_or<std::size_t>(g, "nt", p.grid.nt);
  }
  try {
    p.bg.validate();
    (void)p.spec();
  } catch (const Error& e) {
    throw Error(ErrorCode::BadConfig, e.what());
  }
  return p;
}

nlohmann::json preset_to_json(const Preset& p) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : p.seeds)
    seeds.push_back({{"z", complex_to_json(s.z)},
                     {"C", matrix_to_json(s.C)},
                     {"rank", s.rank == NormingRank::Rank1 ? "rank1" : "rank2"}});
  return {{"name", p.name},
          {"sigma", p.bg.sigma},
          {"k0", p.bg.k0},
          {"alpha", p.bg.alpha},
          {"beta", p.bg.beta},
          {"Qplus", matrix_to_json(p.bg.Qplus)},
          {"Qminus", matrix_to_json(p.bg.Qminus)},
          {"policy", p.policy == QuartetPolicy::Strict ? "strict" : "off_spectrum"},
          {"seeds", seeds},
          {"grid",
           {{"xmin", p.grid.xmin},
            {"xmax", p.grid.xmax},
            {"nx", p.grid.nx},
            {"tmin", p.grid.tmin},
            {"tmax", p.grid.tmax},
            {"nt", p.grid.nt}}}};
}

}  // namespace hirota
