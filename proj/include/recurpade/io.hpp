#ifndef RECURPADE_IO_HPP
#define RECURPADE_IO_HPP

#include <fstream>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "recurpade/hermite_pade.hpp"

namespace recurpade {

using Json = nlohmann::ordered_json;

namespace io {

// Strict parsing: unknown fields are rejected with the offending name.
inline void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw std::invalid_argument(where + ": unknown field '" + it.key() + "'");
  }
}

// Scalars arrive as "p/q" or decimal strings, integers, or [re, im] pairs.
// Non-integer JSON numbers are rejected: their decimal meaning is already
// lost to binary floating point by the time we see them.
template <class R>
R parse_real_value(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_real<R>(j.get<std::string>());
  if (j.is_number_integer()) return R(j.get<long long>());
  if (j.is_number_float())
    throw std::invalid_argument(where + ": write non-integer scalars as strings (\"3/4\" or \"0.75\")");
  throw std::invalid_argument(where + ": expected a scalar");
}

template <class R>
Complex<R> parse_scalar(const Json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2) throw std::invalid_argument(where + ": complex scalar must be [re, im]");
    return {parse_real_value<R>(j[0], where + "[0]"), parse_real_value<R>(j[1], where + "[1]")};
  }
  return Complex<R>(parse_real_value<R>(j, where));
}

template <class R>
std::vector<Complex<R>> parse_scalar_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": expected an array of scalars");
  std::vector<Complex<R>> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_scalar<R>(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class R>
Json scalar_json(const Complex<R>& v) {
  if (v.im == 0) return Json(format_real(v.re));
  return Json::array({format_real(v.re), format_real(v.im)});
}

inline Json scalar_json_cxf(const CxF& v) {
  if (v.im == 0) return Json(format_real(v.re));
  return Json::array({format_real(v.re), format_real(v.im)});
}

template <class R>
Json poly_json(const Polynomial<R>& p) {
  Json out = Json::array();
  for (int i = 0; i <= p.degree(); ++i) out.push_back(scalar_json(p.coeff(i)));
  return out;
}

template <class R>
Polynomial<R> parse_poly(const Json& j, const std::string& where) {
  return Polynomial<R>(parse_scalar_list<R>(j, where));
}

// {"order": m, "coeffs": [[alpha_{m,1},...,alpha_{m,m}], ...], "limit": [...]}
template <class R>
Recurrence<R> parse_recurrence_table(const Json& j, const std::string& where) {
  require_keys(j, {"order", "coeffs", "limit"}, where);
  if (!j.contains("order") || !j["order"].is_number_integer())
    throw std::invalid_argument(where + ": integer 'order' required");
  int order = j["order"].get<int>();
  if (!j.contains("coeffs") || !j["coeffs"].is_array())
    throw std::invalid_argument(where + ": 'coeffs' array required");
  std::vector<std::vector<Complex<R>>> rows;
  for (std::size_t i = 0; i < j["coeffs"].size(); ++i)
    rows.push_back(parse_scalar_list<R>(j["coeffs"][i], where + ".coeffs[" + std::to_string(i) + "]"));
  std::optional<std::vector<Complex<R>>> limit;
  if (j.contains("limit")) limit = parse_scalar_list<R>(j["limit"], where + ".limit");
  bool constant = !rows.empty();
  for (const auto& row : rows)
    if (row != rows.front()) {
      constant = false;
      break;
    }
  try {
    // a constant table is its own limit and extends to every n
    if (constant && (!limit || *limit == rows.front()))
      return Recurrence<R>::constant(rows.front());
    if (!limit && constant) limit = rows.front();
    return Recurrence<R>::from_table(order, std::move(rows), std::move(limit));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
}

// {"type": "rational"|"coeffs"|"recurrence", ...}
template <class R>
PowerSeries<R> parse_series(const Json& j, int need_n, const std::string& where) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument(where + ": series entry needs a 'type'");
  std::string type = j["type"].get<std::string>();
  if (type == "rational") {
    require_keys(j, {"type", "num", "den"}, where);
    if (!j.contains("num") || !j.contains("den"))
      throw std::invalid_argument(where + ": rational series needs 'num' and 'den'");
    return series_from_rational(parse_poly<R>(j["num"], where + ".num"),
                                parse_poly<R>(j["den"], where + ".den"), need_n);
  }
  if (type == "coeffs") {
    require_keys(j, {"type", "values"}, where);
    if (!j.contains("values")) throw std::invalid_argument(where + ": coeff series needs 'values'");
    return PowerSeries<R>(parse_scalar_list<R>(j["values"], where + ".values"));
  }
  if (type == "recurrence") {
    require_keys(j, {"type", "table", "init"}, where);
    if (!j.contains("table") || !j.contains("init"))
      throw std::invalid_argument(where + ": recurrence series needs 'table' and 'init'");
    Recurrence<R> rec = parse_recurrence_table<R>(j["table"], where + ".table");
    auto init = parse_scalar_list<R>(j["init"], where + ".init");
    int n = std::min(need_n, rec.max_n() == INT_MAX ? need_n : rec.max_n());
    return forward_solve(rec, std::move(init), n).series;
  }
  throw std::invalid_argument(where + ": unknown series type '" + type + "'");
}

// {"mode": "exact"|"bigfloat", "bits": n, "zero_threshold_log10": x}
inline PrecisionContext parse_precision(const Json& j, const std::string& where) {
  require_keys(j, {"mode", "bits", "zero_threshold_log10"}, where);
  std::string mode = j.contains("mode") ? j["mode"].get<std::string>() : "bigfloat";
  unsigned bits = j.contains("bits") ? j["bits"].get<unsigned>() : 256u;
  double zt = j.contains("zero_threshold_log10") ? j["zero_threshold_log10"].get<double>() : 0.0;
  if (mode == "exact") return PrecisionContext::exact_rational(bits);
  if (mode == "bigfloat") return PrecisionContext::big_float(bits, zt);
  throw std::invalid_argument(where + ": mode must be 'exact' or 'bigfloat'");
}

inline Json precision_json(const PrecisionContext& ctx) {
  Json out;
  out["mode"] = ctx.exact() ? "exact" : "bigfloat";
  out["bits"] = ctx.float_precision_bits();
  if (!ctx.exact()) out["zero_threshold_log10"] = ctx.zero_threshold_log10();
  return out;
}

inline Json rootset_json(const RootSet& rs) {
  Json out = Json::array();
  for (const auto& r : rs.roots) {
    Json e;
    e["location"] = scalar_json_cxf(r.location);
    e["multiplicity"] = r.multiplicity;
    if (r.exact) e["exact"] = scalar_json(*r.exact);
    out.push_back(std::move(e));
  }
  return out;
}

inline Json radius_json(const RadiusEstimate& est) {
  Json out;
  out["value"] = est.value;
  out["method"] = radius_method_name(est.method);
  out["confidence_width"] = est.confidence_width;
  out["samples_used"] = Json::array({est.first_n, est.last_n});
  return out;
}

inline Json provenance_json(const std::vector<ProvenanceRecord>& prov) {
  Json out = Json::array();
  for (const auto& p : prov) {
    Json e;
    e["stage"] = p.stage;
    e["circle_radius"] = p.circle_radius;
    e["branch"] = p.branch;
    e["rank"] = p.rank;
    e["shift_n0"] = p.shift_n0;
    e["residuals"] = p.residuals;
    out.push_back(std::move(e));
  }
  return out;
}

// write temp + rename so readers never see a torn report
inline void write_atomic(const std::string& path, const std::string& body) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << body;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace io
}  // namespace recurpade

#endif
