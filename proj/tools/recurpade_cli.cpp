// recurpade: analyze linear recurrences with limit coefficients and detect
// poles/singularities of power-series systems from Hermite-Pade rows.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "recurpade/io.hpp"

namespace rp = recurpade;
using rp::Json;

namespace {

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::optional<unsigned> precision_bits;
  bool exact = false;
  std::optional<int> n_max;
  bool emit_plots = false;
  double circle_tol = 1e-3;
};

Json config_json(const RunConfig& cfg, const rp::PrecisionContext& ctx) {
  Json out;
  out["command"] = cfg.command;
  out["input"] = cfg.input_path;
  out["output"] = cfg.output_path;
  out["precision"] = rp::io::precision_json(ctx);
  if (cfg.n_max) out["n_max"] = *cfg.n_max;
  out["emit_plots"] = cfg.emit_plots;
  out["circle_tol"] = cfg.circle_tol;
  return out;
}

rp::PrecisionContext resolve_precision(const Json& input, const RunConfig& cfg) {
  rp::PrecisionContext ctx =
      input.contains("precision") ? rp::io::parse_precision(input["precision"], "precision")
                                  : rp::PrecisionContext::big_float(256);
  if (cfg.exact)
    ctx = rp::PrecisionContext::exact_rational(cfg.precision_bits.value_or(ctx.float_precision_bits()));
  else if (cfg.precision_bits) {
    ctx = ctx.exact() ? rp::PrecisionContext::exact_rational(*cfg.precision_bits)
                      : rp::PrecisionContext::big_float(*cfg.precision_bits);
  }
  ctx.apply();
  return ctx;
}

void write_csv(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::path p = dir.empty() ? std::filesystem::path(name) : std::filesystem::path(dir) / name;
  rp::io::write_atomic(p.string(), body);
}

template <class R>
void emit_ratio_plot(const RunConfig& cfg, const rp::PowerSeries<R>& f) {
  std::string body = "n,re_ratio,im_ratio\n";
  for (int n = 0; n + 1 <= f.truncation_order(); ++n) {
    if (f.coeff(n).is_zero()) continue;
    rp::CxF r = rp::to_bigfloat_cx(f.coeff(n + 1)) / rp::to_bigfloat_cx(f.coeff(n));
    body += std::to_string(n) + "," + std::to_string(rp::to_double(r.re)) + "," +
            std::to_string(rp::to_double(r.im)) + "\n";
  }
  write_csv(std::filesystem::path(cfg.output_path).parent_path().string(), "ratios.csv", body);
}

template <class R>
void emit_row_plots(const RunConfig& cfg, const rp::RowSequenceReport<R>& rep) {
  std::string dir = std::filesystem::path(cfg.output_path).parent_path().string();
  std::string zeros = "n,zero_index,re,im,dist_to_limit\n";
  for (std::size_t k = 0; k < rep.trajectories.size(); ++k) {
    const auto& tr = rep.trajectories[k];
    for (const auto& [n, z] : tr.points) {
      double d = rp::to_double(rp::abs_bf(z - tr.limit));
      zeros += std::to_string(n) + "," + std::to_string(k) + "," +
               std::to_string(rp::to_double(z.re)) + "," + std::to_string(rp::to_double(z.im)) + "," +
               std::to_string(d) + "\n";
    }
  }
  write_csv(dir, "zeros.csv", zeros);

  std::string qn = "n,qnorm_dist\n";
  if (rep.limit_q) {
    rp::Polynomial<rp::BigFloat> lim = rp::to_bigfloat_poly(*rep.limit_q);
    for (std::size_t i = 0; i < rep.ns.size(); ++i) {
      double d = rp::detail::poly_distance(rp::to_bigfloat_poly(rep.denominators[i]), lim);
      qn += std::to_string(rep.ns[i]) + "," + std::to_string(d) + "\n";
    }
  }
  write_csv(dir, "qnorm.csv", qn);
}

template <class R>
Json radius_or_error(const rp::PowerSeries<R>& f, rp::RadiusMethod method,
                     const rp::PrecisionContext& ctx) {
  try {
    return rp::io::radius_json(rp::estimate_radius(f, method, ctx));
  } catch (const rp::ComputeError& e) {
    Json out;
    out["error"] = e.what();
    return out;
  }
}

template <class R>
Json run_analyze(const Json& input, const RunConfig& cfg, const rp::PrecisionContext& ctx) {
  rp::io::require_keys(input, {"recurrence", "init", "N", "precision"}, "input");
  if (!input.contains("recurrence")) throw std::invalid_argument("input: 'recurrence' required");
  rp::Recurrence<R> rec = rp::io::parse_recurrence_table<R>(input["recurrence"], "recurrence");
  int N = cfg.n_max.value_or(input.value("N", 400));
  if (rec.max_n() != INT_MAX) N = std::min(N, rec.max_n());

  Json rep;
  rep["config"] = config_json(cfg, ctx);
  rep["order"] = rec.order();
  rep["limit_known"] = rec.has_limit();
  if (rec.has_limit()) {
    rp::Polynomial<R> p = rp::char_poly(rec);
    rp::Polynomial<R> a = rp::alpha_limit_poly(rec);
    rep["char_poly"] = rp::io::poly_json(p);
    rep["char_roots"] = rp::io::rootset_json(rp::poly_roots(p, ctx));
    rep["alpha_poly"] = rp::io::poly_json(a);
    rep["alpha_zeros"] = rp::io::rootset_json(rp::poly_roots(a, ctx));
  }
  {
    rp::SGBound sg = rp::sg_bounds(rec, std::min(N, 64), ctx);
    Json sj;
    sj["S"] = sg.S;
    sj["G"] = sg.G;
    sj["window"] = Json::array({sg.window_lo, sg.window_hi});
    sj["g_growing"] = sg.g_growing;
    rep["sg"] = std::move(sj);
  }
  if (input.contains("init")) {
    auto init = rp::io::parse_scalar_list<R>(input["init"], "init");
    rp::Solution<R> sol = rp::forward_solve(rec, init, N);
    Json sj;
    sj["init"] = input["init"];
    sj["radius_ratio_test"] = radius_or_error(sol.series, rp::RadiusMethod::RatioTest, ctx);
    sj["radius_root_test"] = radius_or_error(sol.series, rp::RadiusMethod::RootTestRegression, ctx);
    if (rec.has_limit()) {
      try {
        auto cls = rp::buslaev_classify(rec, sol, ctx, cfg.circle_tol);
        Json bj;
        bj["R0"] = rp::io::radius_json(cls.R0);
        bj["ell"] = cls.ell;
        bj["beta"] = rp::io::poly_json(cls.beta);
        Json zeros = Json::array();
        for (const auto& z : cls.circle_zeros) zeros.push_back(rp::io::scalar_json_cxf(z.location));
        bj["circle_zeros"] = std::move(zeros);
        sj["buslaev"] = std::move(bj);
      } catch (const rp::ComputeError& e) {
        sj["buslaev"] = Json{{"error", e.what()}};
      }
    }
    rep["solution"] = std::move(sj);
    if (cfg.emit_plots) emit_ratio_plot(cfg, sol.series);
  }
  return rep;
}

template <class R>
Json run_build(const Json& input, const RunConfig& cfg, const rp::PrecisionContext& ctx) {
  // "init" is tolerated so analyze and build can share a spec file; the
  // builder always starts from the canonical basis
  rp::io::require_keys(input, {"recurrence", "init", "N", "precision"}, "input");
  if (!input.contains("recurrence")) throw std::invalid_argument("input: 'recurrence' required");
  rp::Recurrence<R> rec = rp::io::parse_recurrence_table<R>(input["recurrence"], "recurrence");
  int N = cfg.n_max.value_or(input.value("N", 400));
  if (rec.max_n() != INT_MAX) N = std::min(N, rec.max_n());

  rp::BuilderOptions<R> opt;
  opt.circle_match_tol = cfg.circle_tol;
  rp::FundamentalSystem<R> sys = rp::build_fundamental_system(rec, N, ctx, opt);

  Json rep;
  rep["config"] = config_json(cfg, ctx);
  rep["order"] = rec.order();
  Json members = Json::array();
  for (const auto& mem : sys.members) {
    Json mj;
    mj["radius"] = rp::io::radius_json(mem.radius);
    Json sp = Json::array();
    for (const auto& z : mem.singular_points) sp.push_back(rp::io::scalar_json_cxf(z));
    mj["singular_points"] = std::move(sp);
    Json po = Json::array();
    for (const auto& [z, order] : mem.pole_orders)
      po.push_back(Json::array({rp::io::scalar_json_cxf(z), order}));
    mj["pole_orders"] = std::move(po);
    Json coords = Json::array();
    for (const auto& c : mem.coords) coords.push_back(rp::io::scalar_json(c));
    mj["coords"] = std::move(coords);
    members.push_back(std::move(mj));
  }
  rep["members"] = std::move(members);
  rep["total_shift"] = sys.total_shift;
  rep["independence_rank"] = sys.independence_rank;
  rep["provenance"] = rp::io::provenance_json(sys.provenance);
  if (cfg.emit_plots && !sys.members.empty()) emit_ratio_plot(cfg, sys.members.front().series);
  return rep;
}

template <class R>
rp::VectorSeries<R> parse_vector_series(const Json& input, int need_n) {
  rp::VectorSeries<R> vs;
  if (!input.contains("series") || !input["series"].is_array() || input["series"].empty())
    throw std::invalid_argument("input: nonempty 'series' array required");
  for (std::size_t i = 0; i < input["series"].size(); ++i)
    vs.components.push_back(
        rp::io::parse_series<R>(input["series"][i], need_n, "series[" + std::to_string(i) + "]"));
  if (!input.contains("multi_index") || !input["multi_index"].is_array())
    throw std::invalid_argument("input: 'multi_index' array required");
  for (const auto& v : input["multi_index"]) vs.multi_index.push_back(v.get<int>());
  vs.validate();
  return vs;
}

std::pair<int, int> parse_n_range(const Json& input) {
  if (!input.contains("n_range") || !input["n_range"].is_array() || input["n_range"].size() != 2)
    throw std::invalid_argument("input: 'n_range' [a, b] required");
  int a = input["n_range"][0].get<int>(), b = input["n_range"][1].get<int>();
  if (a < 0 || b < a) throw std::invalid_argument("input: malformed n_range");
  return {a, b};
}

template <class R>
Json run_hermite_pade(const Json& input, const RunConfig& cfg, const rp::PrecisionContext& ctx) {
  rp::io::require_keys(input, {"series", "multi_index", "n_range", "n", "precision"}, "input");
  int n = 0;
  if (input.contains("n_range")) n = parse_n_range(input).second;
  n = input.value("n", n);
  if (cfg.n_max) n = *cfg.n_max;
  if (n <= 0) throw std::invalid_argument("input: positive 'n' or 'n_range' required");
  rp::VectorSeries<R> vs = parse_vector_series<R>(input, n);
  rp::HermitePadeApproximant<R> hp = rp::hp_solve(vs, n, ctx);
  Json rep;
  rep["config"] = config_json(cfg, ctx);
  rep["n"] = hp.n;
  rep["q"] = rp::io::poly_json(hp.q);
  Json ps = Json::array();
  for (const auto& p : hp.p) ps.push_back(rp::io::poly_json(p));
  rep["p"] = std::move(ps);
  rep["kernel_dimension"] = hp.kernel_dimension;
  return rep;
}

Json trajectory_json(const rp::ZeroTrajectory& tr) {
  Json tj;
  tj["limit"] = rp::io::scalar_json_cxf(tr.limit);
  tj["anchor"] = rp::io::scalar_json_cxf(tr.anchor);
  tj["rate"] = rp::rate_class_name(tr.rate);
  tj["theta"] = tr.theta;
  tj["r2"] = tr.r2;
  tj["collided"] = tr.collided;
  tj["points"] = tr.points.size();
  return tj;
}

template <class R>
Json run_row_sequence(const Json& input, const RunConfig& cfg, const rp::PrecisionContext& ctx) {
  rp::io::require_keys(input, {"series", "multi_index", "n_range", "precision"}, "input");
  auto [a, b] = parse_n_range(input);
  if (cfg.n_max) b = *cfg.n_max;
  rp::VectorSeries<R> vs = parse_vector_series<R>(input, b);
  rp::RowSequenceReport<R> row = rp::row_sequence(vs, a, b, ctx);
  Json rep;
  rep["config"] = config_json(cfg, ctx);
  rep["n_range"] = Json::array({a, b});
  Json dens = Json::array();
  for (std::size_t i = 0; i < row.ns.size(); ++i)
    dens.push_back(Json{{"n", row.ns[i]}, {"q", rp::io::poly_json(row.denominators[i])}});
  rep["denominators"] = std::move(dens);
  rep["limit_detected"] = row.limit_q.has_value();
  if (row.limit_q) rep["limit_q"] = rp::io::poly_json(*row.limit_q);
  if (row.theta_global) {
    rep["theta_global"] = *row.theta_global;
    rep["theta_r2"] = row.theta_r2;
  }
  Json trs = Json::array();
  for (const auto& tr : row.trajectories) trs.push_back(trajectory_json(tr));
  rep["trajectories"] = std::move(trs);
  if (cfg.emit_plots) emit_row_plots(cfg, row);
  return rep;
}

template <class R>
Json run_classify(const Json& input, const RunConfig& cfg, const rp::PrecisionContext& ctx) {
  rp::io::require_keys(input, {"series", "multi_index", "n_range", "precision"}, "input");
  auto [a, b] = parse_n_range(input);
  rp::VectorSeries<R> vs = parse_vector_series<R>(input, cfg.n_max.value_or(b));
  if (cfg.emit_plots) {
    rp::RowSequenceReport<R> row = rp::row_sequence(vs, a, b, ctx);
    emit_row_plots(cfg, row);
  }
  rp::BuilderOptions<R> opt;
  opt.circle_match_tol = cfg.circle_tol;
  rp::SystemSingularityReport<R> rep = rp::classify_singularities(vs, a, b, ctx, opt);

  Json out;
  out["config"] = config_json(cfg, ctx);
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    Json ej;
    ej["zeta"] = rp::io::scalar_json_cxf(e.zeta);
    ej["kind"] = rp::singularity_kind_name(static_cast<int>(e.kind));
    if (e.kind == rp::SystemSingularityReport<R>::Kind::SystemPole) ej["order"] = e.order;
    ej["rate"] = rp::rate_class_name(e.rate);
    ej["theta"] = e.theta;
    Json wit = Json::array();
    for (const auto& p : e.witness) wit.push_back(rp::io::poly_json(p));
    ej["witness"] = std::move(wit);
    ej["witness_radius_before"] = e.witness_radius_before;
    if (std::isfinite(e.witness_radius_after))
      ej["witness_radius_after"] = e.witness_radius_after;
    else
      ej["witness_radius_after"] = "inf";  // principal part cleared everything
    ej["member_radius"] = e.member_radius;
    entries.push_back(std::move(ej));
  }
  out["entries"] = std::move(entries);
  if (rep.limit_q) out["limit_q"] = rp::io::poly_json(*rep.limit_q);
  if (rep.theta_global) out["theta_global"] = *rep.theta_global;
  out["induced_shift"] = rep.induced_shift;
  out["all_geometric"] = rep.all_geometric;
  out["all_distinct_moduli"] = rep.all_distinct_moduli;
  out["provenance"] = rp::io::provenance_json(rep.provenance);
  return out;
}

template <class R>
Json dispatch(const Json& input, const RunConfig& cfg, const rp::PrecisionContext& ctx) {
  if (cfg.command == "analyze-recurrence") return run_analyze<R>(input, cfg, ctx);
  if (cfg.command == "build-fundamental") return run_build<R>(input, cfg, ctx);
  if (cfg.command == "hermite-pade") return run_hermite_pade<R>(input, cfg, ctx);
  if (cfg.command == "row-sequence") return run_row_sequence<R>(input, cfg, ctx);
  if (cfg.command == "classify") return run_classify<R>(input, cfg, ctx);
  throw std::invalid_argument("unknown command " + cfg.command);
}

int run(const RunConfig& cfg) {
  Json input;
  {
    std::ifstream f(cfg.input_path);
    if (!f) {
      std::cerr << "error: cannot open input file '" << cfg.input_path << "'\n";
      return 1;
    }
    try {
      input = Json::parse(f);
    } catch (const Json::parse_error& e) {
      std::cerr << "error: " << cfg.input_path << ": " << e.what() << "\n";
      return 1;
    }
  }

  rp::PrecisionContext ctx = rp::PrecisionContext::big_float(256);
  try {
    ctx = resolve_precision(input, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    Json rep =
        ctx.exact() ? dispatch<rp::Rational>(input, cfg, ctx) : dispatch<rp::BigFloat>(input, cfg, ctx);
    rp::io::write_atomic(cfg.output_path, rep.dump(2) + "\n");
    return 0;
  } catch (const rp::BuilderError& e) {
    Json rep;
    rep["config"] = config_json(cfg, ctx);
    rep["error"] = Json{{"kind", rp::errc_name(e.code())}, {"message", e.what()}};
    rep["provenance"] = rp::io::provenance_json(e.provenance);
    rp::io::write_atomic(cfg.output_path, rep.dump(2) + "\n");
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rp::ComputeError& e) {
    Json rep;
    rep["config"] = config_json(cfg, ctx);
    rep["error"] = Json{{"kind", rp::errc_name(e.code())}, {"message", e.what()}};
    rp::io::write_atomic(cfg.output_path, rep.dump(2) + "\n");
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recurpade: recurrence asymptotics and Hermite-Pade singularity detection"};
  app.require_subcommand(1);

  RunConfig cfg;
  const char* commands[] = {"analyze-recurrence", "build-fundamental", "hermite-pade", "row-sequence",
                            "classify"};
  const char* blurbs[] = {
      "characteristic objects, S/G bounds and circle classification of a recurrence",
      "fundamental system isolating each circle of zeros of alpha",
      "one (n, m) type II Hermite-Pade approximant",
      "denominator row q_{n,|m|} with zero trajectories and rates",
      "system poles and system singularities of (f, m)"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], blurbs[i]);
    sub->add_option("--input", cfg.input_path, "problem spec (JSON)")->required();
    sub->add_option("--output", cfg.output_path, "report path (JSON)")->required();
    sub->add_option("--precision-bits", cfg.precision_bits, "MPFR working precision")
        ->envname("RECURPADE_PRECISION_BITS");
    sub->add_flag("--exact", cfg.exact, "exact rational arithmetic");
    sub->add_option("--n-max", cfg.n_max, "override N / upper row index");
    sub->add_flag("--emit-plots", cfg.emit_plots, "write CSV sidecar files next to the report");
    sub->add_option("--circle-tol", cfg.circle_tol, "relative tolerance for circle matching");
    sub->callback([&cfg, i, commands] { cfg.command = commands[i]; });
  }

  CLI11_PARSE(app, argc, argv);
  return run(cfg);
}
