// gls: command-line front end. Results go to stdout or --out as JSON
// (schema 1) or CSV; exit 0 ok, 2 precondition, 3 numerical, 64 usage.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gls/audit.hpp"
#include "gls/catalog.hpp"
#include "gls/duality.hpp"
#include "gls/gnorm.hpp"
#include "gls/martingale.hpp"
#include "gls/operators.hpp"
#include "gls/report.hpp"
#include "gls/series.hpp"
#include "gls/sup_search.hpp"
#include "gls/tail_bridge.hpp"

using namespace gls;

namespace {

constexpr int kExitPrecondition = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;

struct Output {
  Json json = Json::object();
  CsvTable csv;
  bool failed = false;  ///< audit-all: some criterion is red
};

struct RunConfig {
  std::string format = "json";
  std::string out;
  double tol = 0.0;
};

Json num(double x) { return json_number(x); }
Json num(const Extended& x) { return json_number(x.as_double()); }

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

Json header(const std::string& command) {
  Json j = Json::object();
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

Json endpoint_json(const EndpointLimit& e) {
  return {{"limit", num(e.limit)}, {"converged", e.converged}, {"unbounded", e.unbounded}};
}

std::vector<double> p_table(const Psi& psi, int points, double p_hi) {
  require(points >= 5, "p grid: need at least 5 points");
  const double hi = std::isfinite(psi.b()) ? psi.b() : (p_hi > psi.a() ? p_hi : kInf);
  if (std::isfinite(psi.b()) || !std::isfinite(hi)) return endpoint_grid(psi.a(), psi.b(), points);
  return linspace(psi.a() + 1e-6 * std::max(1.0, psi.a()), hi, static_cast<std::size_t>(points));
}

// ---- norm ----------------------------------------------------------------

struct NormArgs {
  std::string f, psi;
  int grid = 257;
};

Output run_norm(const NormArgs& a) {
  require(a.grid >= 17, "norm: --grid must be at least 17");
  const auto f = catalog_make(a.f);
  const Psi psi = psi_parse(a.psi);
  GNormOptions opt;
  opt.grid_points = a.grid;
  const auto r = g_norm(f, psi, opt);
  Output o;
  o.json = header("norm");
  o.json["f"] = f.name();
  o.json["psi"] = psi.label();
  o.json["value"] = num(r.value);
  o.json["p_star"] = num(r.p_star);
  o.json["endpoint_sup"] = r.endpoint_sup;
  o.json["lower"] = endpoint_json(r.lower);
  o.json["upper"] = endpoint_json(r.upper);
  Json prof = Json::array();
  o.csv.header = {"p", "ratio"};
  for (const auto& [p, v] : r.profile) {
    prof.push_back({num(p), num(v)});
    o.csv.rows.push_back({num(p), num(v)});
  }
  o.json["profile"] = prof;
  return o;
}

// ---- phi -----------------------------------------------------------------

struct PhiArgs {
  std::string psi;
  std::vector<double> delta;
  double log10_lo = -8.0, log10_hi = 8.0;
  int points = 0;
};

Output run_phi(const PhiArgs& a) {
  const Psi psi = psi_parse(a.psi);
  std::vector<double> deltas = a.delta;
  if (a.points > 0) {
    require(a.points >= 2, "phi: --points must be at least 2");
    for (double e : linspace(a.log10_lo, a.log10_hi, static_cast<std::size_t>(a.points))) deltas.push_back(std::pow(10.0, e));
  }
  require(!deltas.empty(), "phi: give --delta or --points");
  Output o;
  o.json = header("phi");
  o.json["psi"] = psi.label();
  o.csv.header = {"delta", "phi", "branch", "p_opt", "closed_phi", "closed_branch", "rel_diff", "flagged"};
  Json rows = Json::array();
  for (double d : deltas) {
    const auto fp = fundamental_phi(psi, d);
    const Json closed = fp.closed_phi ? num(*fp.closed_phi) : Json(nullptr);
    const Json cb = fp.closed_branch ? Json(to_string(*fp.closed_branch)) : Json(nullptr);
    rows.push_back({{"delta", num(d)}, {"phi", num(fp.phi)}, {"branch", to_string(fp.branch)}, {"p_opt", num(fp.p_opt)},
                    {"closed_phi", closed}, {"closed_branch", cb}, {"rel_diff", num(fp.rel_diff)}, {"flagged", fp.flagged}});
    o.csv.rows.push_back({num(d), num(fp.phi), to_string(fp.branch), num(fp.p_opt), fp.closed_phi ? closed : Json(""),
                          fp.closed_branch ? cb : Json(""), num(fp.rel_diff), fp.flagged ? 1 : 0});
  }
  o.json["samples"] = rows;
  return o;
}

// ---- tail-bound ----------------------------------------------------------

struct TailBoundArgs {
  std::string psi, f;
  double norm = 0.0;
  double log10_lo = -3.0, log10_hi = 3.0;
  int points = 25;
};

Output run_tail_bound(const TailBoundArgs& a) {
  const Psi psi = psi_parse(a.psi);
  require(a.points >= 2, "tail-bound: --points must be at least 2");
  std::optional<CatalogFunction> f;
  double norm = a.norm;
  if (!a.f.empty()) {
    f = catalog_make(a.f);
    require(f->tail.has_value(), "tail-bound: " + a.f + " has no tail");
    if (norm <= 0.0) norm = g_norm(*f, psi).value.as_double();
  }
  require(norm > 0.0 && std::isfinite(norm), "tail-bound: need a positive finite --norm or an --f in G(psi)");
  Output o;
  o.json = header("tail-bound");
  o.json["psi"] = psi.label();
  o.json["norm"] = num(norm);
  if (f) o.json["f"] = f->name();
  o.csv.header = {"u", "bound", "tail"};
  Json rows = Json::array();
  for (double e : linspace(a.log10_lo, a.log10_hi, static_cast<std::size_t>(a.points))) {
    const double u = std::pow(10.0, e);
    const double b = chebyshev_tail_bound(norm, psi, u);
    const double t = f ? (*f->tail)(u) : kNaN;
    rows.push_back({{"u", num(u)}, {"bound", num(b)}, {"tail", f ? num(t) : Json(nullptr)}});
    o.csv.rows.push_back({num(u), num(b), f ? num(t) : Json("")});
  }
  o.json["samples"] = rows;
  return o;
}

// ---- envelope ------------------------------------------------------------

struct EnvelopeArgs {
  std::string psi;
  double log10_lo = -2.0, log10_hi = 2.0;
  int points = 25;
};

Output run_envelope(const EnvelopeArgs& a) {
  const Psi psi = psi_parse(a.psi);
  require(a.points >= 2, "envelope: --points must be at least 2");
  std::vector<double> u;
  for (double e : linspace(a.log10_lo, a.log10_hi, static_cast<std::size_t>(a.points))) u.push_back(std::pow(10.0, e));
  const auto t = orlicz_envelope(psi).tabulate(u);
  Output o;
  o.json = header("envelope");
  o.json["psi"] = psi.label();
  o.csv.header = {"u", "N", "conjugate"};
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.u.size(); ++i) {
    rows.push_back({{"u", num(t.u[i])}, {"N", num(t.n[i])}, {"conjugate", num(t.conjugate[i])}});
    o.csv.rows.push_back({num(t.u[i]), num(t.n[i]), num(t.conjugate[i])});
  }
  o.json["samples"] = rows;
  return o;
}

// ---- operator ------------------------------------------------------------

struct OperatorArgs {
  std::string op, psi, series;
  int points = 25;
  double p_hi = 0.0;
  std::vector<double> p{2, 4, 8, 16, 32};
  std::vector<long> M{16, 256, 4096};
};

Output run_operator(const OperatorArgs& a) {
  const OperatorMap map = operator_parse(a.op);
  Output o;
  o.json = header("operator");
  o.json["operator"] = operator_name(map);
  if (!a.series.empty()) {
    require(map.kind == OperatorKind::riesz_partial_sum, "operator: --series goes with riesz-partial-sum");
    const auto audit = riesz_growth_audit(series_parse(a.series), a.p, a.M, true);
    o.json["series"] = a.series;
    o.json["max_normalized"] = num(audit.max_normalized);
    o.csv.header = {"p", "norm_f", "max_ratio", "argmax_M", "normalized"};
    Json rows = Json::array();
    for (const auto& r : audit.rows) {
      rows.push_back({{"p", num(r.p)}, {"norm_f", num(r.norm_f)}, {"max_ratio", num(r.max_ratio)},
                      {"argmax_M", r.argmax_M}, {"normalized", num(r.normalized)}});
      o.csv.rows.push_back({num(r.p), num(r.norm_f), num(r.max_ratio), r.argmax_M, num(r.normalized)});
    }
    o.json["rows"] = rows;
    Json rem = Json::array();
    for (const auto& [M, p, v] : audit.remainders) rem.push_back({{"M", M}, {"p", num(p)}, {"remainder", num(v)}});
    o.json["remainders"] = rem;
    return o;
  }
  require(!a.psi.empty(), "operator: give --psi (weight image) or --series (partial-sum audit)");
  const Psi psi = psi_parse(a.psi);
  const Psi img = operator_psi_image(map, psi);
  o.json["psi"] = psi.label();
  o.json["image"] = img.label();
  o.json["image_domain"] = {num(img.a()), num(img.b())};
  o.csv.header = {"p", "psi", "image"};
  Json rows = Json::array();
  for (double p : p_table(img, a.points, a.p_hi)) {
    const double src = psi.contains(p) ? psi(p) : kNaN;
    rows.push_back({{"p", num(p)}, {"psi", psi.contains(p) ? num(src) : Json(nullptr)}, {"image", num(img(p))}});
    o.csv.rows.push_back({num(p), psi.contains(p) ? num(src) : Json(""), num(img(p))});
  }
  o.json["samples"] = rows;
  return o;
}

// ---- martingale ----------------------------------------------------------

struct MartingaleArgs {
  std::string f, mode = "levels", psi, nu;
  int depth = 12;
  std::vector<double> p{1.5, 2, 4};
  double c = 0.25, d = 0.75;
};

Output run_martingale(const MartingaleArgs& a) {
  require(a.depth >= 1 && a.depth <= 24, "martingale: --depth must lie in 1..24");
  const UnitFunction f = unit_function(a.f);
  Output o;
  o.json = header("martingale");
  o.json["f"] = f.label;
  o.json["mode"] = a.mode;
  o.json["depth"] = a.depth;
  if (a.mode == "divergence") {
    const auto r = martingale_divergence(f, psi_parse(a.psi), a.depth);
    o.json["psi"] = a.psi;
    o.json["g_norm_f"] = num(r.g_norm_f);
    o.json["g0_distance"] = num(r.g0_distance);
    o.json["sup_level_norm"] = num(r.sup_level_norm);
    o.json["uniform_bound"] = r.uniform_bound;
    o.json["min_gap"] = num(r.min_gap);
    o.json["level_norms"] = nums(r.level_norms);
    o.json["gaps"] = nums(r.gaps);
    o.csv.header = {"n", "level_norm", "gap", "defect"};
    for (std::size_t n = 0; n < r.gaps.size(); ++n)
      o.csv.rows.push_back({static_cast<int>(n), num(r.level_norms[n]), num(r.gaps[n]), num(r.defects[n])});
    return o;
  }
  const auto m = dyadic_martingale(f, a.depth);
  o.json["martingale_identity"] = m.martingale_identity();
  if (a.mode == "levels") {
    o.csv.header = {"n", "p", "lp_difference"};
    Json lad = Json::array();
    for (double p : a.p) {
      const auto v = lp_convergence_ladder(m, p);
      lad.push_back({{"p", num(p)}, {"lp_difference", nums(v)}});
      for (std::size_t n = 0; n < v.size(); ++n) o.csv.rows.push_back({static_cast<int>(n), num(p), num(v[n])});
    }
    o.json["ladders"] = lad;
  } else if (a.mode == "doob") {
    const auto r = doob_audit(m, a.p);
    o.json["holds"] = r.holds;
    o.csv.header = {"p", "max_norm", "sup_level", "ratio", "bound", "holds"};
    Json rows = Json::array();
    for (const auto& x : r.rows) {
      rows.push_back({{"p", num(x.p)}, {"max_norm", num(x.max_norm)}, {"sup_level", num(x.sup_level)},
                      {"ratio", num(x.ratio)}, {"bound", num(x.bound)}, {"holds", x.holds}});
      o.csv.rows.push_back({num(x.p), num(x.max_norm), num(x.sup_level), num(x.ratio), num(x.bound), x.holds ? 1 : 0});
    }
    o.json["rows"] = rows;
  } else if (a.mode == "upcrossing") {
    o.csv.header = {"c", "d", "p", "mean_upcrossings", "bound", "doob_bound", "holds"};
    Json rows = Json::array();
    bool all = true;
    for (double p : a.p) {
      const auto u = upcrossing_audit(m, a.c, a.d, p);
      all = all && u.holds;
      rows.push_back({{"c", num(u.c)}, {"d", num(u.d)}, {"p", num(u.p)}, {"mean_upcrossings", num(u.mean_upcrossings)},
                      {"bound", num(u.bound)}, {"doob_bound", num(u.doob_bound)}, {"holds", u.holds}});
      o.csv.rows.push_back({num(u.c), num(u.d), num(u.p), num(u.mean_upcrossings), num(u.bound), num(u.doob_bound),
                            u.holds ? 1 : 0});
    }
    o.json["holds"] = all;
    o.json["rows"] = rows;
  } else if (a.mode == "convergence") {
    const auto r = martingale_convergence(m, psi_parse(a.psi), psi_parse(a.nu));
    o.json["psi"] = a.psi;
    o.json["nu"] = a.nu;
    o.json["sup_level_norm"] = num(r.sup_level_norm);
    o.json["running_max_norm"] = num(r.running_max_norm);
    o.json["ladder"] = nums(r.ladder);
    o.json["monotone_after_3"] = r.monotone_after_3;
    o.json["final_ratio"] = num(r.final_ratio);
    o.json["trend_to_zero"] = r.trend_to_zero;
    o.csv.header = {"n", "distance"};
    for (std::size_t n = 0; n < r.ladder.size(); ++n) o.csv.rows.push_back({static_cast<int>(n), num(r.ladder[n])});
  } else {
    throw PreconditionError("martingale: --mode must be levels, doob, upcrossing, convergence or divergence");
  }
  return o;
}

// ---- sharpness -----------------------------------------------------------

struct SharpnessArgs {
  std::string example = "saddle";
  double b = 2.0, beta = 1.0, a = 1.0, alpha = 1.0;
  int K = 0;
};

Json ladder_json(const RatioLadder& l) {
  Json pts = Json::array();
  for (const auto& [p, r] : l.points) pts.push_back({num(p), num(r)});
  return {{"lo", num(l.lo)}, {"hi", num(l.hi)}, {"points", pts}};
}

Output run_sharpness(const SharpnessArgs& a) {
  Output o;
  o.json = header("sharpness");
  o.json["example"] = a.example;
  o.csv.header = {"p", "normalized_moment"};
  const RatioLadder* ladder = nullptr;
  std::vector<std::tuple<int, double, double>> hits;
  SaddlePointExample sp{};
  StepExample st{};
  if (a.example == "saddle") {
    sp = saddle_point_example(a.b, a.beta, a.K > 0 ? a.K : 60);
    o.json["b"] = num(sp.b);
    o.json["beta"] = num(sp.beta);
    o.json["K"] = sp.K;
    o.json["mass_total"] = num(sp.mass_total);
    o.json["g_norm"] = num(sp.g_norm);
    ladder = &sp.moment_ratio;
    hits = sp.hits;
  } else if (a.example == "step") {
    st = step_example(a.a, a.alpha, a.K > 0 ? a.K : 5);
    o.json["a"] = num(st.a);
    o.json["alpha"] = num(st.alpha);
    o.json["K"] = st.K;
    ladder = &st.moment_ratio;
    hits = st.hits;
  } else {
    throw PreconditionError("sharpness: --example must be saddle or step");
  }
  o.json["moment_ratio"] = ladder_json(*ladder);
  Json h = Json::array();
  for (const auto& [k, lt, lc] : hits) h.push_back({{"k", k}, {"log_tail", num(lt)}, {"log_comparator", num(lc)}, {"hit", lt >= lc}});
  o.json["hits"] = h;
  for (const auto& [p, r] : ladder->points) o.csv.rows.push_back({num(p), num(r)});
  return o;
}

// ---- audit-all -----------------------------------------------------------

Output run_audit_all() {
  const auto results = audit_all();
  Output o;
  o.json = audit_json(results);
  o.failed = !o.json["passed"].get<bool>();
  o.csv.header = {"id", "title", "passed"};
  for (const auto& r : results) o.csv.rows.push_back({r.id, r.title, r.passed ? 1 : 0});
  return o;
}

void emit(const Output& o, const RunConfig& cfg) {
  const std::string text = cfg.format == "csv" ? csv_dump(o.csv) : json_dump(o.json);
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  require(static_cast<bool>(f), "cannot open --out file " + cfg.out);
  f << text;
}

const char* kUsage =
    "usage: gls <command> [options]\n"
    "commands: norm, phi, tail-bound, envelope, operator, martingale, sharpness, audit-all\n"
    "run 'gls <command> --help' for the options of one command\n";

}  // namespace

int main(int argc, char** argv) {
  static const std::vector<std::string> commands{"norm",     "phi",        "tail-bound", "envelope",
                                                 "operator", "martingale", "sharpness",  "audit-all"};
  if (argc < 2) {
    std::cerr << kUsage;
    return kExitUsage;
  }
  const std::string first = argv[1];
  if (first == "--help" || first == "-h") {
    std::cout << kUsage;
    return 0;
  }
  if (std::find(commands.begin(), commands.end(), first) == commands.end()) {
    std::cerr << "unknown command '" << first << "'\n" << kUsage;
    return kExitUsage;
  }

  CLI::App app{"Grand Lebesgue space toolkit", "gls"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--tol", cfg.tol, "relative quadrature tolerance (overrides GLS_TOL)");
  };
  std::function<Output()> action;

  NormArgs na;
  auto* s_norm = app.add_subcommand("norm", "G(psi) norm of a catalog function");
  s_norm->add_option("--f", na.f, "catalog function, e.g. h_m(m=1)")->required();
  s_norm->add_option("--psi", na.psi, "weight, e.g. zeta(a=1,b=4,alpha=1,beta=1)")->required();
  s_norm->add_option("--grid", na.grid, "sup-search grid points (>= 17)");
  add_common(s_norm);
  s_norm->callback([&] { action = [&] { return run_norm(na); }; });

  PhiArgs pa;
  auto* s_phi = app.add_subcommand("phi", "fundamental function phi(delta)");
  s_phi->add_option("--psi", pa.psi, "weight")->required();
  s_phi->add_option("--delta", pa.delta, "measure(s) of the set");
  s_phi->add_option("--points", pa.points, "log10-spaced delta grid size");
  s_phi->add_option("--log10-lo", pa.log10_lo, "grid start (log10 delta)");
  s_phi->add_option("--log10-hi", pa.log10_hi, "grid end (log10 delta)");
  add_common(s_phi);
  s_phi->callback([&] { action = [&] { return run_phi(pa); }; });

  TailBoundArgs ta;
  auto* s_tb = app.add_subcommand("tail-bound", "Chebyshev tail bound inf_p (||f|| psi(p) / u)^p");
  s_tb->add_option("--psi", ta.psi, "weight")->required();
  s_tb->add_option("--norm", ta.norm, "G(psi) norm of f");
  s_tb->add_option("--f", ta.f, "catalog function: its norm and true tail are used");
  s_tb->add_option("--log10-lo", ta.log10_lo, "u grid start (log10)");
  s_tb->add_option("--log10-hi", ta.log10_hi, "u grid end (log10)");
  s_tb->add_option("--points", ta.points, "u grid size");
  add_common(s_tb);
  s_tb->callback([&] { action = [&] { return run_tail_bound(ta); }; });

  EnvelopeArgs ea;
  auto* s_env = app.add_subcommand("envelope", "Orlicz envelope N(u) and its conjugate");
  s_env->add_option("--psi", ea.psi, "weight")->required();
  s_env->add_option("--log10-lo", ea.log10_lo, "u grid start (log10)");
  s_env->add_option("--log10-hi", ea.log10_hi, "u grid end (log10)");
  s_env->add_option("--points", ea.points, "u grid size");
  add_common(s_env);
  s_env->callback([&] { action = [&] { return run_envelope(ea); }; });

  OperatorArgs oa;
  auto* s_op = app.add_subcommand("operator", "weight image of an operator, or a partial-sum audit");
  s_op->add_option("--op", oa.op, "fourier-transform, riesz-partial-sum, maximal-fourier, singular(..), ...")->required();
  s_op->add_option("--psi", oa.psi, "source weight");
  s_op->add_option("--points", oa.points, "p grid size");
  s_op->add_option("--p-hi", oa.p_hi, "p grid end when the image domain is unbounded");
  s_op->add_option("--series", oa.series, "series for the partial-sum audit, e.g. f_d(d=1)");
  s_op->add_option("--p", oa.p, "exponents for the partial-sum audit");
  s_op->add_option("--M", oa.M, "partial-sum orders");
  add_common(s_op);
  s_op->callback([&] { action = [&] { return run_operator(oa); }; });

  MartingaleArgs ma;
  auto* s_mart = app.add_subcommand("martingale", "dyadic martingale audits on [0,1]");
  s_mart->add_option("--f", ma.f, "const(c=..), identity(), half_indicator(), power(r=..), g_b_nu(..), step(..)")
      ->required();
  s_mart->add_option("--mode", ma.mode, "levels, doob, upcrossing, convergence or divergence");
  s_mart->add_option("--depth", ma.depth, "dyadic levels (1..24)");
  s_mart->add_option("--psi", ma.psi, "weight (convergence, divergence)");
  s_mart->add_option("--nu", ma.nu, "target weight (convergence)");
  s_mart->add_option("--p", ma.p, "exponents");
  s_mart->add_option("--c", ma.c, "upcrossing lower level");
  s_mart->add_option("--d", ma.d, "upcrossing upper level");
  add_common(s_mart);
  s_mart->callback([&] { action = [&] { return run_martingale(ma); }; });

  SharpnessArgs sa;
  auto* s_sh = app.add_subcommand("sharpness", "extremal constructions near the endpoints");
  s_sh->add_option("--example", sa.example, "saddle or step");
  s_sh->add_option("--b", sa.b, "saddle: upper exponent");
  s_sh->add_option("--beta", sa.beta, "saddle: power");
  s_sh->add_option("--a", sa.a, "step: lower exponent");
  s_sh->add_option("--alpha", sa.alpha, "step: power");
  s_sh->add_option("--K", sa.K, "number of atoms or steps");
  add_common(s_sh);
  s_sh->callback([&] { action = [&] { return run_sharpness(sa); }; });

  auto* s_audit = app.add_subcommand("audit-all", "run the acceptance audits; nonzero exit on any failure");
  add_common(s_audit);
  s_audit->callback([&] { action = [] { return run_audit_all(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }

  try {
    if (cfg.tol != 0.0) {
      require(cfg.tol > 0.0 && std::isfinite(cfg.tol), "--tol must be positive");
      setenv("GLS_TOL", format_double(cfg.tol).c_str(), 1);
    }
    const Output o = action();
    emit(o, cfg);
    return o.failed ? 1 : 0;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const NumericalError& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return kExitNumerical;
  }
}
