#include "cli.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fraclap/ball_solver.hpp"
#include "fraclap/density_approx.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/extension_op.hpp"
#include "fraclap/levy_mc.hpp"
#include "fraclap/pointwise_op.hpp"
#include "fraclap/special_constants.hpp"
#include "fraclap/spectral_op.hpp"
#include "fraclap/verify.hpp"
#include "schema.hpp"

namespace fraclap::cli {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration helpers

Point to_point(const json& j, int dim) {
  Point p{};
  if (j.is_number()) {
    if (dim != 1) throw UsageError("a scalar point needs n = 1");
    p[0] = j.get<double>();
    return p;
  }
  if (static_cast<int>(j.size()) != dim) {
    throw UsageError("point " + j.dump() + " does not have " + std::to_string(dim) + " coordinates");
  }
  for (int i = 0; i < dim; ++i) p[i] = j[i].get<double>();
  return p;
}

ojson point_json(const Point& p, int dim) { return std::vector<double>(p.begin(), p.begin() + dim); }

std::vector<Point> to_points(const json& j, int dim) {
  std::vector<Point> out;
  for (const auto& item : j) out.push_back(to_point(item, dim));
  return out;
}

QuadratureSpec to_spec(const json& config) {
  QuadratureSpec spec;
  if (!config.contains("quadrature")) return spec;
  const json& q = config["quadrature"];
  spec.delta = q.value("delta", spec.delta);
  spec.R_mid = q.value("R_mid", spec.R_mid);
  spec.tol_rel = q.value("tol_rel", spec.tol_rel);
  spec.tol_abs = q.value("tol_abs", spec.tol_abs);
  spec.max_nodes = q.value("max_nodes", spec.max_nodes);
  if (q.value("tail_mode", std::string("analytic")) == "numeric") spec.tail_mode = TailMode::NumericCompactified;
  spec.validate();
  return spec;
}

ScalarField to_field(const json& j, int dim) {
  if (j.is_string()) return catalog_field(j.get<std::string>(), dim);
  FieldParams params;
  params.value = j.value("value", params.value);
  params.s = j.value("s", params.s);
  params.period = j.value("period", params.period);
  params.mode = j.value("mode", params.mode);
  if (j.contains("center")) params.center = to_point(j["center"], dim);
  ScalarField f = catalog_field(j["name"].get<std::string>(), dim, params);
  if (j.contains("lambda") || j.contains("shift") || j.contains("scale")) {
    const std::string name = f.name;
    f = transformed(f, j.value("lambda", 1.0), j.contains("shift") ? to_point(j["shift"], dim) : Point{},
                    j.value("scale", 1.0));
    f.name = name + "*";
  }
  return f;
}

// ---------------------------------------------------------------------------
// Subcommands

ojson run_constants(const json& c) {
  const ConstantSet k = constant_set(c["n"].get<int>(), c["s"].get<double>());
  ojson out;
  out["n"] = k.n;
  out["s"] = k.s;
  out["c"] = k.c;
  out["a"] = k.a;
  out["C_pois"] = k.C_pois;
  out["b"] = k.b ? ojson(*k.b) : ojson(nullptr);
  out["kappa"] = k.kappa;
  out["B_half"] = k.B_half;
  out["omega"] = k.omega;
  return out;
}

ojson run_eval(const json& c) {
  const int n = c.value("n", 1);
  const double s = c["s"].get<double>();
  const ScalarField field = to_field(c["field"], n);
  const std::vector<Point> points = to_points(c["points"], n);
  const std::vector<OpValue> values = frac_lap_grid(field, points, s, to_spec(c));
  ojson out;
  out["field"] = field.name;
  out["n"] = n;
  out["s"] = s;
  out["results"] = ojson::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    out["results"].push_back({{"x", point_json(points[i], n)},
                              {"value", values[i].value},
                              {"err_est", values[i].err_est},
                              {"nodes_used", values[i].nodes_used},
                              {"converged", values[i].converged()},
                              {"heuristic", values[i].heuristic}});
  }
  return out;
}

ojson run_spectral(const json& c) {
  PeriodicGrid grid;
  grid.dim = c.value("n", 1);
  grid.L = c.value("L", grid.L);
  grid.N = c.value("N", grid.N);
  grid.validate();
  const double s = c["s"].get<double>();
  const SampledField u = sample_field(to_field(c["field"], grid.dim), grid);
  const SampledField op = c.contains("compose") ? semigroup_compose(u, s, c["compose"].get<double>())
                                                : frac_lap_spectral(u, s);
  ojson out;
  out["n"] = grid.dim;
  out["s"] = s;
  if (c.contains("compose")) out["compose"] = c["compose"];
  out["L"] = grid.L;
  out["N"] = grid.N;
  out["trusted"] = op.trusted;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.node(i);
    xs.push_back(p[0]);
    if (grid.dim == 2) ys.push_back(p[1]);
  }
  out["x"] = xs;
  if (grid.dim == 2) out["y"] = ys;
  out["u"] = u.values;
  out["op"] = op.values;
  return out;
}

ojson run_extend(const json& c) {
  const double s = c["s"].get<double>();
  const ScalarField field = to_field(c["field"], 1);
  const QuadratureSpec spec = to_spec(c);
  ojson out;
  out["field"] = field.name;
  out["s"] = s;
  out["values"] = ojson::array();
  for (const auto& p : c["points"]) {
    const double x = p[0].get<double>();
    const double y = p[1].get<double>();
    out["values"].push_back({{"x", x}, {"y", y}, {"v", extend(field, make_point(x), y, s, spec)}});
  }
  out["trace"] = ojson::array();
  for (const auto& xj : c.value("trace", json::array())) {
    const double x = xj.get<double>();
    const TraceResult t = conormal_trace(field, make_point(x), s, default_y_levels(), spec);
    out["trace"].push_back({{"x", x},
                            {"op", t.op.value},
                            {"err_est", t.op.err_est},
                            {"limit", t.limit},
                            {"kappa", t.kappa},
                            {"kappa_theory", t.kappa_theory},
                            {"kappa_calibrated", t.kappa_calibrated}});
  }
  return out;
}

ojson run_solve_ball(const json& c) {
  BallProblem prob;
  prob.n = c.value("n", 1);
  prob.r = c.value("r", 1.0);
  prob.s = c["s"].get<double>();
  if (c.contains("g")) prob.g = to_field(c["g"], prob.n);
  if (c.contains("f")) prob.f = to_field(c["f"], prob.n);
  prob.g_radii = c.value("g_radii", std::vector<double>{});
  prob.validate();
  const QuadratureSpec spec = to_spec(c);
  const std::vector<Point> points = to_points(c["points"], prob.n);
  ojson out;
  out["n"] = prob.n;
  out["r"] = prob.r;
  out["s"] = prob.s;
  out["g"] = prob.g ? ojson(prob.g->name) : ojson(nullptr);
  out["f"] = prob.f ? ojson(prob.f->name) : ojson(nullptr);
  out["results"] = ojson::array();
  for (const Point& x : points) {
    const double u = norm(x) < prob.r ? solve_full(prob, x, spec) : (prob.g ? (*prob.g)(x) : 0.0);
    out["results"].push_back({{"x", point_json(x, prob.n)}, {"u", u}});
  }
  return out;
}

McConfig to_mc_config(const json& c) {
  McConfig m;
  m.dim = c.value("n", 1);
  m.s = c["s"].get<double>();
  m.seed = c.value("seed", m.seed);
  m.N = c.value("N", m.N);
  m.max_jumps = c.value("max_jumps", m.max_jumps);
  if (c.contains("domain")) {
    std::vector<Primitive> parts;
    for (const auto& b : c["domain"].value("balls", json::array())) {
      parts.push_back(Primitive::ball(b.contains("center") ? to_point(b["center"], m.dim) : Point{},
                                      b["radius"].get<double>()));
    }
    for (const auto& b : c["domain"].value("boxes", json::array())) {
      parts.push_back(Primitive::box(to_point(b["lo"], m.dim), to_point(b["hi"], m.dim)));
    }
    m.domain = McDomain::union_of(std::move(parts));
  }
  m.validate();
  return m;
}

ojson run_mc(const json& c) {
  const McConfig m = to_mc_config(c);
  const ScalarField g = to_field(c["g"], m.dim);
  const std::vector<Point> points = to_points(c["points"], m.dim);
  const std::string mode = c.value("mode", std::string("dirichlet"));
  ojson out;
  out["mode"] = mode;
  out["n"] = m.dim;
  out["s"] = m.s;
  out["seed"] = m.seed;
  out["N"] = m.N;
  out["g"] = g.name;
  out["results"] = ojson::array();
  for (const Point& x : points) {
    if (mode == "dirichlet") {
      const McEstimate e = mc_solve_dirichlet(g, m, x);
      out["results"].push_back({{"x", point_json(x, m.dim)},
                                {"estimate", e.estimate},
                                {"std_error", e.std_error},
                                {"n_effective", e.n_effective},
                                {"truncated_walks", e.truncated_walks}});
    } else {
      const std::vector<double> ts = c.value("t", std::vector<double>{0.0125, 0.025, 0.05});
      const auto samples = generator_check(g, x, ts, m);
      const Extrapolation ex = extrapolate_to_zero(samples);
      ojson row{{"x", point_json(x, m.dim)}, {"samples", ojson::array()}};
      for (const auto& smp : samples) {
        row["samples"].push_back({{"t", smp.t}, {"estimate", smp.estimate}, {"std_error", smp.std_error}});
      }
      row["extrapolated"] = {{"value", ex.value}, {"std_error", ex.std_error}};
      out["results"].push_back(std::move(row));
    }
  }
  return out;
}

ojson run_verify(const json& c) {
  const std::vector<Report> reports = run_suite(c.value("suite", std::string("all")));
  return to_json(reports);
}

ScalarField identity_field() {
  ScalarField f = constant_field(1, 0.0);
  f.eval = [](const Point& p) { return p[0]; };
  f.decay = Decay::power(-1.0, 1.0);
  f.name = "x";
  return f;
}

ojson run_approx(const json& c) {
  const std::string target_name = c.value("target", std::string("x2"));
  const std::size_t m = c.value("m", std::size_t{40});
  const double R = c.value("R", 3.0);
  const double s = c.value("s", 0.5);
  const double width = c.value("width", 0.0);
  const HarmonicBasis basis = build_basis(R, m, width, s, 1, c.value("nodes", 64));

  ScalarField target;
  if (target_name == "x") {
    target = identity_field();
  } else if (target_name == "gaussian") {
    target = gaussian_field(1);
  } else {
    target = windowed_quadratic_field(1);
  }
  ApproxOptions opt;
  opt.norm = c.value("norm", std::string("C0")) == "C1" ? ApproxNorm::C1 : ApproxNorm::C0;
  opt.fit_radius = c.value("fit_radius", opt.fit_radius);
  opt.report_radius = c.value("report_radius", opt.report_radius);
  opt.samples = c.value("samples", opt.samples);
  const ApproxResult r = approximate(target, basis, opt);
  const ScalarField fit = combination(basis, r.coefficients);

  ojson out;
  out["target"] = target_name;
  out["m"] = m;
  out["R"] = R;
  out["s"] = s;
  out["width"] = basis.width;
  out["norm"] = opt.norm == ApproxNorm::C1 ? "C1" : "C0";
  out["fit_radius"] = opt.fit_radius;
  out["report_radius"] = opt.report_radius;
  out["coefficients"] = r.coefficients;
  out["achieved_error"] = r.achieved_error;
  out["validation_error"] = r.validation_error;
  out["fit_error"] = r.fit_error;
  out["condition_estimate"] = r.condition_estimate;
  std::vector<double> xs;
  std::vector<double> ts;
  std::vector<double> fs;
  for (int i = 0; i <= 200; ++i) {
    const double x = -1.0 + i / 100.0;
    xs.push_back(x);
    ts.push_back(target(make_point(x)));
    fs.push_back(fit(make_point(x)));
  }
  out["table"] = {{"x", xs}, {"target", ts}, {"fit", fs}};
  if (c.contains("harnack_epsilon")) {
    out["harnack"] = to_json(harnack_failure_demo(c["harnack_epsilon"].get<double>(), basis, opt.samples));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string num(const ojson& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) return v.get<std::string>();
  return num(v.get<double>());
}

std::string coords_header(const ojson& x) {
  static const char* names[] = {"x", "y", "z"};
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) out += std::string(names[i]) + ",";
  return out;
}

std::string coords(const ojson& x) {
  std::string out;
  for (const auto& v : x) out += num(v) + ",";
  return out;
}

}  // namespace

nlohmann::ordered_json execute(const std::string& subcommand, const nlohmann::json& config) {
  validate_config(subcommand, config);
  if (subcommand == "constants") return run_constants(config);
  if (subcommand == "eval") return run_eval(config);
  if (subcommand == "spectral") return run_spectral(config);
  if (subcommand == "extend") return run_extend(config);
  if (subcommand == "solve-ball") return run_solve_ball(config);
  if (subcommand == "mc") return run_mc(config);
  if (subcommand == "verify") return run_verify(config);
  if (subcommand == "approx") return run_approx(config);
  throw UsageError("unknown subcommand '" + subcommand + "'");
}

std::string to_csv(const std::string& sub, const nlohmann::ordered_json& r) {
  std::ostringstream out;
  if (sub == "constants") {
    out << "key,value\n";
    for (const auto& [k, v] : r.items()) out << k << "," << num(v) << "\n";
  } else if (sub == "eval") {
    const auto& rows = r["results"];
    out << coords_header(rows[0]["x"]) << "value,err_est,nodes_used,converged\n";
    for (const auto& row : rows) {
      out << coords(row["x"]) << num(row["value"]) << "," << num(row["err_est"]) << "," << num(row["nodes_used"])
          << "," << num(row["converged"]) << "\n";
    }
  } else if (sub == "spectral") {
    const bool two = r.contains("y");
    out << (two ? "x,y,u,op\n" : "x,u,op\n");
    for (std::size_t i = 0; i < r["x"].size(); ++i) {
      out << num(r["x"][i]) << ",";
      if (two) out << num(r["y"][i]) << ",";
      out << num(r["u"][i]) << "," << num(r["op"][i]) << "\n";
    }
  } else if (sub == "extend") {
    out << "x,y,v\n";
    for (const auto& row : r["values"]) out << num(row["x"]) << "," << num(row["y"]) << "," << num(row["v"]) << "\n";
  } else if (sub == "solve-ball") {
    const auto& rows = r["results"];
    out << coords_header(rows[0]["x"]) << "u\n";
    for (const auto& row : rows) out << coords(row["x"]) << num(row["u"]) << "\n";
  } else if (sub == "mc") {
    const auto& rows = r["results"];
    if (r["mode"] == "dirichlet") {
      out << coords_header(rows[0]["x"]) << "estimate,std_error,n_effective,truncated_walks\n";
      for (const auto& row : rows) {
        out << coords(row["x"]) << num(row["estimate"]) << "," << num(row["std_error"]) << ","
            << num(row["n_effective"]) << "," << num(row["truncated_walks"]) << "\n";
      }
    } else {
      out << coords_header(rows[0]["x"]) << "t,estimate,std_error\n";
      for (const auto& row : rows) {
        for (const auto& smp : row["samples"]) {
          out << coords(row["x"]) << num(smp["t"]) << "," << num(smp["estimate"]) << "," << num(smp["std_error"])
              << "\n";
        }
        out << coords(row["x"]) << "0," << num(row["extrapolated"]["value"]) << ","
            << num(row["extrapolated"]["std_error"]) << "\n";
      }
    }
  } else if (sub == "verify") {
    out << "check_name,label,value,verdict\n";
    for (const auto& rep : r) {
      for (const auto& m : rep["measured"]) {
        out << num(rep["check_name"]) << "," << num(m["label"]) << "," << num(m["value"]) << ","
            << num(rep["verdict"]) << "\n";
      }
    }
  } else if (sub == "approx") {
    const auto& t = r["table"];
    out << "x,target,fit\n";
    for (std::size_t i = 0; i < t["x"].size(); ++i) {
      out << num(t["x"][i]) << "," << num(t["target"][i]) << "," << num(t["fit"][i]) << "\n";
    }
  }
  return out.str();
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw UsageError("failed while writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw UsageError("cannot move output into place at " + path + ": " + ec.message());
  }
}

namespace {

struct Common {
  std::string config;
  std::string output = "-";
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  bool validate_only = false;
};

struct Overrides {
  std::optional<int> n;
  std::optional<double> s;
  std::optional<std::string> field;
  std::vector<std::string> points;
  std::optional<double> L;
  std::optional<long> N;
  std::optional<double> compose;
  std::vector<double> trace;
  std::optional<double> r;
  std::optional<std::string> g;
  std::optional<std::string> f;
  std::optional<std::string> mode;
  std::optional<std::string> suite;
  std::optional<std::string> target;
  std::optional<long> m;
  std::optional<double> R;
  std::optional<std::string> norm;
  std::optional<double> width;
  std::string dump_samples;
  std::string table;
};

json parse_point_flag(const std::string& text) {
  json p = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("malformed point '" + text + "'");
    p.push_back(v);
  }
  if (p.empty()) throw UsageError("empty point");
  return p.size() == 1 ? p[0] : p;
}

void overlay(json& c, const std::string& sub, const Overrides& o) {
  if (o.n) c["n"] = *o.n;
  if (o.s) c["s"] = *o.s;
  if (o.field) c["field"] = *o.field;
  if (!o.points.empty()) {
    c["points"] = json::array();
    for (const auto& p : o.points) c["points"].push_back(parse_point_flag(p));
  }
  if (o.L) c["L"] = *o.L;
  if (o.N) c["N"] = *o.N;
  if (o.compose) c["compose"] = *o.compose;
  if (!o.trace.empty()) c["trace"] = o.trace;
  if (o.r) c["r"] = *o.r;
  if (o.g) c["g"] = *o.g;
  if (o.f) c["f"] = *o.f;
  if (o.mode) c["mode"] = *o.mode;
  if (o.suite) c["suite"] = *o.suite;
  if (o.target) c["target"] = *o.target;
  if (o.m) c["m"] = *o.m;
  if (o.R) c["R"] = *o.R;
  if (o.norm) c["norm"] = *o.norm;
  if (o.width) c["width"] = *o.width;
  (void)sub;
}

void diagnostic(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Convergence:
    case ErrorKind::Conditioning:
    case ErrorKind::Internal:
      return kNumerical;
    default:
      return kUsage;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional Laplacian toolkit: constants, operators, ball solvers, Monte Carlo and checks"};
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema, "Print the configuration schema and exit");
  app.require_subcommand(0, 1);

  Common common;
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON configuration file");
    sub->add_option("-o,--output", common.output, "Output path, '-' for standard output");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", common.seed, "Overrides the configuration seed");
    sub->add_flag("--validate-only", common.validate_only, "Check the configuration against the schema and stop");
  };

  auto* constants = app.add_subcommand("constants", "Normalising constants for (n, s)");
  constants->add_option("--n", o.n, "Dimension");
  constants->add_option("--s", o.s, "Order");

  auto* eval = app.add_subcommand("eval", "Direct-quadrature fractional Laplacian at points");
  eval->add_option("--n", o.n, "Dimension");
  eval->add_option("--s", o.s, "Order");
  eval->add_option("--field", o.field, "Catalog field name");
  eval->add_option("--point", o.points, "Point, comma separated (repeatable)");

  auto* spectral = app.add_subcommand("spectral", "Spectral fractional Laplacian on a periodic grid");
  spectral->add_option("--n", o.n, "Dimension (1 or 2)");
  spectral->add_option("--s", o.s, "Order");
  spectral->add_option("--field", o.field, "Catalog field name");
  spectral->add_option("--L", o.L, "Torus length");
  spectral->add_option("--N", o.N, "Grid points per axis");
  spectral->add_option("--compose", o.compose, "Second order applied after s");

  auto* ext = app.add_subcommand("extend", "Harmonic extension values and conormal traces (n = 1)");
  ext->add_option("--s", o.s, "Order");
  ext->add_option("--field", o.field, "Catalog field name");
  ext->add_option("--point", o.points, "Point x,y with y > 0 (repeatable)");
  ext->add_option("--trace", o.trace, "Trace positions x");

  auto* ball = app.add_subcommand("solve-ball", "Dirichlet problem on a ball");
  ball->add_option("--n", o.n, "Dimension");
  ball->add_option("--r", o.r, "Ball radius");
  ball->add_option("--s", o.s, "Order");
  ball->add_option("--g", o.g, "Exterior datum (catalog name)");
  ball->add_option("--f", o.f, "Interior source (catalog name)");
  ball->add_option("--point", o.points, "Evaluation point (repeatable)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo Dirichlet solver and generator check");
  mc->add_option("--n", o.n, "Dimension");
  mc->add_option("--s", o.s, "Order");
  mc->add_option("--N", o.N, "Number of walks");
  mc->add_option("--g", o.g, "Exterior datum (catalog name)");
  mc->add_option("--point", o.points, "Start point (repeatable)");
  mc->add_option("--mode", o.mode, "dirichlet or generator");
  mc->add_option("--dump-samples", o.dump_samples, "CSV file for the exit positions from the first point");

  auto* verify = app.add_subcommand("verify", "Executable property suites");
  verify->add_option("--suite", o.suite, "all, max, harnack or regularity");

  auto* approx = app.add_subcommand("approx", "Approximation by s-harmonic functions (n = 1)");
  approx->add_option("--target", o.target, "x2, x, gaussian or windowed_quadratic");
  approx->add_option("--m", o.m, "Number of basis elements");
  approx->add_option("--R", o.R, "Outer support radius");
  approx->add_option("--s", o.s, "Order");
  approx->add_option("--norm", o.norm, "C0 or C1");
  approx->add_option("--width", o.width, "Bump width");
  approx->add_option("--table", o.table, "CSV file for the fitted function");

  for (auto* sub : {constants, eval, spectral, ext, ball, mc, verify, approx}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    diagnostic(err, "usage", e.what());
    return kUsage;
  }
  if (print_schema) {
    out << config_schema_text();
    return kSuccess;
  }
  if (app.get_subcommands().empty()) {
    diagnostic(err, "usage", "a subcommand is required (see --help)");
    return kUsage;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    json config = json::object();
    if (!common.config.empty()) {
      std::ifstream in(common.config);
      if (!in) throw UsageError("cannot read configuration " + common.config);
      try {
        config = json::parse(in);
      } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON in ") + common.config + ": " + e.what());
      }
      if (!config.is_object()) throw SchemaError("configuration must be a JSON object");
    }
    overlay(config, sub, o);
    if (common.seed && sub == "mc") config["seed"] = *common.seed;

    if (common.validate_only) {
      validate_config(sub, config);
      out << json{{"valid", true}}.dump() << "\n";
      return kSuccess;
    }
    const ojson result = execute(sub, config);
    const std::string text = common.format == "csv" ? to_csv(sub, result) : result.dump(2) + "\n";

    if (!o.dump_samples.empty()) {
      const McConfig m = to_mc_config(config);
      const Point x = to_point(config["points"][0], m.dim);
      std::ostringstream csv;
      static const char* names[] = {"y0", "y1", "y2"};
      for (int i = 0; i < m.dim; ++i) csv << names[i] << (i + 1 < m.dim ? "," : "\n");
      for (const Point& y : mc_exit_samples(m, x, m.N)) {
        for (int i = 0; i < m.dim; ++i) csv << num(y[i]) << (i + 1 < m.dim ? "," : "\n");
      }
      write_atomically(o.dump_samples, csv.str());
    }
    if (!o.table.empty()) write_atomically(o.table, to_csv("approx", result));
    if (common.output == "-") {
      out << text;
    } else {
      write_atomically(common.output, text);
    }

    if (sub == "verify") {
      for (const auto& rep : result) {
        if (rep["verdict"] == "fail") {
          diagnostic(err, "check_failed", rep["check_name"].get<std::string>() + " failed");
          return kCheckFailed;
        }
      }
    }
    return kSuccess;
  } catch (const SchemaError& e) {
    diagnostic(err, "config", e.what());
    return kUsage;
  } catch (const Error& e) {
    diagnostic(err, to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    diagnostic(err, "config", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    diagnostic(err, "internal", e.what());
    return kNumerical;
  }
}

}  // namespace fraclap::cli
