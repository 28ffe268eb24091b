#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "hk/errors.hpp"
#include "hk/geometry.hpp"
#include "hk/harness.hpp"
#include "hk/means.hpp"
#include "hk/random_cases.hpp"
#include "hk/reconstruction.hpp"
#include "hk/serialize.hpp"

#ifndef HK_VERSION
#define HK_VERSION "unknown"
#endif

namespace hk {
namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kAgreementTol = 1e-8;
constexpr double kHeightRelTol = 1e-12;

const std::vector<double> kDefaultMeansA = {14.0, 10.0};
const std::vector<double> kDefaultMeansW = {0.7, 0.3};
const std::vector<double> kDefaultPrismA = {3.0, 4.0, 6.0};
const std::vector<double> kDefaultPrismW = {0.2, 0.2, 0.6};

struct Inputs {
  PositiveSample a;
  WeightVector w;
};

Inputs resolve_inputs(const ExperimentConfig& c, const std::vector<double>& default_a,
                      const std::vector<double>& default_w) {
  PositiveSample a(c.a.empty() ? default_a : c.a);
  if (c.uniform_weights) return {a, WeightVector::uniform(a.size())};
  WeightVector w = WeightVector::from_raw(c.w.empty() ? default_w : c.w);
  if (w.size() != a.size()) {
    throw LengthError("--a has " + std::to_string(a.size()) + " values but --w has " + std::to_string(w.size()));
  }
  return {a, w};
}

SignPolicy resolve_policy(const ExperimentConfig& c) {
  if (c.policy == "clip") return SignPolicy::clip_to_zero();
  if (c.policy == "translate") return SignPolicy::translate(c.translate_scale);
  throw InvalidParameter("--policy must be clip or translate, got '" + c.policy + "'");
}

std::vector<Operator> resolve_operators(const ExperimentConfig& c) {
  if (c.op == "linear") return {Operator::Linear};
  if (c.op == "pph") return {Operator::PPH};
  if (c.op == "both") return {Operator::Linear, Operator::PPH};
  throw InvalidParameter("--operator must be linear, pph or both, got '" + c.op + "'");
}

const char* operator_name(Operator op) { return op == Operator::Linear ? "linear" : "pph"; }

PrismScene resolve_scene(const ExperimentConfig& c, const Inputs& in) {
  if (c.variant == "thm3") return build_scene(in.a, in.w, CapVariant::PlaneVn);
  if (c.variant == "thm4") return build_scene(in.a, in.w, CapVariant::ParaboloidVnStar);
  if (c.variant == "corollary") return corollary_scene(in.a, in.w);
  throw InvalidParameter("--variant must be thm3, thm4 or corollary, got '" + c.variant + "'");
}

ParabolaCase resolve_case(int id) {
  switch (id) {
    case 1:
      return ParabolaCase::Case1;
    case 2:
      return ParabolaCase::Case2;
    case 3:
      return ParabolaCase::Case3;
    default:
      throw InvalidParameter("--case must be 1, 2 or 3, got " + std::to_string(id));
  }
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

Json quadratic_json(const Quadratic1D& q) { return Json::array({q.q2, q.q1, q.q0}); }

// --- recon signals ---------------------------------------------------------

double cubic_signal(double x) { return ((x - 2.0) * x + 0.5) * x + 1.0; }

Json convergence_json(const std::function<double(double)>& f, Interval domain, const ExperimentConfig& c) {
  const SignPolicy policy = resolve_policy(c);
  Json tables = Json::object();
  for (Operator op : resolve_operators(c)) {
    tables[operator_name(op)] = convergence_order(f, domain, c.levels, op, policy);
  }
  return tables;
}

GridFunction step_grid(std::size_t intervals) {
  std::vector<double> x(intervals + 1), f(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    x[k] = static_cast<double>(k) / static_cast<double>(intervals);
    f[k] = 2 * k > intervals ? 1.0 : 0.0;
  }
  return GridFunction(std::move(x), std::move(f));
}

GridFunction read_samples(const std::string& path) {
  if (path.empty()) throw InputError("--signal custom requires --samples PATH");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open samples file '" + path + "'");
  std::vector<double> x, f;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double xv = 0.0, fv = 0.0;
    std::string extra;
    if (!(fields >> xv >> fv) || (fields >> extra)) {
      throw InputError("malformed samples file '" + path + "' at line " + std::to_string(line_no) +
                       ": expected 'x,f'");
    }
    x.push_back(xv);
    f.push_back(fv);
  }
  return GridFunction(std::move(x), std::move(f));
}

Json predictions_json(const std::vector<std::optional<double>>& p) {
  Json arr = Json::array();
  for (const auto& v : p) arr.push_back(v ? Json(*v) : Json(nullptr));
  return arr;
}

// --- csv projections -------------------------------------------------------

std::vector<std::string> csv_comments(const ExperimentConfig& c) {
  return {"hk " + c.command, "config: " + config_echo(c).dump(),
          "provenance: seed=" + std::to_string(c.seed) + " version=" + HK_VERSION};
}

std::vector<CsvTable> csv_tables(const ExperimentConfig& c, const Json& results) {
  std::vector<CsvTable> tables;
  if (c.command == "means") {
    const auto r = results.at("report").get<MeanGapReport>();
    tables.push_back({"means",
                      {"n", "h_w", "m_w", "gap_direct", "gap_closed_form", "min_bound", "scaled_uniform_harmonic"},
                      {{static_cast<double>(r.n), r.h_w, r.m_w, r.gap_direct, r.gap_closed_form, r.min_bound,
                        results.at("scaled_uniform_harmonic").get<double>()}}});
  } else if (c.command == "geometry") {
    CsvTable t{"intersection", {"coordinate", "x_bar", "newton", "residual"}, {}};
    const auto x_bar = results.at("x_bar").get<std::vector<double>>();
    const auto newton = results.at("newton").at("point").get<std::vector<double>>();
    const auto res = results.at("residuals_at_x_bar").get<std::vector<double>>();
    for (std::size_t i = 0; i < x_bar.size(); ++i) {
      t.rows.push_back({static_cast<double>(i + 1), x_bar[i], newton[i], res[i]});
    }
    tables.push_back(std::move(t));
  } else if (c.command == "figure") {
    for (const auto& s : results.at("figure").get<FigureData>().surfaces) tables.push_back({s.name, s.columns, s.rows});
  } else if (c.command == "recon") {
    if (results.contains("convergence")) {
      for (const auto& [name, rows] : results.at("convergence").items()) {
        CsvTable t{name, {"intervals", "h", "error", "slope"}, {}};
        for (const auto& row : rows.get<std::vector<ConvergenceRow>>()) {
          t.rows.push_back({static_cast<double>(row.intervals), row.h, row.error,
                            row.slope.value_or(std::nan(""))});
        }
        tables.push_back(std::move(t));
      }
    }
    if (results.contains("overshoot_by_level")) {
      CsvTable t{"overshoot", {"intervals"}, {}};
      const auto& levels = results.at("overshoot_by_level");
      for (const auto& [name, _] : levels.at(0).at("overshoot").items()) t.columns.push_back(name);
      for (const auto& level : levels) {
        std::vector<double> row{level.at("intervals").get<double>()};
        for (const auto& [name, v] : level.at("overshoot").items()) row.push_back(v.get<double>());
        t.rows.push_back(std::move(row));
      }
      tables.push_back(std::move(t));
    }
  } else if (c.command == "verify") {
    CsvTable t{"properties", {"index", "checked", "failed"}, {}};
    std::size_t i = 0;
    for (const auto& p : results.at("properties")) {
      t.rows.push_back({static_cast<double>(++i), p.at("checked").get<double>(), p.at("failed").get<double>()});
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

}  // namespace

Json means_results(const ExperimentConfig& c) {
  const Inputs in = resolve_inputs(c, kDefaultMeansA, kDefaultMeansW);
  const MeanGapReport report = mean_gap(in.a, in.w);
  const double scaled = scaled_uniform_harmonic(in.a, in.w);
  const double n = static_cast<double>(in.a.size());

  Json r;
  r["a"] = as_vector(in.a.values());
  r["w"] = as_vector(in.w.values());
  r["report"] = report;
  r["scaled_uniform_harmonic"] = scaled;
  r["checks"] = {
      {"gap_identity", std::abs(report.gap_direct - report.gap_closed_form) <= 1e-12 * std::max(1.0, report.m_w)},
      {"strict_bound", report.h_w < report.min_bound},
      {"mean_inequality", report.h_w <= report.m_w},
      {"scaling_relation", relative_error(scaled, n * report.h_w) <= 1e-12}};
  return r;
}

Json geometry_results(const ExperimentConfig& c) {
  const Inputs in = resolve_inputs(c, kDefaultPrismA, kDefaultPrismW);
  const PrismScene scene = resolve_scene(c, in);
  const std::size_t n = scene.n;

  Json r;
  r["variant"] = c.variant;
  r["n"] = n;
  r["a"] = as_vector(in.a.values());
  r["w"] = as_vector(in.w.values());
  r["pi"] = {{"intercept", scene.pi.intercept()}, {"slopes", scene.pi.slopes()}};

  Json b = Json::array();
  for (const auto& s : scene.axes) b.push_back(s.b);
  r["b"] = b;
  r["c"] = scene.cap.c;
  r["cap"] = scene.cap.variant == CapVariant::PlaneVn ? "plane" : "paraboloid";
  r["degenerate"] = scene.degenerate();

  const auto x_bar = analytic_intersection(scene);
  const auto residuals = surface_residuals(scene, x_bar);
  double max_residual = 0.0;
  for (double v : residuals) max_residual = std::max(max_residual, std::abs(v));
  r["x_bar"] = x_bar;
  r["residuals_at_x_bar"] = residuals;
  r["max_residual"] = max_residual;

  const PrismHeights heights = prism_heights(scene);
  r["heights"] = {{"h_at_x_bar", heights.h_at_xbar},
                  {"m_at_barycenter", heights.m_at_barycenter},
                  {"h_w", scene.h_w},
                  {"m_w", scene.m_w}};
  if (scene.variant == SceneVariant::Rescaled) {
    r["a_star"] = as_vector(scene.pi_star->heights());
    r["h_star"] = *scene.h_star;
    r["m_star"] = *scene.m_star;
  }

  if (n == 2) {
    const ParabolaPair pair = parabola_pair_2d(in.a[0], in.a[1], in.w[0], in.w[1], resolve_case(c.case_id));
    r["parabolas"] = {{"case", c.case_id},
                      {"x_h", pair.x_h},
                      {"y_h", pair.y_h},
                      {"p1", quadratic_json(pair.p1)},
                      {"p2", quadratic_json(pair.p2)},
                      {"chord_at_x_h", chord_height(in.a[0], in.a[1], pair.x_h)}};
  }

  // Newton from the simplex center, then from seeded random interior starts.
  const double top = *std::max_element(in.a.values().begin(), in.a.values().end());
  std::vector<double> start(n, 1.0 / static_cast<double>(n));
  start[n - 1] = scene.m_w;
  const IntersectionResult central = numeric_intersection(scene, start);

  RandomCases rng(c.seed);
  double max_deviation = 0.0;
  int max_iterations = central.iterations;
  const auto deviation = [&x_bar](const std::vector<double>& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - x_bar[i]));
    return d;
  };
  max_deviation = deviation(central.point);
  for (int k = 0; k < c.starts; ++k) {
    std::vector<double> s = rng.simplex_point(n - 1);
    s.push_back(rng.uniform(0.01, 0.99) * top);
    const IntersectionResult solved = numeric_intersection(scene, s);
    max_deviation = std::max(max_deviation, deviation(solved.point));
    max_iterations = std::max(max_iterations, solved.iterations);
  }
  r["newton"] = {{"start", start},
                 {"point", central.point},
                 {"iterations", central.iterations},
                 {"random_starts", c.starts},
                 {"max_iterations", max_iterations},
                 {"max_deviation", max_deviation}};

  r["checks"] = {{"residuals", max_residual <= kResidualTol},
                 {"newton_agreement", max_deviation <= kAgreementTol},
                 {"harmonic_height", relative_error(heights.h_at_xbar, scene.h_w) <= kHeightRelTol},
                 {"arithmetic_height", relative_error(heights.m_at_barycenter, scene.m_w) <= kHeightRelTol}};
  return r;
}

Json figure_results(const ExperimentConfig& c) {
  const Inputs in = resolve_inputs(c, kDefaultPrismA, kDefaultPrismW);
  const PrismScene scene = resolve_scene(c, in);
  Json r;
  r["variant"] = c.variant;
  r["figure"] = sample_surfaces(scene, c.resolution, !c.markers_only);
  return r;
}

Json recon_results(const ExperimentConfig& c) {
  const SignPolicy policy = resolve_policy(c);
  const auto operators = resolve_operators(c);
  Json r;
  r["signal"] = c.signal;

  if (c.signal == "sin") {
    const Interval domain{0.6, 2.5};
    r["domain"] = {domain.lo, domain.hi};
    r["convergence"] = convergence_json([](double x) { return std::sin(x); }, domain, c);
  } else if (c.signal == "cubic") {
    const Interval domain{0.0, 1.0};
    r["domain"] = {domain.lo, domain.hi};
    r["convergence"] = convergence_json(cubic_signal, domain, c);
  } else if (c.signal == "step") {
    if (c.levels < 1) throw InvalidParameter("--levels must be positive");
    Json levels = Json::array();
    for (int level = 0; level < c.levels; ++level) {
      const GridFunction g = step_grid(std::size_t{16} << level);
      Json overshoot = Json::object();
      for (Operator op : operators) overshoot[operator_name(op)] = overshoot_metric(reconstruct(g, op, policy), 0.0, 1.0);
      levels.push_back({{"intervals", g.size() - 1}, {"overshoot", overshoot}});
    }
    r["jump"] = 1.0;
    r["overshoot_by_level"] = levels;
  } else if (c.signal == "custom") {
    const GridFunction g = read_samples(c.samples_path);
    const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
    r["grid"] = as_vector(g.grid());
    r["values"] = as_vector(g.values());
    Json predictions = Json::object();
    Json overshoot = Json::object();
    for (Operator op : operators) {
      const auto p = reconstruct(g, op, policy);
      predictions[operator_name(op)] = predictions_json(p);
      overshoot[operator_name(op)] = overshoot_metric(p, *lo, *hi);
    }
    r["predictions"] = predictions;
    r["overshoot"] = overshoot;
  } else {
    throw InvalidParameter("--signal must be step, sin, cubic or custom, got '" + c.signal + "'");
  }
  return r;
}

CommandResult run_command(const ExperimentConfig& c) {
  CommandResult result;
  Json results;
  try {
    if (c.format != "json" && c.format != "csv") throw InvalidParameter("--format must be json or csv");
    if (c.command == "means") {
      results = means_results(c);
    } else if (c.command == "geometry") {
      results = geometry_results(c);
    } else if (c.command == "figure") {
      results = figure_results(c);
    } else if (c.command == "recon") {
      results = recon_results(c);
    } else if (c.command == "verify") {
      results = verify_results(c);
    } else {
      throw InvalidParameter("unknown command '" + c.command + "'");
    }
  } catch (const NoConvergence& e) {
    return {static_cast<int>(ExitCode::NoConvergence), "", std::string("solver did not converge: ") + e.what()};
  } catch (const InputError& e) {
    return {static_cast<int>(ExitCode::InputError), "", std::string("invalid input: ") + e.what()};
  } catch (const std::exception& e) {
    return {static_cast<int>(ExitCode::InputError), "", std::string("error: ") + e.what()};
  }

  const bool passed = !results.contains("checks") ||
                      std::all_of(results["checks"].begin(), results["checks"].end(),
                                  [](const Json& v) { return v.get<bool>(); });
  const bool verified = !results.contains("passed") || results["passed"].get<bool>();
  if (!passed || !verified) {
    result.exit_code = static_cast<int>(ExitCode::PropertyFailure);
    if (results.contains("counterexamples")) {
      for (const auto& line : results["counterexamples"]) result.diagnostics += line.get<std::string>() + "\n";
    } else {
      result.diagnostics = "property check failed: " + results["checks"].dump();
    }
  }

  if (c.format == "csv") {
    result.output = write_csv(csv_comments(c), csv_tables(c, results));
  } else {
    Json doc;
    doc["config"] = config_echo(c);
    doc["results"] = std::move(results);
    doc["provenance"] = {{"seed", c.seed}, {"version", HK_VERSION}};
    result.output = doc.dump(2) + "\n";
  }
  return result;
}

}  // namespace hk
