#include "qns/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <json.hpp>

#include "qns/errors.hpp"
#include "qns/functionals.hpp"
#include "qns/integrator.hpp"
#include "qns/noise.hpp"

namespace qns::verify {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CheckResult check(std::string suite, std::string name, double value, double threshold,
                  bool passed, std::string detail = {}) {
  return {std::move(suite), std::move(name), passed, value, threshold, std::move(detail), false};
}

std::vector<RealField> named_densities(const TorusGrid& grid) {
  return {RealField::sample(grid, [](double x) { return 2.0 + std::cos(kTwoPi * x); }),
          RealField::sample(grid, [](double x) { return std::exp(0.3 * std::sin(2.0 * kTwoPi * x)); })};
}

void identities(std::vector<CheckResult>& out) {
  const TorusGrid grid(256, 85);
  const auto named = named_densities(grid);
  const char* labels[] = {"2+cos(2 pi x)", "exp(0.3 sin(4 pi x))"};
  for (int i = 0; i < 2; ++i) {
    const double r = quantum_identity_residual(named[i], grid);
    out.push_back(check("identities", std::string("quantum identity, rho = ") + labels[i], r, 1e-7,
                        r < 1e-7));
  }

  auto corpus = density_corpus(grid, 20, 20240611);
  double worst_pressure = 0.0;
  for (double gamma : {1.5, 2.0})
    for (double alpha : {0.0, 0.5, 1.0}) {
      ModelParams p;
      p.gamma = gamma;
      p.alpha = alpha;
      for (const auto& rho : corpus)
        worst_pressure = std::max(worst_pressure, bd_pressure_identity(rho, p, grid).relative_residual());
    }
  out.push_back(check("identities", "BD pressure identity (relative, 20 densities)", worst_pressure,
                      1e-8, worst_pressure < 1e-8));

  double worst_quantum = 0.0, worst_halved = 0.0;
  for (double alpha : {0.5, 1.0, 1.4})
    for (const auto& rho : corpus) {
      const auto s = bd_quantum_identity(rho, alpha, grid);
      worst_quantum = std::max(worst_quantum, s.relative_residual());
      const IdentitySides halved{s.lhs, 0.5 * s.rhs};
      worst_halved = std::max(worst_halved, halved.relative_residual());
    }
  out.push_back(check("identities", "BD quantum identity (relative, 20 densities)", worst_quantum,
                      1e-7, worst_quantum < 1e-7));
  auto info = check("identities", "BD quantum identity with closed form halved", worst_halved, 1e-7,
                    worst_halved < 1e-7, "closed form equals twice the direct integral");
  info.informational = true;
  out.push_back(info);
}

void inequality(std::vector<CheckResult>& out) {
  const TorusGrid grid(256, 85);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& f : positive_bandlimited_fields(grid, 100, 916))
    worst = std::min(worst, functional_inequality_margin(f, grid));
  out.push_back(check("inequality-916", "min margin over 100 random fields", worst, -1e-10,
                      worst >= -1e-10));

  const TorusGrid fine(1024, 511);
  std::string detail;
  bool shrinking = true;
  double previous = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    last = relative_inequality_margin(inequality_near_extremal(fine, eps), fine);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%seps=%.0e:%.3f", detail.empty() ? "" : " ", eps, last);
    detail += buf;
    shrinking = shrinking && last < previous;
    previous = last;
  }
  out.push_back(check("inequality-916", "relative margin shrinks along minimizing family", last,
                      1.0, shrinking, detail));
}

void noise(std::vector<CheckResult>& out) {
  NoiseModel model;
  model.base_amplitude = 1.0;
  const auto r = verify_noise_hypotheses(model);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "points=%zu vanish=%d amp=%d deriv=%d growth=%d momentum=%d", r.lattice_points,
                r.vanishes_at_rest, r.amplitude_bounded, r.derivatives_bounded, r.linear_growth,
                r.momentum_growth);
  out.push_back(check("noise", "derivative bound ratio (default family)", r.worst_derivative_ratio,
                      1.0, r.passed() && r.lattice_points >= 10000, buf));
  out.push_back(check("noise", "linear growth ratio (default family)", r.worst_growth_ratio, 1.0,
                      r.linear_growth));
}

void convergence(std::vector<CheckResult>& out) {
  const TorusGrid grid(64, 21);
  const ModelParams params;
  const State initial = state_from_functions(
      grid, [](double x) { return 1.0 + 0.2 * std::cos(kTwoPi * x); },
      [](double x) { return 0.2 * std::sin(kTwoPi * x); });
  ConvergenceStudy study;
  study.t_end = 0.1;
  for (int e = 8; e <= 12; ++e) study.dt_levels.push_back(std::ldexp(study.t_end, -e));
  study.n_paths = 16;
  study.master_seed = 8;

  struct Mode {
    const char* name;
    double amplitude;
    NoiseShape shape;
    double threshold;
  };
  for (const Mode& m : {Mode{"deterministic", 0.0, NoiseShape::off, 0.8},
                        Mode{"additive noise", 0.5, NoiseShape::off, 0.8},
                        Mode{"multiplicative noise", 0.5, NoiseShape::trig_density_weighted, 0.4}}) {
    NoiseModel noise;
    noise.base_amplitude = m.amplitude;
    noise.shape = m.shape;
    const auto r = strong_convergence_study(initial, params, noise, grid, study);
    out.push_back(check("convergence", std::string("strong order, ") + m.name, r.order,
                        m.threshold, r.order >= m.threshold,
                        "paths=" + std::to_string(r.paths_used)));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "inequality-916", "noise",
                                              "convergence", "all"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name) {
  std::vector<CheckResult> out;
  const bool all = name == "all";
  if (!all && std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
    throw UsageError("unknown verify suite '" + name + "'");
  if (all || name == "identities") identities(out);
  if (all || name == "inequality-916") inequality(out);
  if (all || name == "noise") noise(out);
  if (all || name == "convergence") convergence(out);
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed || r.informational; });
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::string s;
  char buf[512];
  for (const auto& r : results) {
    const char* status = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
    std::snprintf(buf, sizeof buf, "%-4s  %-15s %-52s value=%-12.4g threshold=%-10.3g %s\n",
                  status, r.suite.c_str(), r.name.c_str(), r.value, r.threshold, r.detail.c_str());
    s += buf;
  }
  return s;
}

std::string to_json(const std::vector<CheckResult>& results) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["passed"] = all_passed(results);
  j["checks"] = nlohmann::json::array();
  for (const auto& r : results)
    j["checks"].push_back({{"suite", r.suite},
                           {"name", r.name},
                           {"passed", r.passed},
                           {"informational", r.informational},
                           {"value", r.value},
                           {"threshold", r.threshold},
                           {"detail", r.detail}});
  return j.dump(2) + "\n";
}

std::vector<RealField> density_corpus(const TorusGrid& grid, int count, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> level(0.5, 2.0);
  std::vector<RealField> out;
  for (int i = 0; i < count; ++i) {
    double a[5], b[5];
    for (int k = 1; k <= 4; ++k) {
      a[k] = 0.25 * normal(engine) / k;
      b[k] = 0.25 * normal(engine) / k;
    }
    const double c = level(engine);
    out.push_back(RealField::sample(grid, [&](double x) {
      double s = 0.0;
      for (int k = 1; k <= 4; ++k) s += a[k] * std::cos(kTwoPi * k * x) + b[k] * std::sin(kTwoPi * k * x);
      return c * std::exp(s);
    }));
  }
  return out;
}

std::vector<RealField> positive_bandlimited_fields(const TorusGrid& grid, int count,
                                                   std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> offset(0.05, 1.0);
  std::uniform_int_distribution<int> degree(1, 8);
  std::vector<RealField> out;
  for (int i = 0; i < count; ++i) {
    const int d = degree(engine);
    std::vector<double> a(d + 1), b(d + 1);
    for (int k = 1; k <= d; ++k) {
      a[k] = normal(engine) / k;
      b[k] = normal(engine) / k;
    }
    std::vector<double> g(grid.n());
    for (int j = 0; j < grid.n(); ++j) {
      const double x = static_cast<double>(j) / grid.n();
      for (int k = 1; k <= d; ++k) g[j] += a[k] * std::cos(kTwoPi * k * x) + b[k] * std::sin(kTwoPi * k * x);
    }
    // The minimum over a 16x finer grid bounds the continuous minimum closely.
    const RealField gf = RealField::from_physical(grid, g);
    const auto dense = interpolate(gf, 16 * grid.n());
    const double lo = *std::min_element(dense.begin(), dense.end());
    const double delta = offset(engine);
    for (double& v : g) v += delta - lo;
    out.push_back(RealField::from_physical(grid, std::move(g)));
  }
  return out;
}

RealField inequality_near_extremal(const TorusGrid& grid, double eps) {
  return RealField::sample(grid, [eps](double x) {
    const double s = std::sin(std::numbers::pi * x);
    return std::pow(s * s + eps, 0.75);
  });
}

double relative_inequality_margin(const RealField& f, const TorusGrid& grid) {
  const auto f_xx = interpolate(derivative(f, 2, grid), 2 * grid.n());
  double curvature = 0.0;
  for (double v : f_xx) curvature += v * v;
  curvature *= 9.0 / 16.0 / static_cast<double>(f_xx.size());
  return functional_inequality_margin(f, grid) / curvature;
}

}  // namespace qns::verify
