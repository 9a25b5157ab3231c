#include "aniso/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace aniso {

namespace {

// Nodes of the product grid; phi is offset by half a step so no node sits on
// a principal plane of the crystal.
struct SphereGrid {
  GaussLegendreRule theta;
  std::vector<double> cos_phi;
  std::vector<double> sin_phi;
  std::vector<double> phi;
  double phi_weight;
};

SphereGrid make_grid(int theta_rule, int phi_points) {
  SphereGrid g{gauss_legendre(theta_rule), {}, {}, {}, 2.0 * std::numbers::pi / phi_points};
  g.cos_phi.reserve(phi_points);
  g.sin_phi.reserve(phi_points);
  g.phi.reserve(phi_points);
  for (int j = 0; j < phi_points; ++j) {
    const double phi = (j + 0.5) * g.phi_weight;
    g.phi.push_back(phi);
    g.cos_phi.push_back(std::cos(phi));
    g.sin_phi.push_back(std::sin(phi));
  }
  return g;
}

// Evaluates f at every node in fixed (theta-major) order. Each theta row is
// summed separately, then rows are combined, both with compensation.
template <std::size_t N, typename F>
std::array<double, N> sum_grid(const SphereGrid& g, F&& f) {
  std::array<CompensatedSum, N> total;
  const auto& x = g.theta.nodes;
  const auto& w = g.theta.weights;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double sin_theta = std::sqrt((1.0 - x[i]) * (1.0 + x[i]));
    const double theta = std::acos(x[i]);
    std::array<CompensatedSum, N> row;
    for (std::size_t j = 0; j < g.phi.size(); ++j) {
      const Vec3 k(x[i], sin_theta * g.cos_phi[j], sin_theta * g.sin_phi[j]);
      const std::array<double, N> v = f(theta, g.phi[j], k);
      for (std::size_t c = 0; c < N; ++c) row[c].add(v[c]);
    }
    for (std::size_t c = 0; c < N; ++c) total[c].add(w[i] * row[c].value());
  }
  std::array<double, N> out;
  for (std::size_t c = 0; c < N; ++c) out[c] = g.phi_weight * total[c].value();
  return out;
}

double relative_change(double coarse, double fine) {
  const double diff = std::abs(fine - coarse);
  return fine != 0.0 ? diff / std::abs(fine) : diff;
}

// Order-doubling driver shared by every public entry point.
template <std::size_t N, typename F>
std::pair<QuadratureResult, std::array<double, N>> refine(F&& f, const QuadratureSpec& spec) {
  spec.validate();
  auto total = [](const std::array<double, N>& v) {
    double s = 0.0;
    for (double c : v) s += c;
    return s;
  };

  int n_theta = spec.theta_rule;
  int n_phi = spec.phi_points;
  std::array<double, N> previous = sum_grid<N>(make_grid(n_theta, n_phi), f);
  QuadratureResult result;
  result.value = total(previous);
  result.est_rel_error = std::numeric_limits<double>::infinity();
  result.theta_order = n_theta;
  result.phi_points = n_phi;

  while (2 * n_theta <= spec.max_order) {
    n_theta *= 2;
    n_phi *= 2;
    const std::array<double, N> current = sum_grid<N>(make_grid(n_theta, n_phi), f);
    const double err = relative_change(total(previous), total(current));
    result.value = total(current);
    result.est_rel_error = err;
    result.theta_order = n_theta;
    result.phi_points = n_phi;
    result.error_history.push_back(err);
    previous = current;
    if (err < spec.target_rel_tol) return {result, current};
  }
  throw ToleranceNotReached(result);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (theta_rule < 4) throw std::invalid_argument("theta_rule must be >= 4");
  if (phi_points < 8 || phi_points % 2 != 0) {
    throw std::invalid_argument("phi_points must be even and >= 8");
  }
  if (!(target_rel_tol > 0.0)) throw std::invalid_argument("target_rel_tol must be positive");
  if (max_order < theta_rule) throw std::invalid_argument("max_order must be >= theta_rule");
}

ToleranceNotReached::ToleranceNotReached(QuadratureResult best)
    : std::runtime_error("quadrature tolerance not reached (order " +
                         std::to_string(best.theta_order) + ", estimated relative error " +
                         std::to_string(best.est_rel_error) + ")"),
      best_(std::move(best)) {}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi's initial guess, then Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

QuadratureResult integrate_sphere(const SphereIntegrand& f, const QuadratureSpec& spec) {
  auto g = [&](double theta, double phi, const Vec3&) { return std::array<double, 1>{f(theta, phi)}; };
  return refine<1>(g, spec).first;
}

QuadratureResult integrate_directions(const DirectionIntegrand& f, const QuadratureSpec& spec) {
  auto g = [&](double, double, const Vec3& k) {
    return std::array<double, 1>{f(Direction::normalized(k))};
  };
  return refine<1>(g, spec).first;
}

SplitQuadratureResult integrate_split(const SplitIntegrand& f, const QuadratureSpec& spec) {
  auto g = [&](double, double, const Vec3& k) { return f(Direction::normalized(k)); };
  auto [result, parts] = refine<2>(g, spec);
  return SplitQuadratureResult{std::move(result), parts};
}

double integrate_fixed(const DirectionIntegrand& f, int theta_rule, int phi_points) {
  QuadratureSpec{theta_rule, phi_points, 1.0, theta_rule}.validate();
  auto g = [&](double, double, const Vec3& k) {
    return std::array<double, 1>{f(Direction::normalized(k))};
  };
  return sum_grid<1>(make_grid(theta_rule, phi_points), g)[0];
}

}  // namespace aniso
