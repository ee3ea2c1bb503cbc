#include "pgw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pgw/errors.hpp"

namespace pgw {

void QuadratureSpec::validate() const {
  if (node_count < 2) throw DomainError("QuadratureSpec: node_count must be >= 2");
  if (max_node_count < node_count)
    throw DomainError("QuadratureSpec: max_node_count below node_count");
  if (!(std::isfinite(relative_tolerance) && relative_tolerance > 0.0) ||
      !(std::isfinite(absolute_tolerance) && absolute_tolerance > 0.0))
    throw DomainError("QuadratureSpec: tolerances must be finite and positive");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Scaled gamma for a > 0, z < a + 1: e^z z^(1-a) (Gamma(a) - gamma(a, z)).
double scaled_by_series(double a, double z) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= z / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  // gamma(a, z) = e^-z z^a sum, so the scaled lower part is z * sum.
  const double scaled_complete = std::exp(z + (1.0 - a) * std::log(z) + std::lgamma(a));
  return scaled_complete - z * sum;
}

// Legendre continued fraction (modified Lentz). Valid for every real a once
// z is away from 0; returns e^z z^(1-a) Gamma(a, z).
double scaled_by_continued_fraction(double a, double z) {
  double b = z + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return z * h;
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge", z * h);
}

// Direct quadrature of the scaled function after x = z e^y:
// e^z z^(1-a) Gamma(a, z) = z * int_0^inf exp(a y - z (e^y - 1)) dy.
double scaled_by_quadrature(double a, double z) {
  const double upper = std::log1p(745.0 / z);
  auto integrand = [a, z](double y) { return std::exp(a * y - z * std::expm1(y)); };
  return z * integrate_1d(integrand, 0.0, upper, 1e-13);
}

}  // namespace

double scaled_upper_incomplete_gamma(double a, double z) {
  if (!std::isfinite(a) || !std::isfinite(z))
    throw DomainError("upper_incomplete_gamma: non-finite argument");
  if (z <= 0.0) throw DomainError("upper_incomplete_gamma: z must be positive");

  if (a > 0.0) {
    return z < a + 1.0 ? scaled_by_series(a, z) : scaled_by_continued_fraction(a, z);
  }
  if (z >= 1.0) return scaled_by_continued_fraction(a, z);

  // Small z, non-positive shape: downward recurrence from a shape in (1, 2].
  // Near a non-positive integer the recurrence divides 0 by 0, so integrate.
  if (std::abs(a - std::round(a)) < 1e-3) return scaled_by_quadrature(a, z);

  const int steps = static_cast<int>(std::floor(2.0 - a));
  double q = scaled_by_series(a + steps, z);
  for (int k = steps - 1; k >= 0; --k) {
    // Gamma(s, z) = (Gamma(s+1, z) - z^s e^-z) / s, rescaled.
    q = z * (q - 1.0) / (a + k);
  }
  return q;
}

double upper_incomplete_gamma(double a, double z) {
  const double q = scaled_upper_incomplete_gamma(a, z);
  return std::exp(std::log(q) - z + (a - 1.0) * std::log(z));
}

GaussLegendreRule gauss_legendre_unit(int n) {
  if (n < 1) throw DomainError("gauss_legendre_unit: n must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
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
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    double relative_tolerance, double absolute_tolerance) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, relative_tolerance, &error, &l1);
  if (!std::isfinite(value))
    throw ConvergenceError("integrate_1d: non-finite estimate", value);
  const double allowed = std::max(absolute_tolerance, 10.0 * relative_tolerance * l1);
  if (error > allowed && error > 1e-15 * l1)
    throw ConvergenceError("integrate_1d: tolerance not reached", value);
  return value;
}

double integrate_2d(const std::function<double(double, double)>& f, const QuadratureSpec& spec) {
  spec.validate();
  auto estimate = [&f](int n) {
    const GaussLegendreRule rule = gauss_legendre_unit(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += rule.weights[j] * f(rule.nodes[i], rule.nodes[j]);
      total += rule.weights[i] * row;
    }
    return total;
  };
  int n = spec.node_count;
  double previous = estimate(n);
  while (2 * n <= spec.max_node_count) {
    n *= 2;
    const double current = estimate(n);
    const double diff = std::abs(current - previous);
    if (diff <= spec.relative_tolerance * std::abs(current) || diff <= spec.absolute_tolerance)
      return current;
    previous = current;
  }
  throw ConvergenceError("integrate_2d: node cap reached before convergence", previous);
}

double StepRule::step(double x) const { return std::max(floor, relative * std::abs(x)); }

namespace {

double checked(const Objective& f, const Eigen::VectorXd& x, std::size_t coordinate) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "objective is not finite at a perturbation of coordinate " << coordinate;
    throw EvaluationError(os.str(), coordinate);
  }
  return v;
}

}  // namespace

Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x,
                                 const StepRule& rule) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = rule.step(x[i]);
    probe[i] = x[i] + h;
    const double up = checked(f, probe, i);
    probe[i] = x[i] - h;
    const double down = checked(f, probe, i);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd numeric_hessian(const Objective& f, const Eigen::VectorXd& x,
                                const StepRule& rule) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd h(n, n);
  Eigen::VectorXd step(n);
  for (Eigen::Index i = 0; i < n; ++i) step[i] = rule.step(x[i]);
  const double center = checked(f, x, 0);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = x[i] + step[i];
    const double up = checked(f, probe, i);
    probe[i] = x[i] - step[i];
    const double down = checked(f, probe, i);
    probe[i] = x[i];
    h(i, i) = (up - 2.0 * center + down) / (step[i] * step[i]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double corner[4];
      const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
      for (int c = 0; c < 4; ++c) {
        probe[i] = x[i] + signs[c][0] * step[i];
        probe[j] = x[j] + signs[c][1] * step[j];
        corner[c] = checked(f, probe, j);
      }
      probe[i] = x[i];
      probe[j] = x[j];
      h(i, j) = (corner[0] - corner[1] - corner[2] + corner[3]) / (4.0 * step[i] * step[j]);
      h(j, i) = h(i, j);
    }
  }
  return 0.5 * (h + h.transpose());
}

Eigen::MatrixXd forward_hessian_nlm(const Objective& f, const Eigen::VectorXd& x, double eta) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd step(n);
  Eigen::VectorXd single(n);
  Eigen::VectorXd probe = x;
  const double center = checked(f, x, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double target = x[i] + eta * std::max(x[i], 1.0);
    step[i] = target - x[i];
    probe[i] = target;
    single[i] = checked(f, probe, i);
    probe[i] = x[i];
  }
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = x[i] + 2.0 * step[i];
    const double twice = checked(f, probe, i);
    h(i, i) = ((center - single[i]) + (twice - single[i])) / (step[i] * step[i]);
    probe[i] = x[i] + step[i];
    for (Eigen::Index j = i + 1; j < n; ++j) {
      probe[j] = x[j] + step[j];
      const double both = checked(f, probe, j);
      probe[j] = x[j];
      h(i, j) = ((center - single[i]) + (both - single[j])) / (step[i] * step[j]);
      h(j, i) = h(i, j);
    }
    probe[i] = x[i];
  }
  return h;
}

}  // namespace pgw
