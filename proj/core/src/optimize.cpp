#include "pgw/optimize.hpp"

#include <cmath>

#include "pgw/errors.hpp"

namespace pgw {

namespace {

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Four-point central Hessian with one step size for every entry; the diagonal
// therefore uses a 2h stencil.
Eigen::MatrixXd four_point_hessian(const Objective& f, const Eigen::VectorXd& x, double h) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd out(n, n);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double corner[4];
      const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
      for (int c = 0; c < 4; ++c) {
        probe = x;
        probe[i] += signs[c][0] * h;
        probe[j] += signs[c][1] * h;
        corner[c] = f(probe);
      }
      out(i, j) = (corner[0] - corner[1] - corner[2] + corner[3]) / (4.0 * h * h);
      out(j, i) = out(i, j);
    }
  }
  return out;
}

}  // namespace

NewtonResult minimize_newton(const Objective& f, const Eigen::VectorXd& x0,
                             const NewtonOptions& options) {
  if (x0.size() == 0) throw DomainError("minimize_newton: empty start");
  if (!x0.allFinite()) throw DomainError("minimize_newton: start is not finite");
  const StepRule gradient_rule{options.gradient_step, 0.0};

  NewtonResult r;
  r.x = x0;
  r.value = f(r.x);
  if (!std::isfinite(r.value)) throw DomainError("minimize_newton: objective not finite at start");

  bool stopped = false;
  for (r.iterations = 0; r.iterations < options.max_iterations; ++r.iterations) {
    r.gradient = numeric_gradient(f, r.x, gradient_rule);
    const Eigen::MatrixXd h = four_point_hessian(f, r.x, options.hessian_step);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const Eigen::VectorXd w = eig.eigenvalues().cwiseAbs().cwiseMax(options.eigen_floor);
    const Eigen::MatrixXd& v = eig.eigenvectors();
    const Eigen::VectorXd p = -v * ((v.transpose() * r.gradient).cwiseQuotient(w));

    double damping = 1.0;
    double trial = f(r.x + p);
    while (!(trial <= r.value) && damping > options.min_damping) {
      damping /= 2.0;
      trial = f(r.x + damping * p);
    }
    const Eigen::VectorXd step = damping * p;
    if (max_abs(step) < options.stop_step) {
      r.message = "step below tolerance";
      stopped = true;
      break;
    }
    if (trial <= r.value) {
      r.x += step;
      r.value = trial;
    }
    if (max_abs(r.gradient) < options.stop_gradient) {
      r.message = "gradient below tolerance";
      stopped = true;
      break;
    }
  }
  if (!stopped) r.message = "iteration limit reached";
  r.gradient = numeric_gradient(f, r.x, gradient_rule);
  r.converged = max_abs(r.gradient) < options.gradient_tolerance;
  return r;
}

}  // namespace pgw
