// Independent reference computations used by the test suites. Everything in
// here is deliberately brute force and kept free of the library's analytic
// code paths, so that agreement is evidence rather than tautology.
#ifndef CURVFLOW_TESTS_ORACLES_HPP
#define CURVFLOW_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Central-difference gradient of a scalar function of a vector.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& x, double rel_step = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::abs(x[i]);
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// F(A) = f(eigenvalues(A)) for symmetric A; eigenvalues via Eigen.
inline double eval_on_matrix(const std::function<double(const std::vector<double>&)>& f,
                             const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
  std::vector<double> lam(eig.eigenvalues().data(), eig.eigenvalues().data() + A.rows());
  return f(lam);
}

// Central second difference of s -> F(diag(lam) + s B) at s = 0.
inline double fd_second_directional(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& lam, const Eigen::MatrixXd& B,
                                    double step) {
  const int n = static_cast<int>(lam.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) D(i, i) = lam[static_cast<std::size_t>(i)];
  const double f0 = eval_on_matrix(f, D);
  const double fp = eval_on_matrix(f, D + step * B);
  const double fm = eval_on_matrix(f, D - step * B);
  return (fp - 2.0 * f0 + fm) / (step * step);
}

// Classic fixed-step RK4 for dr/dt = rhs(r).
inline double rk4(const std::function<double(double)>& rhs, double r0, double t_end, int steps) {
  double r = r0;
  const double dt = t_end / steps;
  for (int i = 0; i < steps; ++i) {
    const double k1 = rhs(r);
    const double k2 = rhs(r + 0.5 * dt * k1);
    const double k3 = rhs(r + 0.5 * dt * k2);
    const double k4 = rhs(r + dt * k3);
    r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return r;
}

// Support function of a finite point cloud: S(theta) = max <p, e(theta)>.
inline double brute_force_support(const std::vector<std::pair<double, double>>& pts, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  double best = -1e300;
  for (const auto& [x, y] : pts) best = std::max(best, x * c + y * s);
  return best;
}

// Distance from a point to a closed or open polyline.
inline double point_to_polyline(double px, double py,
                                const std::vector<std::pair<double, double>>& line) {
  double best = 1e300;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double ax = line[i].first, ay = line[i].second;
    const double bx = line[i + 1].first, by = line[i + 1].second;
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::min(1.0, std::max(0.0, t));
    const double qx = ax + t * dx, qy = ay + t * dy;
    best = std::min(best, std::hypot(px - qx, py - qy));
  }
  return best;
}

inline double hausdorff(const std::vector<std::pair<double, double>>& a,
                        const std::vector<std::pair<double, double>>& b) {
  double h = 0.0;
  for (const auto& [x, y] : a) h = std::max(h, point_to_polyline(x, y, b));
  for (const auto& [x, y] : b) h = std::max(h, point_to_polyline(x, y, a));
  return h;
}

}  // namespace oracles

#endif
