#include "curvflow/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace curvflow::flow {

namespace {

constexpr double kTauFloor = 1e-12;
constexpr long kMaxSupportSteps = 500'000'000L;

double dtheta(int m) { return 2.0 * std::numbers::pi / m; }

// tau_j = S_thth + S; returns min tau as well
double radii(const std::vector<double>& S, std::vector<double>& tau) {
  const int m = static_cast<int>(S.size());
  const double inv = 1.0 / (dtheta(m) * dtheta(m));
  tau.resize(S.size());
  double mn = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    const int jp = (j + 1 == m) ? 0 : j + 1;
    const int jm = (j == 0) ? m - 1 : j - 1;
    tau[static_cast<std::size_t>(j)] =
        (S[static_cast<std::size_t>(jp)] - 2.0 * S[static_cast<std::size_t>(j)] +
         S[static_cast<std::size_t>(jm)]) * inv + S[static_cast<std::size_t>(j)];
    mn = std::min(mn, tau[static_cast<std::size_t>(j)]);
  }
  return mn;
}

void speeds(const SupportCurve& c, std::vector<double>& tau, std::vector<double>& out) {
  const double mn = radii(c.S, tau);
  if (!(mn > kTauFloor)) {
    std::ostringstream os;
    os << "support curve lost strict convexity: min radius " << mn << " at t=" << c.t;
    throw NonConvexCurve(os.str());
  }
  out.resize(c.S.size());
  for (std::size_t j = 0; j < c.S.size(); ++j) {
    const double kappa = 1.0 / tau[j];
    out[j] = -std::pow(kappa, c.beta);
  }
}

}  // namespace

void SupportCurve::validate() const {
  if (m() < 16) throw ValidationError("support grid needs at least 16 nodes");
  if (!(beta >= 1.0)) throw ValidationError("beta must be >= 1");
  std::vector<double> tau;
  if (!(radii(S, tau) > kTauFloor)) {
    throw NonConvexCurve("support curve is not strictly convex");
  }
}

std::vector<double> curvature_radius(const SupportCurve& curve) {
  std::vector<double> tau;
  radii(curve.S, tau);
  return tau;
}

double support_cfl_dt(const SupportCurve& curve, double safety) {
  if (!(safety > 0.0 && safety <= 1.0)) throw ValidationError("safety must lie in (0, 1]");
  std::vector<double> tau;
  const double mn = radii(curve.S, tau);
  if (!(mn > kTauFloor)) throw NonConvexCurve("support curve is not strictly convex");
  double coeff = 0.0;
  for (double t : tau) coeff = std::max(coeff, curve.beta * std::pow(1.0 / t, curve.beta + 1.0));
  const double h = dtheta(curve.m());
  return safety * h * h / (2.0 * coeff);
}

SupportCurve support_flow_step(const SupportCurve& curve, double dt) {
  std::vector<double> tau, k1, k2;
  speeds(curve, tau, k1);

  SupportCurve mid = curve;
  mid.t = curve.t + 0.5 * dt;
  for (std::size_t j = 0; j < mid.S.size(); ++j) mid.S[j] += 0.5 * dt * k1[j];
  speeds(mid, tau, k2);

  SupportCurve next = curve;
  next.t = curve.t + dt;
  for (std::size_t j = 0; j < next.S.size(); ++j) next.S[j] += dt * k2[j];
  // the caller sees the failure on the next evaluation; validate eagerly
  std::vector<double> tau2;
  if (!(radii(next.S, tau2) > kTauFloor)) {
    std::ostringstream os;
    os << "support curve lost strict convexity after the step at t=" << next.t;
    throw NonConvexCurve(os.str());
  }
  return next;
}

SupportTrajectory run_support(const SupportCurve& s0, double t_end, double safety,
                              double stop_radius, int snapshot_every) {
  s0.validate();
  if (snapshot_every < 1) throw ValidationError("snapshot_every must be >= 1");
  SupportTrajectory traj;
  SupportCurve c = s0;
  traj.snapshots.push_back(c);
  int since = 0;
  try {
    while (c.t < t_end * (1.0 - 1e-14)) {
      const double mx = *std::max_element(c.S.begin(), c.S.end());
      if (stop_radius > 0.0 && mx < stop_radius) {
        traj.collapse_time = c.t;
        break;
      }
      double dt = support_cfl_dt(c, safety);
      dt = std::min(dt, t_end - c.t);
      c = support_flow_step(c, dt);
      ++traj.total_steps;
      if (++since >= snapshot_every) {
        traj.snapshots.push_back(c);
        since = 0;
      }
      if (traj.total_steps > kMaxSupportSteps) throw InternalError("step budget exhausted");
    }
  } catch (const Error& e) {
    traj.aborted = true;
    traj.abort_reason = e.what();
    traj.abort_time = c.t;
  }
  if (traj.snapshots.back().t != c.t) traj.snapshots.push_back(c);
  return traj;
}

std::vector<std::pair<double, double>> curve_points(const SupportCurve& curve) {
  const int m = curve.m();
  const double h = dtheta(m);
  std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const int jp = (j + 1 == m) ? 0 : j + 1;
    const int jm = (j == 0) ? m - 1 : j - 1;
    const double sd =
        (curve.S[static_cast<std::size_t>(jp)] - curve.S[static_cast<std::size_t>(jm)]) / (2.0 * h);
    const double th = h * j;
    const double c = std::cos(th), s = std::sin(th);
    pts[static_cast<std::size_t>(j)] = {curve.S[static_cast<std::size_t>(j)] * c - sd * s,
                                        curve.S[static_cast<std::size_t>(j)] * s + sd * c};
  }
  return pts;
}

double lower_graph_height(const SupportCurve& curve, double x) {
  const int m = curve.m();
  const double h = dtheta(m);
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    const double th = h * j;
    const double s = std::sin(th);
    if (s >= -0.05) continue;
    best = std::max(best, (curve.S[static_cast<std::size_t>(j)] - x * std::cos(th)) / s);
  }
  if (!std::isfinite(best)) throw DomainError("no lower support directions available");
  return best;
}

SupportCurve double_and_envelope(const std::vector<double>& xs, const std::vector<double>& ws,
                                 double level, double eps, int m, double beta) {
  if (xs.size() != ws.size() || xs.empty()) throw DimensionMismatch("profile samples mismatch");
  if (!(eps > 0.0)) throw ValidationError("envelope radius must be positive");
  if (m < 16 || m % 2 != 0) throw ValidationError("support grid must be even and >= 16");

  std::vector<std::pair<double, double>> pts;  // centered at (0, level); upper half only
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ws[i] <= level) pts.emplace_back(xs[i], level - ws[i]);  // reflected upper copy
  }
  if (pts.empty()) throw EmptySublevel("profile lies entirely above the truncation level");

  SupportCurve curve;
  curve.beta = beta;
  curve.S.assign(static_cast<std::size_t>(m), 0.0);
  const double h = dtheta(m);
  // evaluate on the closed upper semicircle and mirror: the doubled body is
  // symmetric across the level line, so S(-theta) = S(theta) exactly
  for (int j = 0; j <= m / 2; ++j) {
    const double th = h * j;
    const double c = std::cos(th), s = std::sin(th);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [px, py] : pts) {
      best = std::max(best, px * c + py * s);   // reflected point
      best = std::max(best, px * c - py * s);   // original point (y = -py)
    }
    curve.S[static_cast<std::size_t>(j)] = best + eps;
  }
  for (int j = m / 2 + 1; j < m; ++j) {
    curve.S[static_cast<std::size_t>(j)] = curve.S[static_cast<std::size_t>(m - j)];
  }
  curve.validate();
  return curve;
}

}  // namespace curvflow::flow
