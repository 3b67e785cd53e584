#ifndef CURVFLOW_SUPPORT_HPP
#define CURVFLOW_SUPPORT_HPP

#include <optional>
#include <utility>
#include <vector>

#include "curvflow/errors.hpp"

namespace curvflow::flow {

// ---------------------------------------------------------------------------
// Closed convex plane curve described by its support function on a uniform
// angular grid; flows by normal speed kappa^beta.
// ---------------------------------------------------------------------------
struct SupportCurve {
  std::vector<double> S;  // support samples at theta_j = 2 pi j / m
  double t = 0.0;
  double beta = 1.0;

  int m() const { return static_cast<int>(S.size()); }
  void validate() const;  // m >= 16, strict convexity, beta >= 1
};

// Discrete radius of curvature S_thth + S (3-point periodic stencil).
std::vector<double> curvature_radius(const SupportCurve& curve);

// safety * dtheta^2 / (2 max beta kappa^{beta+1}); the linearized diffusion
// coefficient of the speed in S_thth.
double support_cfl_dt(const SupportCurve& curve, double safety);

// One explicit midpoint step of dS/dt = -kappa^beta. Throws NonConvexCurve
// when the radius of curvature is not strictly positive at either stage.
SupportCurve support_flow_step(const SupportCurve& curve, double dt);

struct SupportTrajectory {
  std::vector<SupportCurve> snapshots;
  long total_steps = 0;
  std::optional<double> collapse_time;  // set when max S fell below stop_radius
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
};

// Integrates until t_end, collapse below stop_radius, or an error.
SupportTrajectory run_support(const SupportCurve& s0, double t_end, double safety,
                              double stop_radius = 0.0, int snapshot_every = 64);

// Boundary points X(theta) = S e + S' e_perp (S' by central differences).
std::vector<std::pair<double, double>> curve_points(const SupportCurve& curve);

// Height of the lower boundary over abscissa x (support-line envelope over
// directions with sin(theta) below -0.05). Coordinates are the curve's own.
double lower_graph_height(const SupportCurve& curve, double x);

// ---------------------------------------------------------------------------
// Reflection doubling and outward envelope.
//
// Takes graph samples (x_i, w_i), truncates at `level`, reflects across the
// level line, and returns the support function (centered at (0, level)) of
// the doubled body fattened by eps. The result is exactly symmetric under
// theta -> -theta. m must be even and >= 16.
// ---------------------------------------------------------------------------
SupportCurve double_and_envelope(const std::vector<double>& xs, const std::vector<double>& ws,
                                 double level, double eps, int m, double beta = 1.0);

}  // namespace curvflow::flow

#endif
