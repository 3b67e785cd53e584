#ifndef CURVFLOW_FLOW_HPP
#define CURVFLOW_FLOW_HPP

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "curvflow/geometry.hpp"
#include "curvflow/symfun.hpp"

namespace curvflow::flow {

// ---------------------------------------------------------------------------
// Exact shrinking sphere: dr/dt = -r^{-beta}, r(t) = (r0^{b+1} - (b+1) t)^{1/(b+1)}.
// ---------------------------------------------------------------------------
double extinction_time(double r0, double beta);
double sphere_radius(double r0, double beta, double t);  // throws ExtinctionReached

// Height of the lower cap of the shrinking sphere (center at height c):
// w(x, t) = c - sqrt(r(t)^2 - |x|^2). Throws OutsideCap when |x| >= r(t).
double sphere_cap_reference(double r0, double beta, double center_height, double t, double x_norm2);

// Exact cap geometry at a point (for oracle comparisons, no grid involved):
// returns v and the time derivative of the height.
struct CapPointwise {
  double w = 0.0;
  double v = 1.0;
  double dw_dt = 0.0;
};
CapPointwise sphere_cap_pointwise(double r0, double beta, double center_height, double t,
                                  double x_norm2);

// ---------------------------------------------------------------------------
// Flow configuration
// ---------------------------------------------------------------------------
struct ExactSphereBoundary {
  double r0 = 1.0;
  double center_height = 1.0;
};
struct FrozenBoundary {};
using Boundary = std::variant<ExactSphereBoundary, FrozenBoundary>;

struct FlowConfig {
  symfun::CurvatureSpec spec;
  double safety = 0.5;  // CFL factor in (0, 1]
  double t_end = 0.1;
  Boundary boundary = FrozenBoundary{};
  int snapshot_every = 50;
  double lambda_floor = 1e-10;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Pointwise speed and step size
// ---------------------------------------------------------------------------
// sqrt(1 + |Dw|^2) * F^beta at interior nodes (order of grid.interior).
std::vector<double> rhs(const geometry::GraphState& state, const symfun::CurvatureSpec& spec,
                        double lambda_floor = 1e-10);

// safety * dx^2 / (2 n max_nodes(v beta F^{beta-1} max_i df_i (1 + |Dw|^2))).
double cfl_dt(const geometry::GraphState& state, const symfun::CurvatureSpec& spec, double safety,
              double lambda_floor = 1e-10);

// One explicit midpoint step with the CFL step size (or a caller-fixed dt).
geometry::GraphState step(const geometry::GraphState& state, const FlowConfig& config);
geometry::GraphState step_with_dt(const geometry::GraphState& state, const FlowConfig& config,
                                  double dt);

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------
struct SnapshotProbe {
  std::string name;
  std::function<double(const geometry::GraphState&, const geometry::GeomFields&)> eval;
};

struct Snapshot {
  double t = 0.0;
  double dt = 0.0;  // step size in effect when the snapshot was taken
  geometry::GraphState state;
  double min_w = 0.0, max_w = 0.0;
  double max_v = 0.0, min_lambda_min = 0.0, max_F = 0.0;
  std::vector<double> probe_values;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<std::string> probe_names;
  long total_steps = 0;
  bool aborted = false;
  ErrCode abort_code = ErrCode::ok;
  std::string abort_reason;
  double abort_time = 0.0;

  const Snapshot& front() const { return snapshots.front(); }
  const Snapshot& back() const { return snapshots.back(); }
};

// Integrates to t_end or the first numerical error (recorded, not thrown).
Trajectory run(const geometry::GraphState& w0, const FlowConfig& config,
               const std::vector<SnapshotProbe>& probes = {});

// Trajectory whose snapshots are the exact shrinking-sphere cap on the grid.
Trajectory sphere_oracle_trajectory(const std::shared_ptr<const geometry::GraphGrid>& grid,
                                    const symfun::CurvatureSpec& spec, double r0,
                                    double center_height, const std::vector<double>& times);

// ---------------------------------------------------------------------------
// Initial profiles
// ---------------------------------------------------------------------------
geometry::GraphState initial_sphere_cap(const std::shared_ptr<const geometry::GraphGrid>& grid,
                                        double r0, double center_height);
geometry::GraphState initial_paraboloid(const std::shared_ptr<const geometry::GraphGrid>& grid);
geometry::GraphState initial_from_function(const std::shared_ptr<const geometry::GraphGrid>& grid,
                                           const std::function<double(double, double)>& f);

}  // namespace curvflow::flow

#endif
