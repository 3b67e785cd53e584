#include "curvflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "curvflow/parallel.hpp"

namespace curvflow::flow {

using geometry::GraphGrid;
using geometry::GraphState;
using geometry::NodeGeom;

namespace {

constexpr double kBlowUpThreshold = 1e12;
constexpr long kMaxSteps = 200'000'000L;

struct SweepResult {
  double max_cfl = 0.0;
  double max_abs_rhs = 0.0;
  double min_lambda = std::numeric_limits<double>::infinity();
  int bad_node = -1;  // node with the smallest eigenvalue below the floor
};

// Evaluates the speed at every interior node. Reductions are max/min with a
// smallest-index tie break, so the result is independent of the chunking.
SweepResult sweep(const GraphState& state, const symfun::CurvatureSpec& spec, double lambda_floor,
                  std::vector<double>& out_rhs) {
  const GraphGrid& grid = *state.grid;
  const std::size_t m = grid.interior.size();
  out_rhs.resize(m);
  const double* w = state.w.data();

  SweepResult total;
  std::mutex fold;
  parallel_for(m, [&](std::size_t b, std::size_t e) {
    SweepResult local;
    for (std::size_t k = b; k < e; ++k) {
      const int id = grid.interior[k];
      NodeGeom ng;
      const bool ok = geometry::node_geometry(grid, w, id % grid.nx, id / grid.nx, spec.root,
                                              spec.beta, lambda_floor, ng);
      if (!ok) {
        if (ng.lam[0] < local.min_lambda ||
            (ng.lam[0] == local.min_lambda && (local.bad_node < 0 || id < local.bad_node))) {
          local.bad_node = id;
        }
        local.min_lambda = std::min(local.min_lambda, ng.lam[0]);
        out_rhs[k] = 0.0;
        continue;
      }
      local.min_lambda = std::min(local.min_lambda, ng.lam[0]);
      local.max_cfl = std::max(local.max_cfl, ng.cflfac);
      local.max_abs_rhs = std::max(local.max_abs_rhs, std::abs(ng.rhs));
      out_rhs[k] = ng.rhs;
    }
    std::lock_guard<std::mutex> lock(fold);
    total.max_cfl = std::max(total.max_cfl, local.max_cfl);
    total.max_abs_rhs = std::max(total.max_abs_rhs, local.max_abs_rhs);
    if (local.min_lambda < total.min_lambda ||
        (local.min_lambda == total.min_lambda && local.bad_node >= 0 &&
         (total.bad_node < 0 || local.bad_node < total.bad_node))) {
      total.bad_node = local.bad_node;
    }
    total.min_lambda = std::min(total.min_lambda, local.min_lambda);
  });

  if (total.bad_node >= 0) {
    std::ostringstream os;
    os << "state is not strictly convex: lambda_min=" << total.min_lambda << " at node "
       << total.bad_node << " (floor " << lambda_floor << ", t=" << state.t << ")";
    throw NonConvexState(os.str());
  }
  if (total.max_abs_rhs > kBlowUpThreshold) {
    std::ostringstream os;
    os << "speed exceeded " << kBlowUpThreshold << " at t=" << state.t;
    throw BlowUp(os.str());
  }
  return total;
}

void apply_boundary(GraphState& state, const Boundary& boundary, double beta, double t) {
  if (std::holds_alternative<FrozenBoundary>(boundary)) return;  // keep current values
  const auto& bc = std::get<ExactSphereBoundary>(boundary);
  const GraphGrid& grid = *state.grid;
  for (int id : grid.boundary) {
    state.w[static_cast<std::size_t>(id)] =
        sphere_cap_reference(bc.r0, beta, bc.center_height, t, grid.radius2(id));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact sphere
// ---------------------------------------------------------------------------
double extinction_time(double r0, double beta) {
  if (!(r0 > 0.0)) throw DomainError("radius must be positive");
  return std::pow(r0, beta + 1.0) / (beta + 1.0);
}

double sphere_radius(double r0, double beta, double t) {
  if (!(r0 > 0.0)) throw DomainError("radius must be positive");
  if (t < 0.0) throw DomainError("time must be nonnegative");
  const double arg = std::pow(r0, beta + 1.0) - (beta + 1.0) * t;
  if (!(arg > 0.0)) {
    std::ostringstream os;
    os << "sphere extinct: t=" << t << " >= " << extinction_time(r0, beta);
    throw ExtinctionReached(os.str());
  }
  return std::pow(arg, 1.0 / (beta + 1.0));
}

double sphere_cap_reference(double r0, double beta, double center_height, double t,
                            double x_norm2) {
  const double r = sphere_radius(r0, beta, t);
  const double arg = r * r - x_norm2;
  if (!(arg > 0.0)) {
    std::ostringstream os;
    os << "point outside the cap: |x|^2=" << x_norm2 << ", r(t)=" << r;
    throw OutsideCap(os.str());
  }
  return center_height - std::sqrt(arg);
}

CapPointwise sphere_cap_pointwise(double r0, double beta, double center_height, double t,
                                  double x_norm2) {
  const double r = sphere_radius(r0, beta, t);
  const double arg = r * r - x_norm2;
  if (!(arg > 0.0)) throw OutsideCap("point outside the cap");
  const double root = std::sqrt(arg);
  CapPointwise out;
  out.w = center_height - root;
  out.v = r / root;
  // dr/dt = -r^{-beta};  dw/dt = -(r dr/dt)/sqrt(r^2 - |x|^2)
  out.dw_dt = std::pow(r, 1.0 - beta) / root;
  return out;
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------
void FlowConfig::validate() const {
  if (!(safety > 0.0 && safety <= 1.0)) throw ValidationError("safety must lie in (0, 1]");
  if (!(t_end > 0.0)) throw ValidationError("t_end must be positive");
  if (!(lambda_floor >= 0.0)) throw ValidationError("lambda_floor must be nonnegative");
  if (snapshot_every < 1) throw ValidationError("snapshot_every must be >= 1");
}

// ---------------------------------------------------------------------------
// Speed and step size
// ---------------------------------------------------------------------------
std::vector<double> rhs(const GraphState& state, const symfun::CurvatureSpec& spec,
                        double lambda_floor) {
  std::vector<double> out;
  sweep(state, spec, lambda_floor, out);
  return out;
}

double cfl_dt(const GraphState& state, const symfun::CurvatureSpec& spec, double safety,
              double lambda_floor) {
  if (!(safety > 0.0 && safety <= 1.0)) throw ValidationError("safety must lie in (0, 1]");
  std::vector<double> scratch;
  const SweepResult r = sweep(state, spec, lambda_floor, scratch);
  const double h = state.grid->spacing;
  const double dt = safety * h * h / (2.0 * state.grid->n * r.max_cfl);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InternalError("CFL step size is not positive");
  return dt;
}

namespace {

// Midpoint update given the already-evaluated first-stage speeds.
GraphState midpoint_advance(const GraphState& state, const FlowConfig& config, double dt,
                            const std::vector<double>& k1, std::vector<double>& k2) {
  const GraphGrid& grid = *state.grid;
  const std::size_t m = grid.interior.size();

  GraphState mid = state;
  mid.t = state.t + 0.5 * dt;
  for (std::size_t k = 0; k < m; ++k) {
    mid.w[static_cast<std::size_t>(grid.interior[k])] += 0.5 * dt * k1[k];
  }
  apply_boundary(mid, config.boundary, config.spec.beta, mid.t);

  sweep(mid, config.spec, config.lambda_floor, k2);

  GraphState next = state;
  next.t = state.t + dt;
  for (std::size_t k = 0; k < m; ++k) {
    next.w[static_cast<std::size_t>(grid.interior[k])] += dt * k2[k];
  }
  apply_boundary(next, config.boundary, config.spec.beta, next.t);
  return next;
}

}  // namespace

geometry::GraphState step_with_dt(const GraphState& state, const FlowConfig& config, double dt) {
  config.validate();
  std::vector<double> k1, k2;
  sweep(state, config.spec, config.lambda_floor, k1);
  return midpoint_advance(state, config, dt, k1, k2);
}

geometry::GraphState step(const GraphState& state, const FlowConfig& config) {
  return step_with_dt(state, config, cfl_dt(state, config.spec, config.safety, config.lambda_floor));
}

// ---------------------------------------------------------------------------
// Run
// ---------------------------------------------------------------------------
namespace {

Snapshot make_snapshot(const GraphState& state, double dt, const symfun::CurvatureSpec& spec,
                       double lambda_floor, const std::vector<SnapshotProbe>& probes) {
  Snapshot s;
  s.t = state.t;
  s.dt = dt;
  s.state = state;
  const auto fields = geometry::geom_fields(state, spec, lambda_floor);
  double mn = std::numeric_limits<double>::infinity(), mx = -mn;
  for (int id : state.grid->interior) {
    mn = std::min(mn, state.w[static_cast<std::size_t>(id)]);
    mx = std::max(mx, state.w[static_cast<std::size_t>(id)]);
  }
  s.min_w = mn;
  s.max_w = mx;
  s.max_v = fields.max_v();
  s.min_lambda_min = fields.min_lambda();
  s.max_F = fields.max_F();
  s.probe_values.reserve(probes.size());
  for (const auto& p : probes) s.probe_values.push_back(p.eval(state, fields));
  return s;
}

}  // namespace

Trajectory run(const GraphState& w0, const FlowConfig& config,
               const std::vector<SnapshotProbe>& probes) {
  config.validate();
  Trajectory traj;
  for (const auto& p : probes) traj.probe_names.push_back(p.name);

  GraphState state = w0;
  const double h = w0.grid->spacing;
  try {
    apply_boundary(state, config.boundary, config.spec.beta, state.t);
    traj.snapshots.push_back(make_snapshot(state, 0.0, config.spec, config.lambda_floor, probes));
    int since_snapshot = 0;
    std::vector<double> k1, k2;
    while (state.t < config.t_end * (1.0 - 1e-14)) {
      const SweepResult sr = sweep(state, config.spec, config.lambda_floor, k1);
      double dt = config.safety * h * h / (2.0 * state.grid->n * sr.max_cfl);
      if (!(dt > 0.0) || !std::isfinite(dt)) throw InternalError("CFL step size is not positive");
      dt = std::min(dt, config.t_end - state.t);
      state = midpoint_advance(state, config, dt, k1, k2);
      ++traj.total_steps;
      if (++since_snapshot >= config.snapshot_every || state.t >= config.t_end * (1.0 - 1e-14)) {
        traj.snapshots.push_back(make_snapshot(state, dt, config.spec, config.lambda_floor, probes));
        since_snapshot = 0;
      }
      if (traj.total_steps > kMaxSteps) throw InternalError("step budget exhausted");
    }
  } catch (const Error& e) {
    traj.aborted = true;
    traj.abort_code = e.code();
    traj.abort_reason = e.what();
    traj.abort_time = state.t;
  }
  return traj;
}

Trajectory sphere_oracle_trajectory(const std::shared_ptr<const GraphGrid>& grid,
                                    const symfun::CurvatureSpec& spec, double r0,
                                    double center_height, const std::vector<double>& times) {
  if (times.empty() || times.front() != 0.0) {
    throw ValidationError("oracle trajectory needs times starting at 0");
  }
  Trajectory traj;
  for (double t : times) {
    std::vector<double> w(grid->size(), 0.0);
    for (int id : grid->interior) {
      w[static_cast<std::size_t>(id)] =
          sphere_cap_reference(r0, spec.beta, center_height, t, grid->radius2(id));
    }
    for (int id : grid->boundary) {
      w[static_cast<std::size_t>(id)] =
          sphere_cap_reference(r0, spec.beta, center_height, t, grid->radius2(id));
    }
    GraphState s(grid, std::move(w), t);
    traj.snapshots.push_back(make_snapshot(s, 0.0, spec, 1e-12, {}));
    traj.total_steps = static_cast<long>(traj.snapshots.size()) - 1;
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------
geometry::GraphState initial_from_function(const std::shared_ptr<const GraphGrid>& grid,
                                           const std::function<double(double, double)>& f) {
  std::vector<double> w(grid->size(), 0.0);
  for (int j = 0; j < grid->ny; ++j) {
    for (int i = 0; i < grid->nx; ++i) {
      const int id = grid->idx(i, j);
      if (grid->kind(id) == geometry::NodeKind::outside) continue;
      w[static_cast<std::size_t>(id)] = f(grid->x(i), grid->n == 1 ? 0.0 : grid->y(j));
    }
  }
  return GraphState(grid, std::move(w), 0.0);
}

geometry::GraphState initial_sphere_cap(const std::shared_ptr<const GraphGrid>& grid, double r0,
                                        double center_height) {
  return initial_from_function(grid, [&](double x, double y) {
    const double n2 = x * x + y * y;
    if (!(n2 < r0 * r0)) throw OutsideCap("grid extends beyond the initial cap");
    return center_height - std::sqrt(r0 * r0 - n2);
  });
}

geometry::GraphState initial_paraboloid(const std::shared_ptr<const GraphGrid>& grid) {
  return initial_from_function(grid,
                               [](double x, double y) { return 0.5 * (x * x + y * y); });
}

}  // namespace curvflow::flow
