#include "curvflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <span>
#include <sstream>

#include <Eigen/Dense>

namespace curvflow::geometry {

namespace {

// Roots of a*x^2 - b*x + c = 0 for an SPD pencil (a > 0, discriminant >= 0
// analytically; clamped at zero for rounding). Ascending order.
inline void pencil_eigenvalues(double a, double b, double c, double out[2]) {
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) disc = 0.0;
  const double sq = std::sqrt(disc);
  const double qq = (b >= 0.0) ? 0.5 * (b + sq) : 0.5 * (b - sq);
  double l1, l2;
  if (qq != 0.0) {
    l1 = qq / a;
    l2 = c / qq;
  } else {
    l1 = 0.0;
    l2 = 0.0;
  }
  out[0] = std::min(l1, l2);
  out[1] = std::max(l1, l2);
}

}  // namespace

// ---------------------------------------------------------------------------
// GraphGrid
// ---------------------------------------------------------------------------
GraphGrid GraphGrid::build(int n, double extent, int nodes,
                           const std::function<bool(double, double)>& inside) {
  if (nodes < 3) throw ValidationError("grid needs at least 3 nodes per side");
  if (!(extent > 0.0)) throw ValidationError("grid extent must be positive");
  GraphGrid g;
  g.n = n;
  g.nx = nodes;
  g.ny = (n == 1) ? 1 : nodes;
  g.spacing = 2.0 * extent / (nodes - 1);
  g.ox = -extent;
  g.oy = (n == 1) ? 0.0 : -extent;
  g.mask.assign(static_cast<std::size_t>(g.nx) * g.ny, NodeKind::outside);
  g.classify(inside);
  g.validate();
  return g;
}

GraphGrid GraphGrid::line(double extent, int nodes) {
  return build(1, extent, nodes, [](double, double) { return true; });
}

GraphGrid GraphGrid::square(double extent, int nodes) {
  return build(2, extent, nodes, [](double, double) { return true; });
}

GraphGrid GraphGrid::disc(double radius, int nodes) {
  const double r2 = radius * radius * (1.0 + 1e-12);
  return build(2, radius, nodes, [r2](double x, double y) { return x * x + y * y <= r2; });
}

void GraphGrid::classify(const std::function<bool(double, double)>& inside) {
  const int jlo = (n == 1) ? 0 : 0;
  for (int j = jlo; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!inside(x(i), y(j))) continue;
      bool full = true;
      for (int dj = (n == 1 ? 0 : -1); dj <= (n == 1 ? 0 : 1) && full; ++dj) {
        for (int di = -1; di <= 1 && full; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= nx || jj < 0 || jj >= ny || !inside(x(ii), y(jj))) full = false;
        }
      }
      mask[static_cast<std::size_t>(idx(i, j))] = full ? NodeKind::interior : NodeKind::boundary;
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int id = idx(i, j);
      if (mask[static_cast<std::size_t>(id)] == NodeKind::interior) interior.push_back(id);
      if (mask[static_cast<std::size_t>(id)] == NodeKind::boundary) boundary.push_back(id);
    }
  }
}

void GraphGrid::validate() const {
  if (interior.empty()) throw ValidationError("grid has no interior nodes");
  // interior region must be connected (axis neighbors)
  std::vector<char> seen(size(), 0);
  std::deque<int> queue{interior.front()};
  seen[static_cast<std::size_t>(interior.front())] = 1;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    ++reached;
    const int i = id % nx, j = id / nx;
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < (n == 1 ? 2 : 4); ++d) {
      const int ii = i + di[d], jj = j + dj[d];
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      const int nid = idx(ii, jj);
      if (!seen[static_cast<std::size_t>(nid)] && kind(nid) == NodeKind::interior) {
        seen[static_cast<std::size_t>(nid)] = 1;
        queue.push_back(nid);
      }
    }
  }
  if (reached != interior.size()) throw ValidationError("grid interior is not connected");
}

double GraphGrid::radius2(int linear) const {
  const int i = linear % nx, j = linear / nx;
  const double xx = x(i);
  const double yy = (n == 1) ? 0.0 : y(j);
  return xx * xx + yy * yy;
}

GraphState::GraphState(std::shared_ptr<const GraphGrid> g, std::vector<double> values, double time)
    : grid(std::move(g)), w(std::move(values)), t(time) {
  if (!grid) throw ValidationError("state needs a grid");
  if (w.size() != grid->size()) throw DimensionMismatch("state size does not match the grid");
  for (int id : grid->interior) {
    if (!std::isfinite(w[static_cast<std::size_t>(id)])) {
      throw DomainError("non-finite height at an interior node");
    }
  }
  for (int id : grid->boundary) {
    if (!std::isfinite(w[static_cast<std::size_t>(id)])) {
      throw DomainError("non-finite height at a boundary node");
    }
  }
}

// ---------------------------------------------------------------------------
// Pointwise kernel
// ---------------------------------------------------------------------------
bool node_geometry(const GraphGrid& grid, const double* w, int i, int j,
                   const symfun::FamilyNode& fn, double beta, double lambda_floor, NodeGeom& out) {
  const double h = grid.spacing;
  const double inv2h = 1.0 / (2.0 * h);
  const double invh2 = 1.0 / (h * h);
  const int id = grid.idx(i, j);

  if (grid.n == 1) {
    const double wc = w[id], we = w[id + 1], ww = w[id - 1];
    const double wx = (we - ww) * inv2h;
    const double wxx = (we - 2.0 * wc + ww) * invh2;
    out.dw[0] = wx;
    out.dw[1] = 0.0;
    out.d2w[0] = wxx;
    out.d2w[1] = out.d2w[2] = 0.0;
    out.q = 1.0 + wx * wx;
    out.v = std::sqrt(out.q);
    const double lam = wxx / (out.v * out.q);
    out.lam[0] = lam;
    out.lam[1] = 0.0;
    if (!(lam >= lambda_floor)) return false;
    std::span<const double> ls(out.lam, 1);
    double grad[1];
    const double F = symfun::grad_f_fast(fn, ls, std::span<double>(grad, 1));
    const double Fb1 = (beta == 1.0) ? 1.0 : std::pow(F, beta - 1.0);
    out.F = F;
    out.Phi = F * Fb1;
    out.rhs = out.v * out.Phi;
    out.cflfac = out.v * beta * Fb1 * grad[0] * out.q;
    return true;
  }

  const int sx = 1, sy = grid.nx;
  const double wc = w[id];
  const double we = w[id + sx], ww = w[id - sx];
  const double wn = w[id + sy], ws = w[id - sy];
  const double wne = w[id + sy + sx], wnw = w[id + sy - sx];
  const double wse = w[id - sy + sx], wsw = w[id - sy - sx];

  const double wx = (we - ww) * inv2h;
  const double wy = (wn - ws) * inv2h;
  const double wxx = (we - 2.0 * wc + ww) * invh2;
  const double wyy = (wn - 2.0 * wc + ws) * invh2;
  // grouped so that relabeling the axes reproduces bit-identical values
  const double wxy = ((wne + wsw) - (wnw + wse)) * (0.25 * invh2);

  out.dw[0] = wx;
  out.dw[1] = wy;
  out.d2w[0] = wxx;
  out.d2w[1] = wyy;
  out.d2w[2] = wxy;

  const double q = 1.0 + (wx * wx + wy * wy);
  const double v = std::sqrt(q);
  out.q = q;
  out.v = v;

  // metric g = I + Dw Dw^T, second fundamental form h = D2w / v
  const double g11 = 1.0 + wx * wx, g22 = 1.0 + wy * wy, g12 = wx * wy;
  const double h11 = wxx / v, h22 = wyy / v, h12 = wxy / v;

  const double a = q;  // det g
  const double b = h11 * g22 + h22 * g11 - 2.0 * h12 * g12;
  const double c = h11 * h22 - h12 * h12;
  pencil_eigenvalues(a, b, c, out.lam);
  if (!(out.lam[0] >= lambda_floor)) return false;

  std::span<const double> ls(out.lam, 2);
  double grad[2];
  const double F = symfun::grad_f_fast(fn, ls, std::span<double>(grad, 2));
  const double Fb1 = (beta == 1.0) ? 1.0 : std::pow(F, beta - 1.0);
  out.F = F;
  out.Phi = F * Fb1;
  out.rhs = v * out.Phi;
  out.cflfac = v * beta * Fb1 * std::max(grad[0], grad[1]) * q;
  return true;
}

// ---------------------------------------------------------------------------
// Assembled fields
// ---------------------------------------------------------------------------
Derivatives differentiate(const GraphState& state) {
  const GraphGrid& grid = *state.grid;
  Derivatives d;
  d.nodes = grid.interior;
  const std::size_t m = d.nodes.size();
  const int n = grid.n;
  d.dw.assign(m * static_cast<std::size_t>(n), 0.0);
  d.d2w.assign(m * static_cast<std::size_t>(n == 1 ? 1 : 3), 0.0);
  const double* w = state.w.data();
  const double inv2h = 1.0 / (2.0 * grid.spacing);
  const double invh2 = 1.0 / (grid.spacing * grid.spacing);
  for (std::size_t k = 0; k < m; ++k) {
    const int id = d.nodes[k];
    if (n == 1) {
      d.dw[k] = (w[id + 1] - w[id - 1]) * inv2h;
      d.d2w[k] = (w[id + 1] - 2.0 * w[id] + w[id - 1]) * invh2;
    } else {
      const int sy = grid.nx;
      d.dw[2 * k] = (w[id + 1] - w[id - 1]) * inv2h;
      d.dw[2 * k + 1] = (w[id + sy] - w[id - sy]) * inv2h;
      d.d2w[3 * k] = (w[id + 1] - 2.0 * w[id] + w[id - 1]) * invh2;
      d.d2w[3 * k + 1] = (w[id + sy] - 2.0 * w[id] + w[id - sy]) * invh2;
      d.d2w[3 * k + 2] =
          (w[id + sy + 1] - w[id + sy - 1] - w[id - sy + 1] + w[id - sy - 1]) * (0.25 * invh2);
    }
  }
  return d;
}

double GeomFields::min_lambda() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes.size(); ++k) m = std::min(m, lam[k * static_cast<std::size_t>(n)]);
  return m;
}

double GeomFields::max_v() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

double GeomFields::max_F() const {
  double m = 0.0;
  for (double x : F) m = std::max(m, x);
  return m;
}

GeomFields geom_fields(const GraphState& state, const symfun::CurvatureSpec& spec,
                       double lambda_floor) {
  const GraphGrid& grid = *state.grid;
  if (spec.n != grid.n) throw DimensionMismatch("spec dimension does not match the grid");
  GeomFields f;
  f.n = grid.n;
  f.nodes = grid.interior;
  const std::size_t m = f.nodes.size();
  const int n = grid.n;
  const std::size_t symlen = (n == 1) ? 1 : 3;
  f.dw.assign(m * static_cast<std::size_t>(n), 0.0);
  f.d2w.assign(m * symlen, 0.0);
  f.g.assign(m * symlen, 0.0);
  f.g_inv.assign(m * symlen, 0.0);
  f.h.assign(m * symlen, 0.0);
  f.lam.assign(m * static_cast<std::size_t>(n), 0.0);
  f.v.assign(m, 0.0);
  f.nu.assign(m * static_cast<std::size_t>(n + 1), 0.0);
  f.F.assign(m, 0.0);
  f.Phi.assign(m, 0.0);

  int bad_node = -1;
  double bad_lam = std::numeric_limits<double>::infinity();
  const double* w = state.w.data();

  for (std::size_t k = 0; k < m; ++k) {
    const int id = f.nodes[k];
    const int i = id % grid.nx, j = id / grid.nx;
    NodeGeom ng;
    const bool ok = node_geometry(grid, w, i, j, spec.root, spec.beta, lambda_floor, ng);
    for (int d = 0; d < n; ++d) {
      f.dw[k * n + d] = ng.dw[d];
      f.lam[k * n + d] = ng.lam[d];
    }
    for (std::size_t d = 0; d < symlen; ++d) f.d2w[k * symlen + d] = ng.d2w[d];
    f.v[k] = ng.v;
    if (n == 1) {
      f.g[k] = ng.q;
      f.g_inv[k] = 1.0 / ng.q;
      f.h[k] = ng.d2w[0] / ng.v;
      f.nu[2 * k] = ng.dw[0] / ng.v;
      f.nu[2 * k + 1] = -1.0 / ng.v;
    } else {
      f.g[3 * k] = 1.0 + ng.dw[0] * ng.dw[0];
      f.g[3 * k + 1] = 1.0 + ng.dw[1] * ng.dw[1];
      f.g[3 * k + 2] = ng.dw[0] * ng.dw[1];
      f.g_inv[3 * k] = 1.0 - ng.dw[0] * ng.dw[0] / ng.q;
      f.g_inv[3 * k + 1] = 1.0 - ng.dw[1] * ng.dw[1] / ng.q;
      f.g_inv[3 * k + 2] = -ng.dw[0] * ng.dw[1] / ng.q;
      f.h[3 * k] = ng.d2w[0] / ng.v;
      f.h[3 * k + 1] = ng.d2w[1] / ng.v;
      f.h[3 * k + 2] = ng.d2w[2] / ng.v;
      f.nu[3 * k] = ng.dw[0] / ng.v;
      f.nu[3 * k + 1] = ng.dw[1] / ng.v;
      f.nu[3 * k + 2] = -1.0 / ng.v;
    }
    if (!ok) {
      if (ng.lam[0] < bad_lam) {
        bad_lam = ng.lam[0];
        bad_node = id;
      }
      continue;
    }
    f.F[k] = ng.F;
    f.Phi[k] = ng.Phi;
  }

  if (bad_node >= 0) {
    std::ostringstream os;
    os << "state is not strictly convex: lambda_min=" << bad_lam << " at node " << bad_node
       << " (floor " << lambda_floor << ", t=" << state.t << ")";
    throw NonConvexState(os.str());
  }
  return f;
}

double min_generalized_eigenvalue(const GraphState& state) {
  const GraphGrid& grid = *state.grid;
  const double* w = state.w.data();
  double worst = std::numeric_limits<double>::infinity();
  const symfun::FamilyNode mean = symfun::FamilyNode::power_mean(1.0);
  for (int id : grid.interior) {
    NodeGeom ng;
    // +inf floor: the kernel bails out right after the eigenvalues
    node_geometry(grid, w, id % grid.nx, id / grid.nx, mean, 1.0,
                  std::numeric_limits<double>::infinity(), ng);
    worst = std::min(worst, ng.lam[0]);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Euler-type bound
// ---------------------------------------------------------------------------
double euler_bound_check(const std::vector<double>& g_rowmajor,
                         const std::vector<double>& h_rowmajor, int n) {
  if (g_rowmajor.size() != static_cast<std::size_t>(n * n) ||
      h_rowmajor.size() != static_cast<std::size_t>(n * n)) {
    throw DimensionMismatch("matrices must be n*n");
  }
  Eigen::MatrixXd G(n, n), H(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      G(i, j) = g_rowmajor[static_cast<std::size_t>(i * n + j)];
      H(i, j) = h_rowmajor[static_cast<std::size_t>(i * n + j)];
    }
  }
  Eigen::LLT<Eigen::MatrixXd> lltH(H);
  if (lltH.info() != Eigen::Success) {
    throw SingularInput("second fundamental form is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, G, Eigen::EigenvaluesOnly);
  const double lam_min = eig.eigenvalues().minCoeff();
  if (!(lam_min > 0.0)) throw SingularInput("pencil (h, g) is not positive definite");
  const Eigen::MatrixXd B = H.inverse();
  const Eigen::MatrixXd Gi = G.inverse();
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    margin = std::min(margin, 1.0 / lam_min - B(i, i) / Gi(i, i));
  }
  return margin;
}

// ---------------------------------------------------------------------------
// Rotational graphs
// ---------------------------------------------------------------------------
RotationalCurvatures rotational_curvatures(const RotationalProfile& profile, double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const int n = profile.n;
  const double p = profile.der1(r);
  const double pp = profile.der2(r);
  const double s = 1.0 + p * p;
  const double sq = std::sqrt(s);

  RotationalCurvatures out;
  const double tangential = p / (r * sq);
  const double radial = pp / (s * sq);
  out.lam.assign(static_cast<std::size_t>(n), tangential);
  out.lam.back() = radial;
  out.K = pp * std::pow(std::abs(p), n - 1) / (std::pow(r, n - 1) * std::pow(s, 0.5 * (n + 2)));
  out.H = ((n - 1) * p / r + pp / s) / sq;
  return out;
}

}  // namespace curvflow::geometry
