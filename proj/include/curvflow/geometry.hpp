#ifndef CURVFLOW_GEOMETRY_HPP
#define CURVFLOW_GEOMETRY_HPP

#include <functional>
#include <memory>
#include <vector>

#include "curvflow/symfun.hpp"

namespace curvflow::geometry {

// ---------------------------------------------------------------------------
// Uniform isotropic grid over a rectangular index box with a node mask.
// Interior nodes always carry a full 3^n neighborhood of in-domain nodes, so
// every stencil below is applicable without one-sided fallbacks.
// ---------------------------------------------------------------------------
enum class NodeKind : unsigned char { outside, boundary, interior };

class GraphGrid {
 public:
  int n = 2;          // spatial dimension, 1 or 2
  int nx = 0, ny = 0; // index box (ny == 1 when n == 1)
  double spacing = 0.0;
  double ox = 0.0, oy = 0.0;  // coordinates of index (0, 0)
  std::vector<NodeKind> mask;
  std::vector<int> interior;  // linear indices, row-major, ascending
  std::vector<int> boundary;

  static GraphGrid line(double extent, int nodes);
  static GraphGrid square(double extent, int nodes);
  static GraphGrid disc(double radius, int nodes);

  int idx(int i, int j) const { return j * nx + i; }
  double x(int i) const { return ox + spacing * i; }
  double y(int j) const { return oy + spacing * j; }
  NodeKind kind(int linear) const { return mask[static_cast<std::size_t>(linear)]; }
  std::size_t size() const { return mask.size(); }
  // squared distance of a linear node from the origin
  double radius2(int linear) const;

 private:
  static GraphGrid build(int n, double extent, int nodes,
                         const std::function<bool(double, double)>& inside);
  void classify(const std::function<bool(double, double)>& inside);
  void validate() const;
};

// ---------------------------------------------------------------------------
// A grid function at a fixed time.
// ---------------------------------------------------------------------------
struct GraphState {
  std::shared_ptr<const GraphGrid> grid;
  std::vector<double> w;  // full index box; outside entries unused
  double t = 0.0;

  GraphState() = default;
  GraphState(std::shared_ptr<const GraphGrid> g, std::vector<double> values, double time = 0.0);
};

// ---------------------------------------------------------------------------
// Per-node kernel output (n <= 2; unused slots zero)
// ---------------------------------------------------------------------------
struct NodeGeom {
  double dw[2] = {0, 0};
  double d2w[3] = {0, 0, 0};  // xx, yy, xy
  double q = 1.0;             // det g = 1 + |Dw|^2
  double v = 1.0;
  double lam[2] = {0, 0};  // ascending
  double F = 0.0;
  double Phi = 0.0;
  double rhs = 0.0;     // v * F^beta
  double cflfac = 0.0;  // v * beta F^(beta-1) * max_i df_i * (1 + |Dw|^2)
};

// Evaluates stencil derivatives and the full pointwise geometry at one
// interior node. Returns false (without filling F/Phi/rhs) when the smallest
// generalized eigenvalue of (h, g) falls below lambda_floor.
bool node_geometry(const GraphGrid& grid, const double* w, int i, int j,
                   const symfun::FamilyNode& fn, double beta, double lambda_floor, NodeGeom& out);

// ---------------------------------------------------------------------------
// Assembled fields over all interior nodes
// ---------------------------------------------------------------------------
struct Derivatives {
  std::vector<int> nodes;   // linear indices of interior nodes
  std::vector<double> dw;   // stride n
  std::vector<double> d2w;  // packed symmetric: [xx] or [xx, yy, xy]
};

Derivatives differentiate(const GraphState& state);

struct GeomFields {
  int n = 2;
  std::vector<int> nodes;
  std::vector<double> dw;     // stride n
  std::vector<double> d2w;    // packed symmetric
  std::vector<double> g;      // packed symmetric
  std::vector<double> g_inv;  // packed symmetric
  std::vector<double> h;      // packed symmetric
  std::vector<double> lam;    // stride n, ascending
  std::vector<double> v;
  std::vector<double> nu;  // stride n+1, unit outward normal, last entry -1/v
  std::vector<double> F;
  std::vector<double> Phi;

  double min_lambda() const;
  double max_v() const;
  double max_F() const;
};

// Throws NonConvexState when any interior node has a generalized eigenvalue
// below lambda_floor; the offending node with the smallest eigenvalue is
// reported in the message.
GeomFields geom_fields(const GraphState& state, const symfun::CurvatureSpec& spec,
                       double lambda_floor = 1e-10);

// Smallest generalized eigenvalue of (h, g) over interior nodes; no throw.
double min_generalized_eigenvalue(const GraphState& state);

// min_i (1/lambda_min - b^ii / g^ii) for SPD g, h with b = h^{-1}; always
// nonnegative up to rounding.
double euler_bound_check(const std::vector<double>& g_rowmajor,
                         const std::vector<double>& h_rowmajor, int n);

// ---------------------------------------------------------------------------
// Rotationally symmetric graphs: closed-form curvatures from the radial
// derivatives of the height profile.
// ---------------------------------------------------------------------------
struct RotationalProfile {
  std::function<double(double)> der1;  // d(height)/dr
  std::function<double(double)> der2;  // d2(height)/dr2
  int n = 2;                           // graph dimension (surface in R^{n+1})
};

struct RotationalCurvatures {
  double K = 0.0;
  double H = 0.0;
  std::vector<double> lam;  // (n-1)-fold tangential value then the radial one, unsorted
};

RotationalCurvatures rotational_curvatures(const RotationalProfile& profile, double r);

}  // namespace curvflow::geometry

#endif
