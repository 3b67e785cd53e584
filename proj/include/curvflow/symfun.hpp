#ifndef CURVFLOW_SYMFUN_HPP
#define CURVFLOW_SYMFUN_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "curvflow/errors.hpp"

namespace curvflow::symfun {

// ---------------------------------------------------------------------------
// Lambda: an ordered point of the positive cone (principal curvatures).
// Stored sorted ascending; every entry must be strictly positive.
// ---------------------------------------------------------------------------
class Lambda {
 public:
  explicit Lambda(std::vector<double> values);
  Lambda(std::initializer_list<double> values) : Lambda(std::vector<double>(values)) {}

  int n() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }

 private:
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// CurvatureSpec: a monotone, degree-one homogeneous, normalized symmetric
// curvature function on the positive cone, raised to the power beta.
//
// Families:
//   PowerMean(r)    ((1/n) sum lambda_i^r)^(1/r), r > 0
//   ElemSymRoot(k)  (E_k(lambda) / C(n,k))^(1/k), k in 1..n
//   GaussPower      (prod lambda_i)^(1/n)
//   WeightedProduct prod_a f_a^{w_a}, w_a >= 0, sum w_a = 1
// ---------------------------------------------------------------------------
enum class Family : std::uint8_t { power_mean, elem_sym_root, gauss_power, weighted_product };

struct FamilyNode {
  Family family = Family::power_mean;
  double r = 1.0;  // power_mean exponent
  int k = 1;       // elem_sym_root degree
  std::vector<std::pair<FamilyNode, double>> factors;  // weighted_product children

  static FamilyNode power_mean(double r);
  static FamilyNode elem_sym_root(int k);
  static FamilyNode gauss_power();
  static FamilyNode weighted_product(std::vector<std::pair<FamilyNode, double>> factors);

  std::string describe() const;
};

struct CurvatureSpec {
  FamilyNode root;
  int n = 2;
  double beta = 1.0;

  CurvatureSpec() = default;
  CurvatureSpec(FamilyNode root, int n, double beta);

  std::string describe() const;
};

// Built-in shorthands.
CurvatureSpec make_power_mean(double r, int n, double beta = 1.0);
CurvatureSpec make_elem_sym_root(int k, int n, double beta = 1.0);
CurvatureSpec make_gauss_power(int n, double beta = 1.0);
// gauss^s * mean^(1-s); the product family used throughout the test drivers.
CurvatureSpec make_gauss_mean_product(double s, int n, double beta = 1.0);

// ---------------------------------------------------------------------------
// Evaluation and differentiation
// ---------------------------------------------------------------------------
struct DerivativeBundle {
  double value = 0.0;
  std::vector<double> grad;  // df/dlambda_i, in the order of the input lambda
  std::vector<double> hess;  // row-major n*n, symmetric
};

double eval_f(const CurvatureSpec& spec, const Lambda& lam);
DerivativeBundle derivatives(const CurvatureSpec& spec, const Lambda& lam);

// Dual function f_*(tau) = f(1/tau_1, ..., 1/tau_n)^{-1}.
double eval_dual(const CurvatureSpec& spec, const Lambda& tau);
// Analytic gradient/Hessian of f_* obtained from the bundle of f at 1/tau.
DerivativeBundle dual_derivatives(const CurvatureSpec& spec, const Lambda& tau);

// Second directional derivative of F (= f of the eigenvalues) at diag(lam)
// in the direction of a symmetric matrix B (row-major n*n):
//   sum_{i,k} hess_ik B_ii B_kk + 2 sum_{i>k} (grad_i - grad_k)/(lam_i - lam_k) B_ik^2,
// with the difference quotient replaced by hess_ii - hess_ik when
// |lam_i - lam_k| < 1e-9 * max(lam).
double ddF_direction(const CurvatureSpec& spec, const Lambda& lam, std::span<const double> B);

// Lemma residuals for inverse-concave f at a point:
//   first  = sum_i grad_i lam_i^2 - f^2
//   second = min_{k != l} (grad_k - grad_l)/(lam_k - lam_l) + grad_k/lam_l + grad_l/lam_k
// Both are >= 0 (up to rounding) for every admissible family. Repeated
// entries use the same limit substitution as ddF_direction. For n == 1 the
// second residual is reported as +inf (no pairs).
struct LemmaResiduals {
  double first = 0.0;
  double second = 0.0;
};
LemmaResiduals verify_lemma2(const CurvatureSpec& spec, const Lambda& lam);

// ---------------------------------------------------------------------------
// Certification of the admissibility conditions by sampling
// ---------------------------------------------------------------------------
struct CertCheck {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // signed margin; meaning depends on the check
  std::string detail;
};

struct CertReport {
  std::string spec;
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  bool sampled_only = false;  // boundary decay asserted numerically only
  std::vector<CertCheck> checks;

  bool all_pass() const;
  std::string to_json() const;
  std::string to_table() const;
};

// Samples the positive cone log-uniformly in [1e-3, 1e3]^n and checks:
// monotonicity (gradient positivity), degree-one homogeneity, normalization,
// permutation symmetry, negative semidefiniteness of the dual Hessian, and
// decay of the dual toward the cone boundary. Deterministic given the seed.
CertReport check_condition1(const CurvatureSpec& spec, int sample_count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Allocation-free fast path used by the grid kernels (n <= 8). Works on raw
// spans, skipping the Lambda canonicalization; entries must be positive.
// ---------------------------------------------------------------------------
double eval_f_fast(const FamilyNode& node, std::span<const double> lam);
// Writes f and df/dlambda_i; grad must have lam.size() entries.
double grad_f_fast(const FamilyNode& node, std::span<const double> lam, std::span<double> grad);

}  // namespace curvflow::symfun

#endif
