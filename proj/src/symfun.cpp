#include "curvflow/symfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

namespace curvflow::symfun {

namespace {

constexpr int kFastMaxN = 8;

void require_positive(std::span<const double> lam) {
  if (lam.empty()) throw DomainError("lambda must have at least one entry");
  for (double v : lam) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("lambda entry outside the positive cone: " + std::to_string(v));
    }
  }
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Elementary symmetric polynomials E_0..E_m of the given values, skipping up
// to two indices. All-positive accumulation, no cancellation.
void esp(std::span<const double> vals, int m, int skip_a, int skip_b, std::span<double> out) {
  for (int j = 0; j <= m; ++j) out[static_cast<std::size_t>(j)] = (j == 0) ? 1.0 : 0.0;
  for (int i = 0; i < static_cast<int>(vals.size()); ++i) {
    if (i == skip_a || i == skip_b) continue;
    const double v = vals[static_cast<std::size_t>(i)];
    for (int j = m; j >= 1; --j) {
      out[static_cast<std::size_t>(j)] += v * out[static_cast<std::size_t>(j - 1)];
    }
  }
}

double esp_single(std::span<const double> vals, int m, int skip_a = -1, int skip_b = -1) {
  if (m < 0) return 0.0;
  std::array<double, kFastMaxN + 1> buf{};
  std::vector<double> dyn;
  std::span<double> out;
  if (m <= kFastMaxN) {
    out = std::span<double>(buf.data(), static_cast<std::size_t>(m + 1));
  } else {
    dyn.assign(static_cast<std::size_t>(m + 1), 0.0);
    out = dyn;
  }
  esp(vals, m, skip_a, skip_b, out);
  return out[static_cast<std::size_t>(m)];
}

// ---------------------------------------------------------------------------
// Value / gradient / Hessian of a family tree at a raw (unsorted) point.
// Gradient and Hessian outputs are optional (empty spans skip them).
// ---------------------------------------------------------------------------
double bundle_raw(const FamilyNode& node, std::span<const double> lam, std::span<double> grad,
                  std::span<double> hess) {
  const int n = static_cast<int>(lam.size());
  const auto hij = [&](int i, int j) -> double& {
    return hess[static_cast<std::size_t>(i * n + j)];
  };

  switch (node.family) {
    case Family::power_mean: {
      const double r = node.r;
      if (r == 1.0) {
        double s = 0.0;
        for (double v : lam) s += v;
        const double f = s / n;
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = 1.0 / n;
        for (std::size_t i = 0; i < hess.size(); ++i) hess[i] = 0.0;
        return f;
      }
      double s = 0.0;
      for (double v : lam) s += std::pow(v, r);
      s /= n;
      const double f = std::pow(s, 1.0 / r);
      if (!grad.empty()) {
        const double a = std::pow(s, 1.0 / r - 1.0);
        for (int i = 0; i < n; ++i) {
          grad[static_cast<std::size_t>(i)] =
              a * std::pow(lam[static_cast<std::size_t>(i)], r - 1.0) / n;
        }
      }
      if (!hess.empty()) {
        const double b = std::pow(s, 1.0 / r - 2.0);
        const double a = std::pow(s, 1.0 / r - 1.0);
        for (int i = 0; i < n; ++i) {
          const double li = lam[static_cast<std::size_t>(i)];
          const double pi = std::pow(li, r - 1.0);
          for (int j = 0; j <= i; ++j) {
            const double lj = lam[static_cast<std::size_t>(j)];
            double v = (1.0 - r) * pi * std::pow(lj, r - 1.0) * b / (static_cast<double>(n) * n);
            if (i == j) v -= (1.0 - r) * std::pow(li, r - 2.0) * a / n;
            hij(i, j) = v;
            hij(j, i) = v;
          }
        }
      }
      return f;
    }

    case Family::gauss_power: {
      double logsum = 0.0;
      for (double v : lam) logsum += std::log(v);
      const double f = std::exp(logsum / n);
      if (!grad.empty()) {
        for (int i = 0; i < n; ++i) {
          grad[static_cast<std::size_t>(i)] = f / (n * lam[static_cast<std::size_t>(i)]);
        }
      }
      if (!hess.empty()) {
        for (int i = 0; i < n; ++i) {
          const double li = lam[static_cast<std::size_t>(i)];
          for (int j = 0; j <= i; ++j) {
            const double lj = lam[static_cast<std::size_t>(j)];
            double v = f / (static_cast<double>(n) * n * li * lj);
            if (i == j) v -= f / (n * li * li);
            hij(i, j) = v;
            hij(j, i) = v;
          }
        }
      }
      return f;
    }

    case Family::elem_sym_root: {
      const int k = node.k;
      if (k < 1 || k > n) throw DimensionMismatch("elem_sym_root degree outside 1..n");
      const double c = binomial(n, k);
      const double e = esp_single(lam, k);
      const double f = std::pow(e / c, 1.0 / k);
      std::array<double, kFastMaxN> ei_buf{};
      std::vector<double> ei_dyn;
      std::span<double> ei;
      if (!grad.empty() || !hess.empty()) {
        if (n <= kFastMaxN) {
          ei = std::span<double>(ei_buf.data(), static_cast<std::size_t>(n));
        } else {
          ei_dyn.assign(static_cast<std::size_t>(n), 0.0);
          ei = ei_dyn;
        }
        for (int i = 0; i < n; ++i) ei[static_cast<std::size_t>(i)] = esp_single(lam, k - 1, i);
      }
      if (!grad.empty()) {
        for (int i = 0; i < n; ++i) {
          grad[static_cast<std::size_t>(i)] = f * ei[static_cast<std::size_t>(i)] / (k * e);
        }
      }
      if (!hess.empty()) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j <= i; ++j) {
            const double eij = (i == j) ? 0.0 : esp_single(lam, k - 2, i, j);
            const double v =
                (f / k) * (eij / e + (1.0 / k - 1.0) * ei[static_cast<std::size_t>(i)] *
                                         ei[static_cast<std::size_t>(j)] / (e * e));
            hij(i, j) = v;
            hij(j, i) = v;
          }
        }
      }
      return f;
    }

    case Family::weighted_product: {
      // f = prod f_a^{w_a};  d log f = sum w_a d log f_a.
      const std::size_t nn = static_cast<std::size_t>(n);
      std::vector<double> cg(grad.empty() && hess.empty() ? 0 : nn);
      std::vector<double> ch(hess.empty() ? 0 : nn * nn);
      std::vector<double> dlog(grad.empty() && hess.empty() ? 0 : nn, 0.0);
      std::vector<double> acc(hess.empty() ? 0 : nn * nn, 0.0);
      double logf = 0.0;
      for (const auto& [child, w] : node.factors) {
        const double fa = bundle_raw(child, lam, cg, ch);
        logf += w * std::log(fa);
        for (std::size_t i = 0; i < dlog.size(); ++i) dlog[i] += w * cg[i] / fa;
        if (!hess.empty()) {
          for (std::size_t i = 0; i < nn; ++i) {
            for (std::size_t j = 0; j < nn; ++j) {
              acc[i * nn + j] += w * (ch[i * nn + j] / fa - cg[i] * cg[j] / (fa * fa));
            }
          }
        }
      }
      const double f = std::exp(logf);
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = f * dlog[i];
      if (!hess.empty()) {
        for (std::size_t i = 0; i < nn; ++i) {
          for (std::size_t j = 0; j < nn; ++j) {
            hess[i * nn + j] = f * (dlog[i] * dlog[j] + acc[i * nn + j]);
          }
        }
      }
      return f;
    }
  }
  throw InternalError("unhandled curvature family");
}

// Allocation-free value / value+gradient recursion for n <= kFastMaxN;
// falls back to bundle_raw (heap) above that.
double fast_value_grad(const FamilyNode& node, std::span<const double> lam,
                       std::span<double> grad) {
  const int n = static_cast<int>(lam.size());
  if (n > kFastMaxN) return bundle_raw(node, lam, grad, {});
  switch (node.family) {
    case Family::power_mean: {
      const double r = node.r;
      if (r == 1.0) {
        double s = 0.0;
        for (double v : lam) s += v;
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = 1.0 / n;
        return s / n;
      }
      double s = 0.0;
      for (double v : lam) s += std::pow(v, r);
      s /= n;
      const double f = std::pow(s, 1.0 / r);
      if (!grad.empty()) {
        const double a = std::pow(s, 1.0 / r - 1.0);
        for (int i = 0; i < n; ++i) {
          grad[static_cast<std::size_t>(i)] =
              a * std::pow(lam[static_cast<std::size_t>(i)], r - 1.0) / n;
        }
      }
      return f;
    }
    case Family::gauss_power: {
      double logsum = 0.0;
      for (double v : lam) logsum += std::log(v);
      const double f = std::exp(logsum / n);
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = f / (n * lam[i]);
      return f;
    }
    case Family::elem_sym_root: {
      const int k = node.k;
      if (k < 1 || k > n) throw DimensionMismatch("elem_sym_root degree outside 1..n");
      const double c = binomial(n, k);
      const double e = esp_single(lam, k);
      const double f = std::pow(e / c, 1.0 / k);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] = f * esp_single(lam, k - 1, static_cast<int>(i)) / (k * e);
      }
      return f;
    }
    case Family::weighted_product: {
      double logf = 0.0;
      std::array<double, kFastMaxN> dlog{};
      std::array<double, kFastMaxN> cg{};
      for (const auto& [child, w] : node.factors) {
        const double fa = fast_value_grad(
            child, lam, grad.empty() ? std::span<double>{} : std::span<double>(cg.data(), lam.size()));
        logf += w * std::log(fa);
        for (std::size_t i = 0; i < grad.size(); ++i) dlog[i] += w * cg[i] / fa;
      }
      const double f = std::exp(logf);
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = f * dlog[i];
      return f;
    }
  }
  throw InternalError("unhandled curvature family");
}

double eval_raw(const FamilyNode& node, std::span<const double> lam) {
  return fast_value_grad(node, lam, {});
}

void check_spec_dim(const CurvatureSpec& spec, int n) {
  if (spec.n != n) {
    throw DimensionMismatch("spec dimension " + std::to_string(spec.n) +
                            " does not match lambda dimension " + std::to_string(n));
  }
}

// Difference quotient (grad_i - grad_k)/(lam_i - lam_k) with the continuity
// limit hess_ii - hess_ik substituted for near-coincident entries.
double pair_quotient(const DerivativeBundle& b, std::span<const double> lam, int i, int k) {
  const int n = static_cast<int>(lam.size());
  const double li = lam[static_cast<std::size_t>(i)];
  const double lk = lam[static_cast<std::size_t>(k)];
  const double lmax = *std::max_element(lam.begin(), lam.end());
  if (std::abs(li - lk) < 1e-9 * lmax) {
    return b.hess[static_cast<std::size_t>(i * n + i)] - b.hess[static_cast<std::size_t>(i * n + k)];
  }
  return (b.grad[static_cast<std::size_t>(i)] - b.grad[static_cast<std::size_t>(k)]) / (li - lk);
}

}  // namespace

// ---------------------------------------------------------------------------
// Lambda
// ---------------------------------------------------------------------------
Lambda::Lambda(std::vector<double> values) : values_(std::move(values)) {
  require_positive(values_);
  std::sort(values_.begin(), values_.end());
}

// ---------------------------------------------------------------------------
// FamilyNode / CurvatureSpec
// ---------------------------------------------------------------------------
FamilyNode FamilyNode::power_mean(double r) {
  if (!(r > 0.0)) throw ValidationError("power mean exponent must be positive");
  FamilyNode f;
  f.family = Family::power_mean;
  f.r = r;
  return f;
}

FamilyNode FamilyNode::elem_sym_root(int k) {
  if (k < 1) throw ValidationError("elementary symmetric degree must be >= 1");
  FamilyNode f;
  f.family = Family::elem_sym_root;
  f.k = k;
  return f;
}

FamilyNode FamilyNode::gauss_power() {
  FamilyNode f;
  f.family = Family::gauss_power;
  return f;
}

FamilyNode FamilyNode::weighted_product(std::vector<std::pair<FamilyNode, double>> factors) {
  if (factors.empty()) throw ValidationError("weighted product needs at least one factor");
  double sum = 0.0;
  for (const auto& [child, w] : factors) {
    (void)child;
    if (w < 0.0 || w > 1.0) throw ValidationError("product weight outside [0, 1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("product weights must sum to 1");
  FamilyNode f;
  f.family = Family::weighted_product;
  f.factors = std::move(factors);
  return f;
}

std::string FamilyNode::describe() const {
  std::ostringstream os;
  switch (family) {
    case Family::power_mean:
      if (r == 1.0) {
        os << "mean";
      } else {
        os << "pmean(" << r << ")";
      }
      break;
    case Family::elem_sym_root:
      os << "sym(" << k << ")";
      break;
    case Family::gauss_power:
      os << "gauss";
      break;
    case Family::weighted_product: {
      os << "product(";
      bool first = true;
      for (const auto& [child, w] : factors) {
        if (!first) os << ", ";
        first = false;
        os << child.describe() << "^" << w;
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

CurvatureSpec::CurvatureSpec(FamilyNode root_, int n_, double beta_)
    : root(std::move(root_)), n(n_), beta(beta_) {
  if (n < 1) throw ValidationError("dimension must be >= 1");
  if (!(beta >= 1.0)) throw ValidationError("beta must be >= 1");
}

std::string CurvatureSpec::describe() const { return root.describe(); }

CurvatureSpec make_power_mean(double r, int n, double beta) {
  return CurvatureSpec(FamilyNode::power_mean(r), n, beta);
}
CurvatureSpec make_elem_sym_root(int k, int n, double beta) {
  return CurvatureSpec(FamilyNode::elem_sym_root(k), n, beta);
}
CurvatureSpec make_gauss_power(int n, double beta) {
  return CurvatureSpec(FamilyNode::gauss_power(), n, beta);
}
CurvatureSpec make_gauss_mean_product(double s, int n, double beta) {
  if (s < 0.0 || s > 1.0) throw ValidationError("product weight outside [0, 1]");
  std::vector<std::pair<FamilyNode, double>> factors;
  factors.emplace_back(FamilyNode::gauss_power(), s);
  factors.emplace_back(FamilyNode::power_mean(1.0), 1.0 - s);
  return CurvatureSpec(FamilyNode::weighted_product(std::move(factors)), n, beta);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------
double eval_f(const CurvatureSpec& spec, const Lambda& lam) {
  check_spec_dim(spec, lam.n());
  return eval_raw(spec.root, lam.span());
}

DerivativeBundle derivatives(const CurvatureSpec& spec, const Lambda& lam) {
  check_spec_dim(spec, lam.n());
  const std::size_t n = static_cast<std::size_t>(lam.n());
  DerivativeBundle b;
  b.grad.assign(n, 0.0);
  b.hess.assign(n * n, 0.0);
  b.value = bundle_raw(spec.root, lam.span(), b.grad, b.hess);
  return b;
}

double eval_dual(const CurvatureSpec& spec, const Lambda& tau) {
  check_spec_dim(spec, tau.n());
  std::array<double, kFastMaxN> buf{};
  std::vector<double> dyn;
  std::span<double> inv;
  const std::size_t n = static_cast<std::size_t>(tau.n());
  if (tau.n() <= kFastMaxN) {
    inv = std::span<double>(buf.data(), n);
  } else {
    dyn.assign(n, 0.0);
    inv = dyn;
  }
  for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / tau[static_cast<int>(i)];
  return 1.0 / eval_raw(spec.root, inv);
}

DerivativeBundle dual_derivatives(const CurvatureSpec& spec, const Lambda& tau) {
  check_spec_dim(spec, tau.n());
  const int n = tau.n();
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<double> inv(nn);
  for (std::size_t i = 0; i < nn; ++i) inv[i] = 1.0 / tau[static_cast<int>(i)];

  DerivativeBundle of;  // bundle of f at lambda = 1/tau
  of.grad.assign(nn, 0.0);
  of.hess.assign(nn * nn, 0.0);
  of.value = bundle_raw(spec.root, inv, of.grad, of.hess);

  const double fs = 1.0 / of.value;  // f_*(tau)
  DerivativeBundle out;
  out.value = fs;
  out.grad.assign(nn, 0.0);
  out.hess.assign(nn * nn, 0.0);
  for (std::size_t k = 0; k < nn; ++k) {
    out.grad[k] = of.grad[k] * fs * fs * inv[k] * inv[k];
  }
  for (std::size_t k = 0; k < nn; ++k) {
    for (std::size_t l = 0; l < nn; ++l) {
      double v = (2.0 / of.value) * of.grad[k] * of.grad[l] - of.hess[k * nn + l];
      if (k == l) v -= 2.0 * of.grad[k] / inv[k];
      out.hess[k * nn + l] = fs * fs * inv[k] * inv[k] * inv[l] * inv[l] * v;
    }
  }
  return out;
}

double ddF_direction(const CurvatureSpec& spec, const Lambda& lam, std::span<const double> B) {
  check_spec_dim(spec, lam.n());
  const int n = lam.n();
  if (static_cast<int>(B.size()) != n * n) {
    throw DimensionMismatch("direction matrix must be n*n");
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) {
      if (std::abs(B[static_cast<std::size_t>(i * n + k)] -
                   B[static_cast<std::size_t>(k * n + i)]) > 1e-12) {
        throw AsymmetricDirection("direction matrix is not symmetric");
      }
    }
  }
  const DerivativeBundle b = derivatives(spec, lam);
  double out = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      out += b.hess[static_cast<std::size_t>(i * n + k)] * B[static_cast<std::size_t>(i * n + i)] *
             B[static_cast<std::size_t>(k * n + k)];
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) {
      const double bik = B[static_cast<std::size_t>(i * n + k)];
      out += 2.0 * pair_quotient(b, lam.span(), i, k) * bik * bik;
    }
  }
  return out;
}

LemmaResiduals verify_lemma2(const CurvatureSpec& spec, const Lambda& lam) {
  const DerivativeBundle b = derivatives(spec, lam);
  LemmaResiduals res;
  double s = 0.0;
  for (int i = 0; i < lam.n(); ++i) {
    s += b.grad[static_cast<std::size_t>(i)] * lam[i] * lam[i];
  }
  res.first = s - b.value * b.value;
  res.second = std::numeric_limits<double>::infinity();
  for (int k = 0; k < lam.n(); ++k) {
    for (int l = 0; l < k; ++l) {
      const double q = pair_quotient(b, lam.span(), k, l) +
                       b.grad[static_cast<std::size_t>(k)] / lam[l] +
                       b.grad[static_cast<std::size_t>(l)] / lam[k];
      res.second = std::min(res.second, q);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------
bool CertReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CertCheck& c) { return c.pass; });
}

std::string CertReport::to_json() const {
  nlohmann::json j;
  j["spec"] = spec;
  j["n"] = n;
  j["samples"] = samples;
  j["seed"] = seed;
  j["sampled_only"] = sampled_only;
  j["pass"] = all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"worst", c.worst}, {"detail", c.detail}});
  }
  return j.dump(2);
}

std::string CertReport::to_table() const {
  std::ostringstream os;
  os << "function " << spec << "  n=" << n << "  samples=" << samples << "  seed=" << seed << "\n";
  for (const auto& c : checks) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  worst=" << c.worst;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  if (sampled_only) os << "  note: boundary decay asserted by sampling only\n";
  return os.str();
}

CertReport check_condition1(const CurvatureSpec& spec, int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw ValidationError("sample_count must be >= 1");
  const int n = spec.n;
  const std::size_t nn = static_cast<std::size_t>(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uexp(-3.0, 3.0);

  CertReport rep;
  rep.spec = spec.describe();
  rep.n = n;
  rep.samples = sample_count;
  rep.seed = seed;
  rep.sampled_only =
      spec.root.family == Family::elem_sym_root && spec.root.k < n;

  double worst_grad = std::numeric_limits<double>::infinity();
  double worst_hom = 0.0;
  double worst_sym = 0.0;
  double worst_eig = -std::numeric_limits<double>::infinity();
  int decay_violations = 0;

  std::vector<double> sample(nn);
  Eigen::MatrixXd H(n, n);
  const double ks[] = {0.5, 2.0, 10.0};

  for (int s = 0; s < sample_count; ++s) {
    for (std::size_t i = 0; i < nn; ++i) sample[i] = std::pow(10.0, uexp(rng));
    const Lambda lam(sample);

    const DerivativeBundle b = derivatives(spec, lam);
    for (std::size_t i = 0; i < nn; ++i) worst_grad = std::min(worst_grad, b.grad[i]);

    for (double k : ks) {
      std::vector<double> scaled(nn);
      for (std::size_t i = 0; i < nn; ++i) scaled[i] = k * lam[static_cast<int>(i)];
      const double fk = eval_f(spec, Lambda(scaled));
      worst_hom = std::max(worst_hom, std::abs(fk - k * b.value) / (k * b.value));
    }

    {
      std::vector<double> shuffled(sample);
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      worst_sym = std::max(worst_sym, std::abs(eval_f(spec, Lambda(shuffled)) - b.value));
    }

    {
      const DerivativeBundle d = dual_derivatives(spec, lam);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) H(i, j) = d.hess[static_cast<std::size_t>(i * n + j)];
      }
      if (n == 1) {
        worst_eig = std::max(worst_eig, H(0, 0));
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
        worst_eig = std::max(worst_eig, eig.eigenvalues().maxCoeff());
      }
    }

    // Monotone decay of f_* as the smallest coordinate is pushed toward the
    // cone boundary, the rest of the sample held fixed (scale-normalized).
    {
      std::vector<double> tau(sample);
      const double scale = *std::max_element(tau.begin(), tau.end());
      for (double& v : tau) v /= scale;
      const std::size_t imin =
          static_cast<std::size_t>(std::min_element(tau.begin(), tau.end()) - tau.begin());
      double prev = std::numeric_limits<double>::infinity();
      for (int k = 2; k <= 12; ++k) {
        tau[imin] = std::pow(10.0, -k);
        const double v = eval_dual(spec, Lambda(tau));
        if (!(v < prev)) ++decay_violations;
        prev = v;
      }
    }
  }

  // Deterministic reference path (1e-k, 1, ..., 1): the slowest admissible
  // decay direction after scale normalization.
  double decay_first = 0.0;
  double decay_final = 0.0;
  {
    std::vector<double> tau(nn, 1.0);
    for (int k = 2; k <= 12; ++k) {
      tau[0] = std::pow(10.0, -k);
      const double v = eval_dual(spec, Lambda(tau));
      if (k == 2) decay_first = v;
      decay_final = v;
    }
  }

  const double norm_err = std::abs(eval_f(spec, Lambda(std::vector<double>(nn, 1.0))) - 1.0);

  rep.checks.push_back({"monotone_gradient", worst_grad > 0.0, worst_grad, "min df/dlambda_i over samples"});
  rep.checks.push_back({"homogeneous_degree_one", worst_hom <= 1e-12, worst_hom,
                        "max |f(k*lam) - k*f(lam)| / (k*f(lam)), k in {0.5, 2, 10}"});
  rep.checks.push_back({"normalized_at_one", norm_err <= 1e-13, norm_err, "|f(1,...,1) - 1|"});
  rep.checks.push_back({"permutation_symmetric", worst_sym == 0.0, worst_sym, "max |f(P lam) - f(lam)|"});
  rep.checks.push_back({"dual_hessian_nsd", worst_eig <= 1e-8, worst_eig,
                        "max eigenvalue of the dual Hessian over samples"});
  {
    std::ostringstream d;
    d << "violations=" << decay_violations << " ref_path 1e-2->" << decay_first << " 1e-12->"
      << decay_final;
    const bool pass = decay_violations == 0 && decay_final <= 0.1 * decay_first;
    rep.checks.push_back({"dual_boundary_decay", pass, decay_final, d.str()});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fast path
// ---------------------------------------------------------------------------
double eval_f_fast(const FamilyNode& node, std::span<const double> lam) {
  return fast_value_grad(node, lam, {});
}

double grad_f_fast(const FamilyNode& node, std::span<const double> lam, std::span<double> grad) {
  return fast_value_grad(node, lam, grad);
}

}  // namespace curvflow::symfun

namespace curvflow {

const char* err_name(ErrCode c) {
  switch (c) {
    case ErrCode::ok: return "ok";
    case ErrCode::domain: return "domain";
    case ErrCode::dimension_mismatch: return "dimension_mismatch";
    case ErrCode::asymmetric_direction: return "asymmetric_direction";
    case ErrCode::non_convex_state: return "non_convex_state";
    case ErrCode::singular_input: return "singular_input";
    case ErrCode::blow_up: return "blow_up";
    case ErrCode::extinction_reached: return "extinction_reached";
    case ErrCode::outside_cap: return "outside_cap";
    case ErrCode::non_convex_curve: return "non_convex_curve";
    case ErrCode::empty_sublevel: return "empty_sublevel";
    case ErrCode::constraint_violated: return "constraint_violated";
    case ErrCode::not_enclosed_initially: return "not_enclosed_initially";
    case ErrCode::parse: return "parse";
    case ErrCode::validation: return "validation";
    case ErrCode::io: return "io";
    case ErrCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace curvflow
