#pragma once

// Shared numerical kernels: special functions, Gauss-Legendre quadrature with
// adaptive panel refinement, and a dense complex matrix exponential.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fockcs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Raised when an iterative numerical procedure fails to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerances shared by the numerical kernels.
struct NumericsConfig {
  double series_tail = 1e-14;
  double quadrature_target = 1e-10;
  int max_refinement_depth = 12;
  int quadrature_order = 20;
};

/// exp(i a b), folding the rounding error of the product a*b back into the
/// phase. Large level phases (alpha e_n ~ 1e4) otherwise lose ~1e-12.
inline cplx unit_phase(double a, double b) {
  const double p = a * b;
  const double err = std::fma(a, b, -p);
  return std::polar(1.0, p) * cplx{std::cos(err), std::sin(err)};
}

// ---------------------------------------------------------------------------
// Special functions

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return std::lgamma(x);
}

inline double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

namespace detail {

// Ascending series sum_k (x/2)^{2k+nu} / (k! (k+nu)!), generic in the scalar so
// that the complex-argument closed forms reuse the same summation.
template <class T>
T bessel_i_series(int order, T x, double tail_tol) {
  const T half = x / 2.0;
  const T q = half * half;
  T term = std::pow(half, order) / std::exp(std::lgamma(order + 1.0));
  T sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    // Once k exceeds |q| the remaining terms shrink geometrically with ratio
    // at most |q|/((k+1)(k+1+order)), which bounds the tail.
    const double ratio = std::abs(q) / (static_cast<double>(k + 1) * (k + 1 + order));
    if (ratio < 0.5 && std::abs(term) * ratio / (1.0 - ratio) <= tail_tol * std::abs(sum)) {
      return sum;
    }
  }
  throw ConvergenceError("bessel_i: series did not converge");
}

}  // namespace detail

/// Modified Bessel function of the first kind I_order(x) for integer order.
inline double bessel_i(int order, double x, double tail_tol = 1e-16) {
  if (order < 0) throw std::domain_error("bessel_i: negative order");
  if (x < 0.0) throw std::domain_error("bessel_i: negative argument");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  return detail::bessel_i_series<double>(order, x, tail_tol);
}

/// Complex-argument I_order(w), evaluated by the same ascending series.
inline cplx bessel_i(int order, cplx w, double tail_tol = 1e-16) {
  if (order < 0) throw std::domain_error("bessel_i: negative order");
  if (w == cplx{0.0, 0.0}) return order == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  return detail::bessel_i_series<cplx>(order, w, tail_tol);
}

// ---------------------------------------------------------------------------
// Quadrature

/// A fixed quadrature rule on [lo, hi]. When half_line is set the rule lives
/// on t in [0, 1) and is applied through x = t / (1 - t).
struct QuadratureRule {
  double lo = 0.0;
  double hi = 1.0;
  bool half_line = false;
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
};

/// Gauss-Legendre nodes and weights on [lo, hi] via Newton iteration on P_order.
inline QuadratureRule gauss_legendre(int order, double lo = 0.0, double hi = 1.0) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("gauss_legendre: empty interval");
  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
    }
    dp = order * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Root x_i is the i-th largest; store in ascending order.
    rule.nodes[i] = mid - half * x;
    rule.nodes[order - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[order - 1 - i] = half * w;
  }
  return rule;
}

/// Half-line rule: Gauss-Legendre on t in [0,1) composed with x = t/(1-t).
inline QuadratureRule half_line_rule(int order) {
  QuadratureRule rule = gauss_legendre(order, 0.0, 1.0);
  rule.half_line = true;
  rule.hi = std::numeric_limits<double>::infinity();
  return rule;
}

/// Applies a fixed rule to f.
inline double integrate(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    if (rule.half_line) {
      const double s = 1.0 - t;
      sum += rule.weights[i] * f(t / s) / (s * s);
    } else {
      sum += rule.weights[i] * f(t);
    }
  }
  return sum;
}

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int max_depth = 0;
  int panels = 0;
  bool converged = false;
};

namespace detail {

inline double gl_panel(const std::function<double(double)>& g, const QuadratureRule& ref,
                       double a, double b) {
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    sum += ref.weights[i] * g(a + half * (ref.nodes[i] + 1.0));
  }
  return half * sum;
}

inline void adaptive_panel(const std::function<double(double)>& g, const QuadratureRule& ref,
                           double a, double b, double whole, double abs_tol, double rel_tol,
                           int depth, int max_depth, IntegrationResult& out) {
  const double m = 0.5 * (a + b);
  const double left = gl_panel(g, ref, a, m);
  const double right = gl_panel(g, ref, m, b);
  const double diff = std::abs(left + right - whole);
  out.max_depth = std::max(out.max_depth, depth);
  if (diff <= std::max(abs_tol, rel_tol * std::abs(left + right)) || depth >= max_depth) {
    if (diff > std::max(abs_tol, rel_tol * std::abs(left + right))) out.converged = false;
    out.value += left + right;
    out.error_estimate += diff;
    out.panels += 2;
    return;
  }
  adaptive_panel(g, ref, a, m, left, abs_tol, rel_tol, depth + 1, max_depth, out);
  adaptive_panel(g, ref, m, b, right, abs_tol, rel_tol, depth + 1, max_depth, out);
}

}  // namespace detail

/// Adaptive Gauss-Legendre integration of f over [lo, hi]; hi = +inf selects the
/// x = t/(1-t) map. Panels are bisected until the panel estimate and the sum of
/// its halves agree to the relative target. The result carries a converged flag
/// rather than silently returning an unrefined value.
inline IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                            double hi, const NumericsConfig& cfg = {}) {
  const QuadratureRule ref = gauss_legendre(cfg.quadrature_order, -1.0, 1.0);
  std::function<double(double)> g = f;
  double a = lo, b = hi;
  if (std::isinf(hi)) {
    if (lo != 0.0) throw std::invalid_argument("integrate_adaptive: half-line must start at 0");
    g = [&f](double t) {
      const double s = 1.0 - t;
      return f(t / s) / (s * s);
    };
    a = 0.0;
    b = 1.0;
  }
  IntegrationResult out;
  out.converged = true;
  const double whole = detail::gl_panel(g, ref, a, b);
  // Absolute floor relative to the coarse estimate keeps the recursion finite
  // for integrals that are genuinely zero.
  const double abs_tol = cfg.quadrature_target * 1e-3 * std::max(std::abs(whole), 1e-300);
  detail::adaptive_panel(g, ref, a, b, whole, abs_tol, cfg.quadrature_target * 0.1, 1,
                         cfg.max_refinement_depth, out);
  return out;
}

/// Throwing variant for callers that need a converged value.
inline double integrate_or_throw(const std::function<double(double)>& f, double lo, double hi,
                                 const NumericsConfig& cfg = {}) {
  const IntegrationResult r = integrate_adaptive(f, lo, hi, cfg);
  if (!r.converged) {
    throw ConvergenceError("integrate: no convergence after " +
                           std::to_string(cfg.max_refinement_depth) + " refinements");
  }
  return r.value;
}

// ---------------------------------------------------------------------------
// Matrix exponential

inline bool is_diagonal(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != cplx{0.0, 0.0}) return false;
    }
  }
  return true;
}

/// exp(m) by scaling and squaring around a degree-13 Pade approximant
/// (Higham 2005 coefficients). Diagonal inputs are exponentiated entrywise.
inline CMatrix matrix_exp(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exp: matrix must be square");
  if (!m.allFinite()) throw std::domain_error("matrix_exp: non-finite entries");
  const Eigen::Index n = m.rows();
  if (is_diagonal(m)) {
    CMatrix out = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = std::exp(m(i, i));
    return out;
  }
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  if (s > 1000) throw std::overflow_error("matrix_exp: norm too large");
  const CMatrix a = m / std::ldexp(1.0, s);
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                          b[3] * a2 + b[1] * id;
  const CMatrix u = a * u_inner;
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                    b[2] * a2 + b[0] * id;
  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  if (!r.allFinite()) throw std::overflow_error("matrix_exp: overflow during squaring");
  return r;
}

}  // namespace fockcs
