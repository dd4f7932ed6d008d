#pragma once

// Dense realizations on |0>..|N> of the deformed ladder operators, the
// Hamiltonians, the evolution operator S(alpha), the canonically conjugate B
// operators, the displacement-type exponentials and the interpolation map T.
//
// Truncation: A^dagger has no image for |N> -> |N+1>, so operator identities
// hold on the interior block 0..N-1 only. Residual helpers report the interior
// and the boundary row/column separately.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockcs/numerics.hpp"
#include "fockcs/spectra.hpp"
#include "fockcs/states.hpp"

namespace fockcs {

struct TruncatedOperator {
  CMatrix entries;
  int cutoff = 0;
  std::string tag;
  /// Descriptor of the model the operator was built from; empty for
  /// model-independent operators such as n or the identity.
  std::string model;
  /// alpha sector for alpha-dependent operators.
  std::optional<double> alpha;
  /// Authoritative log-diagonal for diagonal operators whose entries may overflow.
  std::optional<std::vector<double>> log_diagonal;

  Eigen::Index dim() const { return entries.rows(); }
};

enum class Ladder { A, A_dag, dualA, dualA_dag };
enum class Conjugate { B, B_dag, dualB, dualB_dag };
enum class Displacement { D, dualD, V, dualV };

inline std::string to_string(Ladder w) {
  switch (w) {
    case Ladder::A: return "A";
    case Ladder::A_dag: return "Adag";
    case Ladder::dualA: return "dualA";
    case Ladder::dualA_dag: return "dualAdag";
  }
  return "?";
}
inline std::string to_string(Conjugate w) {
  switch (w) {
    case Conjugate::B: return "B";
    case Conjugate::B_dag: return "Bdag";
    case Conjugate::dualB: return "dualB";
    case Conjugate::dualB_dag: return "dualBdag";
  }
  return "?";
}
inline std::string to_string(Displacement w) {
  switch (w) {
    case Displacement::D: return "D";
    case Displacement::dualD: return "dualD";
    case Displacement::V: return "V";
    case Displacement::dualV: return "dualV";
  }
  return "?";
}

namespace detail {

inline void check_cutoff(const SpectrumModel& model, int N) {
  if (N < 1) throw std::out_of_range("operator cutoff must be >= 1");
  check_index(model, N);
}

inline std::vector<double> levels(const SpectrumModel& model, int N, bool dual) {
  std::vector<double> l(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) l[static_cast<std::size_t>(n)] = level(model, n, dual);
  return l;
}

// Superdiagonal operator |n> -> amp(n) |n-1>.
template <class Amp>
CMatrix lowering(int N, Amp amp) {
  CMatrix m = CMatrix::Zero(N + 1, N + 1);
  for (int n = 1; n <= N; ++n) m(n - 1, n) = amp(n);
  return m;
}

}  // namespace detail

/// A|n> = sqrt(e_n) exp(i alpha (e_n - e_{n-1})) |n-1>; dual variants use eps_n.
/// Adjoints are exact conjugate transposes.
inline TruncatedOperator ladder(const SpectrumModel& model, double alpha, int N, Ladder which) {
  detail::check_cutoff(model, N);
  const bool dual = which == Ladder::dualA || which == Ladder::dualA_dag;
  const auto l = detail::levels(model, N, dual);
  CMatrix a = detail::lowering(N, [&](int n) {
    const auto i = static_cast<std::size_t>(n);
    return std::sqrt(l[i]) * unit_phase(alpha, l[i] - l[i - 1]);
  });
  const bool dag = which == Ladder::A_dag || which == Ladder::dualA_dag;
  return {dag ? CMatrix(a.adjoint()) : a, N, to_string(which), model.descriptor(), alpha, {}};
}

/// omega diag(e_n) (or omega diag(eps_n)).
inline TruncatedOperator hamiltonian(const SpectrumModel& model, int N, bool dual = false) {
  detail::check_cutoff(model, N);
  const auto l = detail::levels(model, N, dual);
  CMatrix h = CMatrix::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) h(n, n) = model.omega() * l[static_cast<std::size_t>(n)];
  return {h, N, dual ? "dualH" : "H", model.descriptor(), std::nullopt, {}};
}

inline TruncatedOperator number_operator(int N) {
  CMatrix m = CMatrix::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) m(n, n) = static_cast<double>(n);
  return {m, N, "n", "", std::nullopt, {}};
}

inline TruncatedOperator identity_operator(int N) {
  return {CMatrix::Identity(N + 1, N + 1), N, "I", "", std::nullopt, {}};
}

/// S(alpha) = exp(-i (alpha/omega) H) = diag(exp(-i alpha e_n)).
inline TruncatedOperator evolution(const SpectrumModel& model, double alpha, int N,
                                   bool dual = false) {
  detail::check_cutoff(model, N);
  const auto l = detail::levels(model, N, dual);
  CMatrix s = CMatrix::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) s(n, n) = unit_phase(-alpha, l[static_cast<std::size_t>(n)]);
  return {s, N, dual ? "dualS" : "S", model.descriptor(), alpha, {}};
}

/// B = a f(-alpha, n)^{-1}: B|n> = (n / sqrt(e_n)) exp(i alpha (e_n - e_{n-1})) |n-1>.
inline TruncatedOperator conjugate_b(const SpectrumModel& model, double alpha, int N,
                                     Conjugate which) {
  detail::check_cutoff(model, N);
  const bool dual = which == Conjugate::dualB || which == Conjugate::dualB_dag;
  const auto l = detail::levels(model, N, dual);
  for (int n = 1; n <= N; ++n) {
    if (!(l[static_cast<std::size_t>(n)] > 0.0)) {
      throw std::domain_error("conjugate_b: vanishing level at n=" + std::to_string(n));
    }
  }
  CMatrix b = detail::lowering(N, [&](int n) {
    const auto i = static_cast<std::size_t>(n);
    return (n / std::sqrt(l[i])) * unit_phase(alpha, l[i] - l[i - 1]);
  });
  const bool dag = which == Conjugate::B_dag || which == Conjugate::dualB_dag;
  return {dag ? CMatrix(b.adjoint()) : b, N, to_string(which), model.descriptor(), alpha, {}};
}

/// Spectrum-weighted ladder without phase: a|n> = sqrt(e_n) |n-1>.
inline TruncatedOperator check_a(const SpectrumModel& model, int N, bool dag, bool dual = false) {
  detail::check_cutoff(model, N);
  const auto l = detail::levels(model, N, dual);
  CMatrix a = detail::lowering(N, [&](int n) { return cplx{std::sqrt(l[static_cast<std::size_t>(n)]), 0.0}; });
  return {dag ? CMatrix(a.adjoint()) : a, N, dag ? "check_a_dag" : "check_a", model.descriptor(),
          std::nullopt, {}};
}

struct DisplacementConfig {
  int margin = 15;
  /// Largest admissible relative mass of exp(G)|0> beyond the cropped cutoff.
  double leakage_tol = 1e-10;
};

/// Displacement-type exponentials, cropped to N after exponentiating at N + margin:
///   D  = exp(z B^dag - z* A)        dualD = exp(z B~^dag - z* A~)
///   V  = exp(z A^dag - z* B)        dualV = exp(z A~^dag - z* B~)
/// Throws ConvergenceError when the vacuum column leaks past N.
inline TruncatedOperator displacement(const SpectrumModel& model, cplx z, double alpha, int N,
                                      Displacement variant, const DisplacementConfig& cfg = {}) {
  detail::check_cutoff(model, N);
  int big = N + cfg.margin;
  if (model.finite()) big = std::min(big, model.max_index());
  const bool dual = variant == Displacement::dualD || variant == Displacement::dualV;
  const Ladder lo = dual ? Ladder::dualA : Ladder::A;
  const Conjugate bo = dual ? Conjugate::dualB : Conjugate::B;
  const CMatrix a = ladder(model, alpha, big, lo).entries;
  const CMatrix b = conjugate_b(model, alpha, big, bo).entries;
  CMatrix gen;
  if (variant == Displacement::D || variant == Displacement::dualD) {
    gen = z * b.adjoint() - std::conj(z) * a;
  } else {
    gen = z * a.adjoint() - std::conj(z) * b;
  }
  const CMatrix full = matrix_exp(gen);
  const CVector vac = full.col(0);
  const double total = vac.squaredNorm();
  const double outside = total - vac.head(N + 1).squaredNorm();
  if (outside > cfg.leakage_tol * total) {
    throw ConvergenceError("displacement: vacuum column leaks " + std::to_string(outside / total) +
                           " of its mass past N=" + std::to_string(N) + "; try N >= " +
                           std::to_string(2 * N));
  }
  return {full.topLeftCorner(N + 1, N + 1), N, to_string(variant), model.descriptor(), alpha, {}};
}

/// Diagonal T = sqrt([e_n]! / [eps_n]!) held in log form.
inline TruncatedOperator interpolator(const SpectrumModel& model, int N) {
  detail::check_cutoff(model, N);
  const MomentTable t = moment_table(model, N);
  std::vector<double> logd(static_cast<std::size_t>(N) + 1);
  CMatrix m = CMatrix::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n);
    logd[i] = 0.5 * (t.log_rho[i] - t.log_mu[i]);
    m(n, n) = std::exp(logd[i]);
  }
  return {m, N, "T", model.descriptor(), std::nullopt, logd};
}

/// Applies a diagonal log-form operator to a log-form vector.
inline LogAmplitudes apply_log(const TruncatedOperator& op, const LogAmplitudes& v) {
  if (!op.log_diagonal) throw std::invalid_argument("apply_log: operator has no log diagonal");
  if (op.log_diagonal->size() != v.size()) throw std::invalid_argument("apply_log: shape mismatch");
  LogAmplitudes out = v;
  for (std::size_t n = 0; n < v.size(); ++n) out.log_modulus[n] += (*op.log_diagonal)[n];
  return out;
}

inline void check_compatible(const TruncatedOperator& a, const TruncatedOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator shape mismatch");
  if (!a.model.empty() && !b.model.empty() && a.model != b.model) {
    throw std::invalid_argument("operator model mismatch (" + a.model + " vs " + b.model + ")");
  }
}

inline TruncatedOperator product(const TruncatedOperator& a, const TruncatedOperator& b) {
  check_compatible(a, b);
  return {a.entries * b.entries, a.cutoff, a.tag + "*" + b.tag,
          a.model.empty() ? b.model : a.model, a.alpha ? a.alpha : b.alpha, {}};
}

inline TruncatedOperator adjoint(const TruncatedOperator& a) {
  TruncatedOperator out = a;
  out.entries = a.entries.adjoint();
  out.tag = a.tag + "^dag";
  out.log_diagonal.reset();
  return out;
}

/// [a, b] = ab - ba. Row/column N are truncation-affected.
inline TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
  check_compatible(a, b);
  return {a.entries * b.entries - b.entries * a.entries, a.cutoff,
          "[" + a.tag + "," + b.tag + "]", a.model.empty() ? b.model : a.model,
          a.alpha ? a.alpha : b.alpha, {}};
}

/// Heisenberg picture U^dag op U with U = exp(-i H t).
inline TruncatedOperator heisenberg(const TruncatedOperator& op, const SpectrumModel& model,
                                    double t, bool dual = false) {
  const TruncatedOperator u = evolution(model, model.omega() * t, op.cutoff, dual);
  TruncatedOperator out = op;
  out.entries = u.entries.adjoint() * op.entries * u.entries;
  out.tag = op.tag + "(t)";
  return out;
}

struct AppliedVector {
  CVector amplitudes;
  int cutoff = 0;
  /// Estimate of the contamination from the truncated basis: operator weight
  /// leaving the last level plus the discarded tail of the input state.
  double boundary_estimate = 0.0;
};

inline AppliedVector apply(const TruncatedOperator& op, const FockVector& s) {
  if (op.dim() != s.amplitudes.size()) throw std::invalid_argument("apply: shape mismatch");
  if (!op.model.empty() && op.model != s.label.model) {
    throw std::invalid_argument("apply: model mismatch (" + op.model + " vs " + s.label.model +
                                ")");
  }
  AppliedVector out;
  out.amplitudes = op.entries * s.amplitudes;
  out.cutoff = s.cutoff;
  const double opnorm = op.entries.cwiseAbs().maxCoeff();
  out.boundary_estimate = opnorm * (std::abs(s.amplitudes(s.cutoff)) + std::sqrt(s.tail_bound));
  return out;
}

/// Max-norm residual of X - ref, relative to max|ref| when ref is nonzero,
/// split into the interior block 0..N-1 and the boundary row/column N.
struct OperatorResidual {
  double interior = 0.0;
  double boundary = 0.0;
  bool relative = true;
};

inline OperatorResidual operator_residual(const CMatrix& x, const CMatrix& ref) {
  if (x.rows() != ref.rows() || x.cols() != ref.cols()) {
    throw std::invalid_argument("operator_residual: shape mismatch");
  }
  const Eigen::Index n = x.rows() - 1;
  const CMatrix diff = x - ref;
  OperatorResidual r;
  double scale = ref.topLeftCorner(n, n).cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) {
    scale = 1.0;
    r.relative = false;
  }
  r.interior = diff.topLeftCorner(n, n).cwiseAbs().maxCoeff() / scale;
  r.boundary = std::max(diff.row(n).cwiseAbs().maxCoeff(), diff.col(n).cwiseAbs().maxCoeff()) / scale;
  return r;
}

/// Builds |n, alpha> = (A~^dag)^n e^{i alpha eps_n} |0> / sqrt(m(n)) with both
/// candidate denominators m = [e_n]! and m = [eps_n]!, returning the largest
/// deviation from |n> over n = 0..N for each.
struct FockBasisCheck {
  double residual_rho = 0.0;
  double residual_mu = 0.0;
};

inline FockBasisCheck fock_basis_check(const SpectrumModel& model, double alpha, int N) {
  const CMatrix adag = ladder(model, alpha, N, Ladder::dualA_dag).entries;
  const MomentTable t = moment_table(model, N);
  FockBasisCheck out;
  CVector v = CVector::Zero(N + 1);
  v(0) = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) v = adag * v;
    const auto i = static_cast<std::size_t>(n);
    const cplx phase = unit_phase(alpha, t.eps[i]);
    CVector target = CVector::Zero(N + 1);
    target(n) = 1.0;
    const CVector by_rho = v * phase / std::exp(0.5 * t.log_rho[i]);
    const CVector by_mu = v * phase / std::exp(0.5 * t.log_mu[i]);
    out.residual_rho = std::max(out.residual_rho, (by_rho - target).norm());
    out.residual_mu = std::max(out.residual_mu, (by_mu - target).norm());
  }
  return out;
}

}  // namespace fockcs
