#include <gtest/gtest.h>

#include <cmath>

#include "fockcs/operators.hpp"

using namespace fockcs;

namespace {

double interior_max(const CMatrix& m) {
  const Eigen::Index n = m.rows() - 1;
  return m.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Operators, HarmonicLadderIsStandard) {
  const auto A = ladder(SpectrumModel::harmonic(), 0.0, 8, Ladder::A);
  for (int r = 0; r <= 8; ++r) {
    for (int c = 0; c <= 8; ++c) {
      const double expect = c == r + 1 ? std::sqrt(static_cast<double>(c)) : 0.0;
      EXPECT_NEAR(std::abs(A.entries(r, c) - expect), 0.0, 1e-15);
    }
  }
  EXPECT_EQ(A.alpha.value(), 0.0);
}

TEST(Operators, AdjointsAreExactConjugateTransposes) {
  const auto m = SpectrumModel::poschl_teller(3.0);
  for (bool dual : {false, true}) {
    const auto A = ladder(m, 1.3, 12, dual ? Ladder::dualA : Ladder::A);
    const auto Ad = ladder(m, 1.3, 12, dual ? Ladder::dualA_dag : Ladder::A_dag);
    EXPECT_TRUE(Ad.entries == A.entries.adjoint());
  }
}

TEST(Operators, DualLadderEntry) {
  const auto A = ladder(SpectrumModel::infinite_well(), 0.0, 5, Ladder::dualA);
  EXPECT_NEAR(std::abs(A.entries(1, 2)), std::sqrt(0.5), 1e-15);
}

TEST(Operators, HamiltonianFactorization) {
  const auto pt = SpectrumModel::poschl_teller(3.0);
  const auto Hd = hamiltonian(pt, 6, true);
  const double eps[] = {0.0, 0.25, 0.4, 0.5};
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(Hd.entries(n, n).real(), eps[n], 1e-15);

  const auto iw = SpectrumModel::infinite_well();
  const int N = 30;
  const CMatrix A = ladder(iw, 0.8, N, Ladder::A).entries;
  const CMatrix H = hamiltonian(iw, N).entries;
  EXPECT_LT(interior_max(A.adjoint() * A - H), 1e-12);
  EXPECT_EQ(hamiltonian(SpectrumModel::harmonic(), 4).entries(3, 3), cplx(3.0, 0.0));
}

TEST(Operators, EvolutionGroupLaw) {
  const auto m = SpectrumModel::infinite_well();
  const CMatrix s1 = evolution(m, 0.5, 40).entries;
  const CMatrix s2 = evolution(m, 2.25, 40).entries;
  const CMatrix s12 = evolution(m, 2.75, 40).entries;
  EXPECT_LT((s1 * s2 - s12).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(evolution(m, 0.0, 10).entries == CMatrix::Identity(11, 11));
  EXPECT_LT((s1 * s1.adjoint() - CMatrix::Identity(41, 41)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Operators, ConjugateB) {
  const CMatrix b = conjugate_b(SpectrumModel::harmonic(), 0.0, 8, Conjugate::B).entries;
  const CMatrix a = ladder(SpectrumModel::harmonic(), 0.0, 8, Ladder::A).entries;
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-15);

  const auto iw = SpectrumModel::infinite_well();
  EXPECT_NEAR(std::abs(conjugate_b(iw, 0.4, 5, Conjugate::B).entries(0, 1)), 1.0 / std::sqrt(3.0), 1e-15);

  for (bool dual : {false, true}) {
    const auto A = ladder(iw, 2.3, 60, dual ? Ladder::dualA : Ladder::A);
    const auto Bd = conjugate_b(iw, 2.3, 60, dual ? Conjugate::dualB_dag : Conjugate::B_dag);
    const auto B = conjugate_b(iw, 2.3, 60, dual ? Conjugate::dualB : Conjugate::B);
    const auto Ad = ladder(iw, 2.3, 60, dual ? Ladder::dualA_dag : Ladder::A_dag);
    const CMatrix I = CMatrix::Identity(61, 61);
    EXPECT_LT(operator_residual(commutator(A, Bd).entries, I).interior, 1e-12);
    EXPECT_LT(operator_residual(commutator(B, Ad).entries, I).interior, 1e-12);
  }
}

TEST(Operators, LadderCommutator) {
  const auto iw = SpectrumModel::infinite_well();
  const auto A = ladder(iw, 0.5, 10, Ladder::A);
  const auto Ad = ladder(iw, 0.5, 10, Ladder::A_dag);
  const TruncatedOperator c = commutator(A, Ad);
  EXPECT_NEAR(c.entries(3, 3).real(), 9.0, 1e-12);
  // Boundary row is truncation-affected: [A, A^dag]_{NN} = -e_N.
  EXPECT_NEAR(c.entries(10, 10).real(), -120.0, 1e-12);

  const auto h = SpectrumModel::harmonic();
  const TruncatedOperator ch =
      commutator(ladder(h, 0.0, 15, Ladder::A), ladder(h, 0.0, 15, Ladder::A_dag));
  EXPECT_LT(operator_residual(ch.entries, CMatrix::Identity(16, 16)).interior, 1e-14);

  const auto Ad2 = ladder(iw, 1.1, 20, Ladder::dualA);
  const auto n = number_operator(20);
  const TruncatedOperator cn = commutator(Ad2, n);
  EXPECT_LT(operator_residual(cn.entries, Ad2.entries).interior, 1e-13);
  EXPECT_THROW(commutator(A, number_operator(5)), std::invalid_argument);
  EXPECT_THROW(commutator(A, ladder(h, 0.5, 10, Ladder::A)), std::invalid_argument);
}

TEST(Operators, CheckAConjugation) {
  const auto hy = SpectrumModel::hydrogen();
  EXPECT_NEAR(check_a(hy, 5, false).entries(0, 1).real(), std::sqrt(0.75), 1e-15);
  for (const char* spec : {"infinite_well", "hydrogen", "poschl_teller:nu=2.5"}) {
    const auto m = parse_model_spec(spec);
    for (double alpha : {0.7, 2.3}) {
      const CMatrix S = evolution(m, alpha, 60).entries;
      const CMatrix a = check_a(m, 60, false).entries;
      const CMatrix A = ladder(m, alpha, 60, Ladder::A).entries;
      EXPECT_LT((S * a * S.adjoint() - A).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff(), 1e-13)
          << spec << " alpha=" << alpha;
    }
  }
}

TEST(Operators, EigenstateInterior) {
  const auto pt = SpectrumModel::poschl_teller(3.0);
  const cplx z = std::polar(0.7, 0.4);
  const FockVector s = gkcs(pt, z, 0.9);
  const CMatrix A = ladder(pt, 0.9, s.cutoff, Ladder::A).entries;
  const CVector d = A * s.amplitudes - z * s.amplitudes;
  EXPECT_LT(d.head(s.cutoff).norm(), std::max(1e-10, 10.0 * s.tail_bound));
  // Oracle: the amplitude recursion c_{n-1} z = c_n sqrt(e_n) exp(i alpha (e_n - e_{n-1})).
  for (int n = 1; n <= s.cutoff; ++n) {
    const double e = n * (n + 3.0), ep = (n - 1.0) * (n + 2.0);
    const cplx rhs = s[n] * std::sqrt(e) * std::polar(1.0, 0.9 * (e - ep));
    EXPECT_NEAR(std::abs(s[n - 1] * z - rhs), 0.0, 1e-14);
  }
}

TEST(Operators, DisplacementVacuumOrbit) {
  const auto h = SpectrumModel::harmonic();
  EXPECT_LT((displacement(h, cplx{}, 0.0, 10, Displacement::D).entries -
             CMatrix::Identity(11, 11)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((displacement(h, cplx{}, 0.3, 10, Displacement::V).entries -
             CMatrix::Identity(11, 11)).cwiseAbs().maxCoeff(), 1e-15);

  // Canonical coherent state as oracle.
  const cplx z{0.3, 0.0};
  for (Displacement v : {Displacement::D, Displacement::dualD, Displacement::V, Displacement::dualV}) {
    const CMatrix D = displacement(h, z, 0.0, 40, v).entries;
    CVector col = D.col(0);
    col /= col.norm();
    CVector ref(41);
    cplx c = std::exp(-0.045);
    for (int n = 0; n <= 40; ++n) {
      if (n > 0) c *= z / std::sqrt(static_cast<double>(n));
      ref(n) = c;
    }
    EXPECT_GE(std::abs(ref.dot(col)), 1.0 - 1e-8) << to_string(v);
  }

  const auto iw = SpectrumModel::infinite_well();
  const CMatrix D = displacement(iw, z, 0.5, 60, Displacement::D).entries;
  CVector col = D.col(0);
  col /= col.norm();
  const FockVector s = padded(gkcs(iw, z, 0.5), 60);
  EXPECT_GE(std::abs(s.amplitudes.dot(col)), 1.0 - 1e-6);
}

TEST(Operators, DisplacementLeakageIsReported) {
  try {
    (void)displacement(SpectrumModel::harmonic(), {4.0, 0.0}, 0.0, 6, Displacement::D);
    FAIL() << "expected leakage error";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("try N >= 12"), std::string::npos);
  }
}

TEST(Operators, Interpolator) {
  const auto h = SpectrumModel::harmonic();
  EXPECT_LT((interpolator(h, 20).entries - CMatrix::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-12);
  const auto iw = SpectrumModel::infinite_well();
  const TruncatedOperator T = interpolator(iw, 10);
  EXPECT_NEAR(T.entries(2, 2).real(), 12.0, 1e-12);
  ASSERT_TRUE(T.log_diagonal.has_value());

  // Hydrogen ratios overflow in linear form; the log diagonal stays finite.
  const TruncatedOperator Th = interpolator(SpectrumModel::hydrogen(), 200);
  EXPECT_TRUE(std::isfinite((*Th.log_diagonal)[200]));

  // Fixed-t rule, oracle built from explicit level products.
  const int N = 40;
  const double J = 0.4, theta = 1.2, t = 0.5;
  LogAmplitudes v = apply_log(interpolator(iw, N), unnormalized_generalized(iw, J, theta, t, false, N));
  double lrho = 0.0, lmu = 0.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) {
      lrho += std::log(n * (n + 2.0));
      lmu += std::log(n / (n + 2.0));
    }
    const double e = n * (n + 2.0), eps = n / (n + 2.0);
    const cplx lhs = std::polar(std::exp(v.log_modulus[n] + 0.5 * lmu), v.phase[n] - (eps - e) * t);
    const cplx rhs = std::polar(std::exp(0.5 * n * std::log(J)), n * theta - eps * t);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::abs(rhs) + 1e-300) << n;
  }
  EXPECT_THROW(apply_log(ladder(iw, 0.0, N, Ladder::A), v), std::invalid_argument);
}

TEST(Operators, ApplyPlumbing) {
  const auto iw = SpectrumModel::infinite_well();
  const FockVector s = dgkcs(iw, {0.4, 0.2}, 0.3);
  const AppliedVector same = apply(TruncatedOperator{identity_operator(s.cutoff)}, s);
  EXPECT_TRUE(same.amplitudes == s.amplitudes);

  FockVector basis;
  basis.cutoff = 5;
  basis.amplitudes = CVector::Zero(6);
  basis.amplitudes(3) = 1.0;
  const AppliedVector n3 = apply(number_operator(5), basis);
  EXPECT_EQ(n3.amplitudes(3), cplx(3.0, 0.0));

  const FockVector odd = even_odd(iw, {0.5, 0.1}, 0.7, -1);
  const TruncatedOperator A = ladder(iw, 0.7, odd.cutoff, Ladder::dualA);
  const AppliedVector a1 = apply(A, odd);
  const CVector a2 = A.entries * a1.amplitudes;
  const cplx z2 = cplx{0.5, 0.1} * cplx{0.5, 0.1};
  EXPECT_LT((a2 - z2 * odd.amplitudes).head(odd.cutoff - 1).norm(), 1e-10);

  EXPECT_THROW(apply(number_operator(3), s), std::invalid_argument);
  EXPECT_THROW(apply(ladder(SpectrumModel::harmonic(), 0.0, s.cutoff, Ladder::A), s),
               std::invalid_argument);
}

TEST(Operators, HeisenbergPicture) {
  // A(t) = U^dag a U with U = exp(-iHt) annihilates |z, -omega t>.
  const auto iw = SpectrumModel::infinite_well(2.0);
  const double t = 0.35;
  const cplx z{0.9, -0.4};
  const FockVector s = gkcs(iw, z, -iw.omega() * t);
  const TruncatedOperator a = check_a(iw, s.cutoff, false);
  const TruncatedOperator At = heisenberg(a, iw, t);
  const CVector d = At.entries * s.amplitudes - z * s.amplitudes;
  EXPECT_LT(d.head(s.cutoff).norm(), 1e-12);
}

TEST(Operators, FockBasisFromDualLadder) {
  const FockBasisCheck c = fock_basis_check(SpectrumModel::infinite_well(), 0.6, 25);
  EXPECT_LT(c.residual_mu, 1e-12);
  EXPECT_GT(c.residual_rho, 0.5);
}

TEST(Operators, RangeChecks) {
  EXPECT_THROW(ladder(SpectrumModel::morse(4), 0.0, 5, Ladder::A), std::out_of_range);
  EXPECT_THROW(ladder(SpectrumModel::harmonic(), 0.0, 0, Ladder::A), std::out_of_range);
  EXPECT_NO_THROW(ladder(SpectrumModel::morse(4), 0.0, 4, Ladder::A));
}
