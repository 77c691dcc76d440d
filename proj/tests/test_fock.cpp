#include <cmath>

#include <gtest/gtest.h>

#include "qpinem/errors.hpp"
#include "qpinem/fock.hpp"

using namespace qpinem;

TEST(Fock, CoherentMeanFour) {
  PhotonStatistics s = coherent_statistics(4.0);
  EXPECT_NEAR(s.p[0], std::exp(-4.0), 1e-15);
  EXPECT_NEAR(mean_photon_number(s), 4.0, 1e-9);
  EXPECT_NEAR(g2(s), 1.0, 1e-9);
  EXPECT_LE(s.tail_mass, kDefaultTailTol);
}

TEST(Fock, ThermalMeanOne) {
  PhotonStatistics s = thermal_statistics(1.0);
  EXPECT_NEAR(s.p[0], 0.5, 1e-15);
  EXPECT_NEAR(s.p[3], 1.0 / 16.0, 1e-15);
  const double n2 = static_cast<double>(s.n_max()) * s.n_max();
  EXPECT_NEAR(g2(s), 2.0, 2.0 * 10.0 * kDefaultTailTol * n2);
  EXPECT_LE(s.tail_mass, kDefaultTailTol);
  EXPECT_NEAR(s.total() + s.tail_mass, 1.0, 1e-14);
}

TEST(Fock, ThermalHigherOrderCoherence) {
  PhotonStatistics s = thermal_statistics(3.0, {}, 1e-12);
  for (int m = 1; m <= 4; ++m) EXPECT_NEAR(g_n(s, m), std::tgamma(m + 1.0), 1e-6 * std::tgamma(m + 1.0)) << m;
}

TEST(Fock, FockState) {
  PhotonStatistics s = fock_statistics(5, 10);
  EXPECT_EQ(s.p[5], 1.0);
  EXPECT_NEAR(g2(s), 1.0 - 1.0 / 5.0, 1e-15);
  EXPECT_THROW(fock_statistics(5, 3), TruncationError);
}

TEST(Fock, VacuumG2Undefined) {
  PhotonStatistics s = coherent_statistics(0.0);
  EXPECT_THROW(g2(s), UndefinedError);
}

TEST(Fock, TruncationErrorCarriesRequirement) {
  try {
    coherent_statistics(50.0, 55);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    PhotonStatistics ok = coherent_statistics(50.0, e.required_n_max());
    EXPECT_LE(ok.tail_mass, kDefaultTailTol);
    EXPECT_THROW(coherent_statistics(50.0, e.required_n_max() - 1), TruncationError);
  }
  EXPECT_THROW(thermal_statistics(10.0, 20), TruncationError);
}

TEST(Fock, ThermalDefaultCutoffIsTight) {
  for (double nb : {0.5, 1.0, 100.0, 1e4}) {
    int N = default_n_max_thermal(nb, 1e-8);
    EXPECT_LE(std::pow(nb / (nb + 1.0), N + 1.0), 1e-8);
    EXPECT_GT(std::pow(nb / (nb + 1.0), N), 1e-8);
  }
}

TEST(Fock, CoherentStateMatrix) {
  PhotonState st = coherent_state(cplx(1.0, 1.0));
  EXPECT_FALSE(st.is_diagonal());
  EXPECT_NEAR(st.trace() + st.tail_mass(), 1.0, 1e-12);
  // pure: tr rho^2 = tr rho^2 of the truncated vector
  double pur = (st.rho() * st.rho()).trace().real();
  EXPECT_NEAR(pur, st.trace() * st.trace(), 1e-12);
  // phase of rho(0,1) is -arg(alpha) ... rho(n,m) = a_n a_m^*
  EXPECT_NEAR(std::arg(st.rho()(1, 0)), M_PI / 4, 1e-12);
}

TEST(Fock, StateValidation) {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2) * 0.5;
  bad(0, 1) = 0.1;
  EXPECT_THROW(PhotonState{bad}, ValidationError);
  Eigen::MatrixXcd notrace = Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_THROW(PhotonState{notrace}, ValidationError);
}

TEST(Fock, Padding) {
  PhotonState st = thermal_state(1.0);
  PhotonState big = st.padded(st.n_max() + 5);
  EXPECT_EQ(big.dim(), st.dim() + 5);
  EXPECT_NEAR(big.trace(), st.trace(), 1e-15);
}
