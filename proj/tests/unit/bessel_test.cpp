#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ncrw/bessel.hpp"
#include "ncrw/validation/oracles.hpp"

namespace ncrw {
namespace {

TEST(ScaledBessel, KnownValues) {
  EXPECT_NEAR(scaled_bessel_i(1, 2.0), 0.21526928924893765, 1e-15);
  EXPECT_NEAR(std::exp(1.0) * scaled_bessel_i(0, 1.0), 1.2660658777520082, 1e-14);
  EXPECT_NEAR(transition_probability(1.0, 0, 0), 0.46575960759364043, 1e-15);
  EXPECT_EQ(scaled_bessel_i(0, 0.0), 1.0);
  EXPECT_EQ(scaled_bessel_i(3, 0.0), 0.0);
}

TEST(ScaledBessel, MatchesSeriesOracle) {
  for (double t : {0.01, 0.3, 1.0, 4.0, 12.0, 30.0}) {
    for (int n = 0; n <= 40; ++n) {
      const double ref = validation::scaled_bessel_i_series(n, t);
      EXPECT_NEAR(scaled_bessel_i(n, t), ref, 1e-15 + 1e-13 * ref) << "n=" << n << " t=" << t;
    }
  }
}

TEST(ScaledBessel, TableAgreesWithPointwise) {
  const auto table = scaled_bessel_i_table(7.5, 50);
  ASSERT_EQ(table.size(), 51u);
  for (int n = 0; n <= 50; ++n) EXPECT_NEAR(table[n], scaled_bessel_i(n, 7.5), 1e-16);
}

TEST(ScaledBessel, LargeArgumentsStayFinite) {
  for (double t : {1e3, 1e4, 1e5}) {
    for (int n : {0, 10, 1000, 10000}) {
      const double v = scaled_bessel_i(n, t);
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  // Leading asymptotic 1/sqrt(2 pi t).
  EXPECT_NEAR(scaled_bessel_i(0, 1e4) * std::sqrt(2 * std::numbers::pi * 1e4), 1.0, 1e-4);
}

TEST(ScaledBessel, RejectsBadArguments) {
  EXPECT_THROW(scaled_bessel_i(-1, 1.0), std::invalid_argument);
  EXPECT_THROW(scaled_bessel_i(1, -1.0), std::invalid_argument);
}

TEST(SignedBessel, Parity) {
  for (int n = 0; n <= 6; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    EXPECT_DOUBLE_EQ(signed_bessel_i(n, -1.7), sign * signed_bessel_i(n, 1.7));
  }
}

TEST(TransitionProbability, NormalizedAndSymmetric) {
  for (double t : {0.1, 1.0, 5.0, 50.0}) {
    const int r = bessel_tail_radius(t, 1e-18);
    double total = 0.0;
    for (Site y = -r; y <= r; ++y) total += transition_probability(t, 0, y);
    EXPECT_NEAR(total, 1.0, 1e-10) << "t=" << t;
    EXPECT_EQ(transition_probability(t, 3, 7), transition_probability(t, 7, 3));
    EXPECT_EQ(transition_probability(t, 3, 7), transition_probability(t, 0, 4));
  }
}

TEST(TransitionProbability, ChapmanKolmogorov) {
  const std::pair<double, double> cases[] = {{0.5, 0.5}, {1.0, 2.0}};
  for (const auto& [s, t] : cases) {
    for (Site y = -4; y <= 4; ++y) {
      double sum = 0.0;
      for (Site z = -60; z <= 60; ++z) {
        sum += transition_probability(s, 0, z) * transition_probability(t, z, y);
      }
      EXPECT_NEAR(sum, transition_probability(s + t, 0, y), 1e-14);
    }
  }
}

TEST(TransitionProbability, QuadratureRoute) {
  for (double t : {0.5, 2.0, 10.0}) {
    for (Site d = 0; d <= 30; d += 3) {
      EXPECT_NEAR(transition_probability_quadrature(t, 0, d), transition_probability(t, 0, d),
                  1e-13);
    }
  }
  TrapezoidOptions bad;
  bad.min_nodes = 2;
  EXPECT_THROW(transition_probability_quadrature(1.0, 0, 0, bad), std::invalid_argument);
}

TEST(TransitionProbability, PoissonizationOracle) {
  for (double t : {0.5, 5.0}) {
    for (Site d = 0; d <= 20; d += 4) {
      EXPECT_NEAR(validation::poissonized_transition(t, 0, d), transition_probability(t, 0, d),
                  1e-13);
    }
  }
}

TEST(CharacteristicFunction, MatchesFourierSum) {
  const double t = 1.3;
  for (double z : {0.0, 0.4, 1.1, 3.0}) {
    std::complex<double> sum = 0.0;
    for (Site y = -50; y <= 50; ++y) {
      sum += transition_probability(t, 0, y) * std::exp(std::complex<double>(0.0, z * y));
    }
    const auto cf = characteristic_function(t, z);
    EXPECT_NEAR(cf.real(), sum.real(), 1e-14);
    EXPECT_NEAR(cf.imag(), sum.imag(), 1e-14);
  }
}

TEST(TailRadius, BoundsTheNeglectedMass) {
  EXPECT_EQ(bessel_tail_radius(0.0), 0);
  for (double t : {0.5, 3.0, 40.0}) {
    const int r = bessel_tail_radius(t, 1e-12);
    EXPECT_GE(scaled_bessel_i(r, t), 1e-12);
    EXPECT_LT(scaled_bessel_i(r + 1, t), 1e-12);
  }
}

}  // namespace
}  // namespace ncrw
