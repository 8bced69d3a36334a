#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ncrw/bessel.hpp"
#include "ncrw/linalg.hpp"
#include "ncrw/martingale.hpp"

namespace ncrw {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(EsscherWeight, Examples) {
  EXPECT_EQ(esscher_weight(0.0, 1.7, 3.0), 1.0);
  EXPECT_EQ(esscher_weight(0.9, 0.0, 0.0), 1.0);
  EXPECT_NEAR(esscher_weight(1.0, 1.0, 2.0), std::exp(2.0 - (std::cosh(1.0) - 1.0)), 1e-15);
}

TEST(MartingalePolynomials, LowOrders) {
  for (double t : {0.0, 0.5, 2.0}) {
    for (double x : {-2.0, 0.0, 1.5, 3.0}) {
      EXPECT_DOUBLE_EQ(martingale_polynomial(0, t, x), 1.0);
      EXPECT_DOUBLE_EQ(martingale_polynomial(1, t, x), x);
      EXPECT_NEAR(martingale_polynomial(2, t, x), x * x - t, 1e-14);
      EXPECT_NEAR(martingale_polynomial(4, t, x),
                  std::pow(x, 4) - 6 * t * x * x + 3 * t * t - t, 1e-12);
    }
  }
  EXPECT_DOUBLE_EQ(martingale_polynomial(4, 1.0, 0.0), 2.0);
}

TEST(MartingalePolynomials, MonicAndPureAtTimeZero) {
  const auto& m = MartingalePolynomials::standard();
  for (int n = 0; n <= m.max_degree(); ++n) {
    EXPECT_DOUBLE_EQ(m.coefficient(n, n, 0.7), 1.0);
    for (int j = 0; j < n; ++j) EXPECT_EQ(m.coefficient(n, j, 0.0), 0.0);
    EXPECT_NEAR(m(n, 0.0, 1.3), std::pow(1.3, n), 1e-12 * std::pow(1.3, n));
  }
}

TEST(MartingalePolynomials, IntegerCoefficients) {
  const auto& m = MartingalePolynomials::standard();
  const auto c40 = m.coefficient_polynomial(4, 0);
  ASSERT_GE(c40.size(), 3u);
  EXPECT_EQ(c40[0], 0);
  EXPECT_EQ(c40[1], -1);
  EXPECT_EQ(c40[2], 3);
  const auto c42 = m.coefficient_polynomial(4, 2);
  EXPECT_EQ(c42[1], -6);
}

TEST(MartingalePolynomials, RejectsBadDegrees) {
  EXPECT_THROW(MartingalePolynomials(MartingalePolynomials::kMaxSupportedDegree + 1),
               std::invalid_argument);
  EXPECT_THROW(martingale_polynomial(13, 1.0, 0.0), std::out_of_range);
  EXPECT_THROW(martingale_polynomial(-1, 1.0, 0.0), std::out_of_range);
}

TEST(MartingalePolynomials, GeneratingFunction) {
  const MartingalePolynomials m(MartingalePolynomials::kMaxSupportedDegree);
  for (double alpha : {-0.5, -0.25, 0.25, 0.5, 1.0}) {
    for (double t : {0.5, 1.0, 2.0}) {
      for (int x = -3; x <= 3; ++x) {
        double head = 0.0;
        double tail = 0.0;
        double fact = 1.0;
        for (int n = 0; n <= m.max_degree(); ++n) {
          if (n > 0) fact *= n;
          (n <= 12 ? head : tail) += m(n, t, x) * std::pow(alpha, n) / fact;
        }
        const double g = esscher_weight(alpha, t, x);
        // Truncation at degree 12 costs at most the alpha^13..alpha^20 terms
        // (with slack for what lies beyond 20); those terms close the gap.
        EXPECT_LE(std::fabs(head - g), 1.5 * std::fabs(tail) + 1e-14 * g);
        const double scale = std::exp(std::fabs(alpha * x) + t * (std::cosh(alpha) - 1.0));
        EXPECT_NEAR(head + tail, g, (std::fabs(alpha) < 1.0 ? 1e-9 : 1e-6) * scale) << alpha << ' ' << t << ' ' << x;
      }
    }
  }
}

TEST(MartingalePolynomials, MartingaleMean) {
  for (double t : {0.5, 1.0, 2.0}) {
    for (int u = -2; u <= 2; ++u) {
      for (int n = 0; n <= 8; ++n) {
        long double sum = 0.0L;
        for (Site y = u - 80; y <= u + 80; ++y) {
          sum += transition_probability(t, u, y) * martingale_polynomial(n, t, y);
        }
        EXPECT_NEAR(static_cast<double>(sum), std::pow(u, n), 1e-8);
      }
    }
  }
}

TEST(STransform, PolynomialsAndExponentials) {
  for (double t : {0.3, 1.0, 2.5}) {
    for (Site x : {-2, 0, 3}) {
      EXPECT_NEAR(s_transform([](Site) { return 1.0; }, 0, t, x), 1.0, 1e-10);
      EXPECT_NEAR(s_transform([](Site w) { return double(w) * double(w); }, 2, t, x),
                  martingale_polynomial(2, t, x), 1e-10);
      EXPECT_NEAR(s_transform([](Site w) { return std::pow(double(w), 5); }, 5, t, x),
                  martingale_polynomial(5, t, x), 1e-9 * (1 + std::fabs(martingale_polynomial(5, t, x))));
    }
  }
  for (double alpha : {-1.0, -0.4, 0.0, 0.6, 1.0}) {
    for (double t : {0.5, 2.0, 5.0}) {
      const double expected = 1.0 / characteristic_function(t, {0.0, alpha}).real();
      EXPECT_NEAR(s_transform_exponential(alpha, t, 4), expected, 1e-10 * expected);
    }
  }
}

TEST(LagrangeBasis, Examples) {
  const Configuration xi({0, 2});
  EXPECT_EQ(lagrange_basis(xi, 0, 0.0), 1.0);
  EXPECT_EQ(lagrange_basis(xi, 0, 2.0), 0.0);
  EXPECT_EQ(lagrange_basis(xi, 0, 4.0), -1.0);
  EXPECT_THROW(lagrange_basis(xi, 2, 0.0), std::out_of_range);
}

TEST(LagrangeBasis, PartitionOfUnityAndMonomials) {
  const Configuration xi({-3, 0, 1, 5});
  for (double z : {-4.5, 0.3, 2.0, 7.0}) {
    double sum = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      sum += lagrange_basis(xi, k, z);
      const auto c = lagrange_monomial_coefficients(xi, k);
      double horner = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) horner = horner * z + *it;
      EXPECT_NEAR(horner, lagrange_basis(xi, k, z), 1e-12 * (1 + std::fabs(horner)));
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(DiscreteMartingale, InitialCondition) {
  const Configuration xi({-2, 0, 3});
  for (std::size_t k = 0; k < xi.size(); ++k) {
    for (std::size_t j = 0; j < xi.size(); ++j) {
      EXPECT_NEAR(discrete_martingale(xi, k, 0.0, xi[j]), j == k ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(DiscreteMartingale, PolynomialRouteAgrees) {
  const Configuration xi({0, 2});
  const Configuration wide({-3, 0, 1, 4, 6});
  for (const auto* c : {&xi, &wide}) {
    for (double t : {0.5, 1.0, 3.0}) {
      for (Site y = -4; y <= 6; ++y) {
        const auto all = discrete_martingales(*c, t, y);
        for (std::size_t k = 0; k < c->size(); ++k) {
          const double direct = discrete_martingale(*c, k, t, y);
          EXPECT_NEAR(all[k], direct, 1e-13 * (1 + std::fabs(direct)));
          EXPECT_NEAR(discrete_martingale_polynomial(*c, k, t, y), direct,
                      1e-10 * (1 + std::fabs(direct)));
        }
      }
    }
  }
}

TEST(DiscreteMartingale, MeanIsKronecker) {
  const Configuration xi({-1, 0, 2});
  const double t = 1.5;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    for (std::size_t k = 0; k < xi.size(); ++k) {
      long double sum = 0.0L;
      for (Site y = xi[j] - 60; y <= xi[j] + 60; ++y) {
        sum += transition_probability(t, xi[j], y) * discrete_martingale(xi, k, t, y);
      }
      EXPECT_NEAR(static_cast<double>(sum), j == k ? 1.0 : 0.0, 1e-10);
    }
  }
}

TEST(Vandermonde, Examples) {
  const std::vector<double> a{0, 1, 2};
  const std::vector<double> b{0, 0, 5};
  EXPECT_EQ(vandermonde(a), 2.0);
  EXPECT_EQ(vandermonde(b), 0.0);
  EXPECT_EQ(vandermonde(std::vector<double>{}), 1.0);
}

TEST(Vandermonde, MatchesMonomialDeterminant) {
  const std::vector<double> x{-2.5, -1.0, 0.5, 3.0, 4.0};
  const std::size_t n = x.size();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = std::pow(x[i], static_cast<double>(j));
  }
  const double v = vandermonde(x);
  EXPECT_NEAR(determinant(m, n), v, 1e-12 * std::fabs(v));
}

TEST(LatticeBasis, Examples) {
  const LatticeSpec a(2);
  EXPECT_EQ(lattice_basis(a, 3, 6.0), 1.0);
  EXPECT_NEAR(lattice_basis(a, 3, 8.0), 0.0, 1e-16);
  EXPECT_NEAR(lattice_basis(a, 0, 1.0), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(lattice_basis(a, 0, 1e-9), 1.0, 1e-15);
}

TEST(LatticeBasis, LimitOfFiniteWindows) {
  const LatticeSpec a(2);
  for (double z : {1.0, 3.0, -2.5}) {
    double previous = 1e300;
    for (Site half : {10, 20, 40, 80}) {
      const auto xi = Configuration::lattice_window(2, half);
      // Index of site 0 in the window.
      const std::size_t k = static_cast<std::size_t>(half / 2);
      ASSERT_EQ(xi[k], 0);
      const double err = std::fabs(lagrange_basis(xi, k, z) - lattice_basis(a, 0, z));
      EXPECT_LT(err, previous) << "z=" << z << " L=" << half;
      previous = err;
    }
    EXPECT_LT(previous, 0.05);
  }
}

TEST(LatticeMartingale, InitialCondition) {
  for (int spacing : {2, 3}) {
    const LatticeSpec a(spacing);
    for (Site j = -2; j <= 2; ++j) {
      EXPECT_NEAR(lattice_martingale(a, 1, 0.0, spacing * j), j == 1 ? 1.0 : 0.0, 1e-13);
    }
  }
  EXPECT_NEAR(lattice_martingale(LatticeSpec(2), 0, 0.0, 1), 2.0 / kPi, 1e-13);
}

TEST(LatticeMartingale, MeanIsKronecker) {
  const LatticeSpec a(2);
  const double t = 0.8;
  for (Site j : {0, 1}) {
    for (Site k : {-1, 0, 1, 2}) {
      long double sum = 0.0L;
      for (Site y = 2 * j - 40; y <= 2 * j + 40; ++y) {
        sum += transition_probability(t, 2 * j, y) * lattice_martingale(a, k, t, y);
      }
      EXPECT_NEAR(static_cast<double>(sum), j == k ? 1.0 : 0.0, 1e-8);
    }
  }
}

}  // namespace
}  // namespace ncrw
