#include <cmath>
#include <thread>

#include <gtest/gtest.h>

#include "bergman/moments.hpp"
#include "bergman/parallel.hpp"
#include "oracles.hpp"

using namespace bergman;

namespace {
const double kPi2 = oracle::kPi * oracle::kPi;
const double kR = kPaperIntersectionRadius;
}  // namespace

TEST(Moments, BidiskClosedForm) {
  const MomentTable t(unit_bidisk());
  EXPECT_EQ(t.method(), MomentMethod::closed_form);
  EXPECT_NEAR(t(0, 0), kPi2, 1e-13);
  EXPECT_NEAR(t(2, 0), kPi2 / 2.0, 1e-13);
  for (int p = 0; p <= 20; p += 2)
    for (int q = 0; q <= 20; q += 2) EXPECT_NEAR(t(p, q), 4.0 * kPi2 / ((p + 2.0) * (q + 2.0)), 1e-13);
}

TEST(Moments, ScaledBidisk) {
  const MomentTable t(make_shadow(profile::Bidisk{0.5, 2.0}));
  const auto in = oracle::bidisk_member(0.5, 2.0);
  for (int p : {0, 2, 6})
    for (int q : {0, 4, 10}) EXPECT_NEAR(t(p, q) / oracle::moment(in, 2.0, p, q), 1.0, 1e-10);
}

TEST(Moments, BallClosedForm) {
  const MomentTable t(unit_ball());
  EXPECT_EQ(t.method(), MomentMethod::closed_form);
  EXPECT_NEAR(t(0, 0), kPi2 / 2.0, 1e-13);
  const double polar = oracle::integrate(
      [](double rho) { return 2.0 * kPi2 * rho * rho * rho; }, 0.0, 1.0);  // vol(S^3) rho^3 d rho
  EXPECT_NEAR(t(0, 0), polar, 1e-12);
  const auto in = oracle::ball_member(1.0);
  for (int p : {0, 2, 8})
    for (int q : {0, 2, 30}) EXPECT_NEAR(t(p, q) / oracle::moment(in, 1.0, p, q), 1.0, 1e-9);
}

TEST(Moments, QuadratureMatchesClosedForm) {
  for (const auto& s : {unit_bidisk(), unit_ball(), make_shadow(profile::Ball{1.3})}) {
    const MomentTable exact(s), quad(s, true);
    EXPECT_EQ(quad.method(), MomentMethod::quadrature);
    for (int p = 0; p <= 12; p += 2)
      for (int q = 0; q <= 60; q += 6) {
        const MomentValue v = quad.entry(p, q);
        EXPECT_NEAR(v.value / exact(p, q), 1.0, 1e-10) << s.name() << " " << p << "," << q;
        EXPECT_LE(std::abs(v.value - exact(p, q)), v.error_bound + exact.entry(p, q).error_bound) << s.name() << " " << p << "," << q;
      }
  }
}

TEST(Moments, IntersectionAgainstBisectionOracle) {
  const MomentTable t(paper_intersection());
  EXPECT_EQ(t.method(), MomentMethod::quadrature);
  const auto in = oracle::intersection_member(1.0, 1.0, kR);
  const double corner = std::sqrt(kR * kR - 1.0);
  for (int p : {0, 2, 4, 10})
    for (int q : {0, 2, 16, 96}) {
      const double o = oracle::moment(in, 1.0, p, q, {corner});
      EXPECT_NEAR(t(p, q) / o, 1.0, 1e-10) << p << "," << q;
    }
  EXPECT_LT(t.max_relative_error(), 1e-9);
}

TEST(Moments, SampledAgainstOracle) {
  const std::vector<std::pair<double, double>> pts{{0.0, 1.0}, {0.4, 0.95}, {0.8, 0.7}, {1.0, 0.3}};
  const MomentTable t(make_shadow(profile::Sampled{pts}));
  auto interp = [&](double y) {
    for (std::size_t k = 1; k < pts.size(); ++k)
      if (y <= pts[k].first) {
        const double s = (y - pts[k - 1].first) / (pts[k].first - pts[k - 1].first);
        return pts[k - 1].second + s * (pts[k].second - pts[k - 1].second);
      }
    return pts.back().second;
  };
  const oracle::Membership in = [&](double x, double y) { return y < 1.0 && x < interp(y); };
  for (int p : {0, 2, 6})
    for (int q : {0, 4, 20})
      EXPECT_NEAR(t(p, q) / oracle::moment(in, 1.0, p, q, {0.4, 0.8}), 1.0, 1e-10);
}

TEST(Moments, MonomialNorms) {
  const MomentTable b(unit_bidisk());
  EXPECT_NEAR(b.monomial_norm(0, 0), oracle::kPi, 1e-14);
  EXPECT_NEAR(std::pow(b.monomial_norm(1, 1), 2), kPi2 / 4.0, 1e-13);
  EXPECT_NEAR(monomial_norm(b, 1, 1), b.monomial_norm(1, 1), 0.0);
  const MomentTable ball(unit_ball());
  EXPECT_NEAR(std::pow(ball.monomial_norm(0, 0), 2), kPi2 / 2.0, 1e-13);
  EXPECT_NEAR(moment(ball, 0, 0), kPi2 / 2.0, 1e-13);
}

TEST(Moments, DecreaseInsideUnitBidisk) {
  for (const auto& s : {unit_bidisk(), unit_ball(), paper_intersection()}) {
    const MomentTable t(s);
    for (int p = 0; p <= 20; p += 2)
      for (int q = 0; q <= 20; q += 2) {
        EXPECT_GT(t(p, q), t(p + 2, q));
        EXPECT_GT(t(p, q), t(p, q + 2));
      }
  }
}

TEST(Moments, RejectsNegativeOrders) {
  const MomentTable t(unit_bidisk());
  EXPECT_THROW(t(-1, 0), Error);
  EXPECT_THROW(t.monomial_norm(0, -1), Error);
}

TEST(Moments, ConcurrentReadsAreConsistent) {
  const MomentTable shared(paper_intersection());
  const MomentTable serial(paper_intersection());
  std::vector<double> got(400);
  parallel_for(got.size(), [&](std::size_t k) {
    got[k] = shared(2 * static_cast<int>(k % 20), 2 * static_cast<int>(k / 20));
  });
  for (std::size_t k = 0; k < got.size(); ++k)
    EXPECT_EQ(got[k], serial(2 * static_cast<int>(k % 20), 2 * static_cast<int>(k / 20)));
  EXPECT_EQ(shared.cache_size(), 400u);
}

TEST(Moments, CopiesShareCache) {
  const MomentTable a(unit_ball(), true);
  const MomentTable b = a;
  (void)a(4, 6);
  EXPECT_EQ(b.cache_size(), 1u);
}
