#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bergman/shadow.hpp"
#include "oracles.hpp"

using namespace bergman;

namespace {

const double kR = kPaperIntersectionRadius;

std::vector<ShadowRegion> all_presets() {
  return {unit_bidisk(), unit_ball(), paper_intersection(),
          make_shadow(profile::Bidisk{0.5, 2.0}), make_shadow(profile::Ball{1.7}),
          make_shadow(profile::Sampled{{{0.0, 1.0}, {0.5, 0.9}, {0.8, 0.6}, {1.0, 0.2}}})};
}

}  // namespace

TEST(ShadowProfile, BidiskIsConstant) {
  const auto s = unit_bidisk();
  EXPECT_EQ(s.y_max(), 1.0);
  EXPECT_EQ(s.x_max(), 1.0);
  for (double y : {0.0, 0.25, 0.5, 0.99, 1.0}) EXPECT_EQ(s.slice_radius(y), 1.0);
}

TEST(ShadowProfile, BallMatchesSphere) {
  const auto s = unit_ball();
  for (double y : {0.0, 0.3, 0.6, 0.9, 1.0}) EXPECT_NEAR(s.slice_radius(y), std::sqrt(1.0 - y * y), 1e-15);
  EXPECT_NEAR(s.slice_radius(0.6), 0.8, 1e-15);
  EXPECT_NEAR(s.slice_radius(0.6), oracle::slice_radius(oracle::ball_member(1.0), 0.6), 1e-12);
}

TEST(ShadowProfile, IntersectionMatchesPaperRemark) {
  const auto s = paper_intersection();
  EXPECT_DOUBLE_EQ(kR, (1.0 + std::sqrt(2.0)) / 2.0);
  for (double y : {0.0, 0.3, 0.6, 0.7, 0.9, 1.0})
    EXPECT_NEAR(s.slice_radius(y), std::min(1.0, std::sqrt(kR * kR - y * y)), 1e-15);
  EXPECT_NEAR(s.slice_radius(1.0), oracle::sphere_root(kR, 1.0), 1e-12);
  EXPECT_NEAR(s.slice_radius(1.0), 0.676097, 5e-7);
}

TEST(ShadowProfile, AgreesWithBruteForceMembership) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::pair<ShadowRegion, oracle::Membership>> cases{
      {unit_bidisk(), oracle::bidisk_member(1.0, 1.0)},
      {unit_ball(), oracle::ball_member(1.0)},
      {paper_intersection(), oracle::intersection_member(1.0, 1.0, kR)},
      {make_shadow(profile::Intersection{0.8, 1.3, 1.4}), oracle::intersection_member(0.8, 1.3, 1.4)}};
  for (const auto& [s, in] : cases)
    for (int k = 0; k < 50; ++k) {
      const double y = s.y_max() * u(rng) * 0.999;
      EXPECT_NEAR(s.slice_radius(y), oracle::slice_radius(in, y), 1e-12) << s.name() << " y=" << y;
    }
}

TEST(ShadowProfile, VerticalSliceRadius) {
  EXPECT_NEAR(unit_ball().vertical_slice_radius(0.6), 0.8, 1e-15);
  EXPECT_NEAR(paper_intersection().vertical_slice_radius(1.0), std::sqrt(kR * kR - 1.0), 1e-15);
  EXPECT_EQ(unit_bidisk().vertical_slice_radius(0.4), 1.0);
}

TEST(ShadowProfile, SampledProfileInterpolatesLinearly) {
  const auto s = make_shadow(profile::Sampled{{{0.0, 1.0}, {0.5, 0.9}, {1.0, 0.5}}});
  EXPECT_NEAR(s.slice_radius(0.25), 0.95, 1e-15);
  EXPECT_NEAR(s.slice_radius(0.75), 0.7, 1e-15);
  EXPECT_EQ(s.y_max(), 1.0);
  EXPECT_EQ(s.x_max(), 1.0);
}

TEST(ShadowProfile, RejectsInvalidProfiles) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code([] { make_shadow(profile::Sampled{{{0.0, 0.5}, {0.5, 0.9}, {1.0, 0.2}}}); }),
            ErrorCode::NonMonotoneProfile);
  EXPECT_EQ(code([] { make_shadow(profile::Sampled{{{0.0, 1.0}, {0.5, 0.2}, {1.0, 0.1}}}); }),
            ErrorCode::NonConvexShadow);
  EXPECT_EQ(code([] { make_shadow(profile::Ball{0.0}); }), ErrorCode::EmptyDomain);
  EXPECT_EQ(code([] { make_shadow(profile::Bidisk{1.0, -1.0}); }), ErrorCode::EmptyDomain);
  EXPECT_EQ(code([] { make_shadow(profile::Sampled{{{0.0, 1.0}}}); }), ErrorCode::EmptyDomain);
}

TEST(ShadowProfile, MonotoneConcaveContinuous) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : all_presets()) {
    const double ym = s.y_max();
    for (int i = 0; i < 1000; ++i) {
      const double y1 = ym * i / 1000.0, y2 = ym * (i + 1) / 1000.0;
      EXPECT_GE(s.slice_radius(y1), s.slice_radius(y2));
      if (i > 0) {
        const double y0 = ym * (i - 1) / 1000.0;
        EXPECT_GE(s.slice_radius(y1), 0.5 * (s.slice_radius(y0) + s.slice_radius(y2)) - 1e-9);
      }
    }
    for (int k = 0; k < 100; ++k) {
      const double y = ym * 0.99 * u(rng);
      EXPECT_LT(std::abs(s.slice_radius(y + 1e-3) - s.slice_radius(y)), 5e-2);
      EXPECT_LT(std::abs(s.slice_radius(y + 1e-6) - s.slice_radius(y)), 5e-5);
    }
  }
}

TEST(BoundaryDisks, Bidisk) {
  const auto d = detect_boundary_disks(unit_bidisk());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].orientation, DiskOrientation::horizontal);
  EXPECT_EQ(d[0].base_modulus, 1.0);
  EXPECT_EQ(d[0].radius, 1.0);
  EXPECT_EQ(d[1].orientation, DiskOrientation::vertical);
  EXPECT_EQ(d[1].base_modulus, 1.0);
  EXPECT_EQ(d[1].radius, 1.0);
}

TEST(BoundaryDisks, BallHasNone) { EXPECT_TRUE(detect_boundary_disks(unit_ball()).empty()); }

TEST(BoundaryDisks, Intersection) {
  const auto d = detect_boundary_disks(paper_intersection());
  ASSERT_EQ(d.size(), 2u);
  const double r0 = oracle::sphere_root(kR, 1.0);
  for (const auto& disk : d) {
    EXPECT_EQ(disk.base_modulus, 1.0);
    EXPECT_NEAR(disk.radius, r0, 1e-12);
  }
  EXPECT_EQ(d[0].orientation, DiskOrientation::horizontal);
  EXPECT_EQ(d[1].orientation, DiskOrientation::vertical);
}

TEST(BoundaryDisks, SampledFlatTopOnly) {
  const auto d = detect_boundary_disks(make_shadow(profile::Sampled{{{0.0, 1.0}, {1.0, 0.4}}}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].orientation, DiskOrientation::horizontal);
  EXPECT_NEAR(d[0].radius, 0.4, 1e-15);
}

namespace {
std::vector<double> approach_from_below(double y0, int n) {
  std::vector<double> out;
  for (int j = 1; j <= n; ++j) out.push_back(y0 * (1.0 - 1.0 / j));
  return out;
}
}  // namespace

TEST(SliceLimit, Bidisk) {
  const auto rep = verify_slice_limit(unit_bidisk(), 1.0, approach_from_below(1.0, 20));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.limit, 1.0);
  for (double r : rep.radii) EXPECT_EQ(r, 1.0);
}

TEST(SliceLimit, Intersection) {
  const auto rep = verify_slice_limit(paper_intersection(), 1.0, approach_from_below(1.0, 20));
  EXPECT_TRUE(rep.passed);
  EXPECT_NEAR(rep.limit, 0.676097, 5e-7);
  for (std::size_t j = 0; j < rep.radii.size(); ++j) EXPECT_GE(rep.radii[j], rep.limit);
  EXPECT_LT(rep.errors.back(), rep.errors[rep.errors.size() / 2]);
}

TEST(SliceLimit, BallDegenerates) {
  const auto rep = verify_slice_limit(unit_ball(), 1.0, approach_from_below(1.0, 20));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.limit, 0.0);
  EXPECT_GT(rep.observed_rate, 0.3);
  EXPECT_LT(rep.observed_rate, 0.6);
}

TEST(SliceLimit, NeedsTwoPoints) {
  EXPECT_THROW(verify_slice_limit(unit_ball(), 1.0, {0.5}), Error);
}
