#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "vtl/profiler.hpp"

using namespace vtl;

namespace {

ProfilePoint point(std::uint64_t mass, std::uint64_t gradient) {
  ProfilePoint p;
  p.mass = mass;
  p.gradient = gradient;
  return p;
}

/// Normal equations solved by Cramer's rule from raw sums.
LinearFit cramer_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sxx * sy - sx * sxy) / det;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
    ss_tot += (y[i] - sy / n) * (y[i] - sy / n);
  }
  f.r_squared = 1 - ss_res / ss_tot;
  return f;
}

}  // namespace

TEST(FitLoglogSlope, ExactPowerLaws) {
  std::vector<ProfilePoint> sq, lin;
  for (std::uint64_t g = 2; g <= 20; g += 3) {
    sq.push_back(point(g * g, g));
    lin.push_back(point(g, g));
  }
  const auto f2 = fit_loglog_slope(sq);
  EXPECT_NEAR(f2.slope, 2.0, 1e-9);
  EXPECT_NEAR(f2.intercept, 0.0, 1e-9);
  EXPECT_NEAR(f2.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit_loglog_slope(lin).slope, 1.0, 1e-9);
}

TEST(FitLoglogSlope, DegenerateInputs) {
  try {
    fit_loglog_slope({point(4, 2), point(9, 3), point(5, 3)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFit);
  }
}

TEST(LeastSquares, AgreesWithNormalEquations) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
      x.push_back(static_cast<double>(rng() % 1000) / 37.0);
      y.push_back(static_cast<double>(rng() % 1000) / 11.0 + 0.5 * x.back());
    }
    const auto a = least_squares(x, y);
    const auto b = cramer_fit(x, y);
    EXPECT_NEAR(a.slope, b.slope, 1e-9);
    EXPECT_NEAR(a.intercept, b.intercept, 1e-9);
    EXPECT_NEAR(a.r_squared, b.r_squared, 1e-9);
    EXPECT_GE(a.r_squared, 0.0);
    EXPECT_LE(a.r_squared, 1.0);
  }
}

TEST(FitNlognRatios, Examples) {
  const auto r = fit_nlogn_ratios({point(1, 2)});
  EXPECT_NEAR(r[0], 1.0 / (2.0 * std::log(2.0)), 1e-12);
  EXPECT_NEAR(r[0], 0.7213, 1e-4);
  // mass = k * 2 ln 2 with integer mass: k = 10 / (2 ln 2).
  const auto r2 = fit_nlogn_ratios({point(10, 2)});
  EXPECT_NEAR(r2[0] * 2 * std::log(2.0), 10.0, 1e-12);
  try {
    fit_nlogn_ratios({point(3, 1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateInput);
  }
}

TEST(GrowthExponent, Examples) {
  std::vector<std::uint64_t> quartic, diamond;
  for (std::uint64_t r = 0; r <= 20; ++r) {
    quartic.push_back(r * r * r * r);
    diamond.push_back(2 * r * r + 2 * r + 1);
  }
  EXPECT_NEAR(growth_exponent(quartic, 2, 20).slope, 4.0, 1e-9);
  const auto d = growth_exponent(diamond, 6, 20).slope;
  EXPECT_GE(d, 1.9);
  EXPECT_LE(d, 2.1);
  EXPECT_THROW(growth_exponent(diamond, 1, 20), Error);
  EXPECT_THROW(growth_exponent(diamond, 2, 21), Error);
  EXPECT_THROW(growth_exponent(diamond, 5, 6), Error);
}

TEST(GrowthRate, ExactExponential) {
  std::vector<std::uint64_t> pow3;
  for (std::uint64_t r = 0, v = 1; r <= 15; ++r, v *= 3) pow3.push_back(5 * v);
  const auto f = growth_rate(pow3, 0, 15);
  EXPECT_NEAR(f.slope, std::log(3.0), 1e-9);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(IsoperimetricProfile, Examples) {
  const auto z2 = TorusBundleGroup::z2();
  const auto p0 = isoperimetric_profile(z2, default_generators(z2), Family::Balls, 0, 0);
  ASSERT_EQ(p0.size(), 1U);
  EXPECT_EQ(p0[0].mass, 1U);
  EXPECT_EQ(p0[0].gradient, 4U);

  const auto nil = TorusBundleGroup::nil();
  const auto s = default_generators(nil);
  const auto pn = isoperimetric_profile(nil, s, Family::Balls, 0, 1);
  ASSERT_EQ(pn.size(), 2U);
  EXPECT_EQ(pn[0].mass, 1U);
  EXPECT_EQ(pn[0].gradient, 8U);
  EXPECT_EQ(pn[1].mass, 9U);
  // Edges leaving B(1): count closure translates of its 9 elements outside it.
  const auto ball = enumerate_ball(nil, s, 2);
  std::uint64_t leaving = 0;
  for (std::size_t i = 0; i < ball.size_at(1); ++i) {
    for (const auto& x : neighbors(nil, s, ball.elements()[i])) leaving += ball.word_length(x) > 1U ? 1 : 0;
  }
  EXPECT_EQ(pn[1].gradient, leaving);
  EXPECT_EQ(pn[0].avg_transport, Rational(8, 9));
  EXPECT_TRUE(pn[1].transport_checked());
}

TEST(IsoperimetricProfile, DeterministicForEveryFamily) {
  for (const auto& [name, g] : fixtures::all_groups()) {
    const auto s = default_generators(g);
    ProfileParams params;
    params.seed = 5;
    params.max_mult = 3;
    for (auto fam : {Family::Balls, Family::Boxes, Family::Random}) {
      const auto a = isoperimetric_profile(g, s, fam, 1, 3, params);
      const auto b = isoperimetric_profile(g, s, fam, 1, 3, params);
      std::ostringstream sa, sb;
      write_profile_csv(sa, name, a);
      write_profile_csv(sb, name, b);
      EXPECT_EQ(sa.str(), sb.str()) << name << " " << to_string(fam);
      for (const auto& p : a) {
        EXPECT_GE(p.mass, 1U);
        EXPECT_GE(p.gradient, 1U);
        EXPECT_TRUE(p.transport_checked());
      }
    }
  }
}

TEST(IsoperimetricProfile, WorkLimitSkipsTransportOnly) {
  const auto sol = TorusBundleGroup::sol();
  ProfileParams params;
  params.transport_work_limit = 1000;
  const auto pts = isoperimetric_profile(sol, default_generators(sol), Family::Balls, 0, 2, params);
  EXPECT_TRUE(pts[0].transport_checked());
  EXPECT_FALSE(pts[2].transport_checked());
  EXPECT_TRUE(pts[2].radius.has_value());
  std::ostringstream os;
  write_profile_csv(os, "sol", pts);
  EXPECT_NE(os.str().find("sol,balls,2,73,"), std::string::npos);
  EXPECT_NE(os.str().find(",,,\n"), std::string::npos);
}

TEST(ProfileCsv, Format) {
  const auto z2 = TorusBundleGroup::z2();
  const auto pts = isoperimetric_profile(z2, default_generators(z2), Family::Balls, 0, 0);
  std::ostringstream os;
  write_profile_csv(os, "z2", pts);
  EXPECT_EQ(os.str(), "group,family,n,mass,gradient,radius,avg_num,avg_den,witness_len\nz2,balls,0,1,4,1,4,5,1\n");
}

TEST(ExponentClaim, Classification) {
  EXPECT_EQ(exponent_claim(TorusBundleGroup::z2()), ExponentClaim::Quadratic);
  EXPECT_EQ(exponent_claim(TorusBundleGroup::nil()), ExponentClaim::FourThirds);
  EXPECT_EQ(exponent_claim(TorusBundleGroup::sol()), ExponentClaim::NLogN);
  EXPECT_EQ(exponent_claim(TorusBundleGroup::bundle(SL2Matrix(1, 0, 0, 1))), std::nullopt);
  EXPECT_EQ(exponent_claim(TorusBundleGroup::bundle(SL2Matrix(0, -1, 1, 0))), std::nullopt);
}

TEST(ProfileReport, Summary) {
  const auto nil = TorusBundleGroup::nil();
  const auto rep = make_report(nil, isoperimetric_profile(nil, default_generators(nil), Family::Balls, 1, 4));
  const auto j = to_json(rep);
  EXPECT_EQ(j["exponent_claim"], "four_thirds");
  EXPECT_EQ(j["nlogn_ratios"].size(), 4U);
  EXPECT_GE(rep.loglog.r_squared, 0.0);
  EXPECT_LE(rep.loglog.r_squared, 1.0);
  EXPECT_EQ(format9(1.0 / 3.0), "0.333333333");
}
