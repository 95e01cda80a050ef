#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "test_support.hpp"
#include "vtl/cayley.hpp"
#include "vtl/profiler.hpp"

using namespace vtl;

namespace {

std::set<GroupElement> as_set(const std::vector<GroupElement>& v) { return {v.begin(), v.end()}; }

/// Word lengths by exhaustively multiplying all generator sequences of
/// length <= r. Independent of the BFS builder.
std::map<GroupElement, std::uint32_t> brute_force_lengths(const TorusBundleGroup& g, const GeneratorSet& s,
                                                          std::uint32_t r) {
  std::map<GroupElement, std::uint32_t> best{{GroupElement{}, 0}};
  std::vector<GroupElement> layer{GroupElement{}};  // all products of exactly L letters
  for (std::uint32_t len = 1; len <= r; ++len) {
    std::vector<GroupElement> next;
    next.reserve(layer.size() * s.valence());
    for (const auto& x : layer) {
      for (const auto& gen : s.closure()) {
        const auto y = g.multiply(x, gen);
        next.push_back(y);
        best.emplace(y, len);  // keeps the first (smallest) length
      }
    }
    layer = std::move(next);
  }
  return best;
}

}  // namespace

TEST(DefaultGenerators, Valences) {
  EXPECT_EQ(default_generators(TorusBundleGroup::z2()).valence(), 4U);
  const auto nil = default_generators(TorusBundleGroup::nil());
  EXPECT_EQ(nil.positives().size(), 4U);
  EXPECT_EQ(nil.valence(), 8U);
  const auto sol = default_generators(TorusBundleGroup::sol());
  EXPECT_EQ(sol.positives().size(), 6U);
  EXPECT_EQ(sol.valence(), 12U);
}

TEST(DefaultGenerators, ElementValues) {
  const auto nil = default_generators(TorusBundleGroup::nil());
  const std::vector<GroupElement> nil_expected{{0, 1, 0}, {1, -1, 0}, {0, 0, 1}, {1, 1, 1}};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(nil.positives()[i].element, nil_expected[i]);
  const auto sol = default_generators(TorusBundleGroup::sol());
  const std::vector<GroupElement> sol_expected{{1, 1, 0}, {0, 0, 1}, {2, 1, 0}, {-3, -2, 1}, {-5, -3, 1}, {-2, -1, 1}};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(sol.positives()[i].element, sol_expected[i]) << i;
  EXPECT_EQ(sol.positives()[3].label, "td^-1");
}

TEST(DefaultGenerators, ClosureIsSymmetricWithoutIdentity) {
  for (const auto& [name, g] : fixtures::all_groups()) {
    const auto s = default_generators(g);
    const auto set = as_set(s.closure());
    EXPECT_EQ(set.size(), s.valence()) << name;
    EXPECT_FALSE(set.contains(GroupElement{})) << name;
    for (const auto& x : s.closure()) EXPECT_TRUE(set.contains(g.inverse(x))) << name;
  }
}

TEST(DefaultGenerators, UnsupportedMatrix) {
  try {
    default_generators(TorusBundleGroup::bundle(SL2Matrix(3, 2, 1, 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedGroup);
  }
}

TEST(CustomGenerators, Examples) {
  const auto z2 = custom_generators(TorusBundleGroup::z2(), {Word::parse("a"), Word::parse("b")});
  EXPECT_EQ(as_set(z2.closure()), (std::set<GroupElement>{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}}));
  const auto nil = custom_generators(TorusBundleGroup::nil(), {Word::parse("b"), Word::parse("B")});
  EXPECT_EQ(as_set(nil.closure()), (std::set<GroupElement>{{0, 1, 0}, {0, -1, 0}}));
  EXPECT_EQ(nil.positives().size(), 1U);
  try {
    custom_generators(TorusBundleGroup::nil(), {Word{}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IdentityGenerator);
  }
  EXPECT_THROW(custom_generators(TorusBundleGroup::z2(), {Word::parse("t")}), Error);
}

TEST(Neighbors, Examples) {
  const auto nil = TorusBundleGroup::nil();
  const auto s = default_generators(nil);
  EXPECT_EQ(neighbors(nil, s, GroupElement{}), s.closure());
  const auto z2 = TorusBundleGroup::z2();
  EXPECT_EQ(as_set(neighbors(z2, default_generators(z2), {3, 4, 0})),
            (std::set<GroupElement>{{4, 4, 0}, {3, 5, 0}, {2, 4, 0}, {3, 3, 0}}));
  std::mt19937_64 rng(3);
  const auto sol = TorusBundleGroup::sol();
  const auto ss = default_generators(sol);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(neighbors(sol, ss, fixtures::random_element(rng, sol, ss)).size(), 12U);
  }
}

TEST(EnumerateBall, SmallRadii) {
  for (const auto& [name, g] : fixtures::all_groups()) {
    EXPECT_EQ(enumerate_ball(g, default_generators(g), 0).sizes(), std::vector<std::uint64_t>{1}) << name;
  }
  const auto nil = TorusBundleGroup::nil();
  EXPECT_EQ(enumerate_ball(nil, default_generators(nil), 1).sizes(), (std::vector<std::uint64_t>{1, 9}));
  const auto sol = TorusBundleGroup::sol();
  EXPECT_EQ(enumerate_ball(sol, default_generators(sol), 1).sizes(), (std::vector<std::uint64_t>{1, 13}));
}

TEST(EnumerateBall, CanonicalOrder) {
  const auto nil = TorusBundleGroup::nil();
  const auto ball = enumerate_ball(nil, default_generators(nil), 3);
  for (std::size_t i = 1; i < ball.size(); ++i) {
    const bool ordered = ball.dists()[i - 1] < ball.dists()[i] ||
                         (ball.dists()[i - 1] == ball.dists()[i] && ball.elements()[i - 1] < ball.elements()[i]);
    ASSERT_TRUE(ordered) << i;
  }
  EXPECT_EQ(ball.elements()[1], (GroupElement{0, -1, -1}));
}

TEST(EnumerateBall, ResourceLimit) {
  const auto sol = TorusBundleGroup::sol();
  try {
    enumerate_ball(sol, default_generators(sol), 5, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
  }
}

TEST(GrowthSeries, Examples) {
  const auto z2 = TorusBundleGroup::z2();
  EXPECT_EQ(growth_series(z2, default_generators(z2), 2), (std::vector<std::uint64_t>{1, 5, 13}));
  const auto nil = TorusBundleGroup::nil();
  EXPECT_EQ(growth_series(nil, default_generators(nil), 1), (std::vector<std::uint64_t>{1, 9}));
  const auto sol = TorusBundleGroup::sol();
  const auto s = default_generators(sol);
  EXPECT_EQ(growth_series(sol, s, 4), enumerate_ball(sol, s, 4).sizes());
}

TEST(WordLength, Examples) {
  const auto nil = TorusBundleGroup::nil();
  const auto s = default_generators(nil);
  const auto b3 = enumerate_ball(nil, s, 3);
  EXPECT_EQ(word_length(b3, GroupElement{}), 0U);
  EXPECT_EQ(word_length(b3, {0, 1, 0}), 1U);
  EXPECT_EQ(word_length(enumerate_ball(nil, s, 1), {0, 2, 0}), std::nullopt);
  EXPECT_EQ(word_length(b3, {0, 2, 0}), 2U);
}

TEST(EnumerateBall, AgreesWithBruteForce) {
  for (const auto& [name, g] : fixtures::all_groups()) {
    const auto s = default_generators(g);
    const std::uint32_t r = 4;
    const auto oracle = brute_force_lengths(g, s, r);
    const auto ball = enumerate_ball(g, s, r);
    ASSERT_EQ(ball.size(), oracle.size()) << name;
    for (const auto& [e, len] : oracle) ASSERT_EQ(ball.word_length(e), len) << name << " " << to_string(e);
  }
}

TEST(EnumerateBall, SymmetricAndClosed) {
  for (const auto& [name, g] : fixtures::all_groups()) {
    const auto s = default_generators(g);
    const auto ball = enumerate_ball(g, s, 4);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const auto& e = ball.elements()[i];
      ASSERT_EQ(ball.word_length(g.inverse(e)), ball.dists()[i]) << name;
      if (ball.dists()[i] < ball.radius()) {
        for (const auto& n : neighbors(g, s, e)) ASSERT_TRUE(ball.contains(n)) << name;
      }
    }
  }
}

TEST(GrowthSeries, MonotoneAndBoundedByValence) {
  for (const auto& [name, g] : fixtures::all_groups()) {
    const auto s = default_generators(g);
    const auto series = growth_series(g, s, 7);
    for (std::size_t r = 1; r < series.size(); ++r) {
      EXPECT_GT(series[r], series[r - 1]) << name;
      EXPECT_LE(series[r], 1 + s.valence() * series[r - 1]) << name;
    }
  }
}

TEST(GrowthSeries, Z2DiamondClosedForm) {
  const auto z2 = TorusBundleGroup::z2();
  const auto series = growth_series(z2, default_generators(z2), 20);
  for (std::uint64_t r = 0; r <= 20; ++r) EXPECT_EQ(series[r], 2 * r * r + 2 * r + 1) << r;
}

TEST(GrowthSeries, NilPolynomialDegree) {
  const auto nil = TorusBundleGroup::nil();
  const auto fit = growth_exponent(growth_series(nil, default_generators(nil), 14), 6, 14);
  EXPECT_GE(fit.slope, 3.4);
  EXPECT_LE(fit.slope, 4.6);
}

TEST(GrowthSeries, SolExponential) {
  const auto sol = TorusBundleGroup::sol();
  const auto fit = growth_rate(growth_series(sol, default_generators(sol), 10), 6, 10);
  EXPECT_GT(fit.slope, 0.0);
  EXPECT_GE(fit.r_squared, 0.99);
}

TEST(CayleyBall, GeodesicEvaluatesToElement) {
  for (const auto& [name, g] : fixtures::all_groups()) {
    const auto s = default_generators(g);
    const auto ball = enumerate_ball(g, s, 3);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const auto path = ball.geodesic(ball.elements()[i]);
      ASSERT_EQ(path.size(), ball.dists()[i]);
      GroupElement x;
      for (auto idx : path) x = g.multiply(x, s.closure()[idx]);
      ASSERT_EQ(x, ball.elements()[i]) << name;
    }
  }
}
