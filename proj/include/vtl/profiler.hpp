#pragma once

// Empirical isoperimetric profiles: sweep a domain family, record
// (gradient, mass) pairs and fit the exponent relating them.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtl/cayley.hpp"
#include "vtl/domain.hpp"
#include "vtl/error.hpp"
#include "vtl/rational.hpp"
#include "vtl/transport.hpp"

namespace vtl {

enum class Family { Balls, Boxes, Random };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::Balls: return "balls";
    case Family::Boxes: return "boxes";
    case Family::Random: return "random";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "balls" || s == "ball") return Family::Balls;
  if (s == "boxes" || s == "box") return Family::Boxes;
  if (s == "random") return Family::Random;
  throw Error(ErrorKind::BadValue, "unknown family '" + s + "'");
}

struct ProfilePoint {
  std::string family;
  std::uint32_t n = 0;
  std::uint64_t mass = 0;
  std::uint64_t gradient = 0;
  /// Selected transport radius, and the fields filled by the transport check.
  /// Empty when the check was skipped for exceeding the work limit.
  std::optional<std::uint32_t> radius;
  std::optional<Rational> avg_transport;
  std::optional<std::uint32_t> witness_length;

  bool transport_checked() const { return avg_transport.has_value(); }
};

struct ProfileParams {
  std::uint64_t seed = 1;
  Multiplicity max_mult = 1;
  /// Skip the transport check when |supp D| * |B(r)| exceeds this.
  std::uint64_t transport_work_limit = 1'000'000'000ULL;
  std::size_t element_cap = kDefaultElementCap;
};

/// One point per n in [n_lo, n_hi]. Balls: B(n). Boxes: the coordinate box
/// [0,n]^3 ([0,n]^2 in Z^2). Random: a connected random domain with the
/// mass of B(n), seeded with seed + n.
inline std::vector<ProfilePoint> isoperimetric_profile(const TorusBundleGroup& group, const GeneratorSet& gens,
                                                       Family family, std::uint32_t n_lo, std::uint32_t n_hi,
                                                       const ProfileParams& params = {}) {
  if (n_lo > n_hi) throw Error(ErrorKind::BadValue, "empty n range");
  const auto ball = enumerate_ball(group, gens, n_hi, params.element_cap);
  std::vector<ProfilePoint> points;
  for (std::uint32_t n = n_lo; n <= n_hi; ++n) {
    std::optional<Domain> d;
    switch (family) {
      case Family::Balls: d.emplace(from_ball(ball, n)); break;
      case Family::Boxes: {
        const auto side = static_cast<std::int64_t>(n);
        d.emplace(from_box(group, gens, {0, 0, 0}, {side, side, static_cast<std::int32_t>(n)}));
        break;
      }
      case Family::Random:
        d.emplace(random_connected(group, gens, ball.size_at(n), params.max_mult, params.seed + n));
        break;
    }
    ProfilePoint pt;
    pt.family = to_string(family);
    pt.n = n;
    pt.mass = d->mass();
    pt.gradient = gradient(*d);
    BallBuilder builder(group, gens, params.element_cap);
    while (builder.size() < 2 * d->mass()) builder.grow();
    pt.radius = builder.radius();
    const auto work = static_cast<unsigned __int128>(d->support_size()) * builder.size();
    if (work <= params.transport_work_limit) {
      const auto rep = verify_bounds(*d, params.element_cap);
      pt.avg_transport = rep.average;
      pt.witness_length = rep.witness.length;
    }
    points.push_back(std::move(pt));
  }
  return points;
}

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::BadValue, "abscissa/ordinate length mismatch");
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw Error(ErrorKind::DegenerateFit, "fewer than 3 distinct abscissae");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return f;
}

/// OLS of ln(mass) against ln(gradient).
inline LinearFit fit_loglog_slope(const std::vector<ProfilePoint>& points) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (p.mass < 1 || p.gradient < 1) throw Error(ErrorKind::DegenerateInput, "mass and gradient must be >= 1");
    xs.push_back(std::log(static_cast<double>(p.gradient)));
    ys.push_back(std::log(static_cast<double>(p.mass)));
  }
  return least_squares(xs, ys);
}

/// mass / (gradient * ln gradient) per point.
inline std::vector<double> fit_nlogn_ratios(const std::vector<ProfilePoint>& points) {
  std::vector<double> out;
  for (const auto& p : points) {
    if (p.gradient < 2) throw Error(ErrorKind::DegenerateInput, "gradient below 2 at n=" + std::to_string(p.n));
    const double g = static_cast<double>(p.gradient);
    out.push_back(static_cast<double>(p.mass) / (g * std::log(g)));
  }
  return out;
}

namespace detail {

inline void check_growth_window(const std::vector<std::uint64_t>& series, std::uint32_t r_lo, std::uint32_t r_hi,
                                std::uint32_t min_lo) {
  if (r_lo < min_lo) throw Error(ErrorKind::DegenerateFit, "r_lo must be >= " + std::to_string(min_lo));
  if (r_hi >= series.size()) throw Error(ErrorKind::DegenerateFit, "r_hi beyond the series");
  if (r_lo > r_hi) throw Error(ErrorKind::DegenerateFit, "empty window");
}

}  // namespace detail

/// Polynomial growth degree: OLS of ln series[r] against ln r on [r_lo, r_hi].
inline LinearFit growth_exponent(const std::vector<std::uint64_t>& series, std::uint32_t r_lo, std::uint32_t r_hi) {
  detail::check_growth_window(series, r_lo, r_hi, 2);
  std::vector<double> xs, ys;
  for (std::uint32_t r = r_lo; r <= r_hi; ++r) {
    xs.push_back(std::log(static_cast<double>(r)));
    ys.push_back(std::log(static_cast<double>(series[r])));
  }
  return least_squares(xs, ys);
}

/// Exponential growth rate: OLS of ln series[r] against r on [r_lo, r_hi].
inline LinearFit growth_rate(const std::vector<std::uint64_t>& series, std::uint32_t r_lo, std::uint32_t r_hi) {
  detail::check_growth_window(series, r_lo, r_hi, 0);
  std::vector<double> xs, ys;
  for (std::uint32_t r = r_lo; r <= r_hi; ++r) {
    xs.push_back(static_cast<double>(r));
    ys.push_back(std::log(static_cast<double>(series[r])));
  }
  return least_squares(xs, ys);
}

enum class ExponentClaim { Quadratic, FourThirds, NLogN };

inline std::string to_string(ExponentClaim c) {
  switch (c) {
    case ExponentClaim::Quadratic: return "quadratic";
    case ExponentClaim::FourThirds: return "four_thirds";
    case ExponentClaim::NLogN: return "n_log_n";
  }
  return "?";
}

/// Z^2 -> quadratic; unipotent A != I (Nil) -> 4/3; hyperbolic A (Sol) -> n ln n.
inline std::optional<ExponentClaim> exponent_claim(const TorusBundleGroup& group) {
  if (group.kind() == GroupKind::Abelian2) return ExponentClaim::Quadratic;
  const auto& a = group.matrix();
  const std::int64_t trace = a.m11() + a.m22();
  if (a.det() == 1 && (trace == 2 || trace == -2)) {
    const bool scalar = a.m12() == 0 && a.m21() == 0;
    if (!scalar) return ExponentClaim::FourThirds;
    return std::nullopt;
  }
  const bool hyperbolic = a.det() == 1 ? trace * trace > 4 : trace != 0;
  if (hyperbolic) return ExponentClaim::NLogN;
  return std::nullopt;
}

struct ProfileReport {
  std::vector<ProfilePoint> points;
  LinearFit loglog;
  std::vector<double> nlogn_ratios;
  std::optional<ExponentClaim> exponent_claim;
};

inline ProfileReport make_report(const TorusBundleGroup& group, std::vector<ProfilePoint> points) {
  ProfileReport rep;
  rep.loglog = fit_loglog_slope(points);
  rep.nlogn_ratios = fit_nlogn_ratios(points);
  rep.exponent_claim = exponent_claim(group);
  rep.points = std::move(points);
  return rep;
}

/// Rounds to 9 significant digits for reproducible text output.
inline double round9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

inline std::string format9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline constexpr const char* kProfileCsvHeader = "group,family,n,mass,gradient,radius,avg_num,avg_den,witness_len";

inline void write_profile_csv(std::ostream& os, const std::string& group_name, const std::vector<ProfilePoint>& pts) {
  os << kProfileCsvHeader << '\n';
  for (const auto& p : pts) {
    os << group_name << ',' << p.family << ',' << p.n << ',' << p.mass << ',' << p.gradient << ',';
    if (p.radius) os << *p.radius;
    os << ',';
    if (p.avg_transport) os << p.avg_transport->num() << ',' << p.avg_transport->den();
    else os << ',';
    os << ',';
    if (p.witness_length) os << *p.witness_length;
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const ProfileReport& rep) {
  nlohmann::ordered_json j;
  j["points"] = rep.points.size();
  std::size_t checked = 0;
  for (const auto& p : rep.points) checked += p.transport_checked() ? 1 : 0;
  j["transport_checked"] = checked;
  j["loglog_slope"] = round9(rep.loglog.slope);
  j["loglog_intercept"] = round9(rep.loglog.intercept);
  j["r_squared"] = round9(rep.loglog.r_squared);
  auto ratios = nlohmann::ordered_json::array();
  for (double r : rep.nlogn_ratios) ratios.push_back(round9(r));
  j["nlogn_ratios"] = ratios;
  if (!rep.nlogn_ratios.empty()) {
    const auto [lo, hi] = std::minmax_element(rep.nlogn_ratios.begin(), rep.nlogn_ratios.end());
    j["nlogn_max_over_min"] = round9(*hi / *lo);
  }
  j["exponent_claim"] = rep.exponent_claim ? to_string(*rep.exponent_claim) : "none";
  return j;
}

}  // namespace vtl
