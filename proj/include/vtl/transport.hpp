#pragma once

// Varopoulos transport of a domain by right translation:
//   T(gamma) = sum over sigma in supp(phi) of |phi(sigma) - phi(sigma * gamma)|.
// Averaged over a ball B(r) with |B(r)| >= 2 * mass this is at least mass / 2,
// and each T(gamma) is at most |gamma| * gradient.

#include <algorithm>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vtl/cayley.hpp"
#include "vtl/domain.hpp"
#include "vtl/error.hpp"
#include "vtl/rational.hpp"

namespace vtl {

inline std::uint64_t transport(const Domain& d, const GroupElement& gamma) {
  std::uint64_t total = 0;
  for (const auto& [sigma, m] : d.entries()) {
    total += detail::abs_diff(m, d.phi(d.group().multiply(sigma, gamma)));
  }
  return total;
}

/// |{sigma in D : sigma * gamma not in D}| for a characteristic domain.
inline std::uint64_t transport_set_difference(const Domain& d, const GroupElement& gamma) {
  if (!d.is_characteristic()) throw Error(ErrorKind::NotCharacteristic, "domain has multiplicities above 1");
  std::uint64_t moved = 0;
  for (const auto& e : d.entries()) {
    if (!d.contains(d.group().multiply(e.element, gamma))) ++moved;
  }
  return moved;
}

/// Smallest ball around the identity with |B(r)| >= 2 * mass(d).
inline CayleyBall radius_ball(const Domain& d, std::size_t cap = kDefaultElementCap) {
  BallBuilder b(d.group(), d.generators(), cap);
  while (b.size() < 2 * d.mass()) b.grow();
  return b.build();
}

inline std::uint32_t select_radius(const Domain& d, std::size_t cap = kDefaultElementCap) {
  BallBuilder b(d.group(), d.generators(), cap);
  while (b.size() < 2 * d.mass()) b.grow();
  return b.radius();
}

namespace detail {

/// Support of a domain with A^k cached per element, so sigma * gamma costs
/// one matrix-vector product.
struct PreparedSupport {
  std::vector<GroupElement> elements;
  std::vector<Multiplicity> mults;
  std::vector<SL2Matrix> twists;

  explicit PreparedSupport(const Domain& d) {
    for (const auto& e : d.entries()) {
      elements.push_back(e.element);
      mults.push_back(e.mult);
      twists.push_back(d.group().kind() == GroupKind::Abelian2 ? SL2Matrix::identity() : d.group().power(e.element.k));
    }
  }

  std::uint64_t transport(const Domain& d, const GroupElement& gamma) const {
    std::uint64_t total = 0;
    const Vec2 v{gamma.p, gamma.q};
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const Vec2 moved = vtl::apply(twists[i], v);
      const GroupElement target{checked_add(elements[i].p, moved[0]), checked_add(elements[i].q, moved[1]),
                                checked_add32(elements[i].k, gamma.k)};
      total += abs_diff(mults[i], d.phi(target));
    }
    return total;
  }
};

}  // namespace detail

/// T(gamma) for every gamma of the ball, in ball order. Work is split over
/// hardware threads by contiguous ranges of gamma.
inline std::vector<std::uint64_t> transport_table(const Domain& d, const CayleyBall& ball) {
  if (!(ball.group() == d.group())) throw Error(ErrorKind::ConfigMismatch, "ball and domain live in different groups");
  const detail::PreparedSupport support(d);
  std::vector<std::uint64_t> out(ball.size(), 0);
  const auto& elems = ball.elements();
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = support.transport(d, elems[i]);
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1U, std::thread::hardware_concurrency()),
                                                    std::max<std::size_t>(1, ball.size() / 64));
  if (threads <= 1) {
    work(0, ball.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (ball.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(ball.size(), lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

struct AverageTransport {
  Rational value;
  std::uint64_t total = 0;
  std::uint64_t ball_size = 0;
  /// False when |B(r)| < 2 * mass, where the lower bound is not guaranteed.
  bool radius_sufficient = false;
};

inline AverageTransport average_transport(const Domain& d, const CayleyBall& ball) {
  const auto table = transport_table(d, ball);
  AverageTransport a;
  for (auto t : table) a.total += t;
  a.ball_size = ball.size();
  a.value = make_rational(a.total, a.ball_size);
  a.radius_sufficient = ball.size() >= 2 * d.mass();
  return a;
}

inline AverageTransport average_transport(const Domain& d, std::uint32_t r, std::size_t cap = kDefaultElementCap) {
  return average_transport(d, enumerate_ball(d.group(), d.generators(), r, cap));
}

struct Witness {
  GroupElement element;
  std::uint32_t length = 0;
  std::uint64_t transport = 0;
};

namespace detail {

inline Witness first_witness(const Domain& d, const CayleyBall& ball, const std::vector<std::uint64_t>& table) {
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (2 * table[i] >= d.mass()) return {ball.elements()[i], ball.dists()[i], table[i]};
  }
  throw Error(ErrorKind::WitnessNotFound, "no gamma in B(" + std::to_string(ball.radius()) +
                                              ") transports half the mass " + std::to_string(d.mass()));
}

}  // namespace detail

/// First gamma in canonical ball order with 2 * T(gamma) >= mass.
inline Witness find_witness(const Domain& d, const CayleyBall& ball) {
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto t = transport(d, ball.elements()[i]);
    if (2 * t >= d.mass()) return {ball.elements()[i], ball.dists()[i], t};
  }
  throw Error(ErrorKind::WitnessNotFound, "no gamma in B(" + std::to_string(ball.radius()) +
                                              ") transports half the mass " + std::to_string(d.mass()));
}

inline Witness find_witness(const Domain& d, std::uint32_t r, std::size_t cap = kDefaultElementCap) {
  return find_witness(d, enumerate_ball(d.group(), d.generators(), r, cap));
}

struct TransportReport {
  std::uint32_t radius = 0;
  std::uint64_t ball_size = 0;
  std::uint64_t mass = 0;
  std::uint64_t gradient = 0;
  std::uint64_t total_transport = 0;
  Rational average;
  Witness witness;
  /// max over gamma != e of T(gamma) / (|gamma| * gradient).
  Rational max_ratio;
  GroupElement max_ratio_element;

  /// 2 * total >= |B(r)| * mass.
  bool averaging_holds() const {
    return static_cast<unsigned __int128>(total_transport) * 2 >= static_cast<unsigned __int128>(ball_size) * mass;
  }
  bool length_holds() const { return max_ratio <= Rational(1); }
  bool witness_holds() const { return 2 * witness.transport >= mass; }
  bool holds() const { return averaging_holds() && length_holds() && witness_holds(); }
};

/// Fills the report over the given ball without asserting the bounds.
inline TransportReport compute_report(const Domain& d, const CayleyBall& ball) {
  const auto table = transport_table(d, ball);
  TransportReport rep;
  rep.radius = ball.radius();
  rep.ball_size = ball.size();
  rep.mass = d.mass();
  rep.gradient = gradient(d);
  for (auto t : table) rep.total_transport += t;
  rep.average = make_rational(rep.total_transport, rep.ball_size);
  rep.witness = detail::first_witness(d, ball, table);
  bool first = true;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (ball.dists()[i] == 0) continue;
    const Rational ratio = make_rational(table[i], static_cast<std::uint64_t>(ball.dists()[i]) * rep.gradient);
    if (first || ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.max_ratio_element = ball.elements()[i];
      first = false;
    }
  }
  return rep;
}

inline std::string describe_violation(const TransportReport& rep) {
  std::string msg;
  if (!rep.averaging_holds()) {
    msg += "average transport " + rep.average.str() + " < mass/2 = " + make_rational(rep.mass, 2).str() + "; ";
  }
  if (!rep.length_holds()) {
    msg += "T(gamma) > |gamma| * gradient at " + to_string(rep.max_ratio_element) + " (ratio " +
           rep.max_ratio.str() + "); ";
  }
  if (!rep.witness_holds()) msg += "witness transport below mass/2; ";
  return msg;
}

/// Selects the radius, computes every T(gamma) over B(r) and checks both
/// transport bounds exactly. Throws InvariantViolation if either fails.
inline TransportReport verify_bounds(const Domain& d, std::size_t cap = kDefaultElementCap) {
  const auto rep = compute_report(d, radius_ball(d, cap));
  if (!rep.holds()) throw Error(ErrorKind::InvariantViolation, describe_violation(rep));
  return rep;
}

inline nlohmann::ordered_json to_json(const TransportReport& rep) {
  nlohmann::ordered_json j;
  j["radius"] = rep.radius;
  j["ball_size"] = rep.ball_size;
  j["mass"] = rep.mass;
  j["gradient"] = rep.gradient;
  j["total_transport"] = rep.total_transport;
  j["average"] = rep.average.str();
  j["witness"] = {{"element", {rep.witness.element.p, rep.witness.element.q, rep.witness.element.k}},
                  {"length", rep.witness.length},
                  {"transport", rep.witness.transport}};
  j["max_ratio"] = rep.max_ratio.str();
  j["averaging_bound_holds"] = rep.averaging_holds();
  j["length_bound_holds"] = rep.length_holds();
  return j;
}

}  // namespace vtl
