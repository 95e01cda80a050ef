#pragma once

// Finite domains in a Cayley graph: a multiplicity function phi with finite
// support, its mass, the Varopoulos boundary (edges whose endpoint values
// differ, with phi = 0 off the support) and the gradient norm.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vtl/cayley.hpp"
#include "vtl/element_index.hpp"
#include "vtl/error.hpp"
#include "vtl/group.hpp"

namespace vtl {

using Multiplicity = std::uint64_t;

struct DomainEntry {
  GroupElement element;
  Multiplicity mult = 0;

  bool operator==(const DomainEntry&) const = default;
};

class Domain {
 public:
  /// Zero multiplicities are dropped; repeated elements are rejected.
  Domain(TorusBundleGroup group, GeneratorSet gens, std::vector<DomainEntry> entries,
         std::optional<std::uint64_t> seed = std::nullopt)
      : group_(std::move(group)), gens_(std::move(gens)), seed_(seed) {
    std::erase_if(entries, [](const DomainEntry& e) { return e.mult == 0; });
    std::sort(entries.begin(), entries.end(),
              [](const DomainEntry& a, const DomainEntry& b) { return a.element < b.element; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].element == entries[i - 1].element) {
        throw Error(ErrorKind::BadValue, "element " + to_string(entries[i].element) + " listed twice");
      }
    }
    if (entries.empty()) throw Error(ErrorKind::BadValue, "domain has empty support");
    index_ = ElementIndex(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (group_.kind() == GroupKind::Abelian2 && entries[i].element.k != 0) {
        throw Error(ErrorKind::BadValue, "Z^2 element with nonzero fiber coordinate");
      }
      index_.insert(entries[i].element, static_cast<std::uint32_t>(i));
      mass_ += entries[i].mult;
      characteristic_ = characteristic_ && entries[i].mult == 1;
    }
    entries_ = std::move(entries);
  }

  const TorusBundleGroup& group() const { return group_; }
  const GeneratorSet& generators() const { return gens_; }
  const std::vector<DomainEntry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  std::optional<std::uint64_t> seed() const { return seed_; }
  bool is_characteristic() const { return characteristic_; }

  /// Total mass: sum of multiplicities.
  std::uint64_t mass() const { return mass_; }

  Multiplicity phi(const GroupElement& g) const {
    const auto i = index_.find(g);
    return i == ElementIndex::npos ? 0 : entries_[i].mult;
  }

  bool contains(const GroupElement& g) const { return index_.contains(g); }

  /// Every multiplicity multiplied by `factor` (>= 1).
  Domain scaled(Multiplicity factor) const {
    if (factor == 0) throw Error(ErrorKind::BadValue, "scale factor must be >= 1");
    auto e = entries_;
    for (auto& x : e) x.mult *= factor;
    return Domain(group_, gens_, std::move(e), seed_);
  }

  bool operator==(const Domain& o) const {
    return group_ == o.group_ && gens_ == o.gens_ && entries_ == o.entries_ && seed_ == o.seed_;
  }

 private:
  TorusBundleGroup group_;
  GeneratorSet gens_;
  std::vector<DomainEntry> entries_;
  ElementIndex index_;
  std::uint64_t mass_ = 0;
  bool characteristic_ = true;
  std::optional<std::uint64_t> seed_;
};

inline std::uint64_t mass(const Domain& d) { return d.mass(); }

/// Characteristic function of B(n), n <= ball radius.
inline Domain from_ball(const CayleyBall& ball, std::uint32_t n) {
  if (n > ball.radius()) {
    throw Error(ErrorKind::RadiusExceeded,
                "domain radius " + std::to_string(n) + " > ball radius " + std::to_string(ball.radius()));
  }
  std::vector<DomainEntry> entries;
  entries.reserve(ball.size_at(n));
  for (std::size_t i = 0; i < ball.size_at(n); ++i) entries.push_back({ball.elements()[i], 1});
  return Domain(ball.group(), ball.generators(), std::move(entries));
}

/// Characteristic function of the coordinate box lo <= (p,q,k) <= hi.
/// In Z^2 the fiber bounds are ignored.
inline Domain from_box(const TorusBundleGroup& group, const GeneratorSet& gens, const GroupElement& lo,
                       const GroupElement& hi) {
  const bool planar = group.kind() == GroupKind::Abelian2;
  const std::int32_t klo = planar ? 0 : lo.k;
  const std::int32_t khi = planar ? 0 : hi.k;
  if (lo.p > hi.p || lo.q > hi.q || klo > khi) throw Error(ErrorKind::EmptyBox, "lo exceeds hi");
  std::vector<DomainEntry> entries;
  for (std::int32_t k = klo; k <= khi; ++k) {
    for (std::int64_t p = lo.p; p <= hi.p; ++p) {
      for (std::int64_t q = lo.q; q <= hi.q; ++q) entries.push_back({{p, q, k}, 1});
    }
  }
  return Domain(group, gens, std::move(entries));
}

/// Name of the PRNG used by random_connected; recorded in outputs.
inline constexpr const char* kRandomEngineName = "mt19937_64";

namespace detail {

/// Uniform draw in [0, n) by rejection; independent of the standard
/// library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace detail

/// Grows a connected support from the identity by repeatedly adding a
/// uniformly chosen unvisited neighbor of the support; multiplicities are
/// uniform in [1, max_mult]. Stops once the mass reaches target_mass.
inline Domain random_connected(const TorusBundleGroup& group, const GeneratorSet& gens, std::uint64_t target_mass,
                               Multiplicity max_mult, std::uint64_t seed) {
  if (target_mass < 1) throw Error(ErrorKind::BadValue, "target mass must be >= 1");
  if (max_mult < 1) throw Error(ErrorKind::BadValue, "max multiplicity must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<DomainEntry> entries;
  ElementIndex seen;  // support and frontier
  std::vector<GroupElement> frontier;
  std::uint64_t total = 0;

  auto add = [&](const GroupElement& g) {
    const Multiplicity m = 1 + detail::uniform_below(rng, max_mult);
    entries.push_back({g, m});
    total += m;
    for (const auto& n : neighbors(group, gens, g)) {
      if (seen.contains(n)) continue;
      seen.insert(n, 0);
      frontier.push_back(n);
    }
  };

  seen.insert(GroupElement::identity(), 0);
  add(GroupElement::identity());
  while (total < target_mass) {
    const auto pick = detail::uniform_below(rng, frontier.size());
    const GroupElement g = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    add(g);
  }
  return Domain(group, gens, std::move(entries), seed);
}

struct BoundaryEdge {
  GroupElement from;
  std::size_t via = 0;  // index into the positive generators
  GroupElement to;
  std::uint64_t delta = 0;

  bool operator==(const BoundaryEdge&) const = default;
};

namespace detail {

inline std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

/// Visits each canonical edge (v, v*s), s positive, with phi(v) != phi(v*s)
/// exactly once: forward edges from every support vertex, backward edges
/// only when the source lies off the support.
template <typename Visit>
void for_each_boundary_edge(const Domain& d, Visit&& visit) {
  const auto& group = d.group();
  const auto& pos = d.generators().positives();
  std::vector<GroupElement> inverses;
  for (const auto& s : pos) inverses.push_back(group.inverse(s.element));
  for (const auto& [v, mv] : d.entries()) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const GroupElement w = group.multiply(v, pos[i].element);
      const Multiplicity mw = d.phi(w);
      if (mw != mv) visit(BoundaryEdge{v, i, w, abs_diff(mv, mw)});
      const GroupElement u = group.multiply(v, inverses[i]);
      if (!d.contains(u)) visit(BoundaryEdge{u, i, v, mv});
    }
  }
}

}  // namespace detail

/// Edges of the Varopoulos boundary, sorted by (from, via).
inline std::vector<BoundaryEdge> varopoulos_boundary(const Domain& d) {
  std::vector<BoundaryEdge> out;
  detail::for_each_boundary_edge(d, [&](const BoundaryEdge& e) { out.push_back(e); });
  std::sort(out.begin(), out.end(), [](const BoundaryEdge& a, const BoundaryEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.via < b.via;
  });
  return out;
}

/// Sum of |phi(to) - phi(from)| over the Varopoulos boundary.
inline std::uint64_t gradient(const Domain& d) {
  std::uint64_t total = 0;
  detail::for_each_boundary_edge(d, [&](const BoundaryEdge& e) { total += e.delta; });
  return total;
}

/// phi'(gamma * sigma) = phi(sigma).
inline Domain translate_left(const Domain& d, const GroupElement& gamma) {
  std::vector<DomainEntry> out;
  out.reserve(d.support_size());
  for (const auto& e : d.entries()) out.push_back({d.group().multiply(gamma, e.element), e.mult});
  return Domain(d.group(), d.generators(), std::move(out), d.seed());
}

}  // namespace vtl
