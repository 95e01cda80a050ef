#pragma once

// Cayley graphs of torus-bundle groups: generating sets, neighbor expansion,
// breadth-first ball enumeration and growth series.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vtl/element_index.hpp"
#include "vtl/error.hpp"
#include "vtl/group.hpp"

namespace vtl {

inline constexpr std::size_t kDefaultElementCap = 50'000'000;

struct Generator {
  std::string label;
  GroupElement element;

  bool operator==(const Generator&) const = default;
};

/// Positive generators plus their symmetric closure (positives, then the
/// inverses not already present). Canonical undirected edges are
/// {v, v*s} for s in positives only.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  /// Builds the closure; deduplicates elements. Rejects the identity.
  GeneratorSet(const TorusBundleGroup& group, std::vector<Generator> positives) {
    for (auto& g : positives) {
      if (g.element.is_identity()) throw Error(ErrorKind::IdentityGenerator, "generator " + g.label + " is trivial");
      if (std::find(closure_.begin(), closure_.end(), g.element) != closure_.end()) continue;
      if (group.inverse(g.element) == g.element) {
        throw Error(ErrorKind::DuplicateGenerator, "generator " + g.label + " is an involution");
      }
      closure_.push_back(g.element);
      closure_labels_.push_back(g.label);
      positives_.push_back(std::move(g));
      closure_.push_back(group.inverse(positives_.back().element));
      closure_labels_.push_back(positives_.back().label + "^-1");
    }
    // Reorder to positives first, inverses after.
    std::vector<GroupElement> ordered;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < closure_.size(); i += 2) {
      ordered.push_back(closure_[i]);
      labels.push_back(closure_labels_[i]);
    }
    for (std::size_t i = 1; i < closure_.size(); i += 2) {
      if (std::find(ordered.begin(), ordered.end(), closure_[i]) != ordered.end()) {
        throw Error(ErrorKind::DuplicateGenerator, "inverse of " + closure_labels_[i - 1] + " is another generator");
      }
      ordered.push_back(closure_[i]);
      labels.push_back(closure_labels_[i]);
    }
    closure_ = std::move(ordered);
    closure_labels_ = std::move(labels);
  }

  const std::vector<Generator>& positives() const { return positives_; }
  const std::vector<GroupElement>& closure() const { return closure_; }
  const std::vector<std::string>& closure_labels() const { return closure_labels_; }
  std::size_t valence() const { return closure_.size(); }

  bool operator==(const GeneratorSet& o) const { return positives_ == o.positives_; }

 private:
  std::vector<Generator> positives_;
  std::vector<GroupElement> closure_;
  std::vector<std::string> closure_labels_;
};

/// Evaluates the words, drops duplicates (including a word equal to the
/// inverse of an earlier one) and forms the symmetric closure.
inline GeneratorSet custom_generators(const TorusBundleGroup& group, const std::vector<Word>& words) {
  std::vector<Generator> gens;
  std::vector<GroupElement> seen;
  for (const auto& w : words) {
    GroupElement e = evaluate_word(group, w);
    if (e.is_identity()) throw Error(ErrorKind::IdentityGenerator, "word " + w.str() + " evaluates to the identity");
    if (std::find(seen.begin(), seen.end(), e) != seen.end()) continue;
    seen.push_back(e);
    seen.push_back(group.inverse(e));
    gens.push_back({w.str(), e});
  }
  return GeneratorSet(group, std::move(gens));
}

/// Generating sets of codimension-one face neighbors of the fundamental
/// domain: Z^2 {a, b}; Heisenberg {b, c, t, tb} with c = b^-1 a (valence 8);
/// Sol {d, t, c1c2, td^-1, tc2^-1c1^-1, tb1c1^-1} with d = ab, c1 = ab1,
/// c2 = b2a, b1b2 = b (valence 12).
inline GeneratorSet default_generators(const TorusBundleGroup& group) {
  auto eval = [&](const char* label, const char* word) {
    return Generator{label, evaluate_word(group, Word::parse(word))};
  };
  if (group.kind() == GroupKind::Abelian2) {
    return GeneratorSet(group, {eval("a", "a"), eval("b", "b")});
  }
  if (group.matrix() == SL2Matrix(1, 1, 0, 1)) {
    return GeneratorSet(group, {eval("b", "b"), eval("c", "Ba"), eval("t", "t"), eval("tb", "tb")});
  }
  if (group.matrix() == SL2Matrix(2, 1, 1, 1)) {
    // The subdivided letters cancel in every word: c1c2 = a b1 b2 a = aba,
    // t c2^-1 c1^-1 = t (aba)^-1, t b1 c1^-1 = t a^-1.
    return GeneratorSet(group, {eval("d", "ab"), eval("t", "t"), eval("c1c2", "aba"), eval("td^-1", "tBA"),
                                eval("tc2^-1c1^-1", "tABA"), eval("tb1c1^-1", "tA")});
  }
  throw Error(ErrorKind::UnsupportedGroup, "no default generating set for this matrix; pass explicit generators");
}

/// Right translates g*s for s in the closure, in closure order.
inline std::vector<GroupElement> neighbors(const TorusBundleGroup& group, const GeneratorSet& gens,
                                           const GroupElement& g) {
  std::vector<GroupElement> out;
  out.reserve(gens.valence());
  for (const auto& s : gens.closure()) out.push_back(group.multiply(g, s));
  return out;
}

/// Word-metric ball around the identity. Elements are stored in canonical
/// order (dist, k, p, q); sizes[i] = |B(i)|.
class CayleyBall {
 public:
  CayleyBall(TorusBundleGroup group, GeneratorSet gens, std::uint32_t radius, std::vector<GroupElement> elements,
             std::vector<std::uint32_t> dists)
      : group_(std::move(group)),
        gens_(std::move(gens)),
        radius_(radius),
        elements_(std::move(elements)),
        dists_(std::move(dists)),
        index_(elements_.size()) {
    sizes_.assign(radius_ + 1, 0);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      index_.insert(elements_[i], static_cast<std::uint32_t>(i));
      if (dists_[i] > radius_) throw Error(ErrorKind::CorruptCache, "distance beyond radius");
      ++sizes_[dists_[i]];
    }
    for (std::size_t i = 1; i < sizes_.size(); ++i) sizes_[i] += sizes_[i - 1];
  }

  const TorusBundleGroup& group() const { return group_; }
  const GeneratorSet& generators() const { return gens_; }
  std::uint32_t radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const std::vector<std::uint32_t>& dists() const { return dists_; }
  const std::vector<std::uint64_t>& sizes() const { return sizes_; }

  /// |B(r)| for r <= radius.
  std::uint64_t size_at(std::uint32_t r) const { return sizes_.at(r); }

  std::optional<std::uint32_t> word_length(const GroupElement& g) const {
    const auto i = index_.find(g);
    if (i == ElementIndex::npos) return std::nullopt;
    return dists_[i];
  }

  bool contains(const GroupElement& g) const { return index_.contains(g); }

  /// Closure indices of one shortest word for g, first letter first, by
  /// descending through elements one step closer to the identity.
  std::vector<std::size_t> geodesic(const GroupElement& g) const {
    auto d = word_length(g);
    if (!d) throw Error(ErrorKind::RadiusExceeded, "element " + to_string(g) + " outside the ball");
    std::vector<std::size_t> rev;
    GroupElement cur = g;
    while (*d > 0) {
      bool stepped = false;
      for (std::size_t s = 0; s < gens_.valence() && !stepped; ++s) {
        GroupElement prev = group_.multiply(cur, group_.inverse(gens_.closure()[s]));
        auto pd = word_length(prev);
        if (pd && *pd + 1 == *d) {
          rev.push_back(s);
          cur = prev;
          d = pd;
          stepped = true;
        }
      }
      if (!stepped) throw Error(ErrorKind::InvariantViolation, "no BFS parent for " + to_string(cur));
    }
    return {rev.rbegin(), rev.rend()};
  }

  bool operator==(const CayleyBall& o) const {
    return group_ == o.group_ && gens_ == o.gens_ && radius_ == o.radius_ && elements_ == o.elements_ &&
           dists_ == o.dists_;
  }

 private:
  TorusBundleGroup group_;
  GeneratorSet gens_;
  std::uint32_t radius_;
  std::vector<GroupElement> elements_;
  std::vector<std::uint32_t> dists_;
  std::vector<std::uint64_t> sizes_;
  ElementIndex index_;
};

/// Level-by-level BFS from the identity; grow() adds one sphere.
class BallBuilder {
 public:
  BallBuilder(TorusBundleGroup group, GeneratorSet gens, std::size_t cap = kDefaultElementCap)
      : group_(std::move(group)), gens_(std::move(gens)), cap_(cap) {
    if (cap_ < 1) throw Error(ErrorKind::BadValue, "element cap must be >= 1");
    elements_.push_back(GroupElement::identity());
    dists_.push_back(0);
    index_.insert(GroupElement::identity(), 0);
    sizes_.push_back(1);
  }

  std::uint32_t radius() const { return static_cast<std::uint32_t>(sizes_.size() - 1); }
  std::uint64_t size() const { return elements_.size(); }
  const std::vector<std::uint64_t>& sizes() const { return sizes_; }

  void grow() {
    const std::size_t begin = sizes_.size() == 1 ? 0 : sizes_[sizes_.size() - 2];
    const std::size_t end = elements_.size();
    const std::uint32_t next = radius() + 1;
    std::vector<GroupElement> sphere;
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& s : gens_.closure()) {
        GroupElement n = group_.multiply(elements_[i], s);
        if (index_.contains(n)) continue;
        if (elements_.size() + sphere.size() >= cap_) {
          throw Error(ErrorKind::ResourceLimit,
                      "ball of radius " + std::to_string(next) + " exceeds element cap " + std::to_string(cap_));
        }
        index_.insert(n, ElementIndex::npos - 1);
        sphere.push_back(n);
      }
    }
    std::sort(sphere.begin(), sphere.end());
    elements_.insert(elements_.end(), sphere.begin(), sphere.end());
    dists_.insert(dists_.end(), sphere.size(), next);
    sizes_.push_back(elements_.size());
  }

  void grow_to(std::uint32_t r) {
    while (radius() < r) grow();
  }

  CayleyBall build() const { return CayleyBall(group_, gens_, radius(), elements_, dists_); }

 private:
  TorusBundleGroup group_;
  GeneratorSet gens_;
  std::size_t cap_;
  std::vector<GroupElement> elements_;
  std::vector<std::uint32_t> dists_;
  std::vector<std::uint64_t> sizes_;
  ElementIndex index_;
};

inline CayleyBall enumerate_ball(const TorusBundleGroup& group, const GeneratorSet& gens, std::uint32_t r,
                                 std::size_t cap = kDefaultElementCap) {
  BallBuilder b(group, gens, cap);
  b.grow_to(r);
  return b.build();
}

/// [|B(0)|, ..., |B(rmax)|].
inline std::vector<std::uint64_t> growth_series(const TorusBundleGroup& group, const GeneratorSet& gens,
                                                std::uint32_t rmax, std::size_t cap = kDefaultElementCap) {
  BallBuilder b(group, gens, cap);
  b.grow_to(rmax);
  return b.sizes();
}

inline std::optional<std::uint32_t> word_length(const CayleyBall& ball, const GroupElement& g) {
  return ball.word_length(g);
}

}  // namespace vtl
