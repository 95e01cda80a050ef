#pragma once

// Line-oriented text formats for ball caches and domains.
//
//   ball-cache v1 matrix=m11,m12,m21,m22 kind=<abelian2|bundle> gens=<label:p,q,k;...> radius=<r>
//   p q k dist            (one per element, canonical order)
//
//   domain v1 matrix=m11,m12,m21,m22 kind=<abelian2|bundle> gens=<...> seed=<s|none>
//   p q k mult            (one per support element, ordered by (k, p, q))

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vtl/cayley.hpp"
#include "vtl/domain.hpp"
#include "vtl/error.hpp"
#include "vtl/group.hpp"

namespace vtl {

namespace detail {

template <typename Int>
Int parse_int(std::string_view s, ErrorKind kind, std::string_view what) {
  Int v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw Error(kind, "bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string format_matrix(const SL2Matrix& m) {
  return std::to_string(m.m11()) + "," + std::to_string(m.m12()) + "," + std::to_string(m.m21()) + "," +
         std::to_string(m.m22());
}

inline std::string format_gens(const GeneratorSet& gens) {
  std::string s;
  for (std::size_t i = 0; i < gens.positives().size(); ++i) {
    const auto& g = gens.positives()[i];
    if (i) s += ';';
    s += g.label + ":" + std::to_string(g.element.p) + "," + std::to_string(g.element.q) + "," +
         std::to_string(g.element.k);
  }
  return s;
}

inline std::string format_group_header(const TorusBundleGroup& group, const GeneratorSet& gens) {
  return "matrix=" + format_matrix(group.matrix()) +
         " kind=" + (group.kind() == GroupKind::Abelian2 ? "abelian2" : "bundle") + " gens=" + format_gens(gens);
}

/// Parses "magic v1 key=value ..." with exactly the expected keys, in order.
inline std::map<std::string, std::string> parse_header(const std::string& line, std::string_view magic,
                                                       const std::vector<std::string>& keys) {
  auto fields = split(line, ' ');
  if (fields.size() != keys.size() + 2 || fields[0] != magic || fields[1] != "v1") {
    throw Error(ErrorKind::CorruptCache, "bad header line '" + line + "'");
  }
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto f = fields[i + 2];
    const auto eq = f.find('=');
    if (eq == std::string_view::npos || f.substr(0, eq) != keys[i]) {
      throw Error(ErrorKind::CorruptCache, "expected header key '" + keys[i] + "'");
    }
    out[keys[i]] = std::string(f.substr(eq + 1));
  }
  return out;
}

inline TorusBundleGroup parse_group(const std::map<std::string, std::string>& h) {
  const auto m = split(h.at("matrix"), ',');
  if (m.size() != 4) throw Error(ErrorKind::CorruptCache, "matrix needs 4 entries");
  std::int64_t e[4];
  for (int i = 0; i < 4; ++i) e[i] = parse_int<std::int64_t>(m[i], ErrorKind::CorruptCache, "matrix entry");
  const SL2Matrix a = [&] {
    try {
      return SL2Matrix(e[0], e[1], e[2], e[3]);
    } catch (const Error& err) {
      throw Error(ErrorKind::CorruptCache, err.what());
    }
  }();
  const auto& kind = h.at("kind");
  if (kind == "abelian2") {
    if (!a.is_identity()) throw Error(ErrorKind::CorruptCache, "abelian2 requires the identity matrix");
    return TorusBundleGroup::z2();
  }
  if (kind == "bundle") return TorusBundleGroup::bundle(a);
  throw Error(ErrorKind::CorruptCache, "unknown kind '" + kind + "'");
}

inline GeneratorSet parse_gens(const TorusBundleGroup& group, const std::string& text) {
  std::vector<Generator> gens;
  for (auto item : split(text, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos || colon == 0) throw Error(ErrorKind::CorruptCache, "bad generator entry");
    const auto c = split(item.substr(colon + 1), ',');
    if (c.size() != 3) throw Error(ErrorKind::CorruptCache, "generator needs p,q,k");
    gens.push_back({std::string(item.substr(0, colon)),
                    {parse_int<std::int64_t>(c[0], ErrorKind::CorruptCache, "generator p"),
                     parse_int<std::int64_t>(c[1], ErrorKind::CorruptCache, "generator q"),
                     parse_int<std::int32_t>(c[2], ErrorKind::CorruptCache, "generator k")}});
  }
  try {
    GeneratorSet set(group, std::move(gens));
    if (set.positives().size() != split(text, ';').size()) {
      throw Error(ErrorKind::CorruptCache, "duplicate generators in header");
    }
    return set;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CorruptCache) throw;
    throw Error(ErrorKind::CorruptCache, e.what());
  }
}

/// Four whitespace-separated integers "p q k x".
inline std::pair<GroupElement, std::uint64_t> parse_record(const std::string& line) {
  auto f = split(line, ' ');
  if (f.size() != 4) throw Error(ErrorKind::CorruptCache, "record needs 4 fields: '" + line + "'");
  return {{parse_int<std::int64_t>(f[0], ErrorKind::CorruptCache, "p"),
           parse_int<std::int64_t>(f[1], ErrorKind::CorruptCache, "q"),
           parse_int<std::int32_t>(f[2], ErrorKind::CorruptCache, "k")},
          parse_int<std::uint64_t>(f[3], ErrorKind::CorruptCache, "value")};
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  return out;
}

}  // namespace detail

inline void write_ball_cache(const CayleyBall& ball, std::ostream& os) {
  os << "ball-cache v1 " << detail::format_group_header(ball.group(), ball.generators())
     << " radius=" << ball.radius() << '\n';
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& e = ball.elements()[i];
    os << e.p << ' ' << e.q << ' ' << e.k << ' ' << ball.dists()[i] << '\n';
  }
}

inline CayleyBall read_ball_cache(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::CorruptCache, "empty cache");
  const auto h = detail::parse_header(line, "ball-cache", {"matrix", "kind", "gens", "radius"});
  auto group = detail::parse_group(h);
  auto gens = detail::parse_gens(group, h.at("gens"));
  const auto radius = detail::parse_int<std::uint32_t>(h.at("radius"), ErrorKind::CorruptCache, "radius");
  std::vector<GroupElement> elements;
  std::vector<std::uint32_t> dists;
  while (std::getline(is, line)) {
    auto [e, d] = detail::parse_record(line);
    if (d > radius) throw Error(ErrorKind::CorruptCache, "distance beyond radius");
    const auto dist = static_cast<std::uint32_t>(d);
    if (!elements.empty()) {
      const bool ordered = dists.back() < dist || (dists.back() == dist && elements.back() < e);
      if (!ordered || dist > dists.back() + 1) throw Error(ErrorKind::CorruptCache, "records out of order");
    } else if (!e.is_identity() || dist != 0) {
      throw Error(ErrorKind::CorruptCache, "first record must be the identity at distance 0");
    }
    elements.push_back(e);
    dists.push_back(dist);
  }
  if (elements.empty() || dists.back() != radius) throw Error(ErrorKind::CorruptCache, "truncated cache");
  return CayleyBall(std::move(group), std::move(gens), radius, std::move(elements), std::move(dists));
}

/// Reads a cache and checks it was built for the given group and generators.
inline CayleyBall read_ball_cache(std::istream& is, const TorusBundleGroup& group, const GeneratorSet& gens) {
  auto ball = read_ball_cache(is);
  if (!(ball.group() == group) || !(ball.generators() == gens)) {
    throw Error(ErrorKind::ConfigMismatch, "cache was written for a different group or generating set");
  }
  return ball;
}

inline void write_ball_cache(const CayleyBall& ball, const std::string& path) {
  auto out = detail::open_out(path);
  write_ball_cache(ball, out);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

inline CayleyBall read_ball_cache(const std::string& path, const TorusBundleGroup& group, const GeneratorSet& gens) {
  auto in = detail::open_in(path);
  return read_ball_cache(in, group, gens);
}

inline void write_domain(const Domain& d, std::ostream& os) {
  os << "domain v1 " << detail::format_group_header(d.group(), d.generators())
     << " seed=" << (d.seed() ? std::to_string(*d.seed()) : std::string("none")) << '\n';
  for (const auto& e : d.entries()) {
    os << e.element.p << ' ' << e.element.q << ' ' << e.element.k << ' ' << e.mult << '\n';
  }
}

inline Domain read_domain(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::CorruptCache, "empty domain file");
  const auto h = detail::parse_header(line, "domain", {"matrix", "kind", "gens", "seed"});
  auto group = detail::parse_group(h);
  auto gens = detail::parse_gens(group, h.at("gens"));
  std::optional<std::uint64_t> seed;
  if (h.at("seed") != "none") seed = detail::parse_int<std::uint64_t>(h.at("seed"), ErrorKind::CorruptCache, "seed");
  std::vector<DomainEntry> entries;
  while (std::getline(is, line)) {
    auto [e, m] = detail::parse_record(line);
    if (m == 0) throw Error(ErrorKind::CorruptCache, "zero multiplicity record");
    if (!entries.empty() && !(entries.back().element < e)) throw Error(ErrorKind::CorruptCache, "records out of order");
    entries.push_back({e, m});
  }
  if (entries.empty()) throw Error(ErrorKind::CorruptCache, "domain has no records");
  return Domain(std::move(group), std::move(gens), std::move(entries), seed);
}

inline void write_domain(const Domain& d, const std::string& path) {
  auto out = detail::open_out(path);
  write_domain(d, out);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

inline Domain read_domain(const std::string& path) {
  auto in = detail::open_in(path);
  return read_domain(in);
}

}  // namespace vtl
