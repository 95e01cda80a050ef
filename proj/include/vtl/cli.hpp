#pragma once

// Command-line front end: configuration resolution and subcommand dispatch.
//
// Configuration keys can come from a flat key=value file (--config, '#'
// comments) and from --key flags; flags win. Unknown keys are rejected.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vtl/cayley.hpp"
#include "vtl/domain.hpp"
#include "vtl/error.hpp"
#include "vtl/group.hpp"
#include "vtl/io.hpp"
#include "vtl/profiler.hpp"
#include "vtl/transport.hpp"

namespace vtl::cli {

enum class GroupChoice { Z2, Nil, Sol, Custom };

struct RunConfig {
  std::string command;
  GroupChoice group = GroupChoice::Nil;
  std::optional<SL2Matrix> matrix;
  std::vector<std::string> gens;  // empty: default generating set
  std::uint32_t rmax = 10;
  std::uint32_t radius = 4;
  std::optional<std::uint32_t> fit_lo;
  std::optional<std::uint32_t> fit_hi;
  Family family = Family::Balls;
  std::uint32_t n_lo = 3;
  std::uint32_t n_hi = 8;
  std::uint64_t seed = 1;
  Multiplicity max_mult = 1;
  std::uint64_t mass = 40;
  std::uint64_t count = 50;
  std::uint64_t cap = kDefaultElementCap;
  std::uint64_t work_limit = ProfileParams{}.transport_work_limit;
  std::string domain = "singleton";
  std::string out;
  std::string cache;
};

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "group", "matrix", "gens", "rmax", "radius", "fit-lo", "fit-hi", "family", "n-lo", "n-hi", "seed",
      "max-mult", "mass", "count", "cap", "work-limit", "domain", "out", "cache"};
  return keys;
}

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"growth", "ball", "transport", "verify", "profile"};
  return c;
}

inline std::string group_name(GroupChoice g) {
  switch (g) {
    case GroupChoice::Z2: return "z2";
    case GroupChoice::Nil: return "nil";
    case GroupChoice::Sol: return "sol";
    case GroupChoice::Custom: return "custom";
  }
  return "?";
}

namespace detail {

inline std::string normalize_key(std::string k) {
  for (auto& c : k) {
    if (c == '_') c = '-';
  }
  return k;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_number(const std::string& key, const std::string& value) {
  return vtl::detail::parse_int<Int>(value, ErrorKind::BadValue, key);
}

}  // namespace detail

/// Flat key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::BadValue, "config line " + std::to_string(lineno) + " is not key=value");
    }
    const auto key = detail::normalize_key(detail::trim(line.substr(0, eq)));
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw Error(ErrorKind::UnknownKey, "unknown config key '" + key + "'");
    }
    out[key] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

/// Turns resolved key/value pairs into a validated RunConfig.
inline RunConfig resolve(const std::string& command, const std::map<std::string, std::string>& kv) {
  using detail::parse_number;
  RunConfig c;
  if (command.empty()) throw Error(ErrorKind::MissingRequired, "no subcommand given");
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    throw Error(ErrorKind::UnknownKey, "unknown subcommand '" + command + "'");
  }
  c.command = command;
  for (const auto& [key, value] : kv) {
    if (key == "group") {
      if (value == "z2") c.group = GroupChoice::Z2;
      else if (value == "nil") c.group = GroupChoice::Nil;
      else if (value == "sol") c.group = GroupChoice::Sol;
      else if (value == "custom") c.group = GroupChoice::Custom;
      else throw Error(ErrorKind::BadValue, "unknown group '" + value + "'");
    } else if (key == "matrix") {
      auto parts = vtl::detail::split(value, ',');
      if (parts.size() != 4) throw Error(ErrorKind::BadMatrix, "matrix needs 4 comma-separated entries");
      std::int64_t e[4];
      for (int i = 0; i < 4; ++i) e[i] = vtl::detail::parse_int<std::int64_t>(parts[i], ErrorKind::BadMatrix, "entry");
      c.matrix = SL2Matrix(e[0], e[1], e[2], e[3]);
    } else if (key == "gens") {
      c.gens.clear();
      for (auto w : vtl::detail::split(value, ',')) c.gens.emplace_back(detail::trim(std::string(w)));
    } else if (key == "rmax") {
      c.rmax = parse_number<std::uint32_t>(key, value);
    } else if (key == "radius") {
      c.radius = parse_number<std::uint32_t>(key, value);
    } else if (key == "fit-lo") {
      c.fit_lo = parse_number<std::uint32_t>(key, value);
    } else if (key == "fit-hi") {
      c.fit_hi = parse_number<std::uint32_t>(key, value);
    } else if (key == "family") {
      c.family = parse_family(value);
    } else if (key == "n-lo") {
      c.n_lo = parse_number<std::uint32_t>(key, value);
    } else if (key == "n-hi") {
      c.n_hi = parse_number<std::uint32_t>(key, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "max-mult") {
      c.max_mult = parse_number<std::uint64_t>(key, value);
    } else if (key == "mass") {
      c.mass = parse_number<std::uint64_t>(key, value);
    } else if (key == "count") {
      c.count = parse_number<std::uint64_t>(key, value);
    } else if (key == "cap") {
      c.cap = parse_number<std::uint64_t>(key, value);
    } else if (key == "work-limit") {
      c.work_limit = parse_number<std::uint64_t>(key, value);
    } else if (key == "domain") {
      c.domain = value;
    } else if (key == "out") {
      c.out = value;
    } else if (key == "cache") {
      c.cache = value;
    } else {
      throw Error(ErrorKind::UnknownKey, "unknown key '" + key + "'");
    }
  }
  if (c.group == GroupChoice::Custom && !c.matrix) {
    throw Error(ErrorKind::MissingRequired, "--group custom needs --matrix");
  }
  if (c.group != GroupChoice::Custom && c.matrix) {
    throw Error(ErrorKind::BadValue, "--matrix is only valid with --group custom");
  }
  if (c.cap < 1) throw Error(ErrorKind::BadValue, "cap must be >= 1");
  if (c.max_mult < 1) throw Error(ErrorKind::BadValue, "max-mult must be >= 1");
  if (c.mass < 1) throw Error(ErrorKind::BadValue, "mass must be >= 1");
  if (c.n_lo > c.n_hi) throw Error(ErrorKind::BadValue, "n-lo exceeds n-hi");
  return c;
}

/// argv-style arguments (without the program name). A --config file is read
/// first; explicitly given flags override its keys.
inline RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Varopoulos transport toolkit"};
  std::string command;
  std::string config_path;
  app.add_option("command", command, "growth | ball | transport | verify | profile");
  app.add_option("--config", config_path, "key=value configuration file");
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& key : known_keys()) opts[key] = app.add_option("--" + key, flags[key]);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::UnknownKey, e.what());
  }
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + config_path);
    kv = parse_config_text(in);
  }
  for (const auto& [key, opt] : opts) {
    if (opt->count() > 0) kv[key] = flags[key];
  }
  return resolve(command, kv);
}

/// Fully resolved configuration as "# key=value" lines, in fixed key order.
inline std::string echo(const RunConfig& c) {
  std::ostringstream os;
  auto line = [&](const std::string& k, const std::string& v) { os << "# " << k << "=" << v << '\n'; };
  line("command", c.command);
  line("group", group_name(c.group));
  if (c.matrix) line("matrix", vtl::detail::format_matrix(*c.matrix));
  std::string gens;
  for (std::size_t i = 0; i < c.gens.size(); ++i) gens += (i ? "," : "") + c.gens[i];
  line("gens", gens.empty() ? "default" : gens);
  if (c.command == "growth") {
    line("rmax", std::to_string(c.rmax));
  } else if (c.command == "ball") {
    line("radius", std::to_string(c.radius));
  } else if (c.command == "transport") {
    line("domain", c.domain);
    line("mass", std::to_string(c.mass));
    line("max-mult", std::to_string(c.max_mult));
    line("seed", std::to_string(c.seed));
  } else if (c.command == "verify") {
    line("count", std::to_string(c.count));
    line("mass", std::to_string(c.mass));
    line("max-mult", std::to_string(c.max_mult));
    line("seed", std::to_string(c.seed));
    line("rng", kRandomEngineName);
  } else if (c.command == "profile") {
    line("family", to_string(c.family));
    line("n-lo", std::to_string(c.n_lo));
    line("n-hi", std::to_string(c.n_hi));
    line("seed", std::to_string(c.seed));
    line("max-mult", std::to_string(c.max_mult));
    line("work-limit", std::to_string(c.work_limit));
    if (c.family == Family::Random) line("rng", kRandomEngineName);
  }
  line("cap", std::to_string(c.cap));
  return os.str();
}

inline TorusBundleGroup make_group(const RunConfig& c) {
  switch (c.group) {
    case GroupChoice::Z2: return TorusBundleGroup::z2();
    case GroupChoice::Nil: return TorusBundleGroup::nil();
    case GroupChoice::Sol: return TorusBundleGroup::sol();
    case GroupChoice::Custom: return TorusBundleGroup::bundle(*c.matrix);
  }
  throw Error(ErrorKind::BadValue, "unknown group");
}

inline GeneratorSet make_generators(const RunConfig& c, const TorusBundleGroup& g) {
  if (c.gens.empty()) return default_generators(g);
  std::vector<Word> words;
  for (const auto& w : c.gens) words.push_back(Word::parse(w));
  return custom_generators(g, words);
}

/// Domain descriptions: singleton | ball:<n> | box:<p>,<q>,<k> (box [0,p]x[0,q]x[0,k])
/// | random (mass, max-mult, seed) | file:<path>.
inline Domain make_domain(const RunConfig& c, const TorusBundleGroup& g, const GeneratorSet& s) {
  const std::string& spec = c.domain;
  if (spec == "singleton") return Domain(g, s, {{GroupElement::identity(), 1}});
  if (spec.starts_with("ball:")) {
    const auto n = detail::parse_number<std::uint32_t>("domain", spec.substr(5));
    return from_ball(enumerate_ball(g, s, n, c.cap), n);
  }
  if (spec.starts_with("box:")) {
    auto parts = vtl::detail::split(std::string_view(spec).substr(4), ',');
    if (parts.size() != 3) throw Error(ErrorKind::BadValue, "box needs p,q,k");
    const GroupElement hi{vtl::detail::parse_int<std::int64_t>(parts[0], ErrorKind::BadValue, "box p"),
                          vtl::detail::parse_int<std::int64_t>(parts[1], ErrorKind::BadValue, "box q"),
                          vtl::detail::parse_int<std::int32_t>(parts[2], ErrorKind::BadValue, "box k")};
    return from_box(g, s, {0, 0, 0}, hi);
  }
  if (spec == "random") return random_connected(g, s, c.mass, c.max_mult, c.seed);
  if (spec.starts_with("file:")) {
    auto d = read_domain(spec.substr(5));
    if (!(d.group() == g) || !(d.generators() == s)) {
      throw Error(ErrorKind::ConfigMismatch, "domain file was written for a different group or generating set");
    }
    return d;
  }
  throw Error(ErrorKind::BadValue, "unknown domain '" + spec + "'");
}

namespace detail {

inline nlohmann::ordered_json fit_json(const LinearFit& f) {
  return {{"slope", round9(f.slope)}, {"intercept", round9(f.intercept)}, {"r_squared", round9(f.r_squared)}};
}

inline int run_growth(const RunConfig& c, const TorusBundleGroup& g, const GeneratorSet& s, std::ostream& data,
                      std::ostream& out) {
  const auto series = growth_series(g, s, c.rmax, c.cap);
  data << "r,size\n";
  for (std::size_t r = 0; r < series.size(); ++r) data << r << ',' << series[r] << '\n';
  const std::uint32_t lo = c.fit_lo.value_or(std::max<std::uint32_t>(2, c.rmax / 2));
  const std::uint32_t hi = c.fit_hi.value_or(c.rmax);
  nlohmann::ordered_json j;
  j["group"] = group_name(c.group);
  j["fit_lo"] = lo;
  j["fit_hi"] = hi;
  try {
    j["polynomial"] = fit_json(growth_exponent(series, lo, hi));
    j["exponential"] = fit_json(growth_rate(series, lo, hi));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateFit) throw;
    j["polynomial"] = nullptr;
    j["exponential"] = nullptr;
  }
  out << j.dump() << '\n';
  return 0;
}

inline std::string default_cache_path(const RunConfig& c) {
  if (!c.cache.empty()) return c.cache;
  const char* dir = std::getenv("VTL_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return "";
  std::string name = "ball-" + group_name(c.group);
  if (c.matrix) name += "-" + vtl::detail::format_matrix(*c.matrix);
  for (const auto& w : c.gens) name += "-" + w;
  return (std::filesystem::path(dir) / (name + "-r" + std::to_string(c.radius) + ".txt")).string();
}

inline int run_ball(const RunConfig& c, const TorusBundleGroup& g, const GeneratorSet& s, std::ostream& out) {
  const auto path = default_cache_path(c);
  std::optional<CayleyBall> ball;
  bool loaded = false;
  if (!path.empty() && std::filesystem::exists(path)) {
    auto cached = read_ball_cache(path, g, s);
    if (cached.radius() == c.radius) {
      ball.emplace(std::move(cached));
      loaded = true;
    }
  }
  if (!ball) ball.emplace(enumerate_ball(g, s, c.radius, c.cap));
  if (!path.empty() && !loaded) write_ball_cache(*ball, path);
  nlohmann::ordered_json j;
  j["group"] = group_name(c.group);
  j["radius"] = ball->radius();
  j["size"] = ball->size();
  j["sizes"] = ball->sizes();
  j["valence"] = s.valence();
  j["cache"] = path.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(path);
  j["cache_loaded"] = loaded;
  out << j.dump() << '\n';
  return 0;
}

inline int run_transport(const RunConfig& c, const TorusBundleGroup& g, const GeneratorSet& s, std::ostream& data) {
  const auto d = make_domain(c, g, s);
  const auto rep = compute_report(d, radius_ball(d, c.cap));
  auto j = to_json(rep);
  data << j.dump(2) << '\n';
  if (!rep.holds()) throw Error(ErrorKind::InvariantViolation, describe_violation(rep));
  return 0;
}

inline int run_verify(const RunConfig& c, const TorusBundleGroup& g, const GeneratorSet& s, std::ostream& data,
                      std::ostream& out) {
  std::mt19937_64 rng(c.seed);
  std::uint64_t passed = 0;
  data << "index,seed,target_mass,mass,gradient,radius,total_transport,ball_size,max_ratio,holds\n";
  for (std::uint64_t i = 0; i < c.count; ++i) {
    const std::uint64_t target = 1 + vtl::detail::uniform_below(rng, c.mass);
    const std::uint64_t seed = rng();
    const auto d = random_connected(g, s, target, c.max_mult, seed);
    const auto rep = compute_report(d, radius_ball(d, c.cap));
    passed += rep.holds() ? 1 : 0;
    data << i << ',' << seed << ',' << target << ',' << rep.mass << ',' << rep.gradient << ',' << rep.radius << ','
         << rep.total_transport << ',' << rep.ball_size << ',' << rep.max_ratio.str() << ','
         << (rep.holds() ? "yes" : "no") << '\n';
  }
  nlohmann::ordered_json j;
  j["group"] = group_name(c.group);
  j["checked"] = c.count;
  j["held"] = passed;
  out << j.dump() << '\n';
  if (passed != c.count) {
    throw Error(ErrorKind::InvariantViolation, std::to_string(c.count - passed) +
                                                   " domains violate the averaging or length transport bound");
  }
  return 0;
}

inline int run_profile(const RunConfig& c, const TorusBundleGroup& g, const GeneratorSet& s, std::ostream& data,
                       std::ostream& out) {
  ProfileParams p;
  p.seed = c.seed;
  p.max_mult = c.max_mult;
  p.transport_work_limit = c.work_limit;
  p.element_cap = c.cap;
  auto points = isoperimetric_profile(g, s, c.family, c.n_lo, c.n_hi, p);
  write_profile_csv(data, group_name(c.group), points);
  nlohmann::ordered_json j;
  j["group"] = group_name(c.group);
  j["family"] = to_string(c.family);
  try {
    j.update(to_json(make_report(g, std::move(points))));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateFit && e.kind() != ErrorKind::DegenerateInput) throw;
    j["fit"] = nullptr;
    j["fit_error"] = e.what();
  }
  out << j.dump() << '\n';
  return 0;
}

}  // namespace detail

/// Runs the configured subcommand. `out` receives the config echo and
/// summaries; data (CSV or report) goes to c.out if set, otherwise to `out`.
/// Returns the process exit status.
inline int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    out << echo(c);
    const auto g = make_group(c);
    const auto s = make_generators(c, g);
    std::ofstream file;
    if (!c.out.empty()) file = vtl::detail::open_out(c.out);
    std::ostream& data = c.out.empty() ? out : file;
    int rc = 0;
    if (c.command == "growth") rc = detail::run_growth(c, g, s, data, out);
    else if (c.command == "ball") rc = detail::run_ball(c, g, s, out);
    else if (c.command == "transport") rc = detail::run_transport(c, g, s, data);
    else if (c.command == "verify") rc = detail::run_verify(c, g, s, data, out);
    else if (c.command == "profile") rc = detail::run_profile(c, g, s, data, out);
    if (file.is_open()) {
      file.close();
      if (!file) throw Error(ErrorKind::Io, "write failed for " + c.out);
    }
    return rc;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

/// parse_config + dispatch with the error-to-exit-code mapping.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_config(args);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return dispatch(c, out, err);
}

}  // namespace vtl::cli
