#include "fracns/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fracns/field_io.hpp"
#include "fracns/rng.hpp"

namespace fracns {

namespace {

struct Key {
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class T>
T parse_value(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (!is || !(is >> std::ws).eof()) throw Error("config key '" + key + "': cannot parse '" + v + "'");
  return out;
}

#define FRACNS_NUM(field)                                                               \
  Key {                                                                                 \
    #field, [](const RunConfig& c) { return fmt_num(static_cast<double>(c.field)); },   \
        [](RunConfig& c, const std::string& v) { c.field = parse_value<decltype(c.field)>(#field, v); } \
  }
#define FRACNS_INT(field)                                                               \
  Key {                                                                                 \
    #field, [](const RunConfig& c) { return std::to_string(c.field); },                 \
        [](RunConfig& c, const std::string& v) { c.field = parse_value<decltype(c.field)>(#field, v); } \
  }
#define FRACNS_STR(field)                                                               \
  Key {                                                                                 \
    #field, [](const RunConfig& c) { return c.field; }, [](RunConfig& c, const std::string& v) { c.field = v; } \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      FRACNS_INT(d),          FRACNS_INT(n),         FRACNS_NUM(alpha),         FRACNS_NUM(s),
      FRACNS_INT(seed),       FRACNS_STR(distribution), FRACNS_STR(data),       FRACNS_INT(cutoff),
      FRACNS_NUM(amplitude),  FRACNS_NUM(delta),     FRACNS_NUM(T),             FRACNS_NUM(dt),
      FRACNS_NUM(tau_threshold), FRACNS_NUM(tol),    FRACNS_INT(max_iter),      FRACNS_NUM(grading),
      FRACNS_INT(tau_grid),   FRACNS_NUM(tau_grading),   FRACNS_NUM(overlap_tol), FRACNS_NUM(gronwall_c),  FRACNS_INT(snapshots),
      FRACNS_INT(mc_samples),      FRACNS_INT(threads),    FRACNS_STR(output),
  };
  return k;
}

#undef FRACNS_NUM
#undef FRACNS_INT
#undef FRACNS_STR

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(*this) + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const {
  // The output directory does not change the computation.
  RunConfig c = *this;
  c.output.clear();
  c.threads = 0;
  return fnv1a(c.serialize());
}

ProblemParams RunConfig::validate() const {
  const ProblemParams p = derive_params(d, alpha, s);
  if (n < 8 || (n & (n - 1)) != 0) throw ParamError("N must be a power of two >= 8");
  if (data == "randomized" && (cutoff < 1 || cutoff >= n / 2)) throw ParamError("cutoff must lie in [1, N/2)");
  if (data != "randomized" && data != "taylor_green" && data != "zero")
    throw ParamError("data must be randomized, taylor_green or zero");
  if (!(T > 0.0) || !(dt > 0.0) || dt > T) throw ParamError("need 0 < dt <= T");
  if (!(tau_threshold > 0.0) || !(tol > 0.0)) throw ParamError("tau_threshold and tol must be positive");
  if (!(grading >= 1.0) || !(tau_grading >= 1.0)) throw ParamError("grading exponents must be >= 1");
  if (tau_grid < 2) throw ParamError("tau_grid must be >= 2");
  try {
    parse_distribution(distribution);
  } catch (const std::invalid_argument& e) {
    throw ParamError(e.what());
  }
  return p;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    bool found = false;
    for (const auto& k : keys())
      if (key == k.name) {
        k.set(cfg, value);
        found = true;
      }
    if (!found) throw Error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fracns
