#include "lame/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lame/error.hpp"

namespace lame::app {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) bad(where + " must be a JSON object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) bad("unknown key '" + k + "' in " + where);
}

double number(const json& v, const std::string& what) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    bad(what + " must be a number");
  }
  if (!v.is_number()) bad(what + " must be a number");
  const double d = v.get<double>();
  if (std::isnan(d)) bad(what + " is NaN");
  return d;
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) bad(what + " must be an integer");
  return v.get<int>();
}

template <class T, class Fn>
void maybe(const json& obj, const char* key, T& out, Fn&& conv) {
  if (auto it = obj.find(key); it != obj.end()) out = conv(*it, key);
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) bad(what + " must be a string");
  return v.get<std::string>();
}

json num_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

}  // namespace

void RunConfig::validate() const {
  try {
    (void)grid();
    (void)params();
    (void)time();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidParameter) throw;
    bad(e.what());
  }
  if (!std::isfinite(delta)) bad("delta must be finite");
  if (potential.type != "inverse_square" && potential.type != "bounded_compact" && potential.type != "file")
    bad("unknown potential type '" + potential.type + "'");
  if (potential.type == "inverse_square" && !(epsilon() > 0.0))
    throw Error(ErrorKind::InvalidRegularization, "inverse-square potential needs epsilon > 0");
  if (potential.type == "file" && potential.path.empty()) bad("file potential needs a path");
  if (potential.type == "bounded_compact" && !(potential.radius > 0.0)) bad("potential radius must be positive");
  if (!is_family(data.family)) bad("unknown data family '" + data.family + "'");
  if (!(data.support_radius > 0.0)) bad("support_radius must be positive");
  if (!(tol > 0.0)) bad("picard.tol must be positive");
  if (max_iter < 1) bad("picard.max_iter must be >= 1");
  const auto& e = estimates;
  if (!(e.p >= 1.0 && e.p <= 0.5 * n)) throw Error(ErrorKind::InvalidExponent, "estimates.p must lie in [1, n/2]");
  if (!(e.p > 0.5 * (n - 1))) throw Error(ErrorKind::InvalidExponent, "estimates.p must exceed (n-1)/2");
  const double dw = e.weight_exponent();
  if (!(dw > 1.0 && dw < e.p)) bad("estimates.delta_weight must lie in (1, p)");
  if (e.stride < 1) bad("estimates.stride must be >= 1");
  if (e.radii < 0) bad("estimates.radii must be >= 0");
  for (const auto& f : e.families)
    if (!is_family(f)) bad("unknown data family '" + f + "' in estimates.families");
  if (!(e.refinement_tolerance > 0.0)) bad("estimates.refinement_tolerance must be positive");
  if (N < 4) bad("grid.N must be >= 4");
}

void RunConfig::validate_window() const {
  const double cp = params().pressure_speed();
  const double limit = (0.5 * L - data.support_radius) / cp;
  if (T > limit * (1.0 + 1e-12))
    bad("T exceeds the finite-speed window (L_side/2 - support_radius)/c_P = " + std::to_string(limit));
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "config", {"grid", "lame", "delta", "potential", "time", "data", "picard", "estimates", "output"});
  RunConfig c;
  auto num = [](const json& v, const char* k) { return number(v, k); };
  auto inum = [](const json& v, const char* k) { return integer(v, k); };
  auto str = [](const json& v, const char* k) { return text(v, k); };

  if (j.contains("grid")) {
    const json& g = j["grid"];
    only_keys(g, "grid", {"n", "N", "L_side"});
    maybe(g, "n", c.n, inum);
    maybe(g, "N", c.N, inum);
    maybe(g, "L_side", c.L, num);
  }
  if (j.contains("lame")) {
    const json& l = j["lame"];
    only_keys(l, "lame", {"lambda", "mu"});
    maybe(l, "lambda", c.lambda, num);
    maybe(l, "mu", c.mu, num);
  }
  maybe(j, "delta", c.delta, num);
  if (j.contains("potential")) {
    const json& p = j["potential"];
    only_keys(p, "potential", {"type", "amplitude", "epsilon", "radius", "path"});
    maybe(p, "type", c.potential.type, str);
    maybe(p, "amplitude", c.potential.amplitude, num);
    if (p.contains("epsilon")) c.potential.epsilon = number(p["epsilon"], "epsilon");
    maybe(p, "radius", c.potential.radius, num);
    maybe(p, "path", c.potential.path, str);
  }
  if (j.contains("time")) {
    const json& t = j["time"];
    only_keys(t, "time", {"T", "M"});
    maybe(t, "T", c.T, num);
    maybe(t, "M", c.M, inum);
  }
  if (j.contains("data")) {
    const json& d = j["data"];
    only_keys(d, "data", {"family", "seed", "support_radius"});
    maybe(d, "family", c.data.family, str);
    if (d.contains("seed")) {
      if (!d["seed"].is_number_unsigned() && !(d["seed"].is_number_integer() && d["seed"].get<long long>() >= 0))
        bad("seed must be a nonnegative integer");
      c.data.seed = d["seed"].get<std::uint64_t>();
    }
    maybe(d, "support_radius", c.data.support_radius, num);
  }
  if (j.contains("picard")) {
    const json& p = j["picard"];
    only_keys(p, "picard", {"tol", "max_iter"});
    maybe(p, "tol", c.tol, num);
    maybe(p, "max_iter", c.max_iter, inum);
  }
  if (j.contains("estimates")) {
    const json& e = j["estimates"];
    only_keys(e, "estimates",
              {"pairs", "p", "delta_weight", "stride", "radii", "deltas", "families", "ceiling", "refinement_tolerance"});
    auto& s = c.estimates;
    if (e.contains("pairs")) {
      if (!e["pairs"].is_array()) bad("estimates.pairs must be an array of [q, r]");
      s.pairs.clear();
      for (const auto& pr : e["pairs"]) {
        if (!pr.is_array() || pr.size() != 2) bad("each pair must be [q, r]");
        s.pairs.emplace_back(number(pr[0], "q"), number(pr[1], "r"));
      }
    }
    maybe(e, "p", s.p, num);
    if (e.contains("delta_weight") && !e["delta_weight"].is_null()) s.delta_weight = number(e["delta_weight"], "delta_weight");
    maybe(e, "stride", s.stride, inum);
    maybe(e, "radii", s.radii, inum);
    if (e.contains("deltas")) {
      if (!e["deltas"].is_array()) bad("estimates.deltas must be an array");
      s.deltas.clear();
      for (const auto& d : e["deltas"]) s.deltas.push_back(number(d, "deltas"));
    }
    if (e.contains("families")) {
      if (!e["families"].is_array()) bad("estimates.families must be an array");
      s.families.clear();
      for (const auto& f : e["families"]) s.families.push_back(text(f, "families"));
    }
    if (e.contains("ceiling") && !e["ceiling"].is_null()) s.ceiling = number(e["ceiling"], "ceiling");
    maybe(e, "refinement_tolerance", s.refinement_tolerance, num);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    only_keys(o, "output", {"trace", "report"});
    maybe(o, "trace", c.output.trace, str);
    maybe(o, "report", c.output.report, str);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::InvalidConfig, "cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  json j;
  j["grid"] = {{"n", c.n}, {"N", c.N}, {"L_side", c.L}};
  j["lame"] = {{"lambda", c.lambda}, {"mu", c.mu}};
  j["delta"] = c.delta;
  j["potential"] = {{"type", c.potential.type}, {"amplitude", c.potential.amplitude}, {"epsilon", c.epsilon()},
                    {"radius", c.potential.radius}, {"path", c.potential.path}};
  j["time"] = {{"T", c.T}, {"M", c.M}};
  j["data"] = {{"family", c.data.family}, {"seed", c.data.seed}, {"support_radius", c.data.support_radius}};
  j["picard"] = {{"tol", c.tol}, {"max_iter", c.max_iter}};
  json pairs = json::array();
  for (const auto& [q, r] : c.estimates.pairs) pairs.push_back({num_or_inf(q), num_or_inf(r)});
  const auto& e = c.estimates;
  j["estimates"] = {{"pairs", pairs},       {"p", e.p},         {"delta_weight", e.weight_exponent()},
                    {"stride", e.stride},   {"radii", e.radii}, {"deltas", e.deltas},
                    {"families", e.families}, {"ceiling", e.ceiling ? json(*e.ceiling) : json(nullptr)},
                    {"refinement_tolerance", e.refinement_tolerance}};
  j["output"] = {{"trace", c.output.trace}, {"report", c.output.report}};
  return j.dump(2);
}

Potential make_potential(const RunConfig& cfg, const Grid& grid) {
  const auto& p = cfg.potential;
  if (p.type == "inverse_square") return inverse_square_potential(grid, cfg.epsilon(), p.amplitude);
  if (p.type == "bounded_compact") return bounded_compact_potential(grid, p.radius, p.amplitude);
  Potential V = read_potential(p.path);
  if (!(V.grid() == grid)) throw Error(ErrorKind::InvalidConfig, "potential file grid does not match the run grid");
  return V.scaled(p.amplitude);
}

}  // namespace lame::app
