#include "bll/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bll/error.hpp"

namespace bll {

using nlohmann::json;

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {"spectrum", "weyl", "dn-decay", "dn-derivative", "low-mode",
                                               "born", "recover", "resolvent-bounds", "agmon", "all"};
  return ids;
}

bool ExperimentConfig::wants(const std::string& part) const {
  return parts.empty() || std::find(parts.begin(), parts.end(), part) != parts.end();
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::ConfigError, where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw Error(ErrorCode::ConfigError, "unknown key \"" + key + "\" in " + where);
  }
}

template <class T>
T read(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "bad value for \"" + key + "\" in " + where + ": " + e.what());
  }
}

PotentialDescriptor read_potential(const json& obj, const std::string& where) {
  reject_unknown(obj, {"kind", "amplitude", "center", "width", "alpha"}, where);
  PotentialDescriptor d;
  if (obj.contains("kind")) {
    try {
      d.kind = potential_kind_from_string(read<std::string>(obj, "kind", where));
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, std::string(e.what()) + " in " + where);
    }
  }
  if (obj.contains("amplitude")) d.amplitude = read<double>(obj, "amplitude", where);
  else if (d.kind == PotentialDescriptor::Kind::singular) d.amplitude = 1.0;
  if (obj.contains("width")) d.width = read<double>(obj, "width", where);
  if (obj.contains("alpha")) d.alpha = read<double>(obj, "alpha", where);
  if (obj.contains("center")) {
    const auto c = read<std::vector<double>>(obj, "center", where);
    if (c.size() < 2 || c.size() > 3) throw Error(ErrorCode::ConfigError, "center needs 2 or 3 entries in " + where);
    for (std::size_t i = 0; i < c.size(); ++i) d.center[static_cast<Index>(i)] = c[i];
  }
  return d;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("invalid JSON: ") + e.what());
  }
  const std::string where = "config";
  reject_unknown(j, {"experiment", "grid", "q1", "q2", "K", "tol", "lambdas", "m_values", "trace_mode",
                     "plane_wave", "remainder_wave", "seed", "trials", "output_dir", "cache_dir", "k_range", "k0",
                     "k_max", "xi", "eta", "derivative_order", "weight_eps", "p", "refine", "parts"},
                 where);
  ExperimentConfig c;
  if (!j.contains("experiment")) throw Error(ErrorCode::ConfigError, "missing key \"experiment\"");
  c.experiment = read<std::string>(j, "experiment", where);
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), c.experiment) == ids.end())
    throw Error(ErrorCode::ConfigError, "unknown experiment \"" + c.experiment + "\"");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"n", "N"}, "grid");
    if (g.contains("n")) c.n = read<int>(g, "n", "grid");
    if (g.contains("N")) c.N = read<int>(g, "N", "grid");
  }
  if (j.contains("q1")) c.q1 = read_potential(j.at("q1"), "q1");
  if (j.contains("q2")) c.q2 = read_potential(j.at("q2"), "q2");
  if (j.contains("K")) c.K = read<Index>(j, "K", where);
  if (j.contains("tol")) c.tol = read<double>(j, "tol", where);
  if (j.contains("lambdas")) c.lambdas = read<std::vector<double>>(j, "lambdas", where);
  if (j.contains("m_values")) c.m_values = read<std::vector<int>>(j, "m_values", where);
  try {
    if (j.contains("trace_mode")) c.trace_mode = trace_mode_from_string(read<std::string>(j, "trace_mode", where));
    if (j.contains("plane_wave")) c.plane_wave = plane_wave_from_string(read<std::string>(j, "plane_wave", where));
    if (j.contains("remainder_wave"))
      c.remainder_wave = plane_wave_from_string(read<std::string>(j, "remainder_wave", where));
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  if (j.contains("seed")) c.seed = read<unsigned>(j, "seed", where);
  if (j.contains("trials")) c.trials = read<int>(j, "trials", where);
  if (j.contains("output_dir")) c.output_dir = read<std::string>(j, "output_dir", where);
  if (j.contains("cache_dir")) c.cache_dir = read<std::string>(j, "cache_dir", where);
  if (j.contains("k_range")) {
    const auto r = read<std::vector<Index>>(j, "k_range", where);
    if (r.size() != 2) throw Error(ErrorCode::ConfigError, "k_range needs two entries");
    c.k_range = std::make_pair(r[0], r[1]);
  }
  if (j.contains("k0")) c.k0 = read<Index>(j, "k0", where);
  if (j.contains("k_max")) c.k_max = read<int>(j, "k_max", where);
  if (j.contains("xi")) c.xi = read<std::vector<double>>(j, "xi", where);
  if (j.contains("eta")) c.eta = read<std::vector<double>>(j, "eta", where);
  if (j.contains("derivative_order")) c.derivative_order = read<int>(j, "derivative_order", where);
  if (j.contains("weight_eps")) c.weight_eps = read<double>(j, "weight_eps", where);
  if (j.contains("p")) c.p = read<double>(j, "p", where);
  if (j.contains("refine")) c.refine = read<std::vector<int>>(j, "refine", where);
  if (j.contains("parts")) c.parts = read<std::vector<std::string>>(j, "parts", where);
  if (c.trials < 1) throw Error(ErrorCode::ConfigError, "trials must be positive");
  if (!(c.tol > 0.0)) throw Error(ErrorCode::ConfigError, "tol must be positive");
  c.source = j.dump();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bll
