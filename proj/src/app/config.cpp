#include "mildns/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mildns/errors.hpp"

namespace mildns::app {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) throw ValidationError("unknown key '" + item.key() + "' in " + where);
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("'" + key + "' must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ValidationError("'" + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::vector<double> numbers(const json& v, const std::string& key) {
  if (!v.is_array()) throw ValidationError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) out.push_back(number(x, key));
  return out;
}

Exponent exponent(const json& v, const std::string& key) {
  try {
    if (v.is_string()) return Exponent::parse(v.get<std::string>());
    if (v.is_number()) return Exponent::finite(v.get<double>());
  } catch (const Error& e) {
    throw ValidationError("'" + key + "': " + e.what());
  }
  throw ValidationError("'" + key + "' must be a number or one of \"inf\", \"infbar\"");
}

LorentzIndex lorentz_index(const json& v) {
  if (!v.is_array() || v.size() < 2 || v.size() > 3)
    throw ValidationError("each index must be [p, q] or [p, q, \"norm\"]");
  LorentzIndex::Variant variant = LorentzIndex::Variant::quasinorm;
  if (v.size() == 3) {
    if (v[2] != "norm" && v[2] != "quasinorm") throw ValidationError("index variant must be \"norm\" or \"quasinorm\"");
    if (v[2] == "norm") variant = LorentzIndex::Variant::norm;
  }
  try {
    return LorentzIndex(exponent(v[0], "indices"), exponent(v[1], "indices"), variant);
  } catch (const IndexError& e) {
    throw ValidationError(std::string("indices: ") + e.what());
  }
}

void parse_data(const json& obj, InitialDataSpec& spec) {
  reject_unknown(obj, {"kind", "amplitude", "width", "spectral_slope"}, "initial_data");
  if (obj.contains("kind")) {
    if (!obj["kind"].is_string()) throw ValidationError("'kind' must be a string");
    try {
      spec.kind = InitialDataSpec::parse_kind(obj["kind"].get<std::string>());
    } catch (const Error& e) {
      throw ValidationError(e.what());
    }
  }
  if (obj.contains("amplitude")) spec.amplitude = number(obj["amplitude"], "amplitude");
  if (obj.contains("width")) spec.width = number(obj["width"], "width");
  if (obj.contains("spectral_slope")) spec.spectral_slope = number(obj["spectral_slope"], "spectral_slope");
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

bool is_pow2(std::size_t v) { return v >= 4 && (v & (v - 1)) == 0; }

}  // namespace

void RunConfig::validate() const {
  if (n != 2 && n != 3) throw ValidationError("n must be 2 or 3");
  if (!is_pow2(N)) throw ValidationError("N must be a power of two and at least 4");
  if (!positive(L)) throw ValidationError("L must be positive");
  if (!positive(T)) throw ValidationError("T must be positive");
  if (J < 4) throw ValidationError("J must be at least 4");
  if (!positive(tol)) throw ValidationError("tol must be positive");
  if (max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (!(data.amplitude >= 0.0) || !std::isfinite(data.amplitude))
    throw ValidationError("amplitude must be finite and non-negative");
  if (!positive(data.width)) throw ValidationError("width must be positive");
  if (!positive(data.spectral_slope)) throw ValidationError("spectral_slope must be positive");
  if (data.kind == InitialDataKind::taylor_green && n != 2) throw ValidationError("taylor-green data needs n = 2");
  for (const Exponent& r : exponents())
    if (!r.is_infinite() && !(r.value() > n))
      throw ValidationError("exponent r = " + r.token() + " must exceed n");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("alphas must lie in (0, 1)");
  if (!(holder_radius > 0.0 && holder_radius <= 0.5)) throw ValidationError("holder_radius must lie in (0, 0.5]");
  if (holder_radius * L < L / static_cast<double>(N)) throw ValidationError("holder_radius is below one grid spacing");
  for (double t : kernel_times)
    if (!positive(t)) throw ValidationError("kernel_times must be positive");
  if (kernel_times.empty() ||
      *std::max_element(kernel_times.begin(), kernel_times.end()) <
          10.0 * *std::min_element(kernel_times.begin(), kernel_times.end()))
    throw ValidationError("kernel_times must span at least a decade");
  for (double p : kernel_p)
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("kernel_p entries must be finite and at least 1");
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (out.empty()) throw ValidationError("output directory must be non-empty");
}

Grid RunConfig::grid() const { return Grid(n, N, L); }

SolveConfig RunConfig::solve_config() const {
  SolveConfig s;
  s.T = T;
  s.J = J;
  s.tol = tol;
  s.max_iter = max_iter;
  s.indices = indices;
  s.r = criterion_r;
  s.threshold_r = threshold_r;
  return s;
}

std::vector<Exponent> RunConfig::exponents() const {
  std::vector<Exponent> out{criterion_r};
  for (const Exponent& r : threshold_r)
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  return out;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc,
                 {"n", "N", "L", "initial_data", "T", "J", "indices", "criterion_r", "threshold_r", "tol", "max_iter",
                  "alphas", "holder_radius", "kernel_times", "kernel_p", "trials", "out", "strict", "seed"},
                 "config");
  RunConfig c;
  if (doc.contains("n")) c.n = static_cast<int>(count(doc["n"], "n"));
  if (doc.contains("N")) c.N = count(doc["N"], "N");
  if (doc.contains("L")) c.L = number(doc["L"], "L");
  if (doc.contains("initial_data")) parse_data(doc["initial_data"], c.data);
  if (doc.contains("T")) c.T = number(doc["T"], "T");
  if (doc.contains("J")) c.J = count(doc["J"], "J");
  if (doc.contains("indices")) {
    if (!doc["indices"].is_array()) throw ValidationError("'indices' must be an array");
    for (const json& v : doc["indices"]) c.indices.push_back(lorentz_index(v));
  }
  if (doc.contains("criterion_r")) c.criterion_r = exponent(doc["criterion_r"], "criterion_r");
  if (doc.contains("threshold_r")) {
    if (!doc["threshold_r"].is_array()) throw ValidationError("'threshold_r' must be an array");
    for (const json& v : doc["threshold_r"]) c.threshold_r.push_back(exponent(v, "threshold_r"));
  }
  if (doc.contains("tol")) c.tol = number(doc["tol"], "tol");
  if (doc.contains("max_iter")) c.max_iter = count(doc["max_iter"], "max_iter");
  if (doc.contains("alphas")) c.alphas = numbers(doc["alphas"], "alphas");
  if (doc.contains("holder_radius")) c.holder_radius = number(doc["holder_radius"], "holder_radius");
  if (doc.contains("kernel_times")) c.kernel_times = numbers(doc["kernel_times"], "kernel_times");
  if (doc.contains("kernel_p")) c.kernel_p = numbers(doc["kernel_p"], "kernel_p");
  if (doc.contains("trials")) c.trials = count(doc["trials"], "trials");
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ValidationError("'out' must be a string");
    c.out = doc["out"].get<std::string>();
  }
  if (doc.contains("strict")) {
    if (!doc["strict"].is_boolean()) throw ValidationError("'strict' must be a boolean");
    c.strict = doc["strict"].get<bool>();
  }
  if (doc.contains("seed")) c.seed = count(doc["seed"], "seed");
  c.data.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Exponent> parse_exponent_list(const std::string& text) {
  std::vector<Exponent> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ValidationError("empty entry in exponent list '" + text + "'");
    try {
      out.push_back(Exponent::parse(item));
    } catch (const Error& e) {
      throw ValidationError(e.what());
    }
  }
  return out;
}

}  // namespace mildns::app
