#include "dunklsb/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dunklsb/quadrature.hpp"

namespace dunklsb {

void CheckRecord::decide() {
  const bool a = abs_err <= tol;  // false for NaN
  const bool r = rel_err <= tol;
  if (mode == "abs") pass = a;
  else if (mode == "rel") pass = r;
  else pass = a || r;
}

ReportSummary VerificationReport::summary() const {
  ReportSummary s;
  s.total = static_cast<long>(records.size());
  for (const auto& r : records) (r.pass ? s.passed : s.failed)++;
  return s;
}

namespace {

std::string params_key(const std::map<std::string, std::string>& p) {
  std::string out;
  for (const auto& [k, v] : p) out += k + "=" + v + ";";
  return out;
}

nlohmann::ordered_json num(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::ordered_json nums(const std::vector<double>& v) {
  auto a = nlohmann::ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string shortest(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void VerificationReport::sort() {
  std::stable_sort(records.begin(), records.end(), [](const CheckRecord& a, const CheckRecord& b) {
    if (a.check_id != b.check_id) return a.check_id < b.check_id;
    return params_key(a.params) < params_key(b.params);
  });
}

nlohmann::ordered_json VerificationReport::to_json(bool with_runtime) const {
  nlohmann::ordered_json j;
  j["schema"] = "dunklsb-report/1";
  auto s = summary();
  j["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}};
  auto recs = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["check_id"] = r.check_id;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) p[k] = v;
    o["params"] = p;
    o["value"] = nums(r.value);
    o["reference"] = nums(r.reference);
    o["abs_err"] = num(r.abs_err);
    o["rel_err"] = num(r.rel_err);
    o["tol"] = num(r.tol);
    o["mode"] = r.mode;
    o["pass"] = r.pass;
    if (!r.note.empty()) o["note"] = r.note;
    if (with_runtime) o["runtime_ms"] = num(r.runtime_ms);
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  return j;
}

std::string VerificationReport::to_csv() const {
  std::ostringstream os;
  os << "check_id,params,value,reference,abs_err,rel_err,tol,mode,pass,runtime_ms\n";
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + shortest(v[i]);
    return s;
  };
  for (const auto& r : records) {
    os << csv_field(r.check_id) << ',' << csv_field(params_key(r.params)) << ',' << csv_field(join(r.value))
       << ',' << csv_field(join(r.reference)) << ',' << shortest(r.abs_err) << ',' << shortest(r.rel_err)
       << ',' << shortest(r.tol) << ',' << r.mode << ',' << (r.pass ? "true" : "false") << ','
       << shortest(r.runtime_ms) << '\n';
  }
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kernels", "quadrature", "spaces", "transforms", "polar", "all"};
  return names;
}

std::vector<GridPoint> RunConfig::points() const {
  std::vector<GridPoint> out;
  for (const auto& k : k_grid)
    for (double t : t_grid) out.push_back({k, t});
  return out;
}

void RunConfig::validate() const {
  if (suites.empty()) throw std::invalid_argument("no suite selected");
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw std::invalid_argument("unknown suite '" + s + "'");
  if (k_grid.empty() || t_grid.empty()) throw std::invalid_argument("empty parameter grid");
  for (const auto& k : k_grid) {
    if (k.empty() || k.size() > 3) throw std::invalid_argument("grid points need 1 to 3 coordinates");
    for (double v : k)
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("multiplicities must be >= 0");
  }
  for (double t : t_grid)
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be > 0");
  if (nodes < 8 || nodes > 400) throw std::invalid_argument("nodes must be in [8, 400]");
  if (basis < 1) throw std::invalid_argument("basis must be >= 1");
  if (degree < basis + 8 || degree > 120) throw std::invalid_argument("degree must be in [basis+8, 120]");
  if (!(tol_scale > 0.0) || !std::isfinite(tol_scale)) throw std::invalid_argument("tol-scale must be > 0");
  if (kernel_samples < 1) throw std::invalid_argument("kernel_samples must be >= 1");
  if (probe_nodes < 20) throw std::invalid_argument("probe_nodes must be >= 20");
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> known{"suite", "suites", "k", "t", "dims", "nodes", "degree", "basis",
                                           "tol_scale", "seed", "cache_dir", "kernel_samples", "probe_nodes"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  RunConfig c;
  try {
    if (j.contains("suite")) c.suites = {j.at("suite").get<std::string>()};
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("k")) {
      const auto& k = j.at("k");
      std::size_t dims = j.value("dims", 1);
      if (dims < 1) throw std::invalid_argument("dims must be >= 1");
      c.k_grid.clear();
      if (k.is_array() && !k.empty() && k.front().is_array()) {
        c.k_grid = k.get<std::vector<std::vector<double>>>();
      } else {
        auto flat = k.is_array() ? k.get<std::vector<double>>() : std::vector<double>{k.get<double>()};
        if (dims == 1) {
          for (double v : flat) c.k_grid.push_back({v});
        } else {
          if (flat.size() == 1) flat.assign(dims, flat[0]);
          if (flat.size() % dims) throw std::invalid_argument("k list length is not a multiple of dims");
          for (std::size_t i = 0; i < flat.size(); i += dims)
            c.k_grid.emplace_back(flat.begin() + i, flat.begin() + i + dims);
        }
      }
    } else if (j.contains("dims")) {
      throw std::invalid_argument("dims given without k");
    }
    if (j.contains("t")) {
      const auto& t = j.at("t");
      c.t_grid = t.is_array() ? t.get<std::vector<double>>() : std::vector<double>{t.get<double>()};
    }
    if (j.contains("nodes")) c.nodes = j.at("nodes").get<int>();
    if (j.contains("degree")) c.degree = j.at("degree").get<int>();
    if (j.contains("basis")) c.basis = j.at("basis").get<int>();
    if (j.contains("tol_scale")) c.tol_scale = j.at("tol_scale").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
    if (j.contains("kernel_samples")) c.kernel_samples = j.at("kernel_samples").get<int>();
    if (j.contains("probe_nodes")) c.probe_nodes = j.at("probe_nodes").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

VerificationReport run_suite(const RunConfig& config) {
  config.validate();
  if (config.cache_dir) RuleCache::global().set_directory(config.cache_dir);
  auto has = [&](const std::string& s) {
    return std::find(config.suites.begin(), config.suites.end(), s) != config.suites.end() ||
           std::find(config.suites.begin(), config.suites.end(), "all") != config.suites.end();
  };
  const auto pts = config.points();
  std::vector<VerificationReport> parts(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < pts.size();) {
      if (has("kernels")) kernel_suite(config, pts[i], parts[i]);
      if (has("quadrature")) quadrature_suite(config, pts[i], parts[i]);
      if (has("spaces")) spaces_suite(config, pts[i], parts[i]);
      if (has("transforms")) transforms_suite(config, pts[i], parts[i]);
      if (has("polar")) polar_suite(config, pts[i], parts[i]);
    }
  };
  const std::size_t nthreads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(pts.size(), 1));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  VerificationReport out;
  for (auto& p : parts)
    for (auto& r : p.records) out.records.push_back(std::move(r));
  out.sort();
  return out;
}

}  // namespace dunklsb
