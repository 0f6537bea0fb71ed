// dunklsb: verification suites, kernel values, quadrature rules and the
// restriction-principle harness from the command line.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dunklsb/kernel.hpp"
#include "dunklsb/polar.hpp"
#include "dunklsb/quadrature.hpp"
#include "dunklsb/report.hpp"

using namespace dunklsb;
using nlohmann::ordered_json;

namespace {

struct BadInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw BadInput("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw BadInput("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  for (const auto& item : split(s, ',')) v.push_back(parse_double(item));
  if (v.empty()) throw BadInput("empty list");
  return v;
}

// a, bi, a+bi, a-bi, i, -i
cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw BadInput("empty complex number");
  if (s.back() != 'i') return parse_double(s);
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t cut = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      cut = i;
      break;
    }
  auto imag = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  if (cut == std::string::npos) return {0.0, imag(s)};
  return {parse_double(s.substr(0, cut)), imag(s.substr(cut))};
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> v;
  for (const auto& item : split(s, ',')) v.push_back(parse_complex(item));
  if (v.empty()) throw BadInput("empty list");
  return v;
}

ordered_json cjson(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dunkl Segal-Bargmann numerics for Z_2^N"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run verification suites and write a JSON report");
  std::string v_suite = "all", v_k, v_t, v_out, v_cache, v_config;
  int v_dims = 1, v_nodes = 80, v_degree = 40, v_basis = 10;
  double v_tol = 1.0;
  std::uint64_t v_seed = 42;
  bool v_csv = false;
  auto* o_suite = verify->add_option("--suite", v_suite, "kernels|quadrature|spaces|transforms|polar|all");
  auto* o_k = verify->add_option("--k", v_k, "comma list of multiplicities");
  auto* o_t = verify->add_option("--t", v_t, "Planck constant (comma list allowed)");
  auto* o_dims = verify->add_option("--dims", v_dims, "coordinates per grid point");
  auto* o_nodes = verify->add_option("--nodes", v_nodes, "Gauss nodes per axis");
  auto* o_degree = verify->add_option("--degree", v_degree, "series truncation degree");
  auto* o_basis = verify->add_option("--basis", v_basis, "max basis degree");
  auto* o_tol = verify->add_option("--tol-scale", v_tol, "multiplies every tolerance");
  auto* o_seed = verify->add_option("--seed", v_seed, "random seed");
  verify->add_option("--out", v_out, "report path (default stdout)");
  auto* o_cache = verify->add_option("--cache-dir", v_cache, "persist quadrature rules here");
  verify->add_flag("--csv", v_csv, "also write CSV (<out>.csv, or stdout)");
  verify->add_option("--config", v_config, "JSON configuration file; flags override it");

  // kernel
  auto* kernel = app.add_subcommand("kernel", "evaluate E_mu(z, w) and rho_{mu,t}(z, w)");
  std::string kk, kz, kw;
  double kt = 1.0;
  kernel->add_option("--k", kk, "comma list of multiplicities")->required();
  kernel->add_option("--t", kt, "Planck constant");
  kernel->add_option("--z", kz, "comma list of complex numbers a+bi")->required();
  kernel->add_option("--w", kw, "comma list of complex numbers a+bi")->required();

  // quad
  auto* quad = app.add_subcommand("quad", "Gauss rules for e^{-q^2/2t} domega_t");
  std::string qk, qcache;
  double qt = 1.0;
  int qn = 80;
  bool qprint = false;
  quad->add_option("--k", qk, "comma list of multiplicities")->required();
  quad->add_option("--t", qt, "Planck constant");
  quad->add_option("--nodes", qn, "nodes per axis");
  quad->add_flag("--print", qprint, "print nodes and weights");
  quad->add_option("--cache-dir", qcache, "persist rules here");

  // polar
  auto* polar = app.add_subcommand("polar", "polar factor of [R*] against [C]");
  std::string pk, pout;
  double pt = 1.0;
  int pbasis = 10, pdegree = 40, pnodes = 80;
  polar->add_option("--k", pk, "comma list of multiplicities")->required();
  polar->add_option("--t", pt, "Planck constant");
  polar->add_option("--basis", pbasis, "compared block degree");
  polar->add_option("--degree", pdegree, "codomain truncation");
  polar->add_option("--nodes", pnodes, "Gauss nodes per axis");
  polar->add_option("--out", pout, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) {
      RunConfig cfg;
      if (!v_config.empty()) {
        std::ifstream f(v_config);
        if (!f) throw BadInput("cannot read config " + v_config);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
          throw BadInput(std::string("config is not JSON: ") + e.what());
        }
        cfg = config_from_json(j);
      }
      if (o_suite->count()) cfg.suites = {v_suite};
      if (o_k->count()) {
        auto flat = parse_list(v_k);
        if (v_dims < 1) throw BadInput("--dims must be >= 1");
        cfg.k_grid.clear();
        if (v_dims == 1) {
          for (double v : flat) cfg.k_grid.push_back({v});
        } else {
          if (flat.size() == 1) flat.assign(v_dims, flat[0]);
          if (flat.size() % v_dims) throw BadInput("--k length is not a multiple of --dims");
          for (std::size_t i = 0; i < flat.size(); i += v_dims)
            cfg.k_grid.emplace_back(flat.begin() + i, flat.begin() + i + v_dims);
        }
      } else if (o_dims->count()) {
        throw BadInput("--dims needs --k");
      }
      if (o_t->count()) cfg.t_grid = parse_list(v_t);
      if (o_nodes->count()) cfg.nodes = v_nodes;
      if (o_degree->count()) cfg.degree = v_degree;
      if (o_basis->count()) cfg.basis = v_basis;
      if (o_tol->count()) cfg.tol_scale = v_tol;
      if (o_seed->count()) cfg.seed = v_seed;
      if (o_cache->count()) cfg.cache_dir = v_cache;
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw BadInput(e.what());
      }
      auto rep = run_suite(cfg);
      write_out(v_out, rep.to_json().dump(2) + "\n");
      if (v_csv) write_out(v_out.empty() || v_out == "-" ? "" : v_out + ".csv", rep.to_csv());
      auto s = rep.summary();
      std::cerr << "total " << s.total << ", passed " << s.passed << ", failed " << s.failed << "\n";
      return s.failed ? 1 : 0;
    }

    if (*kernel) {
      MultiplicitySetup S(parse_list(kk), kt);
      auto z = parse_complex_list(kz), w = parse_complex_list(kw);
      if (z.size() != S.dim() || w.size() != S.dim()) throw BadInput("--z and --w need one entry per k");
      ordered_json j;
      j["k"] = std::vector<double>(S.k().begin(), S.k().end());
      j["t"] = kt;
      j["E"] = cjson(dunkl_kernel(S, z, w));
      j["rho"] = cjson(heat_kernel(S, z, w, kt));
      j["bound_margin"] = kernel_bound_margin(S, z, w);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*quad) {
      MultiplicitySetup S(parse_list(qk), qt);
      if (qn < 1) throw BadInput("--nodes must be >= 1");
      if (!qcache.empty()) RuleCache::global().set_directory(qcache);
      ordered_json j;
      j["t"] = qt;
      j["c_mu"] = mms_constant(S);
      j["c_mu_check"] = mms_constant_check(S);
      auto axes = ordered_json::array();
      for (std::size_t a = 0; a < S.dim(); ++a) {
        auto rule = RuleCache::global().get(S.k(a), qt, qn);
        ordered_json r;
        r["k"] = S.k(a);
        r["n"] = rule->size();
        double sum = 0.0;
        for (double w : rule->weights) sum += w;
        r["weight_sum"] = sum;
        r["max_node"] = rule->nodes.back();
        if (qprint) {
          r["nodes"] = rule->nodes;
          r["weights"] = rule->weights;
        }
        axes.push_back(std::move(r));
      }
      j["axes"] = std::move(axes);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*polar) {
      MultiplicitySetup S(parse_list(pk), pt);
      RestrictionOptions o;
      o.max_deg = pbasis;
      o.degree = pdegree;
      o.nodes = pnodes;
      if (pbasis < 1 || pdegree < pbasis + 8 || pnodes < 8) throw BadInput("need basis >= 1, degree >= basis+8, nodes >= 8");
      auto r = verify_restriction_principle(S, o);
      ordered_json j;
      j["k"] = std::vector<double>(S.k().begin(), S.k().end());
      j["t"] = pt;
      j["basis"] = pbasis;
      j["degree"] = pdegree;
      j["nodes"] = pnodes;
      j["u_minus_c"] = r.u_minus_c;
      j["rrstar_minus_heat"] = r.rrstar_minus_heat;
      j["sigma_max"] = r.sigma_max;
      j["sigma_min"] = r.sigma_min;
      j["c_isometry_dev"] = r.c_isometry_dev;
      j["literal_u_minus_c"] = r.literal_u_minus_c;
      j["cross_parity_max"] = r.cross_parity_max;
      j["domain_size"] = r.domain_size;
      j["codomain_size"] = r.codomain_size;
      j["compared_columns"] = r.compared_columns;
      j["rank_deficient"] = r.rank_deficient;
      write_out(pout, j.dump(2) + "\n");
      return 0;
    }
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
