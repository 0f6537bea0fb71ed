// Runs every suite on the default grid and reports one line per acceptance
// criterion.  --expect-fail a,b,... makes the exit status 0 exactly when the
// failing criteria are that set.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dunklsb/report.hpp"

using namespace dunklsb;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> checks;  // check_id prefixes; empty means "every record at k = 0"
};

bool matches(const CheckRecord& r, const std::vector<std::string>& checks) {
  for (const auto& c : checks)
    if (r.check_id == c) return true;
  return false;
}

std::string where(const CheckRecord& r) {
  std::string s;
  for (const auto& [k, v] : r.params) s += k + "=" + v + " ";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) expected.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--expect-fail 7,11]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "kernel axioms and bound",
       {"kernel.zero_argument", "kernel.symmetry", "kernel.scaling", "kernel.conjugation", "kernel.exp_reduction",
        "kernel.bound"}},
      {2, "normalization and heat mass",
       {"quadrature.normalization", "quadrature.normalization_rescaled", "kernel.heat_mass"}},
      {3, "c_mu value and t-independence", {"quadrature.mms_constant", "quadrature.mms_t_independence"}},
      {4, "quadrature exactness",
       {"quadrature.moments", "quadrature.odd_moments", "quadrature.tensor_moments", "quadrature.symmetry"}},
      {5, "reproducing kernels and G L_z", {"spaces.b_reproducing", "spaces.c_reproducing", "spaces.g_kernel_identity"}},
      {6, "unitarity of A and C",
       {"transforms.A_isometry", "transforms.A_gram", "transforms.C_isometry", "transforms.C_gram",
        "polar.C_isometry_block"}},
      {7, "polar factor of [R*] equals [C]", {"polar.U_equals_C"}},
      {8, "operator identities",
       {"transforms.RRstar_heat", "transforms.RC_heat", "transforms.dunkl_identity", "transforms.semigroup"}},
      {9, "norm of R", {"polar.sigma_range", "polar.norm_probe"}},
      {10, "structure identities",
       {"transforms.diagram", "transforms.ca_relation", "transforms.not_restriction", "polar.scale_invariance",
        "transforms.kernel_identities"}},
      {11, "k = 0 regression", {}},
  };

  RunConfig cfg;
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep = run_suite(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto s = rep.summary();
  std::printf("ran %ld checks in %.1f s: %ld passed, %ld failed\n", s.total, secs, s.passed, s.failed);

  std::set<int> failing;
  for (const auto& c : criteria) {
    std::vector<const CheckRecord*> recs;
    for (const auto& r : rep.records) {
      bool in = c.checks.empty() ? r.params.count("k") && r.params.at("k") == "0" : matches(r, c.checks);
      if (in) recs.push_back(&r);
    }
    long bad = 0;
    const CheckRecord* worst = nullptr;
    double worst_ratio = -1.0;
    std::set<std::string> failed_ids;
    for (const auto* r : recs) {
      if (!r->pass) {
        ++bad;
        failed_ids.insert(r->check_id);
      }
      double err = r->mode == "abs" ? r->abs_err : r->mode == "rel" ? r->rel_err : std::min(r->abs_err, r->rel_err);
      double ratio = r->tol > 0 ? err / r->tol : 0.0;
      if (!(ratio <= worst_ratio)) {
        worst_ratio = ratio;
        worst = r;
      }
    }
    const bool pass = !recs.empty() && bad == 0;
    if (!pass) failing.insert(c.id);
    std::printf("%s criterion %d (%s): %zu records, %ld failed", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                recs.size(), bad);
    if (worst)
      std::printf("; worst %s [%s] err/tol = %.3g", worst->check_id.c_str(), where(*worst).c_str(), worst_ratio);
    if (!failed_ids.empty()) {
      std::printf("; failing checks:");
      for (const auto& id : failed_ids) std::printf(" %s", id.c_str());
    }
    std::printf("\n");
    if (c.id == 7)
      for (const auto* r : recs)
        std::printf("    %s|U-C| = %.3g  |RR*-heat| = %.3g  (tol %.0e)\n", where(*r).c_str(), r->value.at(0),
                    r->value.size() > 1 ? r->value[1] : -1.0, r->tol);
  }

  if (expected.empty()) return failing.empty() ? 0 : 1;
  if (failing == expected) {
    std::printf("failing criteria match the expected set\n");
    return 0;
  }
  std::printf("failing criteria differ from the expected set\n");
  return 1;
}
