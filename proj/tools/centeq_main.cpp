// command-line front end: every subcommand emits a versioned JSON summary on
// stdout (schema_version 1) and optional CSV tables via --csv. Exit codes:
// 0 success, 2 usage/config error, 3 scientific FAIL.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "centeq/acceptance.hpp"
#include "centeq/config.hpp"
#include "centeq/equilibrium.hpp"
#include "centeq/latticebridge.hpp"
#include "centeq/netting.hpp"
#include "centeq/pressure.hpp"
#include "centeq/rootsystem.hpp"
#include "centeq/specification.hpp"

using json = nlohmann::json;
using namespace centeq;
using dynsys::LinearCenterIsometry;

namespace {

constexpr int kExitFail = 3;
constexpr int kExitConfig = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CENTEQ_SEED"))
    return std::strtoull(env, nullptr, 10);
  return default_config().seed;
}

LinearCenterIsometry load_system(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0)
    return LinearCenterIsometry::builtin(spec.substr(8));
  return LinearCenterIsometry::from_file(spec);
}

qc::QuasiCocycle load_potential(const LinearCenterIsometry& sys,
                                const std::string& path, double constant) {
  if (!path.empty())
    return qc::birkhoff(sys, qc::TrigPolynomial::from_file(path, sys.dim()));
  return qc::birkhoff(sys, qc::TrigPolynomial::constant(sys.dim(), constant));
}

void emit(const json& j, const std::string& out_path) {
  json full = j;
  full["schema_version"] = 1;
  if (out_path.empty()) {
    std::cout << full.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << full.dump(2) << "\n";
  }
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for thermodynamic formalism of center "
               "isometries on tori"};
  app.require_subcommand(1);

  std::string system_spec = "builtin:cat", potential_path, spec_path,
              roots_spec = "builtin:a2", qm_expr = "n", out_path, csv_path;
  double eps = 0.1, delta = 0.05, constant = 0.0, box = 100.0, avec = 0.5;
  int n = 6, nmin = 0, nmax = 0, grid = 0, samples = 20000, cutoff = 3,
      workers = 1;
  long long gamma = 1, klimit = 1 << 23, probe_box = 1000;
  int period = 0;
  std::uint64_t seed = default_seed();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--system", system_spec,
                    "builtin:cat | builtin:t3 | matrix file");
    cmd->add_option("--seed", seed, "rng seed (env CENTEQ_SEED)");
    cmd->add_option("--out", out_path, "write the JSON summary here");
    cmd->add_option("--csv", csv_path, "write the CSV table here");
    cmd->add_option("--workers", workers,
                    "worker count (results are worker-independent)");
  };

  auto* c_net = app.add_subcommand("net", "build an (n,eps)-separated net");
  add_common(c_net);
  c_net->add_option("--n", n);
  c_net->add_option("--eps", eps);
  c_net->add_option("--grid", grid, "greedy scan resolution (0 = structured)");

  auto* c_qp = app.add_subcommand("qp", "enumerate quasiperiodic points");
  add_common(c_qp);
  c_qp->add_option("--n", n);
  c_qp->add_option("--delta", delta);

  auto* c_shadow =
      app.add_subcommand("shadow", "shadow an orbit specification file");
  add_common(c_shadow);
  c_shadow->add_option("--spec", spec_path)->required();
  c_shadow->add_option("--eps", eps);
  c_shadow->add_option("--quasiperiodize", period,
                       "refine to an (n,delta)-quasiperiodic point");

  auto* c_press = app.add_subcommand("pressure", "pressure of a potential");
  add_common(c_press);
  c_press->add_option("--potential", potential_path, "trig polynomial file");
  c_press->add_option("--constant", constant, "constant potential value");
  c_press->add_option("--eps", eps);
  c_press->add_option("--nmin", nmin);
  c_press->add_option("--nmax", nmax);

  auto* c_ent = app.add_subcommand("entropy", "entropy (zero potential)");
  add_common(c_ent);
  c_ent->add_option("--eps", eps);
  c_ent->add_option("--nmin", nmin);
  c_ent->add_option("--nmax", nmax);

  auto* c_eq = app.add_subcommand("equilibrium", "equilibrium measure summary");
  add_common(c_eq);
  c_eq->add_option("--potential", potential_path);
  c_eq->add_option("--constant", constant);
  c_eq->add_option("--delta", delta);
  c_eq->add_option("--n", n);
  c_eq->add_option("--cutoff", cutoff, "Fourier table cutoff");

  auto* c_gibbs = app.add_subcommand("gibbs", "two-sided Gibbs ratio check");
  add_common(c_gibbs);
  c_gibbs->add_option("--potential", potential_path);
  c_gibbs->add_option("--constant", constant);
  c_gibbs->add_option("--eps", eps);
  c_gibbs->add_option("--delta", delta);
  c_gibbs->add_option("--nmin", nmin);
  c_gibbs->add_option("--nmax", nmax);
  c_gibbs->add_option("--samples", samples, "sample points per n");

  auto* c_bridge =
      app.add_subcommand("bridge-defect", "twisted cocycle defect vs bound");
  add_common(c_bridge);
  c_bridge->add_option("--qm", qm_expr, "scalar quasimorphism expression");
  c_bridge->add_option("--box", box);
  c_bridge->add_option("--probe-box", probe_box);
  c_bridge->add_option("--samples", samples);

  auto* c_homog = app.add_subcommand("homogenize", "homogenize a quasimorphism");
  add_common(c_homog);
  c_homog->add_option("--qm", qm_expr);
  c_homog->add_option("--gamma", gamma);
  c_homog->add_option("--klimit", klimit);

  auto* c_weyl = app.add_subcommand("weyl-check", "root-system kernel rank");
  add_common(c_weyl);
  c_weyl->add_option("--roots", roots_spec,
                     "builtin:a2|b2|g2|single-pair or JSON file");

  auto* c_haar = app.add_subcommand("haar-h", "Haar average of the cocycle");
  add_common(c_haar);
  c_haar->add_option("--qm", qm_expr);
  c_haar->add_option("--a", avec, "translation length");
  c_haar->add_option("--nlimit", klimit);

  auto* c_self = app.add_subcommand("selftest", "run the acceptance battery");
  add_common(c_self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    json j;
    j["seed"] = seed;

    if (*c_net) {
      auto sys = load_system(system_spec);
      auto net = grid > 0 ? netting::greedy_separated(sys, n, eps, grid)
                          : netting::structured_separated(sys, n, eps);
      j["command"] = "net";
      j["n"] = n;
      j["eps"] = eps;
      j["size"] = net.size();
      j["kind"] = grid > 0 ? "greedy" : "structured";
      if (!csv_path.empty()) {
        auto out = open_csv(csv_path);
        for (const auto& p : net.points) {
          for (int i = 0; i < sys.dim(); ++i)
            out << (i ? "," : "") << p.x[i];
          out << "\n";
        }
      }
    } else if (*c_qp) {
      auto sys = load_system(system_spec);
      auto pts = netting::quasiperiodic_points(sys, n, delta);
      j["command"] = "qp";
      j["n"] = n;
      j["delta"] = delta;
      j["count"] = pts.size();
      if (!csv_path.empty()) {
        auto out = open_csv(csv_path);
        for (const auto& qp : pts) {
          for (int i = 0; i < sys.dim(); ++i) out << qp.x.x[i] << ",";
          out << qp.center_residual << "\n";
        }
      }
    } else if (*c_shadow) {
      auto sys = load_system(system_spec);
      auto sp = spec::OrbitSpec::from_file(spec_path, sys.dim());
      auto res = spec::shadow(sys, sp, eps);
      j["command"] = "shadow";
      j["eps"] = eps;
      j["achieved_eps"] = res.achieved_eps;
      for (int i = 0; i < sys.dim(); ++i) j["z"].push_back(res.z.x[i]);
      if (period > 0) {
        auto q = spec::quasiperiodize(sys, res.z, period, 4 * eps);
        j["quasiperiod"] = period;
        j["quasiperiod_residual"] = q.quasiperiod ? q.quasiperiod->second : -1;
        j["z"].clear();
        for (int i = 0; i < sys.dim(); ++i) j["z"].push_back(q.z.x[i]);
      }
    } else if (*c_press || *c_ent) {
      auto sys = load_system(system_spec);
      auto qp = *c_ent ? load_potential(sys, "", 0.0)
                       : load_potential(sys, potential_path, constant);
      auto range = pressure::default_n_range(sys);
      if (nmin > 0 && nmax >= nmin) {
        range.clear();
        for (int i = nmin; i <= nmax; ++i) range.push_back(i);
      } else if (nmax > 0) {
        while (!range.empty() && range.back() > nmax) range.pop_back();
      }
      auto series = pressure::net_series(sys, qp, eps, range);
      auto est = pressure::pressure_from_series(series);
      j["command"] = *c_ent ? "entropy" : "pressure";
      j["eps"] = eps;
      j["P"] = est.P;
      j["residual"] = est.residual;
      j["stable"] = est.stable;
      j["n_lo"] = est.n_lo;
      j["n_hi"] = est.n_hi;
      if (!csv_path.empty()) {
        auto out = open_csv(csv_path);
        out << "n,log_z\n";
        for (const auto& e : series.entries)
          out << e.n << "," << e.log_z << "\n";
      }
    } else if (*c_eq) {
      auto sys = load_system(system_spec);
      auto qp = load_potential(sys, potential_path, constant);
      auto fam = netting::build_quasiperiodic_family(sys, {n}, delta);
      auto nu = equilibrium::cesaro_measure(sys, qp, fam, n);
      double went = 0;
      for (const auto& a : nu.atoms)
        if (a.weight > 0) went -= a.weight * std::log(a.weight);
      j["command"] = "equilibrium";
      j["n"] = n;
      j["delta"] = delta;
      j["atoms"] = nu.atoms.size();
      j["weight_entropy"] = went;
      auto hc = equilibrium::haar_comparison(nu, cutoff);
      j["max_fourier"] = hc.max_coefficient;
      for (const auto& [k, mag] : hc.coefficients) {
        json row;
        for (int i = 0; i < k.size(); ++i) row["k"].push_back(k[i]);
        row["mag"] = mag;
        j["fourier"].push_back(row);
      }
    } else if (*c_gibbs) {
      auto sys = load_system(system_spec);
      auto qp = load_potential(sys, potential_path, constant);
      int lo = nmin > 0 ? nmin : 3, hi = nmax > 0 ? nmax : 8;
      std::vector<int> range;
      for (int i = lo; i <= hi; ++i) range.push_back(i);
      auto fam = netting::build_quasiperiodic_family(
          sys, {hi + 2 > 10 ? hi + 2 : 10}, delta);
      auto rep = equilibrium::gibbs_report(sys, qp, fam, eps, delta, range,
                                           samples);
      j["command"] = "gibbs";
      j["pass"] = rep.pass;
      j["ratio_min"] = rep.ratio_min;
      j["ratio_max"] = rep.ratio_max;
      j["trend"] = rep.trend;
      j["P"] = rep.p_est;
      if (!rep.diagnostic.empty()) j["diagnostic"] = rep.diagnostic;
      if (!csv_path.empty()) {
        auto out = open_csv(csv_path);
        for (const auto& [x, nn, ratio] : rep.samples) {
          for (int i = 0; i < x.size(); ++i) out << x[i] << ",";
          out << nn << "," << ratio << "\n";
        }
      }
      if (!rep.pass) {
        emit(j, out_path);
        return kExitFail;
      }
    } else if (*c_bridge) {
      auto qm = bridge::scalar_qm_from_expr(qm_expr);
      auto rep = bridge::bridge_defect_check(qm, box, probe_box, samples, seed);
      j["command"] = "bridge-defect";
      j["measured"] = rep.measured;
      j["k1"] = rep.k1_bound;
      j["k2"] = rep.k2_bound;
      j["assembled_k"] = rep.assembled_k();
      j["pass"] = rep.pass;
      if (!rep.pass) {
        emit(j, out_path);
        return kExitFail;
      }
    } else if (*c_homog) {
      auto qm = bridge::scalar_qm_from_expr(qm_expr);
      auto h = bridge::homogenize_at(
          [&qm](long long m) { return qm.L(VecZ::Constant(1, m))[0]; }, gamma,
          klimit);
      j["command"] = "homogenize";
      j["gamma"] = gamma;
      j["value"] = h.value;
      j["converged"] = h.converged;
    } else if (*c_weyl) {
      roots::RootSystem rs;
      if (roots_spec == "builtin:a2") rs = roots::RootSystem::a2();
      else if (roots_spec == "builtin:b2") rs = roots::RootSystem::b2();
      else if (roots_spec == "builtin:g2") rs = roots::RootSystem::g2();
      else if (roots_spec == "builtin:single-pair")
        rs = roots::RootSystem::single_pair();
      else rs = roots::RootSystem::from_file(roots_spec);
      if (!roots::validate(rs))
        throw std::runtime_error("root list fails validation");
      auto rep = roots::weyl_kernel_check(rs);
      j["command"] = "weyl-check";
      j["name"] = rs.name;
      j["ambient"] = rep.ambient;
      j["span_rank"] = rep.span_rank;
      j["pass"] = rep.pass;
      if (!rep.pass) {
        emit(j, out_path);
        return kExitFail;
      }
    } else if (*c_haar) {
      auto qm = bridge::scalar_qm_from_expr(qm_expr);
      auto h = bridge::haar_average_H(qm, Vec::Constant(1, avec), klimit);
      j["command"] = "haar-h";
      j["a"] = avec;
      j["H"] = h.H[0];
      j["converged"] = h.converged;
    } else if (*c_self) {
      auto results = acceptance::run_all(std::cout);
      j["command"] = "selftest";
      j["pass"] = acceptance::all_passed(results);
      for (const auto& r : results) {
        json row;
        row["id"] = r.id;
        row["name"] = r.name;
        row["pass"] = r.pass;
        row["detail"] = r.detail;
        j["criteria"].push_back(row);
      }
      emit(j, out_path);
      return acceptance::all_passed(results) ? 0 : kExitFail;
    }

    emit(j, out_path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
