// Command-line front end: tree simulation, point-process extraction,
// continuum samplers, law tabulation, and the Monte Carlo verification
// targets. All sampling subcommands require an explicit --seed; identical
// arguments produce byte-identical artifacts.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "genea/continuum.hpp"
#include "genea/contour.hpp"
#include "genea/genealogy.hpp"
#include "genea/laws.hpp"
#include "genea/sim.hpp"
#include "genea/tree.hpp"
#include "genea/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailedVerdict = 1;
constexpr int kExitUsage = 2;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw genea::ParameterError("cannot open output file: " + out_path);
  out << payload;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw genea::ParameterError("cannot read input file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct LawArgs {
  double t = 1.0;
  double p = 0.5;
  double h = 1.0;
  double t_i = 1.0;
  double t_ell = 0.5;
  double t_n = 0.0;  // defaults to n*t
  double delta = 0.05;
  double kappa_min = 0.01;
  int n = 100;
  int points = 100;
};

std::string tabulate_law(const std::string& name, const LawArgs& a) {
  using namespace genea;
  const int m = a.points;
  if (m < 1) throw ParameterError("points must be >= 1");
  std::string out;
  auto grid = [m](double lo, double hi, int i) {
    return lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
  };
  if (name == "branch-depth") {
    const BranchDepthLaw law(a.t);
    out = "x,pdf,cdf,u,quantile\n";
    for (int i = 0; i < m; ++i) {
      const double x = grid(0.0, a.t, i);
      const double u = grid(0.0, 1.0, i);
      out += fmt(x) + "," + fmt(law.pdf(x)) + "," + fmt(law.cdf(x)) + "," + fmt(u) + "," +
             fmt(law.quantile(u)) + "\n";
    }
  } else if (name == "population") {
    const PopulationLaw law(a.t);
    out = "k,pmf,cdf\n";
    for (int k = 0; k < m; ++k)
      out += std::to_string(k) + "," + fmt(law.pmf(k)) + "," + fmt(law.cdf(k)) + "\n";
  } else if (name == "extant-count") {
    const ExtantCountLaw law(a.t);
    out = "k,pmf,cdf\n";
    for (int k = 1; k <= m; ++k)
      out += std::to_string(k) + "," + fmt(law.pmf(k)) + "," + fmt(law.cdf(k)) + "\n";
  } else if (name == "height-survival") {
    out = "tau,survival\n";
    for (int i = 0; i < m; ++i) {
      const double x = grid(0.0, 4.0 * a.t, i);
      out += fmt(x) + "," + fmt(height_survival(x)) + "\n";
    }
  } else if (name == "progeny-pgf") {
    out = "x,value\n";
    for (int i = 0; i < m; ++i) {
      const double x = grid(0.0, 1.0, i);
      out += fmt(x) + "," + fmt(progeny_pgf(x)) + "\n";
    }
  } else if (name == "mark-prob") {
    out = "p,value\n";
    for (int i = 0; i < m; ++i) {
      const double x = grid(0.0, 1.0, i);
      out += fmt(x) + "," + fmt(mark_prob(x)) + "\n";
    }
  } else if (name == "pi-intensity") {
    out = "tau,density\n";
    for (int i = 0; i < m; ++i) {
      const double x = grid(0.0, a.t, i);
      out += fmt(x) + "," + fmt(intensity::pi_density(0.5, x)) + "\n";
    }
  } else if (name == "rescaled-discrete") {
    const double t_n = a.t_n > 0.0 ? a.t_n : a.n * a.t;
    out = "tau,density,limit\n";
    for (int i = 0; i < m; ++i) {
      const double x = grid(0.0, t_n / a.n, i);
      out += fmt(x) + "," + fmt(intensity::rescaled_discrete_density(x, a.n, t_n)) + "," +
             fmt(1.0 / (x * x)) + "\n";
    }
  } else if (name == "subtree-discrete" || name == "subtree-continuum") {
    const bool discrete = name == "subtree-discrete";
    const double top = discrete ? a.t_i : a.t_ell;
    out = "tau,h,density\n";
    for (int i = 0; i < m; ++i) {
      const double tau = grid(0.0, top, i);
      for (int j = 0; j < m; ++j) {
        const double h = grid(0.0, tau, j);
        const double d = discrete ? intensity::subtree_discrete(tau, h, top)
                                  : intensity::subtree_continuum(tau, h, top);
        out += fmt(tau) + "," + fmt(h) + "," + fmt(d) + "\n";
      }
    }
  } else if (name == "first-set-discrete" || name == "first-set-continuum") {
    const bool discrete = name == "first-set-discrete";
    out = "tau,kappa,density\n";
    for (int i = 0; i < m; ++i) {
      const double tau = grid(0.0, a.h, i);
      for (int j = 0; j < m; ++j) {
        const double kappa = grid(0.0, a.h - tau, j);
        const double d = discrete ? intensity::first_set_discrete(tau, kappa, a.h, a.p)
                                  : intensity::first_set_continuum(tau, kappa, a.h, a.p);
        out += fmt(tau) + "," + fmt(kappa) + "," + fmt(d) + "\n";
      }
    }
  } else if (name == "pi-mass") {
    out = "delta,t,mass\n" + fmt(a.delta) + "," + fmt(a.t) + "," +
          fmt(intensity::pi_mass_above(a.delta, a.t)) + "\n";
  } else if (name == "subtree-mass") {
    out = "t_ell,kappa_min,mass\n" + fmt(a.t_ell) + "," + fmt(a.kappa_min) + "," +
          fmt(intensity::subtree_continuum_mass(a.t_ell, a.kappa_min)) + "\n";
  } else if (name == "first-set-mass") {
    out = "h,p,kappa_min,mass\n" + fmt(a.h) + "," + fmt(a.p) + "," + fmt(a.kappa_min) + "," +
          fmt(intensity::first_set_continuum_mass(a.h, a.p, a.kappa_min)) + "\n";
  } else {
    throw genea::ParameterError("unknown law: " + name);
  }
  return out;
}

int run(int argc, char** argv) {
  using namespace genea;
  CLI::App app{"genealogy toolkit for the critical binary branching process"};
  app.require_subcommand(1);

  double t = 1.0, p = 0.5, delta = 0.05, kappa_min = 0.01, height = 1.0;
  int n = 1;
  std::uint64_t seed = 0;
  std::string out_path, in_path, method = "excursion", format = "json";
  std::uint64_t max_attempts = kDefaultMaxAttempts;
  bool keep_unmarked = false;

  CLI::App* sim = app.add_subcommand("sim-tree", "simulate a conditioned tree to JSON");
  sim->add_option("--t", t, "observation level")->required();
  sim->add_option("--n", n, "extant population size")->required();
  sim->add_option("--seed", seed, "random seed")->required();
  sim->add_option("--method", method, "rejection | excursion")
      ->check(CLI::IsMember({"rejection", "excursion"}));
  sim->add_option("--max-attempts", max_attempts, "rejection cap");
  sim->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* gen = app.add_subcommand("genealogy", "extract the genealogical point-process to CSV");
  gen->add_option("--in", in_path, "tree JSON file")->required();
  gen->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* hist = app.add_subcommand(
      "historical", "mark extinct leaves and extract the historical point-process to JSON");
  hist->add_option("--in", in_path, "tree JSON file")->required();
  hist->add_option("--p", p, "mark probability")->required();
  hist->add_option("--seed", seed, "random seed")->required();
  hist->add_flag("--keep-unmarked", keep_unmarked, "store subtrees without marks too");
  hist->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* cont = app.add_subcommand("continuum", "continuum point-process samplers");
  cont->require_subcommand(1);
  CLI::App* cpi = cont->add_subcommand("pi", "continuum genealogical point-process to CSV");
  cpi->add_option("--t", t, "level")->required();
  cpi->add_option("--delta", delta, "depth truncation")->required();
  cpi->add_option("--seed", seed, "random seed")->required();
  cpi->add_option("--out", out_path, "output file (default stdout)");
  CLI::App* clam = cont->add_subcommand("lambda", "marked spine tree of a given height to JSON");
  clam->add_option("--height", height, "spine height")->required();
  clam->add_option("--p", p, "sampling rate")->required();
  clam->add_option("--kappa-min", kappa_min, "subtree height truncation")->required();
  clam->add_option("--seed", seed, "random seed")->required();
  clam->add_option("--out", out_path, "output file (default stdout)");
  CLI::App* cxi = cont->add_subcommand("xi", "continuum historical point-process to JSON");
  cxi->add_option("--t", t, "level")->required();
  cxi->add_option("--p", p, "sampling rate")->required();
  cxi->add_option("--delta", delta, "depth truncation")->required();
  cxi->add_option("--kappa-min", kappa_min, "subtree height truncation")->required();
  cxi->add_option("--seed", seed, "random seed")->required();
  cxi->add_option("--out", out_path, "output file (default stdout)");

  LawArgs law_args;
  std::string law_name;
  CLI::App* law = app.add_subcommand("law", "tabulate a closed-form law to CSV");
  law->add_option("name", law_name,
                  "branch-depth | population | extant-count | height-survival | progeny-pgf | "
                  "mark-prob | pi-intensity | rescaled-discrete | subtree-discrete | "
                  "subtree-continuum | first-set-discrete | first-set-continuum | pi-mass | "
                  "subtree-mass | first-set-mass")
      ->required();
  law->add_option("--t", law_args.t, "level");
  law->add_option("--p", law_args.p, "sampling parameter");
  law->add_option("--height", law_args.h, "spine height");
  law->add_option("--ti", law_args.t_i, "owning branch depth");
  law->add_option("--tell", law_args.t_ell, "main point depth");
  law->add_option("--tn", law_args.t_n, "discrete horizon (default n*t)");
  law->add_option("--n", law_args.n, "population size");
  law->add_option("--delta", law_args.delta, "depth truncation");
  law->add_option("--kappa-min", law_args.kappa_min, "height truncation");
  law->add_option("--points", law_args.points, "grid points");
  law->add_option("--out", out_path, "output file (default stdout)");

  std::string target;
  std::size_t replicates = 0;
  std::vector<int> n_grid = {25, 100, 400};
  unsigned threads = 0;
  bool exact_sampler = false, finite_n_reference = false;
  double verify_t = 1.0, verify_p = 0.0, verify_delta = 0.0, verify_kappa = 0.1;
  int verify_n = 0;
  CLI::App* ver = app.add_subcommand("verify", "Monte Carlo verification targets");
  ver->add_option("target", target,
                  "lemma1 | eq5 | eq6 | lemma3 | lemma4 | lemma6-count | markprob | theorem5 | "
                  "theorem9")
      ->required();
  ver->add_option("--seed", seed, "random seed")->required();
  ver->add_option("--replicates", replicates, "sample/replicate count (target default if 0)");
  ver->add_option("--t", verify_t, "level");
  ver->add_option("--n", verify_n, "population size (target default if 0)");
  ver->add_option("--p", verify_p, "mark probability / sampling rate (target default if 0)");
  ver->add_option("--delta", verify_delta, "depth truncation (target default if 0)");
  ver->add_option("--kappa-min", verify_kappa, "height truncation");
  ver->add_option("--n-grid", n_grid, "population grid for the convergence targets")
      ->delimiter(',');
  ver->add_option("--threads", threads, "worker threads (default: machine, or GENEA_THREADS)");
  ver->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  ver->add_flag("--exact-sampler", exact_sampler, "draw depths from the exact law");
  ver->add_flag("--finite-n-reference", finite_n_reference, "compare against finite-n laws");
  ver->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (sim->parsed()) {
    const ConditionMethod m =
        method == "rejection" ? ConditionMethod::Rejection : ConditionMethod::ExcursionConcat;
    RandomStream rng(seed);
    emit(to_json_string(condition_on_count(t, n, m, rng, max_attempts)), out_path);
    return kExitPass;
  }
  if (gen->parsed()) {
    emit(to_csv(genealogy_pp(tree_from_json_string(slurp(in_path)))), out_path);
    return kExitPass;
  }
  if (hist->parsed()) {
    RandomStream rng(seed);
    const PlanarTree tree = tree_from_json_string(slurp(in_path));
    emit(to_json_string(historical_pp(mark_extinct(tree, p, rng), keep_unmarked)), out_path);
    return kExitPass;
  }
  if (cpi->parsed()) {
    RandomStream rng(seed);
    emit(to_csv(sample_pi(t, delta, rng)), out_path);
    return kExitPass;
  }
  if (clam->parsed()) {
    RandomStream rng(seed);
    emit(to_json_string(sample_lambda_tree(height, p, kappa_min, rng)), out_path);
    return kExitPass;
  }
  if (cxi->parsed()) {
    RandomStream rng(seed);
    emit(to_json_string(sample_xi(t, p, delta, kappa_min, rng)), out_path);
    return kExitPass;
  }
  if (law->parsed()) {
    emit(tabulate_law(law_name, law_args), out_path);
    return kExitPass;
  }
  if (ver->parsed()) {
    auto n_or = [&](std::size_t d) { return replicates > 0 ? replicates : d; };
    std::vector<LawReport> reports;
    if (target == "lemma1") {
      reports = verify_lemma1(seed, n_or(100000));
    } else if (target == "eq5") {
      reports = verify_eq5(seed, n_or(100000), verify_t, threads);
    } else if (target == "eq6") {
      reports = verify_eq6(seed, n_or(100000), threads);
    } else if (target == "lemma3") {
      reports = verify_lemma3(seed, n_or(10000), verify_t, verify_n > 0 ? verify_n : 10, 2000, 5,
                              threads);
    } else if (target == "lemma4") {
      reports = verify_lemma4(seed, n_or(10000), verify_t,
                              verify_delta > 0.0 ? verify_delta : 0.1, threads);
    } else if (target == "lemma6-count") {
      reports =
          verify_lemma6_count(seed, n_or(10000), verify_t, verify_n > 0 ? verify_n : 5, threads);
    } else if (target == "markprob") {
      reports = verify_markprob(seed, n_or(100000), verify_p > 0.0 ? verify_p : 0.04, threads);
    } else if (target == "theorem5" || target == "theorem9") {
      ConvergenceConfig config;
      config.t = verify_t;
      config.delta = verify_delta > 0.0 ? verify_delta : 0.2;
      config.n_grid = n_grid;
      config.replicates = static_cast<int>(n_or(2000));
      config.seed = seed;
      config.threads = threads;
      config.exact_sampler = exact_sampler;
      config.finite_n_reference = finite_n_reference;
      config.p = verify_p > 0.0 ? verify_p : 2.0;
      config.kappa_min = verify_kappa;
      if (target == "theorem5") {
        const Theorem5Report report = theorem5_experiment(config);
        emit(format == "csv" ? to_csv(report) : to_json_string(report), out_path);
        return report.pass ? kExitPass : kExitFailedVerdict;
      }
      const Theorem9Report report = theorem9_experiment(config);
      emit(format == "csv" ? to_csv(report) : to_json_string(report), out_path);
      return report.pass ? kExitPass : kExitFailedVerdict;
    } else {
      throw ParameterError("unknown verify target: " + target);
    }
    emit(to_json_string(reports), out_path);
    for (const LawReport& r : reports)
      if (!r.pass) return kExitFailedVerdict;
    return kExitPass;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const genea::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const genea::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const genea::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const genea::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
