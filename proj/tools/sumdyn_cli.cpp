#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sumdyn/cli.hpp"

using sumdyn::RunConfig;

namespace {

void common(CLI::App* app, RunConfig& c) {
  app->add_option("--out", c.out_path, "write the report to this file");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--threads", c.threads, "worker threads (default: SUMDYN_THREADS or 1)");
  app->add_option("--window", c.window, "window [1, W] (default: SUMDYN_WINDOW or 1000000)");
}

void nil_system(CLI::App* app, RunConfig& c, bool arithmetic = true) {
  app->add_option("--s", c.s, "dimension of the torus");
  app->add_option("--alpha", c.alpha, "rotation number, decimal or p/q");
  app->add_option("--base", c.base, "base point coordinates")->delimiter(',');
  if (arithmetic)
    app->add_option("--mode", c.mode, "exact or floating")->check(CLI::IsMember({"exact", "floating"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sumsets in dense sets and nilsystem dynamics"};
  app.require_subcommand(1);
  RunConfig c;

  auto* straus = app.add_subcommand("straus", "Straus sets: density and refutation of fixed B");
  common(straus, c);
  straus->add_option("--primes", c.primes, "strictly increasing primes")->delimiter(',')->required();
  straus->add_flag("--density", c.density, "report exact bound and measured density");
  straus->add_flag("--refute", c.refute, "refute fixed B for every t <= t-bound");
  straus->add_option("--B", c.B, "explicit B")->delimiter(',');
  straus->add_option("--random-B", c.random_B_size, "size of seeded random B");
  straus->add_option("--random-B-max", c.random_B_max, "largest value of random B");
  straus->add_option("--random-B-count", c.random_B_count, "number of random B");
  straus->add_option("--K", c.K, "largest subset size");
  straus->add_option("--t-bound", c.t_bound, "largest shift t");

  auto* search = app.add_subcommand("search", "search certificates: thma, thmb or mixed");
  common(search, c);
  search->add_option("kind", c.sub, "thma, thmb or mixed")->required()->check(CLI::IsMember({"thma", "thmb", "mixed"}));
  search->add_option("--set", c.set_path, "set spec JSON")->required();
  search->add_option("--ell", c.ell, "range length ell");
  search->add_option("--K", c.K, "number of levels");
  search->add_option("--max-scan", c.budget.max_scan, "element candidates per decision");
  search->add_option("--backtrack", c.budget.backtrack_depth, "element removals allowed");
  search->add_option("--target-size", c.budget.target_B_size, "size of B (0: automatic)");
  search->add_option("--max-t", c.budget.max_t, "shifts t in [0, max-t)");
  search->add_option("--max-s", c.budget.max_s, "shifts s in [0, max-s)");
  search->add_option("--accept", c.budget.accept_factor, "acceptance factor times density");
  search->add_flag("--force-zero", c.budget.force_zero_shifts, "fix every shift at 0");

  auto* verify = app.add_subcommand("verify", "check a certificate against a set");
  common(verify, c);
  verify->add_option("--cert", c.cert_path, "certificate JSON")->required();
  verify->add_option("--set", c.set_path, "set spec JSON")->required();

  auto* density = app.add_subcommand("density", "window and Banach density estimates");
  common(density, c);
  density->add_option("--set", c.set_path, "set spec JSON")->required();
  density->add_option("--banach-length", c.banach_length, "window length for the Banach estimate");
  density->add_option("--banach-windows", c.banach_windows, "number of windows");
  density->add_option("--banach-stride", c.banach_stride, "stride between windows (default: length)");

  auto* nil = app.add_subcommand("nil", "affine nilsystem tools");
  nil->require_subcommand(1);
  auto* orbit = nil->add_subcommand("orbit", "orbit as CSV");
  common(orbit, c);
  nil_system(orbit, c);
  orbit->add_option("--n", c.n, "last index");
  auto* omega = nil->add_subcommand("omega", "Haar samples of Omega_k as a JSON array");
  common(omega, c);
  omega->add_option("--s", c.s, "dimension");
  omega->add_option("--k", c.k, "k");
  omega->add_option("--samples", c.samples, "number of samples");
  omega->add_flag("--strictness", c.strictness, "check the projection to Omega_{k-1} and its strictness");
  auto* semi = nil->add_subcommand("seminorm", "uniformity seminorm estimate");
  common(semi, c);
  nil_system(semi, c);
  semi->add_option("--f", c.f_path, "function spec JSON")->required();
  semi->add_option("--k", c.k, "seminorm degree");
  semi->add_option("--H", c.H, "shift range");
  semi->add_option("--N", c.N, "orbit length");
  auto* prog = nil->add_subcommand("progressive", "progressiveness scans");
  common(prog, c);
  nil_system(prog, c, false);
  prog->add_option("--mode", c.progressive_mode, "left, right or multi")->check(CLI::IsMember({"left", "right", "multi"}));
  prog->add_option("--k", c.k, "k");
  prog->add_option("--ell", c.ell, "ell for multi");
  prog->add_option("--side", c.side, "side of the cubes at the origin");
  prog->add_option("--boxes", c.boxes_path, "JSON array of boxes instead of cubes");
  prog->add_option("--N", c.N, "quadrature length");
  prog->add_option("--n-max", c.n_max, "largest n");
  prog->add_option("--m-max", c.m_max, "largest m for multi");
  prog->add_option("--max-hits", c.max_hits, "stop after this many hits (0: no limit)");
  prog->add_option("--threshold", c.threshold, "positivity threshold");

  auto* repro = app.add_subcommand("repro", "reproductions");
  repro->require_subcommand(1);
  auto* a2 = repro->add_subcommand("appendix-a2", "conditional expectations and double averages of the s = 3 example");
  common(a2, c);
  a2->add_option("--N", c.N, "average length");
  a2->add_option("--M", c.M, "Haar samples");
  a2->add_option("--alpha", c.alpha, "rotation number");
  a2->add_option("--tolerance", c.tolerance, "numeric tolerance");

  a2->callback([&] {
    if (a2->count("--N") == 0) c.N = 200000;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : sumdyn::kExitError;
  }

  for (auto* sc : app.get_subcommands()) {
    c.command = sc->get_name();
    if (c.command == "nil" || c.command == "repro")
      for (auto* inner : sc->get_subcommands()) c.sub = inner->get_name();
  }

  try {
    auto r = sumdyn::dispatch(c);
    if (c.out_path.empty()) {
      std::cout << r.output;
    } else {
      std::ofstream out(c.out_path);
      if (!out) throw sumdyn::Error("cannot write '" + c.out_path + "'");
      out << r.output;
    }
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sumdyn::kExitError;
  }
}
