#include <iostream>

#include <CLI11.hpp>

#include "kforge/cli.hpp"

int main(int argc, char** argv) {
  kforge::RunConfig cfg;
  CLI::App app{"kforge: exact verifier for the cyclotomic-unit Euler system and Kolyvagin classes"};
  app.set_version_flag("--version", std::string(kforge::kToolVersion));
  app.require_subcommand(1, 1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--omega", cfg.omega, "Omega as a:n pairs, optionally with compose=n and twist=h:e")
        ->capture_default_str();
    sub->add_option("--p", cfg.p, "odd prime p")->capture_default_str();
    sub->add_option("--n", cfg.n, "tower level n, F = Q(zeta_{p^(n+1)})^+")->capture_default_str();
    sub->add_option("--M", cfg.M, "modulus M, a power of p")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for the Hilbert 90 resolvent")->capture_default_str();
    sub->add_option("--cache-dir", cfg.cache_dir, "directory for cached field tables (KFORGE_CACHE overrides)");
    sub->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
    sub->add_flag("--timing", cfg.timing, "add timing_ms to every check (breaks byte determinism)");
  };

  auto* axioms = app.add_subcommand("axioms", "check equivariance, distribution, congruence and norm relations");
  add_common(axioms);
  axioms->add_option("--eta", cfg.etas, "orders of the test roots eta")->delimiter(',')->capture_default_str();
  axioms->add_option("--aux", cfg.aux_primes, "auxiliary primes")->delimiter(',')->capture_default_str();

  auto* kappa = app.add_subcommand("kappa", "build the Kolyvagin class kappa(s)");
  add_common(kappa);
  kappa->add_option("--s", cfg.s, "prime factors of s, comma separated")->delimiter(',');

  auto* factorize = app.add_subcommand("factorize", "check the factorization of kappa(sq) above q");
  add_common(factorize);
  factorize->add_option("--s", cfg.s, "prime factors of s, comma separated")->delimiter(',');
  factorize->add_option("--q", cfg.q, "primes q, comma separated")->delimiter(',')->required();

  auto* primes = app.add_subcommand("primes", "list Kolyvagin primes up to a limit");
  add_common(primes);
  primes->add_option("--limit", cfg.limit, "search bound, at most 1000000")->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "write phi(zeta_n) over the real cyclotomic units");
  add_common(decompose);
  decompose->add_flag("--self-test", cfg.self_test, "decompose the first generator instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kforge::kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return kforge::run_and_write(cfg, std::cout, std::cerr);
}
