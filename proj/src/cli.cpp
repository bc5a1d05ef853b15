#include "kforge/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "kforge/error.hpp"
#include "kforge/euler.hpp"
#include "kforge/kolyvagin.hpp"
#include "kforge/primes.hpp"

namespace kforge {

namespace {

constexpr u64 kPrimeLimitMax = 1000000;
constexpr u64 kDecomposeDegreeMax = 40;

std::string join(const std::vector<u64>& xs, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

Json str_array(const std::vector<u64>& xs) {
  Json a = Json::array();
  for (u64 x : xs) a.push_back(std::to_string(x));
  return a;
}

Json str_array(const std::vector<i64>& xs) {
  Json a = Json::array();
  for (i64 x : xs) a.push_back(std::to_string(x));
  return a;
}

Json pairs_object(const std::vector<std::pair<std::string, std::string>>& kv) {
  Json o = Json::object();
  for (const auto& [k, v] : kv) o[k] = v;
  return o;
}

Json witness_json(const Witness& w) {
  Json o = Json::object();
  o["label"] = w.label;
  o["conductor"] = std::to_string(w.conductor);
  o["coeffs"] = w.coeffs;
  return o;
}

Json element_json(const std::string& label, const CycloElt& x) { return witness_json(make_witness(label, x)); }

Json ideal_vector_json(const IdealVector& v) { return str_array(v.entries); }

const char* status_of(bool pass) { return pass ? "pass" : "fail"; }

Json make_check(const std::string& name, const std::string& anchor) {
  Json c = Json::object();
  c["name"] = name;
  c["anchor"] = anchor;
  c["status"] = "fail";
  c["params"] = Json::object();
  c["witness"] = Json::array();
  return c;
}

// Collects check entries and times each body when asked to.
class ReportBuilder {
 public:
  explicit ReportBuilder(bool timing) : timing_(timing) {}

  // body fills the entry; DomainError marks the point skipped, other library
  // errors are recorded as failures. InternalInconsistency propagates.
  void run(Json check, const std::function<void(Json&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(check);
    } catch (const InternalInconsistency&) {
      throw;
    } catch (const DomainError& e) {
      check["status"] = "skipped";
      check["reason"] = e.what();
    } catch (const Error& e) {
      check["status"] = "fail";
      check["error"] = e.what();
    }
    if (timing_) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
      check["timing_ms"] = std::to_string(ms.count());
    }
    checks_.push_back(std::move(check));
  }

  void skipped(Json check, const std::string& reason) {
    check["status"] = "skipped";
    check["reason"] = reason;
    checks_.push_back(std::move(check));
  }

  Json take() { return std::move(checks_); }

 private:
  bool timing_;
  Json checks_ = Json::array();
};

void fill_axiom(Json& c, const AxiomReport& r) {
  c["status"] = status_of(r.pass);
  c["params"] = pairs_object(r.params);
  for (const auto& w : r.witness) c["witness"].push_back(witness_json(w));
  if (!r.details.empty()) c["details"] = pairs_object(r.details);
}

std::string root_label(u64 N) { return N == 1 ? "1" : "zeta_" + std::to_string(N); }

KolyParams koly_params(const RunConfig& cfg) {
  KolyParams params{cfg.p, cfg.n, cfg.M};
  params.validate();
  return params;
}

Json base_parameters(const EulerSystem& E) {
  Json p = Json::object();
  p["omega"] = E.to_string();
  p["excluded_primes"] = str_array(E.excluded_primes());
  return p;
}

Json koly_parameters(const RunConfig& cfg, const EulerSystem& E) {
  Json p = base_parameters(E);
  p["p"] = std::to_string(cfg.p);
  p["n"] = std::to_string(cfg.n);
  p["M"] = std::to_string(cfg.M);
  p["s"] = str_array(cfg.s);
  return p;
}

// ---------------------------------------------------------------------------
// axioms

Json cmd_axioms(const RunConfig& cfg, Json& parameters) {
  const EulerSystem E = EulerSystem::parse(cfg.omega);
  for (u64 N : cfg.etas) {
    if (N == 0) throw DomainError("eta order must be positive");
  }
  for (u64 q : cfg.aux_primes) {
    if (!is_prime(q)) throw DomainError("auxiliary prime " + std::to_string(q) + " is not prime");
  }
  parameters = base_parameters(E);
  parameters["etas"] = str_array(cfg.etas);
  parameters["aux_primes"] = str_array(cfg.aux_primes);
  parameters["p"] = std::to_string(cfg.p);
  parameters["n"] = std::to_string(cfg.n);

  ReportBuilder rb(cfg.timing);
  std::vector<i64> multipliers{-1};
  for (u64 q : cfg.aux_primes) multipliers.push_back(static_cast<i64>(q));

  for (u64 N : cfg.etas) {
    const RootOfUnity eta(N, 1);
    const std::string label = root_label(N);
    if (!E.admits_order(N)) {
      Json c = make_check("equivariance", "Galois equivariance of phi");
      c["params"]["eta"] = label;
      rb.skipped(std::move(c), "eta outside W_S: order " + std::to_string(N) + " meets S");
      continue;
    }
    for (i64 a : multipliers) {
      rb.run(make_check("equivariance", "Galois equivariance of phi"), [&](Json& c) {
        c["params"] = Json{{"eta", label}, {"a", std::to_string(a)}};
        fill_axiom(c, check_equivariance(E, eta, a));
      });
    }
    for (u64 q : cfg.aux_primes) {
      rb.run(make_check("distribution", "distribution relation over mu_q"), [&](Json& c) {
        c["params"] = Json{{"eta", label}, {"q", std::to_string(q)}};
        fill_axiom(c, check_distribution(E, eta, q));
      });
      rb.run(make_check("congruence", "congruence modulo primes above q"), [&](Json& c) {
        c["params"] = Json{{"eta", label}, {"q", std::to_string(q)}};
        fill_axiom(c, check_congruence(E, eta, q));
      });
    }
    if (N > 1) {
      rb.run(make_check("unit", "phi(eta) is a unit"), [&](Json& c) {
        c["params"] = Json{{"eta", label}};
        fill_axiom(c, check_unit(E, eta));
      });
    }
  }

  for (u64 m : cfg.etas) {
    if (m <= 1) continue;
    for (u64 q : cfg.aux_primes) {
      rb.run(make_check("frobenius_norm", "Frobenius norm relation"), [&](Json& c) {
        c["params"] = Json{{"m", std::to_string(m)}, {"q", std::to_string(q)}};
        fill_axiom(c, check_frobenius_norm(E, m, q));
      });
    }
  }
  rb.run(make_check("tower_norm", "norm compatibility in the p-power tower"), [&](Json& c) {
    c["params"] = Json{{"p", std::to_string(cfg.p)}, {"n", std::to_string(cfg.n)}};
    fill_axiom(c, check_tower_norm(E, cfg.p, cfg.n));
  });
  return rb.take();
}

// ---------------------------------------------------------------------------
// kappa

void add_kappa_checks(ReportBuilder& rb, const KappaClass& k) {
  for (const auto& v : k.cocycle.values) {
    Json c = make_check("cocycle_certificate", "closed-form M-th root of (sigma_q - 1) D_s phi");
    rb.run(std::move(c), [&](Json& c) {
      c["params"] = Json{{"q", std::to_string(v.q)}, {"generator", std::to_string(v.generator)}};
      c["status"] = status_of(v.certified);
      c["witness"].push_back(element_json("c_sigma", v.c));
    });
    rb.run(make_check("cyclic_norm", "norm of the cocycle over <sigma_q> is trivial"), [&](Json& c) {
      c["params"] = Json{{"q", std::to_string(v.q)}};
      c["status"] = status_of(v.norm_trivial);
    });
  }
  if (!k.s.empty()) {
    rb.run(make_check("hilbert90", "(sigma - 1) beta = c for every generator"), [&](Json& c) {
      c["params"] = Json{{"seed", std::to_string(k.seed)}};
      c["status"] = "pass";  // kappa() rejects a resolvent that fails the check
      c["witness"].push_back(element_json("beta", k.beta));
      c["details"] = Json{{"attempts", std::to_string(k.attempts)}};
    });
  }
  rb.run(make_check("kappa_invariance", "kappa lies in the real subfield F"), [&](Json& c) {
    c["params"] = Json{{"s", join(k.s, "*")}};
    c["status"] = status_of(k.invariant);
    c["witness"].push_back(element_json("kappa", k.kappa));
    if (!k.s.empty()) c["witness"].push_back(element_json("D_s phi(zeta_n eta_s)", k.cocycle.derivative));
  });
}

Json cmd_kappa(const RunConfig& cfg, Json& parameters) {
  const EulerSystem E = EulerSystem::parse(cfg.omega);
  const KolyParams params = koly_params(cfg);
  validate_for(params, E);
  for (u64 q : cfg.s) require_kolyvagin_prime(params, q);
  parameters = koly_parameters(cfg, E);
  parameters["seed"] = std::to_string(cfg.seed);

  ReportBuilder rb(cfg.timing);
  const KappaClass k = kappa(E, params, cfg.s, cfg.seed);
  add_kappa_checks(rb, k);
  return rb.take();
}

// ---------------------------------------------------------------------------
// factorize

Json cmd_factorize(const RunConfig& cfg, Json& parameters) {
  const EulerSystem E = EulerSystem::parse(cfg.omega);
  const KolyParams params = koly_params(cfg);
  validate_for(params, E);
  if (cfg.q.empty()) throw DomainError("factorize needs at least one --q");
  for (u64 q : cfg.s) require_kolyvagin_prime(params, q);
  for (u64 q : cfg.q) {
    require_kolyvagin_prime(params, q);
    if (std::find(cfg.s.begin(), cfg.s.end(), q) != cfg.s.end()) {
      throw DomainError("q = " + std::to_string(q) + " already divides s");
    }
  }
  parameters = koly_parameters(cfg, E);
  parameters["q"] = str_array(cfg.q);
  parameters["seed"] = std::to_string(cfg.seed);

  ReportBuilder rb(cfg.timing);
  const KappaClass ks = kappa(E, params, cfg.s, cfg.seed);
  for (u64 q : cfg.q) {
    std::vector<u64> sq = cfg.s;
    sq.push_back(q);
    std::optional<FactorizationReport> rep;
    auto compute = [&] {
      if (!rep) rep = check_factorization(ks, kappa(E, params, sq, cfg.seed), q);
      return *rep;
    };
    rb.run(make_check("factorization_unramified", "[kappa(s)]_q = 0"), [&](Json& c) {
      c["params"] = Json{{"s", join(cfg.s, "*")}, {"q", std::to_string(q)}};
      const FactorizationReport r = compute();
      c["status"] = status_of(r.part1_holds);
      c["witness"].push_back(Json{{"label", "[kappa(s)]_q"}, {"vector", ideal_vector_json(r.part1)}});
    });
    rb.run(make_check("factorization_dlog", "[kappa(sq)]_q = lambda_q(kappa(s))"), [&](Json& c) {
      c["params"] = Json{{"s", join(cfg.s, "*")}, {"q", std::to_string(q)}};
      const FactorizationReport r = compute();
      c["status"] = status_of(r.part2_holds);
      c["witness"].push_back(Json{{"label", "[kappa(sq)]_q"}, {"vector", ideal_vector_json(r.valuation_side)}});
      c["witness"].push_back(Json{{"label", "lambda_q(kappa(s))"}, {"vector", ideal_vector_json(r.dlog_side)}});
      c["details"] = Json{{"valuations", str_array(r.valuations)}};
    });
    if (cfg.s.empty()) {
      rb.run(make_check("class_relation", "lambda_bar_q(phi(zeta_n)) annihilates the class of P_q"), [&](Json& c) {
        c["params"] = Json{{"q", std::to_string(q)}};
        const SplitPrimeData data = split_prime_data(q, params.conductor());
        const ClassRelation rel = class_relation(E, params, q, cfg.seed);
        c["status"] = status_of(rel.holds());
        Json theta = Json::object();
        theta["reference_root"] = std::to_string(data.roots[data.pairs[rel.theta.reference].first]);
        theta["group"] = str_array(rel.theta.group);
        theta["coeffs"] = str_array(rel.theta.coeffs);
        c["witness"].push_back(Json{{"label", "theta"}, {"element", theta}});
        c["witness"].push_back(Json{{"label", "[kappa(q)]_q"}, {"vector", ideal_vector_json(rel.witness_vector)}});
        c["witness"].push_back(Json{{"label", "theta . P_q"}, {"vector", ideal_vector_json(rel.lambda_vector)}});
        c["details"] = Json{{"vectors_match", rel.vectors_match ? "true" : "false"},
                            {"support_above_q", rel.support_above_q ? "true" : "false"},
                            {"norm_cofactor", to_string(rel.norm_cofactor)}};
      });
    }
  }
  return rb.take();
}

// ---------------------------------------------------------------------------
// primes

Json cmd_primes(const RunConfig& cfg, Json& parameters) {
  const KolyParams params = koly_params(cfg);
  if (cfg.limit > kPrimeLimitMax) throw DomainError("prime search limit must be at most 1000000");
  parameters = Json::object();
  parameters["p"] = std::to_string(cfg.p);
  parameters["n"] = std::to_string(cfg.n);
  parameters["M"] = std::to_string(cfg.M);
  parameters["limit"] = std::to_string(cfg.limit);

  const u64 m = params.conductor();
  const ZPoly phi_m = cyclotomic_polynomial(m);
  const u64 deg = totient(m);
  ReportBuilder rb(cfg.timing);
  const std::vector<u64> found = find_kolyvagin_primes(params, cfg.limit);

  rb.run(make_check("kolyvagin_primes", "q splits completely in F and q = 1 mod M"), [&](Json& c) {
    c["params"] = Json{{"limit", std::to_string(cfg.limit)}};
    c["status"] = "pass";
    c["witness"].push_back(Json{{"label", "primes"}, {"values", str_array(found)}});
  });
  for (u64 q : found) {
    rb.run(make_check("splitting", "roots of Phi_m mod q"), [&](Json& c) {
      c["params"] = Json{{"q", std::to_string(q)}};
      if (q % m != 1) {
        // q = -1 mod m splits in F but not in Q(zeta_m); no degree-one roots to list.
        c["status"] = status_of(q % m == m - 1 && q % params.M == 1);
        c["details"] = Json{{"q_mod_m", std::to_string(q % m)}};
        return;
      }
      const SplitPrimeData d = split_prime_data(q, m);
      bool roots_ok = d.roots.size() == deg;
      const Integer Q(static_cast<unsigned long>(q));
      for (u64 r : d.roots) {
        roots_ok = roots_ok && eval_mod(phi_m, Integer(static_cast<unsigned long>(r)), Q) == 0;
      }
      c["status"] = status_of(roots_ok && d.pairs.size() == deg / 2);
      Json w = Json::object();
      w["g"] = std::to_string(d.g);
      w["roots"] = str_array(d.roots);
      w["primitive_root"] = std::to_string(d.t);
      w["gamma"] = std::to_string(d.gamma);
      c["witness"].push_back(Json{{"label", "root data"}, {"values", w}});
    });
  }
  return rb.take();
}

// ---------------------------------------------------------------------------
// decompose

Json cmd_decompose(const RunConfig& cfg, Json& parameters) {
  const EulerSystem E = EulerSystem::parse(cfg.omega);
  if (cfg.p == 2 || !is_prime(cfg.p)) throw DomainError("p must be an odd prime");
  u64 N = cfg.p;
  for (unsigned i = 0; i < cfg.n; ++i) N *= cfg.p;
  if (totient(N) > kDecomposeDegreeMax) throw DomainError("decompose is limited to phi(p^(n+1)) <= 40");
  if (!cfg.self_test && !E.admits_order(N)) throw DomainError("eta outside W_S: order " + std::to_string(N) + " meets S");
  parameters = base_parameters(E);
  parameters["p"] = std::to_string(cfg.p);
  parameters["n"] = std::to_string(cfg.n);
  parameters["self_test"] = cfg.self_test ? "true" : "false";

  const std::vector<u64> gens = cyclotomic_unit_indices(cfg.p, cfg.n);
  ReportBuilder rb(cfg.timing);
  rb.run(make_check("cyclotomic_unit_decomposition", "phi(zeta_n) lies in the group of cyclotomic units"),
         [&](Json& c) {
           c["params"] = Json{{"conductor", std::to_string(N)}};
           if (cfg.self_test && gens.empty()) throw DomainError("no cyclotomic unit generators for this conductor");
           const CycloElt u =
               cfg.self_test ? cyclotomic_unit(cyclotomic_field(N), gens.front()) : phi_eval(E, RootOfUnity(N, 1));
           c["witness"].push_back(element_json(cfg.self_test ? "xi_" + std::to_string(gens.front()) : "phi(zeta_n)", u));
           const Decomposition d = decompose_over_cyclotomic_units(u, cfg.p, cfg.n);
           bool ok = d.verified;
           if (cfg.self_test) {
             for (std::size_t i = 0; i < d.exponents.size(); ++i) ok = ok && d.exponents[i] == (i == 0 ? 1 : 0);
             ok = ok && d.sign == 1 && d.root_exponent == 0;
           }
           c["status"] = status_of(ok);
           Json exps = Json::array();
           for (const auto& e : d.exponents) exps.push_back(to_string(e));
           c["witness"].push_back(Json{{"label", "decomposition"},
                                       {"generators", str_array(d.generators)},
                                       {"exponents", exps},
                                       {"sign", std::to_string(d.sign)},
                                       {"root_exponent", std::to_string(d.root_exponent)}});
           c["details"] = Json{{"verified", d.verified ? "true" : "false"},
                               {"precision_bits", std::to_string(d.precision_bits)}};
         });
  return rb.take();
}

std::string overall_status(const Json& checks) {
  for (const auto& c : checks) {
    if (c["status"] == "fail") return "fail";
  }
  return "pass";
}

void write_atomically(const std::filesystem::path& path, const std::string& data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::string>{}(data) & 0xffffff);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot write " + tmp.string());
    f << data;
    if (!f) throw DomainError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DomainError("cannot write " + path.string());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Field table cache

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

JsonFieldStore::JsonFieldStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path JsonFieldStore::path_for(u64 m) const {
  return dir_ / ("phi_" + std::to_string(m) + ".json");
}

namespace {

Json tables_payload(const FieldTables& t) {
  Json body = Json::object();
  body["m"] = std::to_string(t.m);
  Json coeffs = Json::array();
  for (long c : t.cyclo_coeffs) coeffs.push_back(std::to_string(c));
  body["cyclo_coeffs"] = coeffs;
  body["unit_group"] = str_array(t.unit_group);
  return body;
}

}  // namespace

std::optional<FieldTables> JsonFieldStore::load(u64 m) {
  std::ifstream f(path_for(m), std::ios::binary);
  if (!f) return std::nullopt;
  try {
    const Json doc = Json::parse(f);
    const Json& body = doc.at("tables");
    if (doc.at("checksum").get<std::string>() != fnv1a_hex(body.dump())) return std::nullopt;
    FieldTables t;
    t.m = std::stoull(body.at("m").get<std::string>());
    if (t.m != m) return std::nullopt;
    for (const auto& c : body.at("cyclo_coeffs")) t.cyclo_coeffs.push_back(std::stol(c.get<std::string>()));
    for (const auto& a : body.at("unit_group")) t.unit_group.push_back(std::stoull(a.get<std::string>()));
    return t;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void JsonFieldStore::save(const FieldTables& tables) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) return;
  Json doc = Json::object();
  const Json body = tables_payload(tables);
  doc["checksum"] = fnv1a_hex(body.dump());
  doc["tables"] = body;
  try {
    write_atomically(path_for(tables.m), doc.dump(1) + "\n");
  } catch (const DomainError&) {
    // The cache is advisory; an unwritable directory only costs recomputation.
  }
}

std::string effective_cache_dir(const RunConfig& config) {
  if (const char* env = std::getenv("KFORGE_CACHE"); env && *env) return env;
  return config.cache_dir;
}

// ---------------------------------------------------------------------------
// Driver

Json run_command(const RunConfig& cfg) {
  using Handler = Json (*)(const RunConfig&, Json&);
  static const std::vector<std::pair<std::string, Handler>> commands{
      {"axioms", cmd_axioms}, {"kappa", cmd_kappa}, {"factorize", cmd_factorize},
      {"primes", cmd_primes}, {"decompose", cmd_decompose}};
  Handler handler = nullptr;
  for (const auto& [name, h] : commands) {
    if (name == cfg.command) handler = h;
  }
  if (!handler) throw DomainError("unknown command '" + cfg.command + "'");

  Json parameters;
  Json checks = handler(cfg, parameters);
  const std::string status = overall_status(checks);
  Json report = Json::object();
  report["tool"] = "kforge";
  report["version"] = kToolVersion;
  report["command"] = cfg.command;
  report["parameters"] = std::move(parameters);
  report["checks"] = std::move(checks);
  report["status"] = status;
  return report;
}

int report_exit_code(const Json& report) {
  return report.at("status") == "pass" ? kExitPass : kExitCheckFailed;
}

int run_and_write(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string cache = effective_cache_dir(config);
  set_field_table_store(cache.empty() ? nullptr : std::make_shared<JsonFieldStore>(cache));
  try {
    const Json report = run_command(config);
    const std::string text = report.dump(2) + "\n";
    if (config.out.empty()) {
      out << text;
    } else {
      write_atomically(config.out, text);
    }
    return report_exit_code(report);
  } catch (const InternalInconsistency& e) {
    err << "kforge: " << e.what() << "\n";
    return kExitInternal;
  } catch (const DomainError& e) {
    err << "kforge: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "kforge: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace kforge
