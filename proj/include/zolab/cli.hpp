#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zolab/catalog.hpp"
#include "zolab/classify.hpp"
#include "zolab/csv.hpp"
#include "zolab/error.hpp"
#include "zolab/kronecker.hpp"
#include "zolab/lambda.hpp"
#include "zolab/series.hpp"
#include "zolab/spec_json.hpp"
#include "zolab/witness.hpp"

namespace zolab::cli {

struct RunConfig {
  std::string set_name;
  std::string spec_file;
  std::string window;
  std::string eps = "1";
  std::int64_t depth = 2;
  int samples = 16;
  std::uint64_t seed = 1;
  std::uint64_t cap = 100'000'000;
  std::string out;
};

/// "a,b" or "[a,b)" with exact numbers.
inline Window parse_window(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != '[' && c != ']' && c != '(' && c != ')' && c != ' ') s += c;
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("window must look like a,b: " + text);
  return Window(parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1)));
}

inline std::string window_str(const Window& w) { return "[" + w.lo.get_str() + "," + w.hi.get_str() + ")"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ResolvedSet {
  std::string label;
  LambdaSpec spec;
  std::optional<CatalogEntry> entry;
};

inline ResolvedSet resolve_set(const RunConfig& cfg) {
  if (!cfg.spec_file.empty()) {
    if (!cfg.set_name.empty()) throw InvalidArgument("give either a set name or --spec, not both");
    return {cfg.spec_file, spec_json::parse(read_file(cfg.spec_file)), std::nullopt};
  }
  if (cfg.set_name.empty()) throw InvalidArgument("no set given (name or --spec FILE)");
  auto e = catalog::require(cfg.set_name);
  return {e.name, e.spec, e};
}

/// The family rule behind a catalog family or a "family" rule document.
inline std::shared_ptr<const FamilyRule> family_of(const ResolvedSet& set) {
  if (set.entry && set.entry->family) return set.entry->family;
  if (const auto* db = set.spec.as<LambdaSpec::DyadicBlocks>())
    return std::dynamic_pointer_cast<const FamilyRule>(db->rule);
  return nullptr;
}

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes to --out when given, otherwise to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidArgument("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

inline std::string side_path(const std::string& out, const std::string& suffix) {
  return out.empty() ? std::string() : out + suffix;
}

// ------------------------------------------------------------ commands

inline int cmd_gen(const RunConfig& cfg, std::optional<double> p, std::ostream& out) {
  auto set = resolve_set(cfg);
  const Window w = parse_window(cfg.window.empty() ? "0,4" : cfg.window);
  LambdaSpec s = set.spec;
  nlohmann::json params = {{"set", set.label}, {"window", window_str(w)}, {"cap", cfg.cap}};
  if (p) {
    s = thin(s, *p, cfg.seed);
    params["p"] = *p;
    params["seed"] = cfg.seed;
  }
  const auto xs = enumerate(s, w, EnumOptions{cfg.cap});
  Sink sink(cfg.out, out);
  csv::write_enumeration(sink.stream(), xs, params);
  return 0;
}

struct ClassifyFlags {
  bool mk = false, ratio = false, growth = false, lacunarity = false, speed = false;
};

inline int cmd_classify(const RunConfig& cfg, ClassifyFlags fl, std::ostream& out) {
  auto set = resolve_set(cfg);
  const Rational eps = parse_rational(cfg.eps);
  const Window horizon = parse_window(cfg.window.empty() ? "0,64" : cfg.window);
  const EnumOptions opt{cfg.cap};
  const auto family = family_of(set);
  if (!fl.mk && !fl.ratio && !fl.growth && !fl.lacunarity && !fl.speed) {
    fl.mk = family != nullptr;
    fl.ratio = !fl.mk;
  }
  auto verdicts = nlohmann::json::array();
  if (fl.mk) {
    if (family) {
      verdicts.push_back(classify::mk_type(*family).to_json());
    } else {
      Verdict v;
      v.criterion = "mk_type";
      v.note = "not a dyadic block family";
      verdicts.push_back(v.to_json());
    }
  }
  if (fl.ratio) verdicts.push_back(classify::count_ratio_test(set.spec, eps, horizon, cfg.depth, opt).verdict.to_json());
  if (fl.growth)
    verdicts.push_back(
        classify::growth_test(set.spec, eps, horizon, {Rational(2), Rational(16), Rational(256)}, 1e6, opt).to_json());
  if (fl.lacunarity) verdicts.push_back(classify::lacunarity_verdict(set.spec, horizon, opt).to_json());
  if (fl.speed) verdicts.push_back(classify::speed_verdict(set.spec, horizon, opt).to_json());
  nlohmann::json report = {{"schema", csv::kSchema},
                           {"set", set.label},
                           {"eps", eps.get_str()},
                           {"horizon", window_str(horizon)},
                           {"depth", cfg.depth},
                           {"verdicts", verdicts}};
  if (set.entry) {
    report["known_type"] = to_string(set.entry->known_type);
    report["source"] = set.entry->source;
  }
  Sink sink(cfg.out, out);
  sink.stream() << report.dump(2) << '\n';
  return 0;
}

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int cmd_witness(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto set = resolve_set(cfg);
  const Rational eps = parse_rational(cfg.eps);
  const Window horizon = parse_window(cfg.window.empty() ? "0,64" : cfg.window);
  if (!is_pow2(cfg.samples)) throw InvalidArgument("--samples must be a power of two");
  if (cfg.depth < 0) throw InvalidArgument("--depth must be nonnegative");
  const EnumOptions opt{cfg.cap};
  RatioChain chain;
  chain.eps_prime = eps / 3;
  if (cfg.depth > 0) {
    const auto rt = classify::count_ratio_test(set.spec, eps, horizon, cfg.depth, opt);
    if (static_cast<std::int64_t>(rt.chain.size()) < cfg.depth)
      throw InvalidChain("no ratio chain of depth " + std::to_string(cfg.depth) + " within " + window_str(horizon));
    chain = rt.chain;
    const auto d = static_cast<std::size_t>(cfg.depth);
    chain.indices.resize(d);
    chain.numerators.resize(d);
    chain.denominators.resize(d);
  } else {
    err << "warning: depth 0 gives f = 0\n";
  }
  const auto w = witness::build_type2_witness(set.spec, eps, chain, opt);
  std::vector<Rational> xs = witness::equispaced(w.ic, cfg.samples);
  for (auto& x : witness::equispaced(w.id, cfg.samples)) xs.push_back(x);
  const auto profiles = witness::sum_profile(w, xs, chain.size(), opt);
  const auto summary = witness::summarize(profiles);
  nlohmann::json params = {{"set", set.label},   {"eps", eps.get_str()},     {"depth", cfg.depth},
                           {"samples", cfg.samples}, {"horizon", window_str(horizon)}, {"cap", cfg.cap}};
  {
    Sink sink(side_path(cfg.out, ".f.csv"), out);
    nlohmann::json fp = params;
    fp["I_C"] = window_str(w.ic);
    fp["I_D"] = window_str(w.id);
    fp["axis"] = "rescaled by 1/eps_prime";
    fp["eps_prime"] = w.eps_prime.get_str();
    csv::write_step_function(sink.stream(), w.f, fp);
  }
  {
    Sink sink(cfg.out, out);
    csv::write_profiles(sink.stream(), profiles, params);
  }
  out << "summary: C-side max cumulative " << summary.c_max_cumulative.get_str() << " ("
      << fmt_double(to_double(summary.c_max_cumulative)) << "), D-side min cumulative "
      << (summary.d_min_cumulative ? summary.d_min_cumulative->get_str() : std::string("none"));
  if (summary.d_min_cumulative) out << " (" << fmt_double(to_double(*summary.d_min_cumulative)) << ")";
  out << ", certificates " << (summary.certificates_hold ? "hold" : "FAIL") << '\n';
  return summary.certificates_hold ? 0 : static_cast<int>(ExitCode::Witness);
}

struct Randt2Flags {
  double q = 0.5;
  std::int64_t m = 1;
  std::string gap = "4";
  std::int64_t terms = 10;
  double bound = 1e3;
};

inline int cmd_randt2(const RunConfig& cfg, const Randt2Flags& f, std::ostream& out) {
  nlohmann::json params = {{"q", f.q}, {"terms", f.terms}, {"bound", f.bound}};
  series::Randt2Report rep;
  if (!cfg.set_name.empty()) {
    auto e = catalog::require(cfg.set_name);
    if (!e.family) throw UnsupportedRule(e.name + " is not a dyadic block family");
    params["set"] = e.name;
    rep = series::randt2_series(e.family->m(), e.family->n(), f.q, f.terms, e.family->k0(), f.bound);
  } else {
    const Integer gap(f.gap);
    params["m"] = f.m;
    params["gap"] = gap.get_str();
    rep = series::randt2_constant(f.q, f.m, gap, f.terms, f.bound);
  }
  params["divergence_evidence"] = rep.divergence_evidence();
  Sink sink(cfg.out, out);
  csv::Writer w(sink.stream(), "randt2", params, {"k", "term", "log_term", "partial_sum"});
  for (std::size_t i = 0; i < rep.terms.size(); ++i)
    w.row({std::to_string(i + 1), fmt_double(rep.terms[i].value), fmt_double(rep.terms[i].log_value),
           fmt_double(rep.partial_sums[i])});
  return 0;
}

struct KronFlags {
  std::string mode = "solve";
  std::vector<std::string> theta, alpha;
  std::string bound;
};

inline int cmd_kron(const RunConfig& cfg, const KronFlags& f, std::ostream& out) {
  if (f.mode == "solve" || f.mode == "precheck") {
    kron::ApproxProblem pr;
    for (const auto& t : f.theta) pr.theta.push_back(parse_rational(t));
    for (const auto& a : f.alpha) pr.alpha.push_back(parse_rational(a));
    pr.eps = parse_rational(cfg.eps == "1" ? "0.05" : cfg.eps);
    if (!f.bound.empty()) pr.p_bound = Integer(f.bound);
    kron::validate(pr);
    nlohmann::json params = {{"theta", f.theta}, {"alpha", f.alpha}, {"eps", pr.eps.get_str()},
                             {"p_bound", pr.p_bound.get_str()}};
    Sink sink(cfg.out, out);
    if (f.mode == "precheck") {
      const auto pc = kron::precheck_condition_B(pr);
      params["admissible"] = pc.admissible;
      csv::Writer w(sink.stream(), "kron_precheck", params, {"j", "u_j"});
      for (std::size_t j = 0; j < pc.violating_u.size(); ++j) w.row({std::to_string(j + 1), std::to_string(pc.violating_u[j])});
      return 0;
    }
    const Integer p = kron::solve(pr);
    params["p"] = p.get_str();
    csv::Writer w(sink.stream(), "kron_solve", params, {"j", "theta", "alpha", "residual", "residual_decimal"});
    for (std::size_t j = 0; j < pr.theta.size(); ++j) {
      const Rational r = dist_to_int(pr.theta[j] * Rational(p) - pr.alpha[j]);
      w.row({std::to_string(j + 1), pr.theta[j].get_str(), pr.alpha[j].get_str(), r.get_str(), fmt_double(to_double(r))});
    }
    return 0;
  }
  if (f.mode == "witness") {
    const auto lambda1 = catalog::dyadic_a();
    const int K = static_cast<int>(cfg.depth);
    const auto alphas = kron::spaced_alphas(static_cast<std::size_t>(1) << (std::max(K, 0) + 1), cfg.seed);
    const Integer bound = f.bound.empty() ? pow2(40) : Integer(f.bound);
    const auto sw = kron::build_S_witness(*lambda1.family, alphas, K, bound);
    nlohmann::json params = {{"lambda1", lambda1.name}, {"depth", K}, {"seed", cfg.seed},
                             {"p_bound", bound.get_str()}, {"evidence", "numerical"}};
    auto levels = nlohmann::json::array();
    for (const auto& L : sw.levels)
      levels.push_back({{"k", L.k}, {"r", L.r}, {"p", L.p.get_str()}, {"t", L.t.get_str()}});
    params["levels"] = levels;
    {
      Sink sink(cfg.out, out);
      csv::write_s_intervals(sink.stream(), sw, params);
    }
    Sink sink(side_path(cfg.out, ".claims.csv"), out);
    const auto xs = witness::equispaced(Window(Rational(1, 4), Rational(3, 4)), std::max(cfg.samples, 1));
    const auto div = kron::check_claim_divergence(sw, xs, K);
    const auto conv = kron::check_claim_convergence(sw, K);
    nlohmann::json cp = params;
    cp["full_hit_fraction"] = div.full_hit_fraction();
    cp["min_S_separation"] = kron::min_s_separation(sw).get_str();
    cp["lambda1_on_grid"] = kron::lambda1_on_grid(*lambda1.family, sw);
    csv::Writer w(sink.stream(), "kron_claims", cp, {"k", "mu_F", "bound_F", "mu_G", "expected_G", "sum_mu_F", "ok"});
    for (std::size_t i = 0; i < conv.rows.size(); ++i) {
      const auto& r = conv.rows[i];
      w.row({std::to_string(r.k), r.mu_F.get_str(), r.bound_F.get_str(), r.mu_G.get_str(), r.expected_G.get_str(),
             conv.partial_sums[i].get_str(), r.f_ok && r.g_ok ? "1" : "0"});
    }
    return 0;
  }
  throw InvalidArgument("kron mode must be solve, precheck or witness");
}

inline int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  Sink sink(cfg.out, out);
  csv::Writer w(sink.stream(), "catalog", nlohmann::json::object(), {"name", "known_type", "source", "params"});
  for (const auto& name : catalog::listing_names()) {
    const auto e = catalog::require(name);
    w.row({e.name, to_string(e.known_type), e.source, e.params.dump()});
  }
  return 0;
}

// ------------------------------------------------------------ entry

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"zolab: discrete sets, zero-one laws and witnesses"};
  app.require_subcommand(1);
  RunConfig cfg;
  ClassifyFlags cf;
  Randt2Flags rf;
  KronFlags kf;
  std::optional<double> thin_p;
  double p_value = 1.0;

  auto common = [&](CLI::App* sc, bool needs_set) {
    if (needs_set) {
      sc->add_option("set", cfg.set_name, "catalog name");
      sc->add_option("--spec", cfg.spec_file, "spec document (JSON)");
    }
    sc->add_option("--window", cfg.window, "window or horizon a,b");
    sc->add_option("--eps", cfg.eps, "cell width / tolerance");
    sc->add_option("--depth", cfg.depth, "chain depth K");
    sc->add_option("--samples", cfg.samples, "samples per interval");
    sc->add_option("--seed", cfg.seed, "64-bit seed");
    sc->add_option("--cap", cfg.cap, "element cap per enumeration");
    sc->add_option("--out", cfg.out, "output file");
  };
  auto* gen = app.add_subcommand("gen", "enumerate a set on a window");
  common(gen, true);
  auto* thn = app.add_subcommand("thin", "enumerate a thinned set");
  common(thn, true);
  thn->add_option("--p", p_value, "retention probability")->required();
  auto* cls = app.add_subcommand("classify", "run classifiers");
  common(cls, true);
  cls->add_flag("--mk", cf.mk, "block-exponent gap criterion");
  cls->add_flag("--ratio", cf.ratio, "cell-count ratio chain");
  cls->add_flag("--growth", cf.growth, "a_n / c^n growth");
  cls->add_flag("--lacunarity", cf.lacunarity, "gap monotonicity");
  cls->add_flag("--speed", cf.speed, "enumeration speed");
  auto* wit = app.add_subcommand("witness", "build a type 2 witness and sum profiles");
  common(wit, true);
  auto* rnd = app.add_subcommand("randt2", "thinning series partial sums");
  common(rnd, true);
  rnd->add_option("--q", rf.q, "1 - retention probability");
  rnd->add_option("--m", rf.m, "constant exponent");
  rnd->add_option("--gap", rf.gap, "constant n_{k+1} - n_k");
  rnd->add_option("--terms", rf.terms, "number of terms");
  rnd->add_option("--bound", rf.bound, "divergence evidence bound");
  auto* krn = app.add_subcommand("kron", "simultaneous approximation and S witness");
  common(krn, false);
  krn->add_option("mode", kf.mode, "solve | precheck | witness");
  krn->add_option("--theta", kf.theta, "theta values")->delimiter(',');
  krn->add_option("--alpha", kf.alpha, "alpha values")->delimiter(',');
  krn->add_option("--bound", kf.bound, "largest |p| tried");
  auto* cat = app.add_subcommand("catalog", "list catalog entries");
  common(cat, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::BadInput);
  }
  try {
    if (thn->parsed()) thin_p = p_value;
    if (gen->parsed() || thn->parsed()) return cmd_gen(cfg, thin_p, out);
    if (cls->parsed()) return cmd_classify(cfg, cf, out);
    if (wit->parsed()) return cmd_witness(cfg, out, err);
    if (rnd->parsed()) return cmd_randt2(cfg, rf, out);
    if (krn->parsed()) return cmd_kron(cfg, kf, out);
    if (cat->parsed()) return cmd_catalog(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::BadInput);
  }
  return static_cast<int>(ExitCode::BadInput);
}

}  // namespace zolab::cli
