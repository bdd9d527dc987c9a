#include "qfourier/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <regex>
#include <sstream>

#include "qfourier/report.hpp"

namespace qfourier {

namespace {

struct GlobalOptions {
  std::uint32_t p = 3;
  int M = 16;
  std::string q = "0";
  std::int64_t l = 1;
  std::string format = "json";
  std::uint64_t seed = 0;
  int threads = 1;
  double min_digits = 1;
};

int default_precision() {
  const char* env = std::getenv(kPrecisionEnv);
  if (env == nullptr || *env == '\0') return 16;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 4 || v > 4096) {
    throw DomainError(std::string(kPrecisionEnv) + " must be an integer in [4, 4096]");
  }
  return static_cast<int>(v);
}

mpq_class parse_rational(const std::string& s) {
  static const std::regex re(R"(^\s*-?\d+(/\d+)?\s*$)");
  if (!std::regex_match(s, re)) throw DomainError("malformed rational '" + s + "'");
  mpq_class q;
  std::string t = s;
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  if (q.set_str(t, 10) != 0 || q.get_den() == 0) throw DomainError("malformed rational '" + s + "'");
  q.canonicalize();
  return q;
}

std::pair<int, int> parse_levels(const std::string& s) {
  static const std::regex re(R"(^(\d+)\.\.(\d+)$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw DomainError("levels must look like A..B");
  const int a = std::stoi(m[1]);
  const int b = std::stoi(m[2]);
  if (a < 1 || b <= a) throw DomainError("levels A..B need 1 <= A < B");
  return {a, b};
}

QConfig make_q(const GlobalOptions& g, const PrimeContext& ctx) {
  return QConfig::from_offset(parse_rational(g.q), ctx);
}

RunParams run_params(const GlobalOptions& g, const QConfig& q) {
  RunParams r;
  r.p = g.p;
  r.M = g.M;
  r.q = q.q_string();
  r.l = g.l;
  return r;
}

bool below(const ValuationBound& v, double min_digits) { return v.value.to_double() < min_digits; }

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  GlobalOptions g;
  try {
    g.M = default_precision();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"p-adic q-integrals, I_q-Fourier transforms and convolution identities", "qfourier"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--p", g.p, "prime p >= 3")->capture_default_str();
  app.add_option("--M", g.M, "working precision in base-p digits")->capture_default_str();
  app.add_option("--q", g.q, "q - 1 as a rational, e.g. 3/1 for q = 4; 0 means q = 1")
      ->capture_default_str();
  app.add_option("--l", g.l, "l in the sums over 0 <= x < l p^N")->capture_default_str();
  app.add_option("--format", g.format, "json, csv or text")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for corpus sampling")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for Riemann sums")->capture_default_str();
  app.add_option("--min-digits", g.min_digits, "required corrected residual valuation")
      ->capture_default_str();

  int max_m = 10;
  int bern_N = 8;
  auto* bern = app.add_subcommand("bernoulli", "Volkenborn moments against exact Bernoulli numbers");
  bern->add_option("--max-m", max_m, "largest moment")->capture_default_str();
  bern->add_option("--N", bern_N, "integral level")->capture_default_str();

  std::string int_f;
  std::string levels;
  int int_n = -1;
  auto* integ = app.add_subcommand("integrate", "I_q(f) over increasing levels");
  integ->add_option("--f", int_f, "function in the DSL")->required();
  integ->add_option("--levels", levels, "level range A..B (default 1..8)");
  integ->add_option("--n", int_n, "level of the value ring (default: from f)");

  std::string tr_f;
  int tr_n = 2;
  int tr_N = -1;
  std::string twist = "plain";
  std::optional<std::int64_t> invert_at;
  auto* trans = app.add_subcommand("transform", "I_q-Fourier transform over C_{p^n}");
  trans->add_option("--f", tr_f, "function in the DSL")->required();
  trans->add_option("--n", tr_n, "character level")->capture_default_str();
  trans->add_option("--N", tr_N, "integral level (default 8, or n with --invert-at)");
  trans->add_option("--twist", twist, "plain or qinv")->capture_default_str();
  trans->add_option("--invert-at", invert_at, "also invert the table at x");

  std::string suite = "prop1,mult,thm2,thm3,shift";
  std::string vf = "x";
  std::string vg = "x^2";
  int v_n = 2;
  int v_N = 8;
  int outer = 0;
  int corpus = 0;
  auto* ver = app.add_subcommand("verify", "residuals of the transform and convolution identities");
  ver->add_option("--suite", suite, "comma-separated: prop1,mult,thm2,thm3,shift,closed_form")
      ->capture_default_str();
  ver->add_option("--f", vf, "first function")->capture_default_str();
  ver->add_option("--g", vg, "second function")->capture_default_str();
  ver->add_option("--n", v_n, "character level")->capture_default_str();
  ver->add_option("--N", v_N, "integral level")->capture_default_str();
  ver->add_option("--outer-level", outer, "level of the outer integral in thm3 (default min(N, n+2))");
  ver->add_option("--corpus", corpus, "sample this many (f, g) pairs from --seed instead of --f/--g");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const Format format = parse_format(g.format);
    const PrimeContext ctx(g.p, g.M);
    const QConfig q = make_q(g, ctx);
    const FunctionEnv env{g.p, 1};
    if (g.l > 1 && !(*integ)) throw DomainError("--l > 1 is only supported by integrate");

    if (*bern) {
      if (max_m < 0 || max_m > 30) throw DomainError("--max-m must be in [0, 30]");
      const IntegralConfig cfg(QConfig::one(ctx), make_ring(ctx, 0), bern_N, 1, g.threads);
      cfg.validate();
      std::vector<BernoulliRow> rows;
      for (int m = 0; m <= max_m; ++m) {
        BernoulliRow r;
        r.m = m;
        r.exact = bernoulli_exact(m);
        r.computed = riemann_sum(UDFunction::identity().pow(static_cast<unsigned>(m)), cfg);
        r.agree = (r.computed - CycloElement::from_rational(cfg.ring, r.exact)).valuation_bound();
        rows.push_back(r);
      }
      out << emit_bernoulli(rows, run_params(g, QConfig::one(ctx)), bern_N, format);
      return kExitOk;
    }

    if (*integ) {
      const UDFunction f = parse_fn(int_f, env);
      auto [a, b] = levels.empty() ? std::pair<int, int>{1, 8} : parse_levels(levels);
      const int level = std::max(int_n, f.max_char_level());
      const IntegralConfig cfg(q, make_ring(ctx, level), b, g.l, g.threads);
      cfg.validate();
      const IntegralResult r = iq_limit(f, cfg, b, a);
      if (!r.converged) err << "warning: stabilization digits decreased between levels\n";
      out << emit_integral(r, format);
      return kExitOk;
    }

    if (*trans) {
      const UDFunction f = parse_fn(tr_f, env);
      int N = tr_N;
      if (N < 0) N = invert_at ? tr_n : 8;
      if (invert_at && N != tr_n) throw DomainError("--invert-at needs matched levels N = n");
      Twist tw;
      if (twist == "plain") {
        tw = Twist::plain;
      } else if (twist == "qinv") {
        tw = Twist::q_inverse;
      } else {
        throw DomainError("--twist must be plain or qinv");
      }
      const IntegralConfig cfg(q, make_ring(ctx, std::max(tr_n, f.max_char_level())), N, 1, g.threads);
      const SpectralTable t = iq_transform(f, tr_n, cfg, tw);
      std::optional<InverseSample> inv;
      if (invert_at) {
        if (tw != Twist::plain) throw DomainError("--invert-at needs the plain transform");
        InverseSample s;
        s.x = *invert_at;
        s.value = inverse_finite(t, s.x);
        const CycloElement target = q_power(q, s.x) * BoundFunction(f, cfg.ring, q)(s.x);
        s.residual = (q.inverse_limit_scalar() * s.value - target).valuation_bound();
        inv = s;
      }
      RunParams params = run_params(g, q);
      params.f = tr_f;
      out << emit_table(t, params, inv, format);
      return kExitOk;
    }

    // verify
    std::vector<Identity> ids;
    {
      std::stringstream ss(suite);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) ids.push_back(parse_identity(item));
      }
      if (ids.empty()) throw DomainError("empty --suite");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    if (corpus > 0) {
      const auto fs = random_functions(g.seed, corpus, env);
      const auto gs = random_functions(g.seed + 1, corpus, env);
      for (int i = 0; i < corpus; ++i) pairs.emplace_back(fs[static_cast<std::size_t>(i)], gs[static_cast<std::size_t>(i)]);
    } else {
      pairs.emplace_back(vf, vg);
    }
    std::vector<VerificationRun> runs;
    bool failed = false;
    for (const auto& [fs, gs] : pairs) {
      const UDFunction f = parse_fn(fs, env);
      const UDFunction gg = parse_fn(gs, env);
      const int level = std::max({v_n, f.max_char_level(), gg.max_char_level()});
      const IntegralConfig cfg(q, make_ring(ctx, level), v_N, 1, g.threads);
      for (Identity id : ids) {
        VerificationRun run;
        run.report = verify_identity(id, f, gg, cfg, v_n, outer);
        run.params = run_params(g, q);
        run.params.f = fs;
        run.params.g = gs;
        if (below(run.report.corrected, g.min_digits)) failed = true;
        runs.push_back(std::move(run));
      }
    }
    out << emit_verification(runs, format);
    if (failed) {
      err << "corrected residual below --min-digits " << g.min_digits << "\n";
      return kExitResidual;
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace qfourier
