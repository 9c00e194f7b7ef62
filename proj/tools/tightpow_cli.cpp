// Command-line front end: gadgets, density exponents, sampling, oracle, pipeline and sweeps.
// Exit codes: 0 success, 1 search/stage failure, 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tightpow/tightpow.hpp>

namespace {

using namespace tightpow;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidArgument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string join(std::span<const Vertex> vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? " " : "") + std::to_string(vs[i]);
  return s;
}

RootedGadget make_gadget(const std::string& type, std::size_t k, std::size_t r, std::size_t b) {
  const PowerParams pp(k, r);
  if (type == "absorber") return absorber_gadget(pp);
  if (type == "connector") return connector_gadget(pp, b);
  if (type == "path") return power_path_gadget(pp, b);
  throw InvalidArgument("unknown gadget type '" + type + "'");
}

Hypergraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_text(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Powers of tight Hamilton cycles in randomly perturbed hypergraphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (default stdout)");

  // gadget
  std::string gadget_type = "absorber";
  std::size_t gk = 3, gr = 2, gb = 6;
  auto* gadget = app.add_subcommand("gadget", "Print a rooted gadget in the text edge-list format");
  gadget->add_option("--type", gadget_type, "absorber | connector | path")->check(CLI::IsMember({"absorber", "connector", "path"}));
  gadget->add_option("--k", gk)->check(CLI::Range(2, 8));
  gadget->add_option("--r", gr)->check(CLI::PositiveNumber);
  gadget->add_option("--b", gb, "Interior length (connector) or order (path)");

  // phi
  std::string phi_type = "absorber", phi_x, phi_eps, phi_engine = "dp";
  std::size_t pk = 3, pr = 2, pb = 6;
  bool phi_unrooted = false, phi_lemmas = false;
  auto* phi = app.add_subcommand("phi", "Exact minimum exponent of the rooted density functional");
  phi->add_option("--gadget", phi_type, "absorber | connector | path")->check(CLI::IsMember({"absorber", "connector", "path"}));
  phi->add_option("--k", pk)->check(CLI::Range(2, 8));
  phi->add_option("--r", pr)->check(CLI::PositiveNumber);
  phi->add_option("--b", pb, "Interior length (connector) or order (path); 0 with --lemmas picks the lemma's b");
  auto* x_opt = phi->add_option("--x", phi_x, "Exponent x of p = n^-x, as a rational");
  phi->add_option("--eps", phi_eps, "Use x = sigma + eps")->excludes(x_opt);
  phi->add_option("--engine", phi_engine)->check(CLI::IsMember({"dp", "naive"}));
  phi->add_flag("--unrooted", phi_unrooted, "Drop the roots (F minus W)");
  phi->add_flag("--lemmas", phi_lemmas, "Check both density lemmas at their stated bounds");

  // gnp
  std::size_t gn = 10, gnk = 3;
  double gp = -1.0, gx = -1.0;
  auto* gnp = app.add_subcommand("gnp", "Sample G^(k)(n, p)");
  gnp->add_option("--n", gn)->required();
  gnp->add_option("--k", gnk)->check(CLI::Range(2, 8));
  auto* gp_opt = gnp->add_option("--p", gp)->check(CLI::Range(0.0, 1.0));
  gnp->add_option("--p-exponent", gx, "p = n^-x")->excludes(gp_opt);

  // oracle
  std::string oracle_in;
  std::size_t orr = 2, ocap = kOracleDefaultCap;
  auto* oracle = app.add_subcommand("oracle", "Exact search for a power Hamilton cycle");
  oracle->add_option("--in", oracle_in)->required();
  oracle->add_option("--r", orr)->check(CLI::PositiveNumber);
  oracle->add_option("--cap", ocap, "Largest n accepted");

  // pipeline
  std::string host_spec = "complete", trace_out;
  std::size_t pn = 40, ptrials = 1;
  double px = 0.23;
  PipelineConfig cfg;
  auto* pipeline = app.add_subcommand("pipeline", "Run the four-round absorbing construction");
  auto add_pipeline_knobs = [&](CLI::App* sub) {
    sub->add_option("--eta", cfg.eta)->check(CLI::Range(0.0, 1.0));
    sub->add_option("--alpha", cfg.alpha);
    sub->add_option("--rounds", cfg.rounds)->check(CLI::Range(4, 64));
    sub->add_option("--b", cfg.b, "Connector interior length (even)");
    sub->add_option("--m", cfg.m, "Cover path length");
    sub->add_option("--budget", cfg.search_budget, "Search nodes per embedding task");
    sub->add_option("--retries", cfg.stage_retries, "Retries per stage");
  };
  pipeline->add_option("--host", host_spec, "empty | complete | bernoulli:q | intersecting:a | file:PATH");
  pipeline->add_option("--n", pn);
  pipeline->add_option("--k", cfg.k)->check(CLI::Range(2, 8));
  pipeline->add_option("--r", cfg.r)->check(CLI::PositiveNumber);
  pipeline->add_option("--p-exponent", px, "p = n^-x");
  pipeline->add_option("--trials", ptrials)->check(CLI::PositiveNumber);
  pipeline->add_option("--trace-out", trace_out, "Write stage,status,detail records here");
  add_pipeline_knobs(pipeline);

  // sweep
  SweepSpec spec;
  std::string sweep_mode = "oracle";
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo success rates over an (n, x) grid, as CSV");
  sweep->add_option("--n", spec.ns)->required()->delimiter(',');
  sweep->add_option("--x", spec.xs)->required()->delimiter(',');
  sweep->add_option("--trials", spec.trials)->check(CLI::PositiveNumber);
  sweep->add_option("--mode", sweep_mode)->check(CLI::IsMember({"oracle", "pipeline"}));
  sweep->add_option("--host", spec.host);
  sweep->add_option("--k", spec.k)->check(CLI::Range(2, 8));
  sweep->add_option("--r", spec.r)->check(CLI::PositiveNumber);
  sweep->add_option("--cap", spec.oracle_cap, "Oracle size cap");
  sweep->add_flag("--timing", timing, "Fill mean_ms (output is then not byte-reproducible)");
  add_pipeline_knobs(sweep);

  // plot-script
  std::string plot_in;
  auto* plot = app.add_subcommand("plot-script", "Emit a matplotlib script for a sweep CSV");
  plot->add_option("--in", plot_in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gadget) {
      const auto gad = make_gadget(gadget_type, gk, gr, gb);
      Output out(g.out);
      write_text(out.stream(), gad.graph);
      out.stream() << "# roots: " << join(gad.roots) << '\n';
      return kOk;
    }

    if (*phi) {
      Output out(g.out);
      const PhiEngine engine = phi_engine == "naive" ? PhiEngine::Naive : PhiEngine::Dp;
      out.stream() << "gadget,k,r,b,eps,min_exponent,witness_v,witness_e,witness_roots\n";
      auto row = [&](const std::string& name, std::int64_t b, const Rational& eps, const PhiReport& rep) {
        out.stream() << name << ',' << pk << ',' << pr << ',' << b << ',' << to_string(eps) << ','
                     << to_string(rep.min_exponent) << ',' << rep.witness_v << ',' << rep.witness_e << ','
                     << rep.witness_roots << '\n';
      };
      if (phi_lemmas) {
        PhiLemmaQuery q;
        q.k = pk;
        q.r = pr;
        q.b = phi->count("--b") ? static_cast<std::int64_t>(pb) : 0;
        q.engine = engine;
        const auto rep = verify_phi_lemmas(q);
        row("absorber", 0, rep.eps_absorber, rep.absorber_rooted);
        row("absorber_unrooted", 0, rep.eps_absorber, rep.absorber_unrooted);
        row("connector", rep.b, rep.eps_connector, rep.connector_rooted);
        row("connector_unrooted", rep.b, rep.eps_connector, rep.connector_unrooted);
        if (!rep.note.empty()) std::cerr << "note: " << rep.note << '\n';
        return rep.absorber_ok && rep.connector_ok ? kOk : kFailure;
      }
      const PowerParams pp(pk, pr);
      auto gad = make_gadget(phi_type, pk, pr, pb);
      if (phi_unrooted) gad = gad.without_roots();
      Rational eps(0);
      Rational x = pp.sigma();
      if (!phi_eps.empty()) {
        eps = parse_rational(phi_eps);
        x = pp.sigma() + eps;
      } else if (!phi_x.empty()) {
        x = parse_rational(phi_x);
        eps = x - pp.sigma();
      }
      const auto rep = phi_exponent({gad, x}, engine);
      row(phi_type + (phi_unrooted ? "_unrooted" : ""), phi_type == "absorber" ? 0 : static_cast<std::int64_t>(pb), eps, rep);
      return kOk;
    }

    if (*gnp) {
      if ((gp < 0.0) == (gx < 0.0)) throw InvalidArgument("gnp: give exactly one of --p and --p-exponent");
      const double p = gp >= 0.0 ? gp : std::pow(static_cast<double>(gn), -gx);
      Output out(g.out);
      write_text(out.stream(), sample_gnp(gn, gnk, p, g.seed));
      return kOk;
    }

    if (*oracle) {
      const auto h = read_graph(oracle_in);
      const auto found = find_power_ham_cycle(h, PowerParams(h.k(), orr), ocap);
      Output out(g.out);
      if (found) out.stream() << "FOUND " << join(*found) << '\n';
      else out.stream() << "NONE\n";
      return found ? kOk : kFailure;
    }

    if (*pipeline) {
      const auto hs = HostSpec::parse(host_spec);
      const double p = std::pow(static_cast<double>(pn), -px);
      std::unique_ptr<std::ofstream> trace;
      if (!trace_out.empty()) {
        trace = std::make_unique<std::ofstream>(trace_out);
        if (!*trace) throw InvalidArgument("cannot open " + trace_out);
      }
      Output out(g.out);
      out.stream() << "trial,seed,status,failed_stage,reserve,absorbers,cover_paths,leftover,connections\n";
      bool all = true;
      for (std::size_t t = 0; t < ptrials; ++t) {
        const std::uint64_t seed = ptrials == 1 ? g.seed : trial_seed(g.seed, t);
        const auto host = hs.build(pn, cfg.k, seed);
        const auto tr = run_theorem1(host, p, cfg, seed);
        const bool ok = tr.success && certify(host, tr) && audit_round_discipline(host, tr);
        all = all && ok;
        out.stream() << t << ',' << seed << ',' << (ok ? "success" : "failure") << ',' << tr.failed_stage << ','
                     << tr.reserve_size << ',' << tr.absorbers << ',' << tr.cover_paths << ',' << tr.leftover << ','
                     << tr.connections << '\n';
        if (trace) {
          if (ptrials > 1) *trace << "trial,ok,index=" << t << " seed=" << seed << '\n';
          tr.write(*trace);
          if (ok) *trace << "ordering,ok," << join(tr.ordering) << '\n';
        }
      }
      return all ? kOk : kFailure;
    }

    if (*sweep) {
      spec.mode = sweep_mode == "pipeline" ? SweepMode::Pipeline : SweepMode::Oracle;
      spec.seed = g.seed;
      spec.threads = g.threads;
      spec.timing = timing;
      spec.pipeline = cfg;
      const auto rows = run_sweep(spec);
      Output out(g.out);
      out.stream() << to_csv(rows);
      return kOk;
    }

    if (*plot) {
      std::ifstream in(plot_in);
      if (!in) throw InvalidArgument("cannot open " + plot_in);
      std::stringstream ss;
      ss << in.rdbuf();
      Output out(g.out);
      out.stream() << emit_plot_script(ss.str());
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const TooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Unsupported& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
