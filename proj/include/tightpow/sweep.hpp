#ifndef TIGHTPOW_SWEEP_HPP
#define TIGHTPOW_SWEEP_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "pipeline.hpp"
#include "random.hpp"

namespace tightpow {

/// Host family for experiments: empty | complete | bernoulli:q | intersecting:a | file:PATH.
/// For intersecting, a below 1 (or written with a decimal point) is a fraction of n.
struct HostSpec {
  enum class Kind { Empty, Complete, Bernoulli, Intersecting, File };
  Kind kind = Kind::Empty;
  double value = 0.0;
  bool fraction = false;
  std::string path;

  static HostSpec parse(const std::string& text) {
    HostSpec s;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
    auto number = [&]() {
      try {
        std::size_t used = 0;
        const double v = std::stod(arg, &used);
        if (used != arg.size()) throw InvalidArgument("");
        return v;
      } catch (const std::exception&) {
        throw InvalidArgument("host spec: bad number in '" + text + "'");
      }
    };
    if (head == "empty" && arg.empty()) {
      s.kind = Kind::Empty;
    } else if (head == "complete" && arg.empty()) {
      s.kind = Kind::Complete;
    } else if (head == "bernoulli") {
      s.kind = Kind::Bernoulli;
      s.value = number();
      if (!(s.value >= 0.0 && s.value <= 1.0)) throw InvalidArgument("host spec: q must lie in [0, 1]");
    } else if (head == "intersecting") {
      s.kind = Kind::Intersecting;
      s.value = number();
      s.fraction = s.value < 1.0 || arg.find('.') != std::string::npos;
      if (s.value < 0.0 || (s.fraction && s.value > 1.0)) throw InvalidArgument("host spec: bad intersecting size");
    } else if (head == "file" && !arg.empty()) {
      s.kind = Kind::File;
      s.path = arg;
    } else {
      throw InvalidArgument("host spec: unknown '" + text + "'");
    }
    return s;
  }

  std::size_t intersecting_size(std::size_t n) const {
    const auto a = fraction ? static_cast<std::size_t>(std::floor(value * static_cast<double>(n) + 1e-9))
                            : static_cast<std::size_t>(value);
    if (a > n) throw InvalidArgument("host spec: intersecting size exceeds n");
    return a;
  }

  Hypergraph build(std::size_t n, std::size_t k, std::uint64_t seed) const {
    switch (kind) {
      case Kind::Empty: return Hypergraph(n, k);
      case Kind::Complete: return complete_graph(n, k);
      case Kind::Bernoulli: return bernoulli_host(n, k, value, seed);
      case Kind::Intersecting: return intersecting_host(n, k, intersecting_size(n));
      case Kind::File: {
        std::ifstream in(path);
        if (!in) throw InvalidArgument("host spec: cannot open " + path);
        auto g = read_text(in);
        if (g.n() != n || g.k() != k) throw InvalidArgument("host spec: file host does not match n, k");
        return g;
      }
    }
    return Hypergraph(n, k);
  }

  // Hosts that do not depend on the trial seed can be built once per n.
  bool seeded() const noexcept { return kind == Kind::Bernoulli; }
};

enum class SweepMode { Oracle, Pipeline };

inline const char* to_string(SweepMode m) { return m == SweepMode::Oracle ? "oracle" : "pipeline"; }

struct SweepSpec {
  std::vector<std::size_t> ns;
  std::vector<double> xs;  // p = n^{-x}
  std::size_t trials = 1;
  SweepMode mode = SweepMode::Oracle;
  std::string host = "empty";
  std::uint64_t seed = 0;
  std::size_t k = 3;
  std::size_t r = 2;
  std::size_t threads = 1;
  std::size_t oracle_cap = kOracleDefaultCap;
  bool timing = false;  // wall-clock means break byte-reproducibility, so they are opt-in
  PipelineConfig pipeline;

  void validate() const {
    if (ns.empty() || xs.empty()) throw InvalidArgument("sweep: empty n or x grid");
    if (trials < 1) throw InvalidArgument("sweep: trials must be at least 1");
    (void)PowerParams(k, r);
    for (std::size_t n : ns) {
      if (n < k + r) throw InvalidArgument("sweep: n must be at least k+r");
      if (mode == SweepMode::Oracle && n > oracle_cap) throw InvalidArgument("sweep: n exceeds oracle cap");
    }
    for (double x : xs)
      if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("sweep: x must be finite and non-negative");
    (void)HostSpec::parse(host);
  }
};

struct SweepRow {
  SweepMode mode = SweepMode::Oracle;
  std::size_t n = 0;
  std::size_t k = 3;
  std::size_t r = 2;
  double x = 0.0;
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t fail_reserve = 0;
  std::size_t fail_absorb = 0;
  std::size_t fail_cover = 0;
  std::size_t fail_connect = 0;
  double mean_ms = -1.0;  // negative: not measured
};

inline constexpr const char* kSweepHeader =
    "mode,n,k,r,x,p,trials,successes,fail_reserve,fail_absorb,fail_cover,fail_connect,mean_ms";

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string to_csv_line(const SweepRow& row) {
  std::ostringstream os;
  os << to_string(row.mode) << ',' << row.n << ',' << row.k << ',' << row.r << ',' << format_number(row.x) << ','
     << format_number(row.p) << ',' << row.trials << ',' << row.successes << ',' << row.fail_reserve << ','
     << row.fail_absorb << ',' << row.fail_cover << ',' << row.fail_connect << ',';
  if (row.mean_ms >= 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", row.mean_ms);
    os << buf;
  }
  return os.str();
}

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows) out += to_csv_line(r) + "\n";
  return out;
}

/// Seed of trial `trial` in cell (n, x index).
inline std::uint64_t cell_trial_seed(std::uint64_t base, std::size_t n, std::size_t xi, std::size_t trial) {
  return trial_seed(derive_seed(base, "cell", (static_cast<std::uint64_t>(n) << 20) | xi), trial);
}

struct TrialOutcome {
  bool success = false;
  std::string bucket;
  double ms = 0.0;
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& f) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// One trial: host ∪ G(n, p) under the given seed.
inline TrialOutcome run_trial(const SweepSpec& spec, const HostSpec& host_spec, const Hypergraph* shared_host,
                              std::size_t n, double p, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  TrialOutcome out;
  const Hypergraph own = shared_host ? Hypergraph() : host_spec.build(n, spec.k, seed);
  const Hypergraph& host = shared_host ? *shared_host : own;
  const PowerParams pp(spec.k, spec.r);
  if (spec.mode == SweepMode::Oracle) {
    const auto g = sample_gnp(n, spec.k, p, derive_seed(seed, "gnp"));
    out.success = find_power_ham_cycle(union_of(host, g), pp, spec.oracle_cap).has_value();
  } else {
    PipelineConfig cfg = spec.pipeline;
    cfg.k = spec.k;
    cfg.r = spec.r;
    const auto trace = run_theorem1(host, p, cfg, seed);
    out.success = trace.success;
    if (trace.success && (!certify(host, trace) || !audit_round_discipline(host, trace)))
      throw std::logic_error("run_sweep: a reported success failed independent certification");
    if (!trace.success) out.bucket = failure_bucket(trace.failed_stage);
  }
  out.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// One row per (n, x) cell, in grid order; trials run on `threads` workers but results are
/// assembled by index, so the CSV is independent of scheduling.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const HostSpec host_spec = HostSpec::parse(spec.host);
  std::vector<SweepRow> rows;
  for (std::size_t n : spec.ns) {
    std::optional<Hypergraph> shared;
    if (!host_spec.seeded()) shared = host_spec.build(n, spec.k, 0);
    for (std::size_t xi = 0; xi < spec.xs.size(); ++xi) {
      const double x = spec.xs[xi];
      const double p = std::pow(static_cast<double>(n), -x);
      std::vector<TrialOutcome> outcomes(spec.trials);
      detail::parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
        outcomes[t] = run_trial(spec, host_spec, shared ? &*shared : nullptr, n, p, cell_trial_seed(spec.seed, n, xi, t));
      });
      SweepRow row{spec.mode, n, spec.k, spec.r, x, p, spec.trials};
      double total = 0.0;
      for (const auto& o : outcomes) {
        total += o.ms;
        if (o.success) ++row.successes;
        else if (o.bucket == "reserve") ++row.fail_reserve;
        else if (o.bucket == "absorb") ++row.fail_absorb;
        else if (o.bucket == "cover") ++row.fail_cover;
        else if (o.bucket == "connect") ++row.fail_connect;
      }
      if (spec.timing) row.mean_ms = total / static_cast<double>(spec.trials);
      rows.push_back(row);
    }
  }
  return rows;
}

/// Python/matplotlib script plotting success rate against x, one curve per (mode, n, k, r).
/// The CSV must carry the sweep header; throws ParseError on malformed lines.
inline std::string emit_plot_script(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> data;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kSweepHeader) throw ParseError(lineno, "expected sweep CSV header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 13) throw ParseError(lineno, "expected 13 fields");
    if (f[0] != "oracle" && f[0] != "pipeline") throw ParseError(lineno, "unknown mode");
    auto integer = [&](const std::string& s) {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError(lineno, "expected a non-negative integer, got '" + s + "'");
      return std::stoull(s);
    };
    auto real = [&](const std::string& s) {
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ParseError(lineno, "");
        return v;
      } catch (const std::exception&) {
        throw ParseError(lineno, "expected a number, got '" + s + "'");
      }
    };
    const auto n = integer(f[1]);
    const auto k = integer(f[2]);
    const auto r = integer(f[3]);
    (void)real(f[4]);
    (void)real(f[5]);
    const auto trials = integer(f[6]);
    const auto successes = integer(f[7]);
    if (trials == 0 || successes > trials) throw ParseError(lineno, "successes must lie in [0, trials]");
    data.push_back("    (\"" + f[0] + "\", " + std::to_string(n) + ", " + std::to_string(k) + ", " + std::to_string(r) +
                   ", " + f[4] + ", " + std::to_string(trials) + ", " + std::to_string(successes) + "),");
  }
  std::string out =
      "#!/usr/bin/env python3\n"
      "\"\"\"Success rate against x (p = n^-x), one curve per n. Usage: script.py [out.png]\"\"\"\n"
      "import sys\n"
      "\n"
      "import matplotlib\n"
      "\n"
      "matplotlib.use(\"Agg\")\n"
      "import matplotlib.pyplot as plt\n"
      "\n"
      "# (mode, n, k, r, x, trials, successes)\n"
      "DATA = [\n";
  for (const auto& d : data) out += d + "\n";
  out +=
      "]\n"
      "\n"
      "\n"
      "def main(out=\"sweep.png\"):\n"
      "    series = {}\n"
      "    for mode, n, k, r, x, trials, successes in DATA:\n"
      "        series.setdefault((mode, n, k, r), []).append((x, successes / trials))\n"
      "    fig, ax = plt.subplots()\n"
      "    for (mode, n, k, r), pts in sorted(series.items()):\n"
      "        pts.sort()\n"
      "        ax.plot([x for x, _ in pts], [y for _, y in pts], marker=\"o\",\n"
      "                label=f\"{mode} n={n} (k,r)=({k},{r})\")\n"
      "    ax.axhline(0.5, color=\"grey\", linewidth=0.5)\n"
      "    ax.set_xlabel(\"x  (p = n^-x)\")\n"
      "    ax.set_ylabel(\"success rate\")\n"
      "    ax.set_ylim(-0.02, 1.02)\n"
      "    if series:\n"
      "        ax.legend()\n"
      "    fig.savefig(out, dpi=150)\n"
      "\n"
      "\n"
      "if __name__ == \"__main__\":\n"
      "    main(*sys.argv[1:])\n";
  return out;
}

}  // namespace tightpow

#endif  // TIGHTPOW_SWEEP_HPP
