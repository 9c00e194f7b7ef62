#ifndef TIGHTPOW_PIPELINE_HPP
#define TIGHTPOW_PIPELINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "embed.hpp"
#include "gadgets.hpp"
#include "power_paths.hpp"
#include "random.hpp"

namespace tightpow {

/// Knobs of a run. Defaults are sized for n in the tens; the asymptotic constants are only
/// reported (see reference_constants).
struct PipelineConfig {
  std::size_t k = 3;
  std::size_t r = 2;
  double alpha = 0.3;
  double epsilon = 0.0;  // reporting only; 0 selects the reference value
  double eta = 0.085;
  double gamma = 0.0;    // cover may stop once leftover <= gamma * |V'|
  double lambda = 0.1;   // reporting only: |Z| <= lambda n
  std::size_t b = 2;
  std::size_t m = 12;
  std::size_t candidate_cap = 200;
  std::size_t candidate_budget = 5000;
  bool search_candidates = true;
  std::size_t search_budget = 4000;
  std::size_t cover_budget = 20000;
  std::size_t reserve_retries = 50;
  std::size_t stage_retries = 8;
  std::size_t rounds = 4;
  std::size_t embed_phases = 2;
  std::optional<std::size_t> reserve_threshold;  // default ceil(alpha * eta * n / 2)

  PowerParams params() const { return PowerParams(k, r); }

  void validate() const {
    const PowerParams pp = params();
    if (b % 2 != 0) throw InvalidArgument("PipelineConfig: b must be even");
    if (b < std::max<std::size_t>(2, r)) throw InvalidArgument("PipelineConfig: b below structural minimum");
    if (m < 2 * pp.h()) throw InvalidArgument("PipelineConfig: m must be at least 2h");
    if (rounds < 4) throw InvalidArgument("PipelineConfig: at least four rounds");
    if (embed_phases < 1) throw InvalidArgument("PipelineConfig: embed_phases must be positive");
    if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("PipelineConfig: eta must lie in (0, 1)");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("PipelineConfig: gamma must lie in [0, 1)");
  }
};

/// Values the asymptotic argument would pick; far outside desk scale, logged for reference.
struct ReferenceConstants {
  double epsilon;
  std::int64_t m;
  std::int64_t b;
};

inline ReferenceConstants reference_constants(const PowerParams& pp) {
  const double sigma = 1.0 / static_cast<double>(pp.growth());
  const double kr = static_cast<double>(pp.k() + pp.r());
  const double eps = sigma * sigma * sigma / (24.0 * kr * kr);
  // largest m with g(m) <= 1/(6 eps), from the closed form of g
  const double shift = static_cast<double>((pp.k() - 1) * pp.window()) / static_cast<double>(pp.k());
  const auto m = static_cast<std::int64_t>(std::floor(1.0 / (6.0 * eps) / static_cast<double>(pp.growth()) + shift));
  const auto b = static_cast<std::int64_t>(std::ceil(4.0 * kr * kr / sigma));
  return {eps, m, b};
}

/// An (r,k)-path with absorbers: absorbers[i].tuple occupies seq[offset, offset + 2h).
struct AbsorberSlot {
  Vertex vertex = 0;
  OrderedTuple tuple;
  std::size_t offset = 0;
};

struct AbsorbingPath {
  OrderedTuple seq;
  std::vector<AbsorberSlot> absorbers;
  // (round index, edge): round index counts the embedding rounds first, then the connecting round
  std::vector<std::pair<std::size_t, Edge>> consumed;

  const AbsorberSlot* slot_for(Vertex u) const {
    for (const auto& s : absorbers)
      if (s.vertex == u) return &s;
    return nullptr;
  }
};

/// Result of joining paths with connectors. `order`/`reversed` give the segment sequence,
/// `interiors[i]` follows segment order[i] (the last one closes the cycle when closed).
struct ChainResult {
  OrderedTuple seq;
  std::vector<std::size_t> order;
  std::vector<bool> reversed;
  std::vector<OrderedTuple> interiors;
  std::vector<Edge> consumed;
};

namespace detail {

inline OrderedTuple reversed_copy(std::span<const Vertex> s) { return OrderedTuple(s.rbegin(), s.rend()); }

template <EdgeOracle Host>
std::vector<Edge> edges_outside(const Host& h, const std::vector<Edge>& edges) {
  std::vector<Edge> out;
  for (const auto& e : edges)
    if (!h.contains(e.span())) out.push_back(e);
  return out;
}

// Connector interiors grown by host tight-path extension from both ends, b/2 steps each.
inline std::vector<OrderedTuple> connector_candidates(const Hypergraph& h, const PowerParams& pp,
                                                      std::span<const Vertex> tail, std::span<const Vertex> head,
                                                      const VertexSet& pool, std::size_t b, std::size_t cap,
                                                      std::size_t budget, Rng& rng) {
  std::set<OrderedTuple> seen;
  std::vector<OrderedTuple> out;
  const auto back = reversed_copy(head);
  VertexSet blocked;
  for (Vertex v : tail) blocked.insert(v);
  for (Vertex v : head) blocked.insert(v);
  for (std::size_t attempt = 0; attempt < budget && out.size() < cap; ++attempt) {
    try {
      auto front = extend_tight_path(h, pp, tail, pool, b / 2, blocked, rng);
      VertexSet avoid = blocked.unite(VertexSet(front));
      auto rear = extend_tight_path(h, pp, back, pool, b / 2, avoid, rng);
      front.insert(front.end(), rear.rbegin(), rear.rend());
      if (seen.insert(front).second) out.push_back(std::move(front));
    } catch (const ExtensionFailed&) {
    }
  }
  return out;
}

// Embeds one connector between tail (last h of a path) and head (first h of the next).
template <EdgeOracle Host>
std::optional<OrderedTuple> connect_pair(const Host& host_view, const Hypergraph& host, const Hypergraph& round,
                                         const RootedGadget& f, std::span<const Vertex> tail,
                                         std::span<const Vertex> head, const VertexSet& pool,
                                         const PipelineConfig& cfg, Rng& rng, std::vector<Edge>& consumed) {
  OrderedTuple roots(tail.begin(), tail.end());
  roots.insert(roots.end(), head.begin(), head.end());
  const std::span<const Hypergraph> rounds(&round, 1);
  const auto schedule = PhaseSchedule::attempt_all(1);
  EmbeddingResult res;
  if (cfg.search_candidates) {
    std::vector<SearchFamily> task{{roots, pool, cfg.search_budget}};
    res = greedy_rooted_embed(host_view, rounds, f, task, schedule, rng);
  } else {
    std::vector<CandidateFamily> task{
        {roots, connector_candidates(host, f.params, tail, head, pool, f.size() - roots.size(), cfg.candidate_cap,
                                     cfg.candidate_budget, rng)}};
    res = greedy_rooted_embed(host_view, rounds, f, task, schedule, rng);
  }
  if (!res.complete()) return std::nullopt;
  consumed.insert(consumed.end(), res.tasks[0].consumed.begin(), res.tasks[0].consumed.end());
  return res.tasks[0].interior;
}

// Joins segments (each >= 2h vertices) with connectors drawn from pool. With `reorder` the
// next segment and its orientation are chosen greedily; otherwise the given order is kept.
inline ChainResult link_segments(const Hypergraph& host, const Hypergraph& round, const PowerParams& pp,
                                 const std::vector<OrderedTuple>& segments, const VertexSet& pool,
                                 const PipelineConfig& cfg, Rng& rng, bool close, bool reorder) {
  const std::size_t h = pp.h();
  if (segments.empty()) throw InvalidArgument("link_segments: no paths");
  for (const auto& s : segments)
    if (s.size() < 2 * h) throw InvalidArgument("link_segments: path shorter than 2h");
  const RootedGadget f = connector_gadget(pp, cfg.b);
  ChainResult out;
  VertexSet free = pool;
  auto take = [&](const OrderedTuple& interior) {
    for (Vertex v : interior) free.erase(v);
  };
  auto oriented = [&](std::size_t i, bool rev) { return rev ? reversed_copy(segments[i]) : segments[i]; };

  out.order.push_back(0);
  out.reversed.push_back(false);
  OrderedTuple current_tail(segments[0].end() - static_cast<std::ptrdiff_t>(h), segments[0].end());
  std::vector<std::size_t> left;
  for (std::size_t i = 1; i < segments.size(); ++i) left.push_back(i);

  while (!left.empty()) {
    std::vector<std::pair<std::size_t, bool>> options;
    if (reorder) {
      rng.shuffle(left);
      for (std::size_t i : left) {
        const bool first = rng.below(2) == 1;
        options.emplace_back(i, first);
        options.emplace_back(i, !first);
      }
    } else {
      options.emplace_back(left.front(), false);
    }
    bool joined = false;
    for (auto [i, rev] : options) {
      const auto seg = oriented(i, rev);
      auto interior = connect_pair(host, host, round, f, current_tail,
                                   std::span<const Vertex>(seg.data(), h), free, cfg, rng, out.consumed);
      if (!interior) continue;
      take(*interior);
      out.interiors.push_back(std::move(*interior));
      out.order.push_back(i);
      out.reversed.push_back(rev);
      current_tail.assign(seg.end() - static_cast<std::ptrdiff_t>(h), seg.end());
      left.erase(std::find(left.begin(), left.end(), i));
      joined = true;
      break;
    }
    if (!joined) throw ConnectionFailed(out.order.size() - 1, "link_segments: no connector after segment");
  }
  if (close) {
    const auto& first = segments[0];
    auto interior = connect_pair(host, host, round, f, current_tail, std::span<const Vertex>(first.data(), h), free,
                                 cfg, rng, out.consumed);
    if (!interior) throw ConnectionFailed(out.order.size() - 1, "link_segments: closing connector not found");
    take(*interior);
    out.interiors.push_back(std::move(*interior));
  }
  for (std::size_t j = 0; j < out.order.size(); ++j) {
    const auto seg = oriented(out.order[j], out.reversed[j]);
    out.seq.insert(out.seq.end(), seg.begin(), seg.end());
    if (j < out.interiors.size()) out.seq.insert(out.seq.end(), out.interiors[j].begin(), out.interiors[j].end());
  }
  return out;
}

}  // namespace detail

/// Joins `paths` in the given order into one (r,k)-cycle; connector interiors come from
/// `reserve` and their random-side edges from `round`.
inline ChainResult connect_paths(const Hypergraph& host, const Hypergraph& round, const std::vector<OrderedTuple>& paths,
                                 const VertexSet& reserve, const PipelineConfig& cfg, Rng& rng) {
  const PowerParams pp = cfg.params();
  VertexSet seen;
  for (const auto& p : paths)
    for (Vertex v : p) {
      if (seen.contains(v) || reserve.contains(v)) throw InvalidArgument("connect_paths: paths must be disjoint");
      seen.insert(v);
    }
  return detail::link_segments(host, round, pp, paths, reserve, cfg, rng, true, false);
}

/// Absorbers for every vertex of Z inside Y, chained into one (r,k)-path.
///
/// Absorber interiors are embedded phase by phase against embed_rounds; they are then joined
/// by connectors through the unused part of Y using round_connect, as an open chain.
inline AbsorbingPath build_absorbing_path(const Hypergraph& host, std::span<const Hypergraph> embed_rounds,
                                          const Hypergraph& round_connect, const VertexSet& y, const VertexSet& z,
                                          const PipelineConfig& cfg, Rng& rng) {
  const PowerParams pp = cfg.params();
  if (!y.intersect(z).empty()) throw InvalidArgument("build_absorbing_path: Y and Z must be disjoint");
  if (embed_rounds.empty()) throw InvalidArgument("build_absorbing_path: no embedding rounds");
  const std::size_t h = pp.h();
  const std::size_t connect_index = embed_rounds.size();
  AbsorbingPath out;

  if (z.empty()) {
    const UnionView view{&host, &round_connect};
    auto seq = find_power_path(view, pp, y, 2 * h, rng, cfg.search_budget);
    if (!seq) throw ExtensionFailed(0, "build_absorbing_path: no starting segment in Y");
    for (const auto& e : detail::edges_outside(host, power_path_edges(pp, *seq))) out.consumed.emplace_back(connect_index, e);
    out.seq = std::move(*seq);
    return out;
  }

  const RootedGadget a = absorber_gadget(pp);
  const auto schedule = PhaseSchedule::attempt_all(embed_rounds.size());
  EmbeddingResult res;
  if (cfg.search_candidates) {
    std::vector<SearchFamily> tasks;
    for (Vertex u : z) tasks.push_back({{u}, y, cfg.search_budget});
    res = greedy_rooted_embed(host, embed_rounds, a, tasks, schedule, rng);
  } else {
    std::vector<CandidateFamily> tasks;
    for (Vertex u : z)
      tasks.push_back({{u}, sample_absorber_candidates(host, pp, u, y, cfg.candidate_cap, cfg.candidate_budget, rng).tuples});
    res = greedy_rooted_embed(host, embed_rounds, a, tasks, schedule, rng);
  }
  if (!res.complete()) {
    std::vector<Vertex> missing;
    for (std::size_t i : res.survivors) missing.push_back(z.members()[i]);
    throw AbsorberShortfall(missing, "build_absorbing_path: " + std::to_string(missing.size()) + " vertices lack absorbers");
  }

  std::vector<OrderedTuple> segments;
  VertexSet pool = y;
  for (std::size_t i = 0; i < res.tasks.size(); ++i) {
    const auto& t = res.tasks[i];
    segments.push_back(t.interior);
    for (Vertex v : t.interior) pool.erase(v);
    for (const auto& e : t.consumed) out.consumed.emplace_back(t.round, e);
  }
  auto chain = detail::link_segments(host, round_connect, pp, segments, pool, cfg, rng, false, true);
  for (const auto& e : chain.consumed) out.consumed.emplace_back(connect_index, e);

  std::size_t offset = 0;
  for (std::size_t j = 0; j < chain.order.size(); ++j) {
    const std::size_t i = chain.order[j];
    AbsorberSlot slot{z.members()[i], chain.reversed[j] ? detail::reversed_copy(segments[i]) : segments[i], offset};
    offset += slot.tuple.size() + (j < chain.interiors.size() ? chain.interiors[j].size() : 0);
    out.absorbers.push_back(std::move(slot));
  }
  out.seq = std::move(chain.seq);

  std::vector<const Hypergraph*> parts{&host, &round_connect};
  for (const auto& g : embed_rounds) parts.push_back(&g);
  const UnionView working(parts);
  if (!is_power_path(working, pp, out.seq)) throw std::logic_error("build_absorbing_path: chain does not certify");
  for (const auto& s : out.absorbers)
    if (!is_absorber(working, pp, AbsorberWitness{s.vertex, s.tuple}))
      throw std::logic_error("build_absorbing_path: stored witness is not an absorber");
  return out;
}

/// Splices every u in X into the middle of its absorber. Ends are preserved.
template <EdgeOracle G>
OrderedTuple absorb(const AbsorbingPath& p, const G& working, const PowerParams& pp, const VertexSet& x) {
  if (x.empty()) return p.seq;
  const std::size_t h = pp.h();
  std::vector<std::pair<std::size_t, Vertex>> inserts;  // insert vertex after seq[index]
  for (Vertex u : x) {
    const AbsorberSlot* s = p.slot_for(u);
    if (!s) throw InvalidArgument("absorb: vertex " + std::to_string(u) + " has no absorber");
    inserts.emplace_back(s->offset + h - 1, u);
  }
  std::sort(inserts.begin(), inserts.end());
  OrderedTuple out;
  out.reserve(p.seq.size() + inserts.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < p.seq.size(); ++i) {
    out.push_back(p.seq[i]);
    while (next < inserts.size() && inserts[next].first == i) out.push_back(inserts[next++].second);
  }
  if (!is_power_path(working, pp, out)) throw std::logic_error("absorb: spliced path does not certify");
  return out;
}

struct CoverOptions {
  std::size_t node_budget = 20000;
  std::size_t max_paths = std::numeric_limits<std::size_t>::max();
  double leftover_fraction = 0.0;
  // Size the paths so the cover can end exactly: the last path takes every remaining vertex.
  bool exact_tail = false;
};

struct CoverResult {
  std::vector<OrderedTuple> paths;
  VertexSet leftover;
};

/// Greedy vertex-disjoint cover of U by (r,k)-paths found by randomized search in grand[U].
template <EdgeOracle G>
CoverResult greedy_path_cover(const G& grand, const VertexSet& u, const PowerParams& pp, std::size_t m, Rng& rng,
                              const CoverOptions& opt = {}) {
  if (m < pp.window()) throw InvalidArgument("greedy_path_cover: m must be at least k+r-1");
  CoverResult out;
  out.leftover = u;
  const std::size_t min_len = opt.exact_tail ? std::max(m, 2 * pp.h()) : m;
  while (!out.leftover.empty() && out.paths.size() < opt.max_paths) {
    if (static_cast<double>(out.leftover.size()) <= opt.leftover_fraction * static_cast<double>(u.size())) break;
    const std::size_t rem = out.leftover.size();
    std::size_t len = m;
    if (opt.exact_tail) {
      const std::size_t slots = opt.max_paths - out.paths.size();
      const std::size_t tail_floor = 2 * pp.h();
      if (slots == 1 || rem < m + tail_floor) {
        len = rem;
      } else {
        len = std::max(m, (rem + slots - 1) / slots);
        if (rem - len < tail_floor) len = rem;
      }
      if (len < min_len && len < rem) break;
    }
    if (len > rem || len < pp.window()) break;
    auto path = find_power_path(grand, pp, out.leftover, len, rng, opt.node_budget);
    if (!path) break;
    for (Vertex v : *path) out.leftover.erase(v);
    out.paths.push_back(std::move(*path));
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Theorem-level run

struct ExposedLayer {
  std::string name;
  std::size_t round = 0;  // 1-based exposure round
  Hypergraph graph;
};

struct StageRecord {
  std::string stage;
  std::string status;  // ok | fail | warn | skip
  std::string detail;
};

struct ConsumedEdge {
  std::string stage;
  std::size_t layer = 0;  // index into PipelineTrace::layers
  Edge edge;
};

struct PipelineTrace {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t k = 3;
  std::size_t r = 2;
  double p = 0.0;
  bool success = false;
  std::string failed_stage;
  std::vector<StageRecord> stages;
  std::vector<ExposedLayer> layers;
  std::vector<ConsumedEdge> consumed;
  OrderedTuple ordering;

  std::size_t reserve_size = 0;
  std::size_t reserve_degree = 0;
  std::size_t absorbers = 0;
  std::size_t cover_paths = 0;
  std::size_t leftover = 0;
  std::size_t connections = 0;

  void record(std::string stage, std::string status, std::string detail = {}) {
    stages.push_back({std::move(stage), std::move(status), std::move(detail)});
  }

  // stage,status,detail per line; detail never contains commas.
  void write(std::ostream& os) const {
    for (const auto& s : stages) {
      std::string d = s.detail;
      std::replace(d.begin(), d.end(), ',', ';');
      os << s.stage << ',' << s.status << ',' << d << '\n';
    }
  }
};

/// Rounds each stage may draw random-side edges from.
inline std::vector<std::size_t> stage_rounds(const std::string& stage, std::size_t rounds) {
  if (stage == "absorbers") {
    std::vector<std::size_t> out{1};
    for (std::size_t j = 5; j <= rounds; ++j) out.push_back(j);
    return out;
  }
  if (stage == "cover") return {2};
  if (stage == "absorbers2") return {3};
  if (stage == "connections") return {4};
  return {};
}

/// Histogram bucket of a failed stage: reserve | absorb | cover | connect.
inline std::string failure_bucket(const std::string& stage) {
  if (stage == "reserve") return "reserve";
  if (stage == "absorbers" || stage == "absorbers2" || stage == "absorption") return "absorb";
  if (stage == "cover") return "cover";
  if (stage == "connections") return "connect";
  return stage;
}

inline std::vector<ExposedLayer> expose_layers(std::size_t n, const PipelineConfig& cfg, double p, std::uint64_t seed) {
  const auto split = split_rounds(p, cfg.rounds);
  std::vector<ExposedLayer> out;
  std::size_t index = 0;
  auto add = [&](std::string name, std::size_t round, double q) {
    out.push_back({std::move(name), round, sample_gnp(n, cfg.k, q, derive_seed(seed, "layer", index++))});
  };
  for (std::size_t j = 1; j <= cfg.rounds; ++j) {
    const std::string base = "G" + std::to_string(j);
    if (j == 1 || j == 3) {
      const auto sub = split_rounds(split.p_round, cfg.embed_phases + 1);
      for (std::size_t s = 1; s <= cfg.embed_phases; ++s) add(base + "." + std::to_string(s), j, sub.p_round);
      add(base + ".c", j, sub.p_round);
    } else {
      add(base, j, split.p_round);
    }
  }
  return out;
}

inline UnionView working_view(const Hypergraph& host, const std::vector<ExposedLayer>& layers) {
  std::vector<const Hypergraph*> parts{&host};
  for (const auto& l : layers) parts.push_back(&l.graph);
  return UnionView(parts);
}

/// Independent check of a reported success: the ordering is an (r,k)-cycle on all n
/// vertices of host ∪ every exposed layer.
inline bool certify(const Hypergraph& host, const PipelineTrace& t) {
  if (t.ordering.size() != host.n()) return false;
  return is_power_cycle(working_view(host, t.layers), PowerParams(t.k, t.r), t.ordering);
}

/// Round discipline: every consumed edge is absent from the host, present in its layer, and
/// that layer belongs to a round the consuming stage may use. On success, every cycle edge
/// outside the host must be accounted for by a consumed edge.
inline bool audit_round_discipline(const Hypergraph& host, const PipelineTrace& t, std::string* why = nullptr) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::set<Edge> accounted;
  std::size_t rounds = 0;
  for (const auto& l : t.layers) rounds = std::max(rounds, l.round);
  for (const auto& c : t.consumed) {
    if (c.layer >= t.layers.size()) return fail("consumed edge names a missing layer");
    const auto& layer = t.layers[c.layer];
    if (host.contains(c.edge)) return fail("consumed edge is a host edge");
    if (!layer.graph.contains(c.edge)) return fail("consumed edge absent from " + layer.name);
    const auto allowed = stage_rounds(c.stage, rounds);
    if (std::find(allowed.begin(), allowed.end(), layer.round) == allowed.end())
      return fail("stage " + c.stage + " drew from " + layer.name);
    accounted.insert(c.edge);
  }
  if (t.success) {
    bool ok = true;
    detail::for_each_forced_edge(PowerParams(t.k, t.r), t.ordering, true, [&](std::span<const Vertex> e) {
      const Edge edge(e);
      if (!host.contains(edge) && !accounted.count(edge)) ok = false;
      return ok;
    });
    if (!ok) return fail("cycle uses an unaccounted random edge");
  }
  return true;
}

/// Largest n-feasible reserve sizes for the vertex budget: absorbers for all of R plus at
/// least one connection per segment must fit.
inline bool reserve_size_feasible(std::size_t n, std::size_t size, const PipelineConfig& cfg) {
  const std::size_t h = cfg.params().h();
  if (size == 0) return false;
  const std::size_t abs_len = size * 2 * h + (size - 1) * cfg.b;
  if (abs_len + size > n) return false;
  const std::size_t rest = n - abs_len - size;
  if (rest != 0 && rest < 2 * h) return false;
  const std::size_t connections = rest == 0 ? 1 : 2;
  return connections * cfg.b <= size;
}

/// Executes the four-round argument on host ∪ G(n, p) and returns the full trace.
inline PipelineTrace run_theorem1(const Hypergraph& host, double p, const PipelineConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (host.k() != cfg.k) throw InvalidArgument("run_theorem1: host uniformity differs from cfg.k");
  const PowerParams pp = cfg.params();
  const std::size_t n = host.n();
  const std::size_t h = pp.h();
  if (n < pp.window() + 1) throw InvalidArgument("run_theorem1: n must be at least k+r");

  PipelineTrace t;
  t.seed = seed;
  t.n = n;
  t.k = cfg.k;
  t.r = cfg.r;
  t.p = p;
  auto fail = [&](const std::string& stage, std::string detail) {
    t.record(stage, "fail", std::move(detail));
    t.failed_stage = stage;
    return t;
  };

  {
    const auto ref = reference_constants(pp);
    std::ostringstream os;
    os << "n=" << n << " p=" << p << " b=" << cfg.b << " m=" << cfg.m << " reference eps=" << ref.epsilon
       << " m=" << ref.m << " b=" << ref.b;
    t.record("config", "ok", os.str());
    const std::size_t delta = n >= cfg.k ? min_codegree(host) : 0;
    const bool dense = static_cast<double>(delta) >= cfg.alpha * static_cast<double>(n);
    t.record("host", dense ? "ok" : "warn", "min_codegree=" + std::to_string(delta));
  }

  t.layers = expose_layers(n, cfg, p, seed);
  std::vector<std::size_t> g1, g3;
  std::size_t g1c = 0, g2 = 0, g3c = 0, g4 = 0;
  for (std::size_t i = 0; i < t.layers.size(); ++i) {
    const auto& l = t.layers[i];
    if (l.round == 1 || l.round >= 5) {
      if (l.name.ends_with(".c")) g1c = i;
      else g1.push_back(i);
    }
    if (l.round == 2) g2 = i;
    if (l.round == 3) {
      if (l.name.ends_with(".c")) g3c = i;
      else g3.push_back(i);
    }
    if (l.round == 4) g4 = i;
  }
  auto layer_list = [&](const std::vector<std::size_t>& ids) {
    std::vector<Hypergraph> out;
    for (std::size_t i : ids) out.push_back(t.layers[i].graph);
    return out;
  };
  const auto view = working_view(host, t.layers);
  auto note_consumed = [&](const std::string& stage, const std::vector<std::size_t>& ids, std::size_t connect_id,
                           const AbsorbingPath& ap) {
    for (const auto& [idx, e] : ap.consumed)
      t.consumed.push_back({stage, idx < ids.size() ? ids[idx] : connect_id, e});
  };

  // reserve
  const std::size_t threshold = cfg.reserve_threshold.value_or(static_cast<std::size_t>(
      std::ceil(cfg.alpha * cfg.eta * static_cast<double>(n) / 2.0)));
  const auto max_size = static_cast<std::size_t>(2.0 * cfg.eta * static_cast<double>(n));
  VertexSet reserve;
  {
    bool found = false;
    std::size_t attempt = 0;
    std::size_t infeasible = 0;
    for (; attempt < cfg.reserve_retries && !found; ++attempt) {
      auto cand = sample_reserve(n, cfg.eta, derive_seed(seed, "reserve", attempt));
      if (!reserve_size_feasible(n, cand.size(), cfg)) {
        ++infeasible;
        continue;
      }
      if (check_reserve(host, cand, threshold, max_size)) {
        reserve = std::move(cand);
        found = true;
      }
    }
    std::ostringstream os;
    os << "attempts=" << attempt << " size_rejects=" << infeasible << " threshold=" << threshold;
    if (!found) return fail("reserve", os.str());
    t.reserve_size = reserve.size();
    t.reserve_degree = reserve_min_degree(host, reserve);
    os << " size=" << t.reserve_size << " min_degree=" << t.reserve_degree;
    t.record("reserve", "ok", os.str());
  }

  const VertexSet everyone = VertexSet::range(static_cast<Vertex>(n));
  Rng rng(derive_seed(seed, "search"));

  // absorbing path for R inside V \ R
  AbsorbingPath pabs;
  {
    const auto rounds = layer_list(g1);
    std::string last;
    bool ok = false;
    for (std::size_t attempt = 0; attempt <= cfg.stage_retries && !ok; ++attempt) {
      Rng stage_rng = rng.fork("absorbers", attempt);
      try {
        pabs = build_absorbing_path(host, rounds, t.layers[g1c].graph, everyone.minus(reserve), reserve, cfg, stage_rng);
        ok = true;
      } catch (const std::runtime_error& e) {
        last = e.what();
      }
    }
    if (!ok) return fail("absorbers", last);
    note_consumed("absorbers", g1, g1c, pabs);
    t.absorbers = pabs.absorbers.size();
    t.record("absorbers", "ok", "absorbers=" + std::to_string(t.absorbers) + " length=" + std::to_string(pabs.seq.size()));
  }

  // Cover V' = V \ (R ∪ V(P_abs)) in H ∪ G2, sweep any leftover into a second absorbing
  // path inside R (H ∪ G3), then close all segments into a cycle through R' (H ∪ G4).
  // The connections depend on the segment ends, so these three stages are retried together.
  std::vector<OrderedTuple> cover;
  VertexSet leftover;
  std::optional<AbsorbingPath> pabs2;
  VertexSet connect_pool;
  std::vector<OrderedTuple> segments;
  ChainResult chain;
  {
    const VertexSet vprime = everyone.minus(reserve).minus(VertexSet(pabs.seq));
    const UnionView grand{&host, &t.layers[g2].graph};
    CoverOptions opt;
    opt.node_budget = cfg.cover_budget;
    opt.exact_tail = true;
    opt.leftover_fraction = cfg.gamma;
    opt.max_paths = reserve.size() / cfg.b >= 1 ? reserve.size() / cfg.b - 1 : 0;
    const auto rounds3 = layer_list(g3);
    std::string stage;
    std::string last;
    std::map<std::string, std::size_t> misses;
    bool done = false;
    std::size_t attempt = 0;
    for (; attempt <= cfg.stage_retries && !done; ++attempt) {
      Rng cover_rng = rng.fork("cover", attempt);
      auto res = greedy_path_cover(grand, vprime, pp, cfg.m, cover_rng, opt);
      cover = std::move(res.paths);
      leftover = std::move(res.leftover);
      pabs2.reset();
      connect_pool = reserve;
      if (!leftover.empty()) {
        const std::size_t need = leftover.size() * 2 * h + (leftover.size() - 1) * cfg.b;
        if (need + cfg.b * (cover.size() + 2) > reserve.size()) {
          stage = "cover";
          last = "leftover " + std::to_string(leftover.size()) + " exceeds what the reserve can absorb";
          ++misses[stage];
          continue;
        }
        Rng abs_rng = rng.fork("absorbers2", attempt);
        try {
          pabs2 = build_absorbing_path(host, rounds3, t.layers[g3c].graph, reserve, leftover, cfg, abs_rng);
        } catch (const std::runtime_error& e) {
          stage = "absorbers2";
          last = e.what();
          ++misses[stage];
          continue;
        }
        connect_pool = reserve.minus(VertexSet(pabs2->seq));
      }
      segments.assign(1, pabs.seq);
      segments.insert(segments.end(), cover.begin(), cover.end());
      if (pabs2) segments.push_back(pabs2->seq);
      Rng link_rng = rng.fork("connections", attempt);
      try {
        chain = detail::link_segments(host, t.layers[g4].graph, pp, segments, connect_pool, cfg, link_rng, true, true);
        done = true;
      } catch (const std::runtime_error& e) {
        stage = "connections";
        last = e.what();
        ++misses[stage];
      }
    }
    std::string tally;
    for (const auto& [name, count] : misses) tally += " " + name + "_misses=" + std::to_string(count);
    t.cover_paths = cover.size();
    t.leftover = leftover.size();
    if (!done) {
      t.record("cover", stage == "cover" ? "fail" : "ok",
               "paths=" + std::to_string(cover.size()) + " leftover=" + std::to_string(leftover.size()));
      return fail(stage, last + " after " + std::to_string(attempt) + " attempts;" + tally);
    }
    for (const auto& path : cover)
      for (const auto& e : detail::edges_outside(host, power_path_edges(pp, path))) t.consumed.push_back({"cover", g2, e});
    t.record("cover", "ok",
             "paths=" + std::to_string(cover.size()) + " covered=" + std::to_string(vprime.size() - leftover.size()) +
                 " leftover=" + std::to_string(leftover.size()) + " attempts=" + std::to_string(attempt) + tally);
    if (pabs2) {
      note_consumed("absorbers2", g3, g3c, *pabs2);
      t.record("absorbers2", "ok", "absorbers=" + std::to_string(pabs2->absorbers.size()));
    } else {
      t.record("absorbers2", "skip", "leftover empty");
    }
    for (const auto& e : chain.consumed) t.consumed.push_back({"connections", g4, e});
    t.connections = chain.interiors.size();
    t.record("connections", "ok", "connectors=" + std::to_string(t.connections));
  }

  // absorb R'' into P_abs and the leftover into the second path, then reassemble
  {
    VertexSet used;
    for (const auto& in : chain.interiors)
      for (Vertex v : in) used.insert(v);
    const VertexSet rest = connect_pool.minus(used);
    std::vector<OrderedTuple> absorbed = segments;
    try {
      absorbed[0] = absorb(pabs, view, pp, rest);
      if (pabs2) absorbed.back() = absorb(*pabs2, view, pp, leftover);
    } catch (const std::exception& e) {
      return fail("absorption", e.what());
    }
    OrderedTuple cycle;
    for (std::size_t j = 0; j < chain.order.size(); ++j) {
      const auto& seg = absorbed[chain.order[j]];
      if (chain.reversed[j]) cycle.insert(cycle.end(), seg.rbegin(), seg.rend());
      else cycle.insert(cycle.end(), seg.begin(), seg.end());
      cycle.insert(cycle.end(), chain.interiors[j].begin(), chain.interiors[j].end());
    }
    t.record("absorption", "ok", "absorbed=" + std::to_string(rest.size() + (pabs2 ? leftover.size() : 0)));
    t.ordering = std::move(cycle);
  }

  if (t.ordering.size() != n || !is_power_cycle(view, pp, t.ordering)) {
    t.ordering.clear();
    return fail("certificate", "assembled ordering does not certify");
  }
  t.success = true;
  t.record("certificate", "ok", "length=" + std::to_string(n));
  return t;
}

}  // namespace tightpow

#endif  // TIGHTPOW_PIPELINE_HPP
