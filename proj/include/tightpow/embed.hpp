#ifndef TIGHTPOW_EMBED_HPP
#define TIGHTPOW_EMBED_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gadgets.hpp"
#include "power_paths.hpp"
#include "random.hpp"

namespace tightpow {

namespace detail {

// Dense membership mask over 0..n-1.
class Mask {
 public:
  explicit Mask(std::size_t n = 0) : bits_(n, 0) {}
  Mask(std::size_t n, std::span<const Vertex> members) : bits_(n, 0) {
    for (Vertex v : members) set(v);
  }
  bool test(Vertex v) const { return v < bits_.size() && bits_[v]; }
  void set(Vertex v) {
    if (v >= bits_.size()) bits_.resize(v + 1, 0);
    bits_[v] = 1;
  }
  void reset(Vertex v) {
    if (v < bits_.size()) bits_[v] = 0;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

// True iff x can follow seq in an (r,k)-path: every k-subset of the last min(|seq|, h)
// vertices plus x that contains x is an edge.
template <EdgeOracle G>
bool extends_power_path(const G& g, const PowerParams& pp, std::span<const Vertex> seq, Vertex x) {
  const std::size_t h = pp.h();
  const std::size_t k = pp.k();
  const std::size_t from = seq.size() > h ? seq.size() - h : 0;
  const auto window = seq.subspan(from);
  if (window.size() < k - 1) return true;
  std::array<Vertex, kMaxUniformity> buf{};
  return for_each_combination<Vertex>(window, k - 1, [&](std::span<const Vertex> c) {
    std::copy(c.begin(), c.end(), buf.begin());
    buf[k - 1] = x;
    return static_cast<bool>(g.contains(std::span<const Vertex>(buf.data(), k)));
  });
}

}  // namespace detail

/// Grows a tight path from `end` by `steps` vertices drawn from target \ avoid.
///
/// Each new vertex is uniform among the vertices x with (last k-1 vertices) ∪ {x} ∈ E(H).
/// The vertices of `end` are never reused. Throws ExtensionFailed at a dead end.
inline OrderedTuple extend_tight_path(const Hypergraph& h, const PowerParams& pp, std::span<const Vertex> end,
                                      const VertexSet& target, std::size_t steps, const VertexSet& avoid, Rng& rng) {
  const std::size_t k = pp.k();
  if (end.size() < k - 1) throw InvalidArgument("extend_tight_path: end shorter than k-1");
  detail::Mask blocked(h.n(), avoid.span());
  for (Vertex v : end) blocked.set(v);
  OrderedTuple seq(end.begin(), end.end());
  OrderedTuple added;
  std::vector<Vertex> options;
  std::vector<Vertex> buf(k);
  for (std::size_t step = 0; step < steps; ++step) {
    std::copy(seq.end() - static_cast<std::ptrdiff_t>(k - 1), seq.end(), buf.begin());
    options.clear();
    for (Vertex x : target) {
      if (blocked.test(x)) continue;
      buf[k - 1] = x;
      if (h.contains(std::span<const Vertex>(buf))) options.push_back(x);
    }
    if (options.empty())
      throw ExtensionFailed(step, "extend_tight_path: no completion after " + std::to_string(step) + " steps");
    const Vertex pick = options[rng.below(options.size())];
    seq.push_back(pick);
    added.push_back(pick);
    blocked.set(pick);
  }
  return added;
}

struct AbsorberCandidates {
  std::vector<OrderedTuple> tuples;
  bool complete = false;  // found `want` tuples within budget
  std::size_t attempts = 0;
};

/// Random walks in link(v)[Y] that trace the tight (k-1)-path {v_j .. v_{j+k-2}}.
///
/// Each attempt starts at a uniform vertex of Y and extends by a uniform vertex among those
/// completing the current (k-2)-suffix to a link edge. Distinct tuples are kept in draw order.
inline AbsorberCandidates sample_absorber_candidates(const Hypergraph& h, const PowerParams& pp, Vertex v,
                                                     const VertexSet& y, std::size_t want, std::size_t budget,
                                                     Rng& rng) {
  if (y.contains(v)) throw InvalidArgument("sample_absorber_candidates: Y must not contain v");
  const std::size_t len = 2 * pp.h();
  const std::size_t k = pp.k();
  AbsorberCandidates out;
  if (y.size() < len || want == 0) {
    out.complete = want == 0;
    return out;
  }
  std::set<OrderedTuple> seen;
  std::vector<Vertex> options;
  std::vector<Vertex> buf(k);
  detail::Mask used(h.n());
  while (out.tuples.size() < want && out.attempts < budget) {
    ++out.attempts;
    OrderedTuple t;
    t.push_back(y.members()[rng.below(y.size())]);
    used.set(t.back());
    bool dead = false;
    while (t.size() < len) {
      options.clear();
      const bool constrained = t.size() >= k - 2;
      if (constrained) {
        buf[0] = v;
        std::copy(t.end() - static_cast<std::ptrdiff_t>(k - 2), t.end(), buf.begin() + 1);
      }
      for (Vertex x : y) {
        if (used.test(x)) continue;
        if (constrained) {
          buf[k - 1] = x;
          if (!h.contains(std::span<const Vertex>(buf))) continue;
        }
        options.push_back(x);
      }
      if (options.empty()) {
        dead = true;
        break;
      }
      t.push_back(options[rng.below(options.size())]);
      used.set(t.back());
    }
    for (Vertex x : t) used.reset(x);
    if (!dead && seen.insert(t).second) out.tuples.push_back(std::move(t));
  }
  out.complete = out.tuples.size() >= want;
  return out;
}

/// Explicit candidate family for one embedding task.
struct CandidateFamily {
  OrderedTuple root_image;              // ordered like gadget.roots
  std::vector<OrderedTuple> tuples;     // interior images, ordered like gadget.interior()
};

/// Implicit candidate family: every interior tuple from `pool` whose host-pattern edges lie in
/// the host. Phases scan it by randomized depth-first search with pruning, which visits the
/// same accepted tuples an explicit scan of the whole family would, without materializing it.
struct SearchFamily {
  OrderedTuple root_image;
  VertexSet pool;
  std::size_t node_budget = 20000;  // DFS nodes per task per phase
};

/// Phase plan for greedy_rooted_embed. Phase j draws fresh randomness from round_of[j]
/// and attempts at most attempts[j] tasks.
struct PhaseSchedule {
  std::vector<std::size_t> round_of;
  std::vector<std::size_t> attempts;

  // One phase per available round, every unembedded task attempted in every phase.
  static PhaseSchedule attempt_all(std::size_t rounds) {
    PhaseSchedule s;
    for (std::size_t j = 0; j < rounds; ++j) {
      s.round_of.push_back(j);
      s.attempts.push_back(std::numeric_limits<std::size_t>::max());
    }
    return s;
  }

  // Phase sizes t_j = lambda^{-(j-2)} n^{1-(j-1)/ell} (log n)^{j-1} for j <= ell and
  // t_{ell+1} = lambda^{-(ell-1)} (log n)^ell, used as attempt budgets (rounded up, made
  // non-increasing, at least 1).
  static PhaseSchedule shrinking(std::size_t ell, std::size_t n, double lambda) {
    PhaseSchedule s;
    const double ln = std::log(static_cast<double>(n));
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 1; j <= ell + 1; ++j) {
      double t;
      if (j <= ell)
        t = std::pow(lambda, -(static_cast<double>(j) - 2.0)) *
            std::pow(static_cast<double>(n), 1.0 - (static_cast<double>(j) - 1.0) / static_cast<double>(ell)) *
            std::pow(ln, static_cast<double>(j) - 1.0);
      else
        t = std::pow(lambda, -(static_cast<double>(ell) - 1.0)) * std::pow(ln, static_cast<double>(ell));
      auto budget = static_cast<std::size_t>(std::min(std::ceil(t), 1e12));
      budget = std::clamp<std::size_t>(budget, 1, prev);
      s.round_of.push_back(j - 1);
      s.attempts.push_back(budget);
      prev = budget;
    }
    return s;
  }

  std::size_t phases() const noexcept { return round_of.size(); }

  void validate(std::size_t available_rounds) const {
    if (round_of.size() != attempts.size() || round_of.empty()) throw InvalidArgument("PhaseSchedule: malformed");
    for (std::size_t j = 0; j < attempts.size(); ++j) {
      if (attempts[j] == 0) throw InvalidArgument("PhaseSchedule: budgets must be positive");
      if (j > 0 && attempts[j] > attempts[j - 1]) throw InvalidArgument("PhaseSchedule: budgets must be non-increasing");
      if (round_of[j] >= available_rounds) throw InvalidArgument("PhaseSchedule: phase uses a missing round");
    }
  }
};

struct TaskOutcome {
  bool embedded = false;
  std::size_t phase = 0;       // 1-based phase of success
  std::size_t round = 0;       // index into random_rounds used
  OrderedTuple interior;       // images of gadget.interior()
  OrderedTuple image;          // image of every gadget position
  std::vector<Edge> consumed;  // gadget edges supplied by the round rather than the host
};

struct EmbeddingResult {
  std::vector<TaskOutcome> tasks;
  std::vector<std::size_t> remaining_after_phase;
  std::vector<std::size_t> survivors;

  bool complete() const noexcept { return survivors.empty(); }

  // Strict form: throws EmbeddingIncomplete listing the survivors.
  const EmbeddingResult& require_complete() const {
    if (!complete())
      throw EmbeddingIncomplete(survivors, "greedy_rooted_embed: " + std::to_string(survivors.size()) +
                                               " tasks left after the final phase");
    return *this;
  }
};

namespace detail {

struct EdgeCheck {
  std::vector<std::size_t> positions;  // gadget positions
  bool host_only = false;
};

// Per interior index: the gadget/host-pattern edges whose last interior position is that index.
inline std::vector<std::vector<EdgeCheck>> closing_checks(const RootedGadget& gad, bool with_pattern) {
  const auto inner = gad.interior();
  std::vector<std::ptrdiff_t> idx(gad.size(), -1);
  for (std::size_t i = 0; i < inner.size(); ++i) idx[inner[i]] = static_cast<std::ptrdiff_t>(i);
  std::vector<std::vector<EdgeCheck>> out(inner.size());
  auto add = [&](const Edge& e, bool host_only) {
    std::ptrdiff_t last = -1;
    for (Vertex p : e) last = std::max(last, idx[p]);
    if (last < 0) return;
    out[static_cast<std::size_t>(last)].push_back({{e.begin(), e.end()}, host_only});
  };
  for (const auto& e : gad.graph.edges()) add(e, false);
  if (with_pattern)
    for (const auto& e : gad.host_pattern) add(e, true);
  return out;
}

template <EdgeOracle Host, EdgeOracle Round>
bool check_edge(const EdgeCheck& c, std::span<const Vertex> at, const Host& host, const Round& round) {
  std::array<Vertex, kMaxUniformity> buf{};
  for (std::size_t i = 0; i < c.positions.size(); ++i) buf[i] = at[c.positions[i]];
  const std::span<const Vertex> e(buf.data(), c.positions.size());
  if (host.contains(e)) return true;
  return !c.host_only && round.contains(e);
}

template <EdgeOracle Host, EdgeOracle Round>
std::optional<OrderedTuple> first_fit(const RootedGadget& gad, const CandidateFamily& fam, const Mask& blocked,
                                      const Host& host, const Round& round, Rng&) {
  const auto checks = closing_checks(gad, false);
  for (const auto& t : fam.tuples) {
    if (t.size() != gad.interior().size()) throw InvalidArgument("greedy_rooted_embed: tuple length mismatch");
    if (std::any_of(t.begin(), t.end(), [&](Vertex v) { return blocked.test(v); }) || !all_distinct(t)) continue;
    const auto at = place_gadget(gad, fam.root_image, t);
    bool ok = true;
    for (const auto& list : checks)
      for (const auto& c : list)
        if (ok && !check_edge(c, at, host, round)) ok = false;
    if (ok) return t;
  }
  return std::nullopt;
}

template <EdgeOracle Host, EdgeOracle Round>
std::optional<OrderedTuple> first_fit(const RootedGadget& gad, const SearchFamily& fam, const Mask& blocked,
                                      const Host& host, const Round& round, Rng& rng) {
  const auto inner = gad.interior();
  const auto checks = closing_checks(gad, true);
  OrderedTuple at(gad.size(), 0);
  for (std::size_t i = 0; i < gad.roots.size(); ++i) at[gad.roots[i]] = fam.root_image[i];
  std::vector<Vertex> pool;
  for (Vertex v : fam.pool)
    if (!blocked.test(v)) pool.push_back(v);
  if (pool.size() < inner.size()) return std::nullopt;
  Mask taken(0);
  std::size_t nodes = 0;
  OrderedTuple chosen(inner.size());

  auto dfs = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == inner.size()) return true;
    std::vector<Vertex> order = pool;
    rng.shuffle(order);
    for (Vertex x : order) {
      if (taken.test(x)) continue;
      if (++nodes > fam.node_budget) return false;
      at[inner[depth]] = x;
      bool ok = true;
      for (const auto& c : checks[depth])
        if (!check_edge(c, at, host, round)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      taken.set(x);
      chosen[depth] = x;
      if (self(self, depth + 1)) return true;
      taken.reset(x);
      if (nodes > fam.node_budget) return false;
    }
    return false;
  };
  if (dfs(dfs, 0)) return chosen;
  return std::nullopt;
}

template <class Family>
const OrderedTuple& root_image_of(const Family& f) {
  return f.root_image;
}

}  // namespace detail

/// Greedy phased embedding of a rooted gadget for many tasks.
///
/// Phase j scans the still-unembedded tasks in order; for each it takes the first candidate
/// interior avoiding every root image and every interior already used, whose gadget edges all
/// lie in host ∪ round_of[j]. Tasks that fail roll over to the next phase, which uses fresh
/// randomness. Accepted embeddings are re-certified before returning.
template <class Family, EdgeOracle Host>
EmbeddingResult greedy_rooted_embed(const Host& host, std::span<const Hypergraph> random_rounds,
                                    const RootedGadget& gadget, const std::vector<Family>& tasks,
                                    const PhaseSchedule& schedule, Rng& rng) {
  schedule.validate(random_rounds.size());
  std::size_t n = 0;
  for (const auto& g : random_rounds) n = std::max(n, g.n());
  const std::size_t inner = gadget.interior().size();

  detail::Mask blocked(n);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& ri = detail::root_image_of(tasks[i]);
    if (ri.size() != gadget.roots.size()) throw InvalidArgument("greedy_rooted_embed: root image size mismatch");
    for (Vertex v : ri) {
      if (blocked.test(v)) throw InvalidArgument("greedy_rooted_embed: root images must be pairwise disjoint");
      blocked.set(v);
    }
  }

  EmbeddingResult res;
  res.tasks.resize(tasks.size());
  std::vector<std::size_t> pending(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) pending[i] = i;

  for (std::size_t j = 0; j < schedule.phases(); ++j) {
    const Hypergraph& round = random_rounds[schedule.round_of[j]];
    std::vector<std::size_t> next;
    std::size_t attempted = 0;
    for (std::size_t i : pending) {
      if (attempted++ >= schedule.attempts[j]) {
        next.push_back(i);
        continue;
      }
      auto found = detail::first_fit(gadget, tasks[i], blocked, host, round, rng);
      if (!found) {
        next.push_back(i);
        continue;
      }
      auto& out = res.tasks[i];
      out.embedded = true;
      out.phase = j + 1;
      out.round = schedule.round_of[j];
      out.interior = *found;
      out.image = place_gadget(gadget, detail::root_image_of(tasks[i]), out.interior);
      for (const auto& e : gadget.graph.edges()) {
        const Edge m = map_edge(e, out.image);
        if (!host.contains(m.span())) out.consumed.push_back(m);
      }
      for (Vertex v : out.interior) blocked.set(v);
    }
    pending = std::move(next);
    res.remaining_after_phase.push_back(pending.size());
    if (pending.empty()) break;
  }
  res.survivors = pending;

  // certification: edges, disjointness, interior length
  detail::Mask seen(n);
  for (const auto& out : res.tasks) {
    if (!out.embedded) continue;
    if (out.interior.size() != inner) throw std::logic_error("greedy_rooted_embed: interior length drift");
    const Hypergraph& round = random_rounds[out.round];
    for (const auto& e : gadget.graph.edges()) {
      const Edge m = map_edge(e, out.image);
      if (!host.contains(m.span()) && !round.contains(m)) throw std::logic_error("greedy_rooted_embed: uncertified edge");
    }
    for (Vertex v : out.interior) {
      if (seen.test(v)) throw std::logic_error("greedy_rooted_embed: interiors overlap");
      seen.set(v);
    }
  }
  for (const auto& t : tasks)
    for (Vertex v : detail::root_image_of(t))
      if (seen.test(v)) throw std::logic_error("greedy_rooted_embed: interior meets a root image");
  return res;
}

/// Randomized depth-first search for an (r,k)-path on `length` vertices of `pool`.
/// Optional `prefix` fixes the first vertices. Returns nullopt when the node budget runs out.
template <EdgeOracle G>
std::optional<OrderedTuple> find_power_path(const G& g, const PowerParams& pp, const VertexSet& pool,
                                            std::size_t length, Rng& rng, std::size_t node_budget,
                                            std::span<const Vertex> prefix = {}) {
  if (length < prefix.size()) throw InvalidArgument("find_power_path: prefix longer than path");
  std::vector<Vertex> cand(pool.begin(), pool.end());
  OrderedTuple seq(prefix.begin(), prefix.end());
  detail::Mask taken(0);
  for (Vertex v : seq) taken.set(v);
  std::size_t free_count = 0;
  for (Vertex v : cand)
    if (!taken.test(v)) ++free_count;
  if (free_count + seq.size() < length) return std::nullopt;
  std::size_t nodes = 0;

  auto dfs = [&](auto&& self) -> bool {
    if (seq.size() == length) return true;
    std::vector<Vertex> order = cand;
    rng.shuffle(order);
    for (Vertex x : order) {
      if (taken.test(x)) continue;
      if (++nodes > node_budget) return false;
      if (!detail::extends_power_path(g, pp, seq, x)) continue;
      seq.push_back(x);
      taken.set(x);
      if (self(self)) return true;
      taken.reset(x);
      seq.pop_back();
      if (nodes > node_budget) return false;
    }
    return false;
  };
  if (dfs(dfs)) return seq;
  return std::nullopt;
}

}  // namespace tightpow

#endif  // TIGHTPOW_EMBED_HPP
