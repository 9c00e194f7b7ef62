#ifndef TIGHTPOW_ORACLE_HPP
#define TIGHTPOW_ORACLE_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "power_paths.hpp"

namespace tightpow {

inline constexpr std::size_t kOracleDefaultCap = 14;

namespace detail {

// Exact search over (visited mask, last-h window) states with failure memoization.
class PowerDp {
 public:
  PowerDp(const Hypergraph& h, const PowerParams& pp, std::span<const Vertex> universe)
      : pp_(pp), universe_(universe.begin(), universe.end()), is_edge_(std::size_t{1} << universe.size(), 0) {
    if (universe_.size() + 5 * pp.h() > 64) throw Unsupported("oracle: state key does not fit in 64 bits");
    // dense lookup over subsets of the universe, indexed by local positions
    std::vector<Vertex> local(h.n(), kNone);
    for (std::size_t i = 0; i < universe_.size(); ++i) local[universe_[i]] = static_cast<Vertex>(i);
    for (const auto& e : h.edges()) {
      std::uint32_t mask = 0;
      bool inside = true;
      for (Vertex v : e) {
        if (local[v] == kNone) {
          inside = false;
          break;
        }
        mask |= 1u << local[v];
      }
      if (inside) is_edge_[mask] = 1;
    }
  }

  std::optional<OrderedTuple> cycle() {
    const std::size_t n = universe_.size();
    const std::size_t h = pp_.h();
    // fix local vertex 0 first; every other prefix of length h is tried in turn
    std::vector<Vertex> seq{0};
    std::optional<OrderedTuple> found;
    auto prefixes = [&](auto&& self) -> bool {
      if (seq.size() == std::min(h, n)) {
        failed_.clear();
        const std::uint32_t mask = mask_of(seq);
        if (search(mask, seq, true)) {
          found = to_global(seq);
          return true;
        }
        return false;
      }
      for (Vertex v = 1; v < n; ++v) {
        if (std::find(seq.begin(), seq.end(), v) != seq.end() || !extends(seq, v)) continue;
        seq.push_back(v);
        if (self(self)) return true;
        seq.pop_back();
      }
      return false;
    };
    prefixes(prefixes);
    return found;
  }

  std::optional<OrderedTuple> path() {
    const std::size_t n = universe_.size();
    if (n < pp_.window()) return std::nullopt;
    failed_.clear();
    for (Vertex s = 0; s < n; ++s) {
      std::vector<Vertex> seq{s};
      if (search(1u << s, seq, false)) return to_global(seq);
    }
    return std::nullopt;
  }

 private:
  static constexpr Vertex kNone = static_cast<Vertex>(-1);

  std::uint32_t mask_of(std::span<const Vertex> s) const {
    std::uint32_t m = 0;
    for (Vertex v : s) m |= 1u << v;
    return m;
  }

  OrderedTuple to_global(std::span<const Vertex> s) const {
    OrderedTuple out;
    for (Vertex v : s) out.push_back(universe_[v]);
    return out;
  }

  // every k-subset of (last h of seq) ∪ {v} containing v is an edge
  bool extends(std::span<const Vertex> seq, Vertex v) const {
    const std::size_t h = pp_.h();
    const std::size_t k = pp_.k();
    const auto window = seq.subspan(seq.size() > h ? seq.size() - h : 0);
    if (window.size() < k - 1) return true;
    return for_each_combination<Vertex>(window, k - 1, [&](std::span<const Vertex> c) {
      return is_edge_[mask_of(c) | (1u << v)] != 0;
    });
  }

  // wrap-around windows: each of the first h positions against its cyclic predecessors
  bool closes(std::span<const Vertex> seq) const {
    const std::size_t n = seq.size();
    const std::size_t h = pp_.h();
    const std::size_t k = pp_.k();
    std::vector<Vertex> preds;
    for (std::size_t i = 0; i < std::min(h, n); ++i) {
      preds.clear();
      for (std::size_t d = h; d >= 1; --d) preds.push_back(seq[(i + n - d) % n]);
      const bool ok = for_each_combination<Vertex>(preds, k - 1, [&](std::span<const Vertex> c) {
        return is_edge_[mask_of(c) | (1u << seq[i])] != 0;
      });
      if (!ok) return false;
    }
    return true;
  }

  std::uint64_t key(std::uint32_t mask, std::span<const Vertex> seq) const {
    std::uint64_t k = mask;
    const std::size_t h = pp_.h();
    const std::size_t from = seq.size() > h ? seq.size() - h : 0;
    for (std::size_t i = from; i < seq.size(); ++i) k = (k << 5) | seq[i];
    return k;
  }

  bool search(std::uint32_t mask, std::vector<Vertex>& seq, bool cyclic) {
    const std::size_t n = universe_.size();
    if (seq.size() == n) {
      if (!cyclic) return true;
      if (n >= 3 && seq[1] > seq[n - 1]) return false;  // reflection duplicate
      return closes(seq);
    }
    const std::uint64_t kk = key(mask, seq);
    if (failed_.count(kk)) return false;
    for (Vertex v = 0; v < n; ++v) {
      if (mask & (1u << v)) continue;
      if (!extends(seq, v)) continue;
      seq.push_back(v);
      if (search(mask | (1u << v), seq, cyclic)) return true;
      seq.pop_back();
    }
    failed_.insert(kk);
    return false;
  }

  PowerParams pp_;
  std::vector<Vertex> universe_;
  std::vector<std::uint8_t> is_edge_;
  std::unordered_set<std::uint64_t> failed_;
};

}  // namespace detail

/// Exact search for an (r,k)-cycle through all vertices of h.
///
/// Vertex 0 is placed first and reflections are skipped (second vertex < last vertex).
/// Returns a certified ordering, or nullopt as a proof of absence. Throws TooLarge above cap.
inline std::optional<OrderedTuple> find_power_ham_cycle(const Hypergraph& h, const PowerParams& pp,
                                                        std::size_t cap = kOracleDefaultCap) {
  if (h.k() != pp.k()) throw InvalidArgument("find_power_ham_cycle: uniformity mismatch");
  if (h.n() > cap || h.n() > 25) throw TooLarge("find_power_ham_cycle: n exceeds oracle cap");
  if (h.n() < pp.window() + 1) throw InvalidArgument("find_power_ham_cycle: n must be at least k+r");
  const auto all = VertexSet::range(static_cast<Vertex>(h.n()));
  detail::PowerDp dp(h, pp, all.span());
  auto out = dp.cycle();
  if (out && !is_power_cycle(h, pp, *out)) throw std::logic_error("find_power_ham_cycle: certificate rejected");
  return out;
}

/// Some ordering of U certifies as an (r,k)-path in h (never for |U| < k+r-1).
inline std::optional<OrderedTuple> find_power_path_spanning(const Hypergraph& h, const PowerParams& pp,
                                                            const VertexSet& u, std::size_t cap = kOracleDefaultCap) {
  if (h.k() != pp.k()) throw InvalidArgument("find_power_path_spanning: uniformity mismatch");
  if (u.size() > cap || u.size() > 25) throw TooLarge("find_power_path_spanning: |U| exceeds oracle cap");
  for (Vertex v : u)
    if (v >= h.n()) throw InvalidArgument("find_power_path_spanning: vertex out of range");
  detail::PowerDp dp(h, pp, u.span());
  return dp.path();
}

inline bool contains_power_path_spanning(const Hypergraph& h, const PowerParams& pp, const VertexSet& u,
                                         std::size_t cap = kOracleDefaultCap) {
  return find_power_path_spanning(h, pp, u, cap).has_value();
}

/// Whether intersecting_host(n, k, a) alone contains an (r,k)-cycle on all n vertices.
///
/// Every window of k+r-1 cyclically consecutive vertices must hold at most k-1 vertices
/// outside A; averaging over the n windows gives (n-a)(k+r-1) <= n(k-1), and spreading the
/// outside vertices evenly attains it.
inline bool intersecting_host_has_power_cycle(std::size_t n, std::size_t k, std::size_t r, std::size_t a) {
  const PowerParams pp(k, r);
  if (a > n) throw InvalidArgument("intersecting_host_has_power_cycle: a > n");
  if (n < pp.window() + 1) return false;
  return (n - a) * pp.window() <= n * (k - 1);
}

}  // namespace tightpow

#endif  // TIGHTPOW_ORACLE_HPP
