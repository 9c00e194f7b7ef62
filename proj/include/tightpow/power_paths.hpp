#ifndef TIGHTPOW_POWER_PATHS_HPP
#define TIGHTPOW_POWER_PATHS_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hypergraph.hpp"
#include "rational.hpp"

namespace tightpow {

/// Uniformity k and power r of an (r,k)-path / (r,k)-cycle.
///
/// Every k+r-1 consecutive vertices of such a path span a complete k-graph. The derived
/// quantities are recomputed on demand so they can never drift from (k, r).
class PowerParams {
 public:
  PowerParams(std::size_t k, std::size_t r) : k_(k), r_(r) {
    if (k < 2) throw InvalidArgument("PowerParams: k must be at least 2");
    if (r < 1) throw InvalidArgument("PowerParams: r must be at least 1");
    if (k > kMaxUniformity) throw InvalidArgument("PowerParams: k exceeds kMaxUniformity");
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t r() const noexcept { return r_; }
  // Length of each end; also the number of predecessors a vertex must be complete to.
  std::size_t h() const noexcept { return k_ + r_ - 2; }
  // Clique size k+r-1 spanned by each window.
  std::size_t window() const noexcept { return k_ + r_ - 1; }
  // C(h, k-1): edges added per vertex once the first clique is in place.
  std::int64_t growth() const { return static_cast<std::int64_t>(binomial(h(), k_ - 1)); }
  Rational sigma() const { return Rational(1, growth()); }

  friend bool operator==(const PowerParams&, const PowerParams&) = default;

 private:
  std::size_t k_;
  std::size_t r_;
};

/// Edge count of the rth power of a tight path on b vertices.
inline std::int64_t g(const PowerParams& pp, std::int64_t b) {
  const auto w = static_cast<std::int64_t>(pp.window());
  if (b < w) throw InvalidArgument("g: b must be at least k+r-1");
  return static_cast<std::int64_t>(binomial(pp.window(), pp.k())) + (b - w) * pp.growth();
}

// The same count written as (b - (k-1)(k+r-1)/k) * C(h, k-1).
inline Rational g_closed_form(const PowerParams& pp, std::int64_t b) {
  const auto k = static_cast<std::int64_t>(pp.k());
  const auto w = static_cast<std::int64_t>(pp.window());
  return (Rational(b) - Rational((k - 1) * w, k)) * pp.growth();
}

namespace detail {

// Visits every forced edge once per (position, predecessor subset): the edge made of seq[i]
// and k-1 of the h positions before it (cyclically when `cyclic`). Stops early if f returns false.
template <class F>
bool for_each_forced_edge(const PowerParams& pp, std::span<const Vertex> seq, bool cyclic, F&& f) {
  const std::size_t n = seq.size();
  const std::size_t k = pp.k();
  const std::size_t h = pp.h();
  std::vector<Vertex> preds;
  std::vector<Vertex> buf(k);
  for (std::size_t i = 0; i < n; ++i) {
    preds.clear();
    if (cyclic) {
      for (std::size_t d = h; d >= 1; --d) preds.push_back(seq[(i + n - d) % n]);
    } else {
      for (std::size_t j = i >= h ? i - h : 0; j < i; ++j) preds.push_back(seq[j]);
    }
    if (preds.size() < k - 1) continue;
    const bool go = for_each_combination<Vertex>(preds, k - 1, [&](std::span<const Vertex> c) {
      std::copy(c.begin(), c.end(), buf.begin());
      buf[k - 1] = seq[i];
      return static_cast<bool>(f(std::span<const Vertex>(buf)));
    });
    if (!go) return false;
  }
  return true;
}

inline std::vector<Edge> collect_forced(const PowerParams& pp, std::span<const Vertex> seq, bool cyclic) {
  std::vector<Edge> out;
  for_each_forced_edge(pp, seq, cyclic, [&](std::span<const Vertex> e) {
    out.emplace_back(e);
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Forced edges of the (r,k)-path on seq, sorted. Requires |seq| >= k+r-1 and distinct vertices.
inline std::vector<Edge> power_path_edges(const PowerParams& pp, std::span<const Vertex> seq) {
  if (seq.size() < pp.window()) throw InvalidArgument("power_path_edges: sequence shorter than k+r-1");
  if (!all_distinct(seq)) throw InvalidArgument("power_path_edges: repeated vertex");
  return detail::collect_forced(pp, seq, false);
}

/// Forced edges of the (r,k)-cycle on seq read cyclically. Requires |seq| >= k+r.
inline std::vector<Edge> power_cycle_edges(const PowerParams& pp, std::span<const Vertex> seq) {
  if (seq.size() < pp.window() + 1) throw InvalidArgument("power_cycle_edges: cycle shorter than k+r");
  if (!all_distinct(seq)) throw InvalidArgument("power_cycle_edges: repeated vertex");
  return detail::collect_forced(pp, seq, true);
}

// Containment semantics: every forced edge must be present in g; extra edges are allowed.
// Sequences that are too short or repeat a vertex certify nothing and yield false.
template <EdgeOracle G>
bool is_power_path(const G& g, const PowerParams& pp, std::span<const Vertex> seq) {
  if (g.k() != pp.k() || seq.size() < pp.window() || !all_distinct(seq)) return false;
  return detail::for_each_forced_edge(pp, seq, false, [&](std::span<const Vertex> e) { return g.contains(e); });
}

template <EdgeOracle G>
bool is_power_cycle(const G& g, const PowerParams& pp, std::span<const Vertex> seq) {
  if (g.k() != pp.k() || seq.size() < pp.window() + 1 || !all_distinct(seq)) return false;
  return detail::for_each_forced_edge(pp, seq, true, [&](std::span<const Vertex> e) { return g.contains(e); });
}

/// First and last h vertices of a path with at least 2h vertices.
inline std::pair<OrderedTuple, OrderedTuple> ends(const PowerParams& pp, std::span<const Vertex> seq) {
  const std::size_t h = pp.h();
  if (seq.size() < 2 * h) throw InvalidArgument("ends: path shorter than 2h has overlapping ends");
  return {OrderedTuple(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(h)),
          OrderedTuple(seq.end() - static_cast<std::ptrdiff_t>(h), seq.end())};
}

// Power-path edges missing from g, in canonical order.
template <EdgeOracle G>
std::vector<Edge> missing_path_edges(const G& g, const PowerParams& pp, std::span<const Vertex> seq) {
  std::vector<Edge> out;
  for (const auto& e : power_path_edges(pp, seq))
    if (!g.contains(e.span())) out.push_back(e);
  return out;
}

}  // namespace tightpow

#endif  // TIGHTPOW_POWER_PATHS_HPP
