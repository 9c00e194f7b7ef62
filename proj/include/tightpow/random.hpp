#ifndef TIGHTPOW_RANDOM_HPP
#define TIGHTPOW_RANDOM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "hypergraph.hpp"

namespace tightpow {

// splitmix64 finalizer; the only mixing primitive used for seeds and tuple hashes.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : tag) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  return h;
}

/// Child seed for a named purpose and index: mix64(seed ^ mix64(hash(tag) + index)).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) noexcept {
  return mix64(seed ^ mix64(hash_tag(tag) + index));
}

/// Per-trial seed for Monte Carlo harnesses.
constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) noexcept {
  return derive_seed(base, "trial", trial);
}

inline double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Seeded generator with platform-independent derived draws (no std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  double unit() { return to_unit(eng_()); }

  // Uniform in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return x % n;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  Rng fork(std::string_view tag, std::uint64_t index = 0) { return Rng(derive_seed(eng_(), tag, index)); }

 private:
  std::mt19937_64 eng_;
};

inline std::uint64_t tuple_hash(std::uint64_t seed, std::span<const Vertex> sorted) noexcept {
  std::uint64_t h = mix64(seed);
  for (Vertex v : sorted) h = mix64(h ^ (static_cast<std::uint64_t>(v) + 0x51afd7ed558ccd1dULL));
  return h;
}

/// Binomial random k-graph: each k-set is an edge iff its keyed hash falls below p.
/// The outcome for a tuple depends only on (seed, tuple), not on enumeration order.
inline Hypergraph sample_gnp(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("sample_gnp: p must lie in [0, 1]");
  HypergraphBuilder b(n, k);
  if (p == 0.0) return std::move(b).build();
  const auto all = VertexSet::range(static_cast<Vertex>(n));
  for_each_combination<Vertex>(all.span(), k, [&](std::span<const Vertex> c) {
    if (p == 1.0 || to_unit(tuple_hash(seed, c)) < p) b.add(c);
  });
  return std::move(b).build();
}

/// Multi-round exposure: t independent rounds of probability p_round with (1-p_round)^t = 1-p.
struct RoundSplit {
  std::size_t t = 1;
  double p = 0.0;
  double p_round = 0.0;
  bool saturated = false;  // p == 1: every round is complete
};

inline RoundSplit split_rounds(double p, std::size_t t) {
  if (t < 1) throw InvalidArgument("split_rounds: t must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("split_rounds: p must lie in [0, 1]");
  RoundSplit s{t, p, 0.0, false};
  if (p == 1.0) {
    s.p_round = 1.0;
    s.saturated = t > 1;
    return s;
  }
  s.p_round = t == 1 ? p : -std::expm1(std::log1p(-p) / static_cast<double>(t));
  return s;
}

/// Samples the t rounds of a split; round j uses derive_seed(seed, "round", j).
inline std::vector<Hypergraph> expose_rounds(std::size_t n, std::size_t k, const RoundSplit& s, std::uint64_t seed) {
  std::vector<Hypergraph> out;
  out.reserve(s.t);
  for (std::size_t j = 0; j < s.t; ++j) out.push_back(sample_gnp(n, k, s.p_round, derive_seed(seed, "round", j)));
  return out;
}

/// Bernoulli(eta) vertex subset.
inline VertexSet sample_reserve(std::size_t n, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("sample_reserve: eta must lie in [0, 1]");
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n; ++v) {
    const Vertex one[1] = {v};
    if (to_unit(tuple_hash(derive_seed(seed, "reserve"), one)) < eta) out.push_back(v);
  }
  return VertexSet(std::move(out));
}

/// min over (k-1)-sets S of deg(S, R).
inline std::size_t reserve_min_degree(const Hypergraph& h, const VertexSet& r) {
  const std::size_t k = h.k();
  const auto all = VertexSet::range(static_cast<Vertex>(h.n()));
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<Vertex> buf(k);
  for_each_combination<Vertex>(all.span(), k - 1, [&](std::span<const Vertex> s) {
    std::copy(s.begin(), s.end(), buf.begin());
    std::size_t d = 0;
    for (Vertex v : r) {
      if (std::find(s.begin(), s.end(), v) != s.end()) continue;
      buf[k - 1] = v;
      if (h.contains(std::span<const Vertex>(buf))) ++d;
    }
    best = std::min(best, d);
    return best > 0;
  });
  return best == std::numeric_limits<std::size_t>::max() ? 0 : best;
}

/// |R| <= max_size and deg(S, R) >= threshold for every (k-1)-set S.
inline bool check_reserve(const Hypergraph& h, const VertexSet& r, std::size_t threshold, std::size_t max_size) {
  if (r.empty() || r.size() > max_size) return false;
  return reserve_min_degree(h, r) >= threshold;
}

/// Dense-host generator: G^(k)(n, q) under its own seed domain.
inline Hypergraph bernoulli_host(std::size_t n, std::size_t k, double q, std::uint64_t seed) {
  return sample_gnp(n, k, q, derive_seed(seed, "host"));
}

/// All k-sets meeting A = {0, .., a-1}. Its minimum codegree is a (for n - a >= k - 1).
inline Hypergraph intersecting_host(std::size_t n, std::size_t k, std::size_t a) {
  if (a > n) throw InvalidArgument("intersecting_host: a > n");
  HypergraphBuilder b(n, k);
  const auto all = VertexSet::range(static_cast<Vertex>(n));
  for_each_combination<Vertex>(all.span(), k, [&](std::span<const Vertex> c) {
    if (c[0] < a) b.add(c);
  });
  return std::move(b).build();
}

}  // namespace tightpow

#endif  // TIGHTPOW_RANDOM_HPP
