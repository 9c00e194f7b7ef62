#ifndef TIGHTPOW_HYPERGRAPH_HPP
#define TIGHTPOW_HYPERGRAPH_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "errors.hpp"

namespace tightpow {

using Vertex = std::uint32_t;

// Ordered vertex sequence: paths, cycle orderings, gadget labelings.
using OrderedTuple = std::vector<Vertex>;

inline constexpr std::size_t kMaxUniformity = 8;

inline bool all_distinct(std::span<const Vertex> seq) {
  std::vector<Vertex> s(seq.begin(), seq.end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Calls f(std::span<const T>) for every r-subset of pool, in lexicographic index order.
// Returning false from f stops the enumeration; the function then returns false.
template <class T, class F>
bool for_each_combination(std::span<const T> pool, std::size_t r, F&& f) {
  const std::size_t n = pool.size();
  if (r > n) return true;
  std::vector<std::size_t> idx(r);
  std::vector<T> buf(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    for (std::size_t i = 0; i < r; ++i) buf[i] = pool[idx[i]];
    if constexpr (std::is_convertible_v<decltype(f(std::span<const T>(buf))), bool>) {
      if (!f(std::span<const T>(buf))) return false;
    } else {
      f(std::span<const T>(buf));
    }
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// A k-set of vertices kept in ascending order.
class Edge {
 public:
  Edge() = default;

  explicit Edge(std::span<const Vertex> vs) {
    if (vs.size() > kMaxUniformity) throw InvalidArgument("edge arity exceeds kMaxUniformity");
    size_ = static_cast<std::uint8_t>(vs.size());
    std::copy(vs.begin(), vs.end(), v_.begin());
    std::sort(v_.begin(), v_.begin() + size_);
    if (std::adjacent_find(v_.begin(), v_.begin() + size_) != v_.begin() + size_)
      throw InvalidArgument("edge has a repeated vertex");
  }

  Edge(std::initializer_list<Vertex> vs) : Edge(std::span<const Vertex>(vs.begin(), vs.size())) {}

  std::size_t size() const noexcept { return size_; }
  const Vertex* begin() const noexcept { return v_.data(); }
  const Vertex* end() const noexcept { return v_.data() + size_; }
  Vertex operator[](std::size_t i) const noexcept { return v_[i]; }
  Vertex back() const noexcept { return v_[size_ - 1]; }
  std::span<const Vertex> span() const noexcept { return {v_.data(), size_}; }

  bool contains(Vertex x) const noexcept { return std::binary_search(begin(), end(), x); }

  friend bool operator==(const Edge& a, const Edge& b) noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  friend std::strong_ordering operator<=>(const Edge& a, const Edge& b) noexcept {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<Vertex, kMaxUniformity> v_{};
  std::uint8_t size_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Edge& e) {
  os << '{';
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
  return os << '}';
}

/// Sorted set of vertex ids. Membership is by binary search.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> vs) : members_(vs) { normalize(); }
  explicit VertexSet(std::vector<Vertex> vs) : members_(std::move(vs)) { normalize(); }

  static VertexSet range(Vertex n) {
    VertexSet s;
    s.members_.resize(n);
    for (Vertex v = 0; v < n; ++v) s.members_[v] = v;
    return s;
  }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Vertex v) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), v);
  }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  const std::vector<Vertex>& members() const noexcept { return members_; }
  std::span<const Vertex> span() const noexcept { return members_; }

  void insert(Vertex v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
  }
  void erase(Vertex v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it != members_.end() && *it == v) members_.erase(it);
  }

  VertexSet minus(const VertexSet& other) const {
    VertexSet out;
    std::set_difference(begin(), end(), other.begin(), other.end(),
                        std::back_inserter(out.members_));
    return out;
  }
  VertexSet intersect(const VertexSet& other) const {
    VertexSet out;
    std::set_intersection(begin(), end(), other.begin(), other.end(),
                          std::back_inserter(out.members_));
    return out;
  }
  VertexSet unite(const VertexSet& other) const {
    VertexSet out;
    std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out.members_));
    return out;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  void normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::vector<Vertex> members_;
};

/// Anything that answers "is this k-set an edge?" for an unsorted vertex span.
template <class G>
concept EdgeOracle = requires(const G& g, std::span<const Vertex> e) {
  { g.contains(e) } -> std::convertible_to<bool>;
  { g.k() } -> std::convertible_to<std::size_t>;
};

/// k-uniform hypergraph on vertices 0..n-1. Immutable once built.
///
/// Edges are stored canonically (ascending vertex order, lexicographic edge order) and
/// indexed by a packed 64-bit key for constant-time membership.
class Hypergraph {
 public:
  Hypergraph() = default;

  Hypergraph(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (k < 1 || k > kMaxUniformity) throw InvalidArgument("uniformity must be in [1, 8]");
    if (n > max_vertices(k)) throw InvalidArgument("vertex count too large for packed edge keys");
  }

  // Duplicates in `edges` are merged.
  template <class Range>
  Hypergraph(std::size_t n, std::size_t k, const Range& edges) : Hypergraph(n, k) {
    for (const auto& e : edges) insert(Edge(std::span<const Vertex>(std::begin(e), std::end(e))));
    finalize();
  }

  Hypergraph(std::size_t n, std::size_t k, std::initializer_list<Edge> edges) : Hypergraph(n, k) {
    for (const auto& e : edges) insert(e);
    finalize();
  }

  static std::size_t max_vertices(std::size_t k) {
    const unsigned bits = 64 / static_cast<unsigned>(k);
    return bits >= 32 ? std::numeric_limits<Vertex>::max() : (std::size_t{1} << bits);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool contains(const Edge& e) const {
    if (e.size() != k_ || e.back() >= n_) return false;
    return keys_.count(pack(e.span())) != 0;
  }

  // Accepts vertices in any order; spans of the wrong arity or with repeats are never edges.
  bool contains(std::span<const Vertex> vs) const {
    if (vs.size() != k_) return false;
    std::array<Vertex, kMaxUniformity> buf{};
    std::copy(vs.begin(), vs.end(), buf.begin());
    std::sort(buf.begin(), buf.begin() + k_);
    if (buf[k_ - 1] >= n_) return false;
    for (std::size_t i = 1; i < k_; ++i)
      if (buf[i] == buf[i - 1]) return false;
    return keys_.count(pack({buf.data(), k_})) != 0;
  }

  bool contains(std::initializer_list<Vertex> vs) const {
    return contains(std::span<const Vertex>(vs.begin(), vs.size()));
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.edges_ == b.edges_;
  }

 private:
  friend class HypergraphBuilder;

  std::uint64_t pack(std::span<const Vertex> sorted) const noexcept {
    const unsigned bits = 64 / static_cast<unsigned>(k_);
    std::uint64_t key = 0;
    for (Vertex v : sorted) key = (bits >= 64 ? 0 : key << bits) | v;
    return key;
  }

  void insert(const Edge& e) {
    if (e.size() != k_) throw InvalidArgument("edge arity differs from uniformity");
    if (e.back() >= n_) throw InvalidArgument("edge vertex out of range");
    if (keys_.insert(pack(e.span())).second) edges_.push_back(e);
  }

  void finalize() { std::sort(edges_.begin(), edges_.end()); }

  std::size_t n_ = 0;
  std::size_t k_ = 2;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> keys_;
};

/// Single-owner accumulator for a Hypergraph; build() freezes it.
class HypergraphBuilder {
 public:
  HypergraphBuilder(std::size_t n, std::size_t k) : g_(n, k) {}

  // Returns false when the edge was already present.
  bool add(const Edge& e) {
    const std::size_t before = g_.edges_.size();
    g_.insert(e);
    return g_.edges_.size() != before;
  }
  bool add(std::span<const Vertex> vs) { return add(Edge(vs)); }
  bool add(std::initializer_list<Vertex> vs) { return add(Edge(vs)); }

  bool contains(std::span<const Vertex> vs) const { return g_.contains(vs); }
  std::size_t n() const noexcept { return g_.n(); }
  std::size_t k() const noexcept { return g_.k(); }

  Hypergraph build() && {
    g_.finalize();
    return std::move(g_);
  }

 private:
  Hypergraph g_;
};

/// Union of several hypergraphs on the same universe, without materializing it.
class UnionView {
 public:
  UnionView() = default;
  explicit UnionView(std::vector<const Hypergraph*> parts) : parts_(std::move(parts)) {
    for (const auto* p : parts_)
      if (p->k() != parts_.front()->k()) throw InvalidArgument("union of mixed uniformity");
  }
  UnionView(std::initializer_list<const Hypergraph*> parts)
      : UnionView(std::vector<const Hypergraph*>(parts)) {}

  std::size_t k() const noexcept { return parts_.empty() ? 0 : parts_.front()->k(); }

  bool contains(std::span<const Vertex> e) const {
    return std::any_of(parts_.begin(), parts_.end(), [&](const Hypergraph* g) { return g->contains(e); });
  }
  bool contains(std::initializer_list<Vertex> vs) const {
    return contains(std::span<const Vertex>(vs.begin(), vs.size()));
  }

  const std::vector<const Hypergraph*>& parts() const noexcept { return parts_; }

 private:
  std::vector<const Hypergraph*> parts_;
};

inline Hypergraph complete_graph(std::size_t n, std::size_t k) {
  HypergraphBuilder b(n, k);
  const auto all = VertexSet::range(static_cast<Vertex>(n));
  for_each_combination<Vertex>(all.span(), k, [&](std::span<const Vertex> c) { b.add(c); });
  return std::move(b).build();
}

inline Hypergraph remove_edges(const Hypergraph& h, std::span<const Edge> drop) {
  HypergraphBuilder b(h.n(), h.k());
  std::vector<Edge> sorted(drop.begin(), drop.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& e : h.edges())
    if (!std::binary_search(sorted.begin(), sorted.end(), e)) b.add(e);
  return std::move(b).build();
}

/// Number of edges e with S ⊆ e and e \ S ⊆ T. S and T may overlap.
inline std::size_t degree_into(const Hypergraph& h, const VertexSet& s, const VertexSet& t) {
  if (s.empty() || s.size() >= h.k())
    throw InvalidArgument("degree_into: |S| must lie in [1, k-1]");
  const std::size_t need = h.k() - s.size();
  const VertexSet pool = t.minus(s);
  std::size_t count = 0;
  if (binomial(pool.size(), need) <= h.edge_count()) {
    std::vector<Vertex> buf(s.begin(), s.end());
    buf.resize(h.k());
    for_each_combination<Vertex>(pool.span(), need, [&](std::span<const Vertex> c) {
      std::copy(c.begin(), c.end(), buf.begin() + static_cast<std::ptrdiff_t>(s.size()));
      if (h.contains(std::span<const Vertex>(buf))) ++count;
    });
  } else {
    for (const auto& e : h.edges()) {
      if (!std::includes(e.begin(), e.end(), s.begin(), s.end())) continue;
      bool ok = true;
      for (Vertex v : e)
        if (!s.contains(v) && !pool.contains(v)) { ok = false; break; }
      if (ok) ++count;
    }
  }
  return count;
}

/// Minimum over (k-1)-sets S of deg(S, V). Requires n >= k.
inline std::size_t min_codegree(const Hypergraph& h) {
  if (h.n() < h.k()) throw InvalidArgument("min_codegree: n < k");
  const std::size_t k = h.k();
  const auto all = VertexSet::range(static_cast<Vertex>(h.n()));
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<Vertex> buf(k);
  for_each_combination<Vertex>(all.span(), k - 1, [&](std::span<const Vertex> s) {
    std::size_t d = 0;
    std::copy(s.begin(), s.end(), buf.begin());
    for (Vertex v = 0; v < h.n(); ++v) {
      if (std::find(s.begin(), s.end(), v) != s.end()) continue;
      buf[k - 1] = v;
      if (h.contains(std::span<const Vertex>(buf))) ++d;
    }
    best = std::min(best, d);
    return best > 0;
  });
  return best;
}

/// (k-1)-graph on the same universe with edges {S : S ∪ {v} ∈ E(H)}; v is isolated.
inline Hypergraph link(const Hypergraph& h, Vertex v) {
  if (v >= h.n()) throw InvalidArgument("link: vertex out of range");
  if (h.k() < 2) throw InvalidArgument("link: uniformity must be at least 2");
  HypergraphBuilder b(h.n(), h.k() - 1);
  std::vector<Vertex> rest;
  for (const auto& e : h.edges()) {
    if (!e.contains(v)) continue;
    rest.clear();
    for (Vertex u : e)
      if (u != v) rest.push_back(u);
    b.add(std::span<const Vertex>(rest));
  }
  return std::move(b).build();
}

/// Edges lying entirely inside U; vertex ids are preserved.
inline Hypergraph induced(const Hypergraph& h, const VertexSet& u) {
  HypergraphBuilder b(h.n(), h.k());
  for (const auto& e : h.edges())
    if (std::all_of(e.begin(), e.end(), [&](Vertex x) { return u.contains(x); })) b.add(e);
  return std::move(b).build();
}

/// Deduplicated edge union on the larger of the two universes.
inline Hypergraph union_of(const Hypergraph& a, const Hypergraph& b) {
  if (a.k() != b.k()) throw InvalidArgument("union_of: mismatched uniformity");
  HypergraphBuilder out(std::max(a.n(), b.n()), a.k());
  for (const auto& e : a.edges()) out.add(e);
  for (const auto& e : b.edges()) out.add(e);
  return std::move(out).build();
}

// Text format:
//   line 1: "n k"
//   then one edge per non-empty line, k ascending ids separated by single spaces.
//   Lines starting with '#' are comments.
inline void write_text(std::ostream& os, const Hypergraph& h) {
  os << h.n() << ' ' << h.k() << '\n';
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
    os << '\n';
  }
}

inline std::string to_text(const Hypergraph& h) {
  std::ostringstream os;
  write_text(os, h);
  return os.str();
}

inline Hypergraph read_text(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t n = 0, k = 0;
  std::vector<Edge> edges;
  std::set<Edge> seen;

  auto blank = [](const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  };

  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    if (blank(line)) continue;
    std::istringstream ls(line);
    if (!have_header) {
      long long nn = -1, kk = -1;
      std::string extra;
      if (!(ls >> nn >> kk) || (ls >> extra) || nn < 0 || kk < 1 ||
          kk > static_cast<long long>(kMaxUniformity))
        throw ParseError(lineno, "malformed header, expected \"n k\"");
      n = static_cast<std::size_t>(nn);
      k = static_cast<std::size_t>(kk);
      if (n > Hypergraph::max_vertices(k)) throw ParseError(lineno, "n too large for this k");
      have_header = true;
      continue;
    }
    std::vector<Vertex> ids;
    std::string tok;
    while (ls >> tok) {
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw ParseError(lineno, "non-numeric vertex id '" + tok + "'");
      unsigned long long v = std::stoull(tok);
      if (v >= n) throw ParseError(lineno, "vertex id " + tok + " >= n");
      ids.push_back(static_cast<Vertex>(v));
    }
    if (ids.size() != k)
      throw ParseError(lineno, "expected " + std::to_string(k) + " ids, got " + std::to_string(ids.size()));
    if (!std::is_sorted(ids.begin(), ids.end()) || std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw ParseError(lineno, "vertex ids must be strictly ascending");
    Edge e{std::span<const Vertex>(ids)};
    if (!seen.insert(e).second) throw ParseError(lineno, "duplicate edge");
    edges.push_back(e);
  }
  if (!have_header) throw ParseError(lineno, "missing header");
  return Hypergraph(n, k, edges);
}

inline Hypergraph from_text(const std::string& text) {
  std::istringstream is(text);
  return read_text(is);
}

}  // namespace tightpow

#endif  // TIGHTPOW_HYPERGRAPH_HPP
