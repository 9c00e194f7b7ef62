#ifndef TIGHTPOW_GADGETS_HPP
#define TIGHTPOW_GADGETS_HPP

#include <algorithm>
#include <vector>

#include "hypergraph.hpp"
#include "power_paths.hpp"

namespace tightpow {

/// A labelled k-graph on positions 0..size-1 with an independent ordered root set.
///
/// `graph` holds only the edges that have to come from outside the host's guaranteed
/// structure (the random side). `host_pattern` lists the edges the host is expected to
/// supply when candidates for the interior are generated; both live on gadget positions.
struct RootedGadget {
  PowerParams params;
  Hypergraph graph;
  OrderedTuple order;  // vertex labelling; identity on positions
  OrderedTuple roots;  // positions of W, in labelled order
  std::vector<Edge> host_pattern;

  std::size_t size() const noexcept { return order.size(); }

  bool is_root(Vertex pos) const { return std::find(roots.begin(), roots.end(), pos) != roots.end(); }

  // Non-root positions in ascending order; an interior tuple lists their images in this order.
  OrderedTuple interior() const {
    OrderedTuple out;
    for (Vertex p : order)
      if (!is_root(p)) out.push_back(p);
    return out;
  }

  // Gadget with the roots deleted (F \ W), as an unrooted gadget on the same positions.
  RootedGadget without_roots() const {
    HypergraphBuilder b(graph.n(), graph.k());
    for (const auto& e : graph.edges())
      if (std::none_of(e.begin(), e.end(), [&](Vertex p) { return is_root(p); })) b.add(e);
    return RootedGadget{params, std::move(b).build(), order, {}, {}};
  }
};

inline OrderedTuple identity_order(std::size_t n) {
  OrderedTuple o(n);
  for (std::size_t i = 0; i < n; ++i) o[i] = static_cast<Vertex>(i);
  return o;
}

/// Image of every gadget position, given the root images and an interior tuple.
inline OrderedTuple place_gadget(const RootedGadget& gad, std::span<const Vertex> root_image,
                                 std::span<const Vertex> interior_image) {
  if (root_image.size() != gad.roots.size()) throw InvalidArgument("place_gadget: root image size mismatch");
  OrderedTuple at(gad.size());
  for (std::size_t i = 0; i < gad.roots.size(); ++i) at[gad.roots[i]] = root_image[i];
  const auto inner = gad.interior();
  if (interior_image.size() != inner.size()) throw InvalidArgument("place_gadget: interior size mismatch");
  for (std::size_t i = 0; i < inner.size(); ++i) at[inner[i]] = interior_image[i];
  return at;
}

inline Edge map_edge(const Edge& e, std::span<const Vertex> at) {
  std::array<Vertex, kMaxUniformity> buf{};
  for (std::size_t i = 0; i < e.size(); ++i) buf[i] = at[e[i]];
  return Edge(std::span<const Vertex>(buf.data(), e.size()));
}

/// The absorber gadget A for (k, r), k >= 3 and r >= 2.
///
/// Labelled order (v_1..v_h, v, v_{h+1}..v_{2h}) with W = {v} at position h. Edges are the
/// (r,k)-path on (v_1..v_{2h}) plus the edges of the (r,k)-path on the full order that
/// contain v, except the link tight path {v v_j .. v_{j+k-2} : j in [k+2r-2]}, which is
/// the host pattern.
inline RootedGadget absorber_gadget(const PowerParams& pp) {
  if (pp.k() < 3 || pp.r() < 2) throw Unsupported("absorber_gadget: requires k >= 3 and r >= 2");
  const std::size_t h = pp.h();
  const std::size_t k = pp.k();
  const auto order = identity_order(2 * h + 1);
  const Vertex root = static_cast<Vertex>(h);

  // tuple index t (0-based over v_1..v_{2h}) -> gadget position
  auto pos = [&](std::size_t t) { return static_cast<Vertex>(t < h ? t : t + 1); };
  OrderedTuple tuple;
  for (std::size_t t = 0; t < 2 * h; ++t) tuple.push_back(pos(t));

  std::vector<Edge> pattern;
  for (std::size_t j = 0; j + (k - 1) <= 2 * h; ++j) {
    std::vector<Vertex> e{root};
    for (std::size_t t = j; t < j + k - 1; ++t) e.push_back(pos(t));
    pattern.emplace_back(std::span<const Vertex>(e));
  }
  std::sort(pattern.begin(), pattern.end());

  HypergraphBuilder b(order.size(), k);
  for (const auto& e : power_path_edges(pp, tuple)) b.add(e);
  for (const auto& e : power_path_edges(pp, order))
    if (e.contains(root) && !std::binary_search(pattern.begin(), pattern.end(), e)) b.add(e);

  return RootedGadget{pp, std::move(b).build(), order, {root}, std::move(pattern)};
}

/// The connector gadget F for (k, r) with b interior vertices.
///
/// Labelled order (w_1..w_h, v_1..v_b, u_h..u_1), roots are both h-tuples. Edges are the
/// (r,k)-path on the full order minus the tight path on (w_1..w_h, v_1..v_{b/2}), the tight
/// path on (v_{b/2+1}..v_b, u_h..u_1), and every edge inside either root tuple. The removed
/// tight-path edges that touch the interior form the host pattern.
///
/// b must be even and at least max(2, r); below r a window would hold k root vertices.
inline RootedGadget connector_gadget(const PowerParams& pp, std::size_t b) {
  if (b % 2 != 0) throw InvalidArgument("connector_gadget: b must be even");
  if (b < std::max<std::size_t>(2, pp.r())) throw InvalidArgument("connector_gadget: b too small");
  const std::size_t h = pp.h();
  const std::size_t k = pp.k();
  const std::size_t size = 2 * h + b;
  const auto order = identity_order(size);

  OrderedTuple roots;
  for (std::size_t i = 0; i < h; ++i) roots.push_back(static_cast<Vertex>(i));
  for (std::size_t i = h + b; i < size; ++i) roots.push_back(static_cast<Vertex>(i));
  auto in_w1 = [&](Vertex p) { return p < h; };
  auto in_w2 = [&](Vertex p) { return p >= h + b; };

  std::vector<Edge> removed;
  std::vector<Edge> pattern;
  auto tight = [&](std::size_t from, std::size_t to) {  // consecutive k-sets of positions [from, to)
    for (std::size_t s = from; s + k <= to; ++s) {
      std::vector<Vertex> e;
      for (std::size_t t = s; t < s + k; ++t) e.push_back(static_cast<Vertex>(t));
      Edge edge{std::span<const Vertex>(e)};
      removed.push_back(edge);
      if (!std::all_of(edge.begin(), edge.end(), in_w1) && !std::all_of(edge.begin(), edge.end(), in_w2))
        pattern.push_back(edge);
    }
  };
  tight(0, h + b / 2);
  tight(h + b / 2, size);
  std::sort(removed.begin(), removed.end());
  std::sort(pattern.begin(), pattern.end());

  HypergraphBuilder g(size, k);
  for (const auto& e : power_path_edges(pp, order)) {
    if (std::all_of(e.begin(), e.end(), in_w1) || std::all_of(e.begin(), e.end(), in_w2)) continue;
    if (std::binary_search(removed.begin(), removed.end(), e)) continue;
    g.add(e);
  }
  RootedGadget out{pp, std::move(g).build(), order, std::move(roots), std::move(pattern)};
  for (const auto& e : out.graph.edges())
    if (std::all_of(e.begin(), e.end(), [&](Vertex p) { return out.is_root(p); }))
      throw InvalidArgument("connector_gadget: b too small, roots not independent");
  return out;
}

/// Candidate v-absorber: an ordered 2h-tuple that should be spliced around v.
struct AbsorberWitness {
  Vertex v = 0;
  OrderedTuple tuple;
};

// (v_1..v_h, v, v_{h+1}..v_{2h})
inline OrderedTuple absorber_with_vertex(const AbsorberWitness& w) {
  const std::size_t h = w.tuple.size() / 2;
  OrderedTuple out(w.tuple.begin(), w.tuple.begin() + static_cast<std::ptrdiff_t>(h));
  out.push_back(w.v);
  out.insert(out.end(), w.tuple.begin() + static_cast<std::ptrdiff_t>(h), w.tuple.end());
  return out;
}

/// True iff the tuple spans P_{2h} and, with v inserted in the middle, spans P_{2h+1}.
template <EdgeOracle G>
bool is_absorber(const G& host, const PowerParams& pp, const AbsorberWitness& w) {
  if (w.tuple.size() != 2 * pp.h()) return false;
  if (std::find(w.tuple.begin(), w.tuple.end(), w.v) != w.tuple.end()) return false;
  return is_power_path(host, pp, w.tuple) && is_power_path(host, pp, absorber_with_vertex(w));
}

/// Forced edges of both spanning conditions that are absent from host; empty iff is_absorber.
template <EdgeOracle G>
std::vector<Edge> missing_edges_for_absorber(const G& host, const PowerParams& pp, const AbsorberWitness& w) {
  if (w.tuple.size() != 2 * pp.h()) throw InvalidArgument("missing_edges_for_absorber: tuple length must be 2h");
  auto forced = power_path_edges(pp, w.tuple);
  const auto with_v = power_path_edges(pp, absorber_with_vertex(w));
  forced.insert(forced.end(), with_v.begin(), with_v.end());
  std::sort(forced.begin(), forced.end());
  forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
  std::vector<Edge> out;
  for (const auto& e : forced)
    if (!host.contains(e.span())) out.push_back(e);
  return out;
}

}  // namespace tightpow

#endif  // TIGHTPOW_GADGETS_HPP
