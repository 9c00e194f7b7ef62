#ifndef TIGHTPOW_PHI_HPP
#define TIGHTPOW_PHI_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gadgets.hpp"
#include "rational.hpp"

namespace tightpow {

/// Exponent form of the rooted density functional: p = n^{-x}, and
/// Phi_{F,W}(n, p) = n^{min_exponent} with
///   min_exponent = min over induced H with e_H > 0 of (v_H - |V(H) ∩ W| - x e_H).
struct ExponentQuery {
  RootedGadget gadget;
  Rational x;
};

struct PhiReport {
  Rational min_exponent;
  OrderedTuple witness;  // gadget positions, ascending
  std::size_t witness_v = 0;
  std::size_t witness_e = 0;
  std::size_t witness_roots = 0;
};

inline constexpr std::size_t kPhiNaiveMaxVertices = 24;

namespace detail {

struct PhiInput {
  std::int64_t p = 0;  // x = p / q
  std::int64_t q = 1;
  std::vector<std::vector<std::uint32_t>> below;  // per max position: masks of the other positions
  std::vector<bool> root;
};

inline PhiInput phi_input(const ExponentQuery& query) {
  if (query.x <= 0) throw InvalidArgument("phi: x must be positive");
  const auto& gad = query.gadget;
  if (gad.graph.edge_count() == 0) throw InvalidArgument("phi: gadget has no edges");
  PhiInput in;
  in.p = query.x.numerator();
  in.q = query.x.denominator();
  in.below.resize(gad.size());
  in.root.assign(gad.size(), false);
  for (Vertex r : gad.roots) in.root[r] = true;
  return in;
}

inline PhiReport make_report(const ExponentQuery& query, std::vector<bool> chosen) {
  const auto& gad = query.gadget;
  PhiReport rep;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    if (chosen[i]) {
      rep.witness.push_back(static_cast<Vertex>(i));
      if (gad.is_root(static_cast<Vertex>(i))) ++rep.witness_roots;
    }
  rep.witness_v = rep.witness.size();
  for (const auto& e : gad.graph.edges())
    if (std::all_of(e.begin(), e.end(), [&](Vertex v) { return chosen[v]; })) ++rep.witness_e;
  rep.min_exponent = Rational(static_cast<std::int64_t>(rep.witness_v - rep.witness_roots)) -
                     query.x * static_cast<std::int64_t>(rep.witness_e);
  return rep;
}

}  // namespace detail

/// Exhaustive minimum over all vertex subsets (induced subgraphs) with at least one edge.
inline PhiReport phi_exponent_naive(const ExponentQuery& query) {
  const auto& gad = query.gadget;
  if (gad.size() > kPhiNaiveMaxVertices)
    throw TooLarge("phi_exponent_naive: gadget exceeds 24 vertices, use phi_exponent_dp");
  auto in = detail::phi_input(query);
  for (const auto& e : gad.graph.edges()) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) m |= std::uint32_t{1} << e[i];
    in.below[e.back()].push_back(m);
  }

  const std::size_t n = gad.size();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::uint32_t best_mask = 0;

  // value = (non-root vertices) * q - p * edges, accumulated as positions are decided
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t mask, std::int64_t verts, std::int64_t edges) -> void {
    if (i == n) {
      if (edges == 0) return;
      const std::int64_t val = verts * in.q - in.p * edges;
      if (val < best) {
        best = val;
        best_mask = mask;
      }
      return;
    }
    self(self, i + 1, mask, verts, edges);
    std::int64_t add = 0;
    for (std::uint32_t m : in.below[i])
      if ((m & mask) == m) ++add;
    self(self, i + 1, mask | (std::uint32_t{1} << i), verts + (in.root[i] ? 0 : 1), edges + add);
  };
  rec(rec, 0, 0, 0, 0);

  std::vector<bool> chosen(n);
  for (std::size_t i = 0; i < n; ++i) chosen[i] = (best_mask >> i) & 1U;
  return detail::make_report(query, std::move(chosen));
}

/// Banded dynamic program. The bandwidth w is the largest span (last minus first position)
/// of an edge, at most h+1 for the gadgets here; the scan state is the inclusion pattern of
/// the last w positions plus a flag recording whether any edge has been taken.
inline PhiReport phi_exponent_dp(const ExponentQuery& query) {
  const auto& gad = query.gadget;
  std::size_t h = 1;
  for (const auto& e : gad.graph.edges()) h = std::max<std::size_t>(h, e.back() - e[0]);
  if (h > 18) throw Unsupported("phi_exponent_dp: bandwidth above 18 positions");
  auto in = detail::phi_input(query);
  for (const auto& e : gad.graph.edges()) {
    const Vertex top = e.back();
    std::uint32_t m = 0;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) m |= std::uint32_t{1} << (top - e[i] - 1);
    in.below[top].push_back(m);
  }

  const std::size_t n = gad.size();
  const std::uint32_t patterns = std::uint32_t{1} << h;
  const std::uint32_t keep = patterns - 1;
  const std::size_t states = 2 * patterns;  // index = pattern * 2 + flag
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

  std::vector<std::int64_t> cur(states, kInf), next(states);
  // parent[i][state] = previous state * 2 + include bit
  std::vector<std::vector<std::uint32_t>> parent(n, std::vector<std::uint32_t>(states, 0));
  cur[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(next.begin(), next.end(), kInf);
    for (std::uint32_t s = 0; s < states; ++s) {
      if (cur[s] == kInf) continue;
      const std::uint32_t pat = s >> 1;
      const std::uint32_t flag = s & 1U;
      for (std::uint32_t inc = 0; inc < 2; ++inc) {
        std::int64_t val = cur[s];
        std::uint32_t nflag = flag;
        if (inc) {
          if (!in.root[i]) val += in.q;
          std::int64_t add = 0;
          for (std::uint32_t m : in.below[i])
            if ((m & pat) == m) ++add;
          val -= in.p * add;
          if (add > 0) nflag = 1;
        }
        const std::uint32_t npat = ((pat << 1) | inc) & keep;
        const std::uint32_t ns = (npat << 1) | nflag;
        if (val < next[ns]) {
          next[ns] = val;
          parent[i][ns] = (s << 1) | inc;
        }
      }
    }
    std::swap(cur, next);
  }

  std::uint32_t best_state = 0;
  std::int64_t best = kInf;
  for (std::uint32_t s = 1; s < states; s += 2)
    if (cur[s] < best) {
      best = cur[s];
      best_state = s;
    }
  if (best == kInf) throw InvalidArgument("phi_exponent_dp: no subgraph with an edge");

  std::vector<bool> chosen(n, false);
  std::uint32_t s = best_state;
  for (std::size_t i = n; i-- > 0;) {
    const std::uint32_t link = parent[i][s];
    chosen[i] = link & 1U;
    s = link >> 1;
  }
  return detail::make_report(query, std::move(chosen));
}

enum class PhiEngine { Naive, Dp };

inline PhiReport phi_exponent(const ExponentQuery& query, PhiEngine engine) {
  return engine == PhiEngine::Naive ? phi_exponent_naive(query) : phi_exponent_dp(query);
}

/// Largest epsilon for which the absorber density bound is stated.
inline Rational absorber_eps_bound(const PowerParams& pp) {
  const auto k = static_cast<std::int64_t>(pp.k());
  const std::int64_t g_len = g(pp, 2 * static_cast<std::int64_t>(pp.k() + pp.r()) - 3);
  const Rational a(2, k * (k + 1));
  const Rational b(k + 2, pp.growth());
  return Rational(1, 4 * g_len) * std::min(a, b);
}

/// Largest epsilon for which the connector density bound is stated, for interior length b.
inline Rational connector_eps_bound(const PowerParams& pp, std::int64_t b) {
  return Rational(1, 3 * b * pp.growth() * pp.growth());
}

/// Smallest even b with b >= (k+r)^2 C(h, k-1).
inline std::int64_t connector_lemma_b(const PowerParams& pp) {
  const auto kr = static_cast<std::int64_t>(pp.k() + pp.r());
  const std::int64_t b = kr * kr * pp.growth();
  return b % 2 == 0 ? b : b + 1;
}

struct PhiLemmaQuery {
  std::size_t k = 3;
  std::size_t r = 2;
  std::int64_t b = 0;                        // 0: use connector_lemma_b
  std::optional<Rational> eps_absorber;      // default: absorber_eps_bound
  std::optional<Rational> eps_connector;     // default: connector_eps_bound(b)
  PhiEngine engine = PhiEngine::Dp;
};

struct PhiLemmaReport {
  PowerParams params{3, 2};
  std::int64_t b = 0;
  Rational eps_absorber;
  Rational eps_connector;
  bool eps_absorber_in_range = false;
  bool eps_connector_in_range = false;
  bool b_below_lemma_bound = false;

  PhiReport absorber_rooted;
  PhiReport absorber_unrooted;
  PhiReport connector_rooted;
  PhiReport connector_unrooted;

  bool absorber_ok = false;   // rooted >= 1 and unrooted >= 1
  bool connector_ok = false;  // rooted >= sigma/2 and unrooted >= 1

  // exponent minus its target; non-negative when the bound holds
  Rational absorber_rooted_margin;
  Rational absorber_unrooted_margin;
  Rational connector_rooted_margin;
  Rational connector_unrooted_margin;

  std::string note;
};

/// Evaluates the absorber and connector density bounds exactly at x = sigma + eps.
inline PhiLemmaReport verify_phi_lemmas(const PhiLemmaQuery& q) {
  const PowerParams pp(q.k, q.r);
  PhiLemmaReport rep;
  rep.params = pp;
  rep.b = q.b > 0 ? q.b : connector_lemma_b(pp);
  rep.b_below_lemma_bound = rep.b < connector_lemma_b(pp);
  rep.eps_absorber = q.eps_absorber.value_or(absorber_eps_bound(pp));
  rep.eps_connector = q.eps_connector.value_or(connector_eps_bound(pp, rep.b));
  rep.eps_absorber_in_range = rep.eps_absorber > 0 && rep.eps_absorber <= absorber_eps_bound(pp);
  rep.eps_connector_in_range = rep.eps_connector > 0 && rep.eps_connector <= connector_eps_bound(pp, rep.b);

  const Rational one(1);
  const auto absorber = absorber_gadget(pp);
  const Rational xa = pp.sigma() + rep.eps_absorber;
  rep.absorber_rooted = phi_exponent({absorber, xa}, q.engine);
  rep.absorber_unrooted = phi_exponent({absorber.without_roots(), xa}, q.engine);
  rep.absorber_rooted_margin = rep.absorber_rooted.min_exponent - one;
  rep.absorber_unrooted_margin = rep.absorber_unrooted.min_exponent - one;
  rep.absorber_ok = rep.absorber_rooted_margin >= 0 && rep.absorber_unrooted_margin >= 0;

  const auto connector = connector_gadget(pp, static_cast<std::size_t>(rep.b));
  const Rational xc = pp.sigma() + rep.eps_connector;
  rep.connector_rooted = phi_exponent({connector, xc}, q.engine);
  rep.connector_unrooted = phi_exponent({connector.without_roots(), xc}, q.engine);
  rep.connector_rooted_margin = rep.connector_rooted.min_exponent - pp.sigma() / 2;
  rep.connector_unrooted_margin = rep.connector_unrooted.min_exponent - one;
  rep.connector_ok = rep.connector_rooted_margin >= 0 && rep.connector_unrooted_margin >= 0;

  if (rep.b_below_lemma_bound) rep.note += "b below lemma's b bound;";
  if (!rep.eps_absorber_in_range) rep.note += "absorber eps outside stated range;";
  if (!rep.eps_connector_in_range) rep.note += "connector eps outside stated range;";
  return rep;
}

/// Unrooted (r,k)-path on b positions, as a gadget for density queries.
inline RootedGadget power_path_gadget(const PowerParams& pp, std::size_t b) {
  const auto order = identity_order(b);
  return RootedGadget{pp, Hypergraph(b, pp.k(), power_path_edges(pp, order)), order, {}, {}};
}

}  // namespace tightpow

#endif  // TIGHTPOW_PHI_HPP
