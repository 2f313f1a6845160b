#pragma once
// Explicit triangle-network preparation protocols for GHZ-type targets.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qnet/channel.hpp"
#include "qnet/field.hpp"
#include "qnet/graph_state.hpp"
#include "qnet/optimize.hpp"

namespace qnet {

// Schmidt coefficients of the three sources, one vector per edge.
struct SourceCoefficients {
  std::vector<double> alpha, beta, gamma;
};

inline void validate(const SourceCoefficients& c) {
  if (c.alpha.size() != c.beta.size() || c.beta.size() != c.gamma.size())
    throw std::invalid_argument("source coefficient vectors must share one length");
  if (c.alpha.empty()) throw std::invalid_argument("source coefficients are empty");
  for (const auto* v : {&c.alpha, &c.beta, &c.gamma}) {
    double norm2 = 0.0;
    for (double x : *v) {
      if (x < 0.0) throw std::invalid_argument("source coefficients must be nonnegative");
      norm2 += x * x;
    }
    if (std::abs(norm2 - 1.0) > 1e-9)
      throw std::invalid_argument("source coefficients must have unit norm");
  }
}

struct ProtocolResult {
  double fidelity = 0.0;
  SourceCoefficients coefficients;
  double x = -1.0;  // family parameter when a one-parameter family was searched
  DenseOperator rho_out;
  bool gme = false;
};

// ---------------------------------------------------------------------------
// Protocol 1: three qubit-rank sources of local dimension t, measured in a
// block basis over the grid [0, t)^2.

inline bool protocol1_in_m(int a, int b, int t) {
  return a >= 0 && b >= 0 && a < t && b < t && std::min(a, b) % 2 == 0;
}

// Partition of the grid into the blocks {(a,b), (a+1,b+1)} with min(a,b)
// even, truncated at the boundary.
inline std::vector<std::vector<std::pair<int, int>>> protocol1_measurement(int t) {
  if (t < 2) throw std::invalid_argument("protocol 1 measurement needs t >= 2");
  std::vector<std::vector<std::pair<int, int>>> blocks;
  for (int a = 0; a < t; ++a)
    for (int b = 0; b < t; ++b) {
      if (!protocol1_in_m(a, b, t)) continue;
      std::vector<std::pair<int, int>> cells{{a, b}};
      if (a + 1 < t && b + 1 < t) cells.emplace_back(a + 1, b + 1);
      blocks.push_back(std::move(cells));
    }
  return blocks;
}

inline NodeChannel protocol1_channel(int t) {
  NodeChannel ch;
  ch.in_dims = {t, t};
  ch.out_dim = 2;
  for (const auto& cells : protocol1_measurement(t)) {
    Mat K = Mat::Zero(2, static_cast<i64>(t) * t);
    for (std::size_t s = 0; s < cells.size(); ++s)
      K(static_cast<i64>(s), static_cast<i64>(cells[s].first) * t + cells[s].second) = 1.0;
    ch.kraus.push_back(std::move(K));
  }
  check_trace_preserving(ch);
  return ch;
}

namespace detail {

inline double p1_at(const std::vector<double>& v, int j) {
  return (j >= 0 && j < static_cast<int>(v.size())) ? v[j] : 0.0;
}

inline double protocol1_fidelity_raw(const std::vector<double>& al, const std::vector<double>& be,
                                     const std::vector<double>& ga) {
  int t = static_cast<int>(al.size());
  double fid = 0.0;
  for (int a = 0; a < t; ++a)
    for (int b = 0; b < t; ++b) {
      if (!protocol1_in_m(b, a, t)) continue;
      for (int c = 0; c < t; ++c) {
        if (!protocol1_in_m(a, c, t) || !protocol1_in_m(c, b, t)) continue;
        double s = al[a] * be[b] * ga[c] +
                   p1_at(al, a + 1) * p1_at(be, b + 1) * p1_at(ga, c + 1);
        fid += 0.5 * s * s;
      }
    }
  return fid;
}

inline std::vector<double> protocol1_gradient_raw(const std::vector<double>& al,
                                                  const std::vector<double>& be,
                                                  const std::vector<double>& ga) {
  int t = static_cast<int>(al.size());
  std::vector<double> grad(3 * t, 0.0);
  for (int a = 0; a < t; ++a)
    for (int b = 0; b < t; ++b) {
      if (!protocol1_in_m(b, a, t)) continue;
      for (int c = 0; c < t; ++c) {
        if (!protocol1_in_m(a, c, t) || !protocol1_in_m(c, b, t)) continue;
        double s = al[a] * be[b] * ga[c] +
                   p1_at(al, a + 1) * p1_at(be, b + 1) * p1_at(ga, c + 1);
        for (int sig = 0; sig < 2; ++sig) {
          int u = a + sig, v = b + sig, w = c + sig;
          if (u >= t || v >= t || w >= t) continue;
          grad[u] += s * be[v] * ga[w];
          grad[t + v] += s * al[u] * ga[w];
          grad[2 * t + w] += s * al[u] * be[v];
        }
      }
    }
  return grad;
}

}  // namespace detail

// Closed-form GHZ fidelity of the protocol 1 output.
inline double protocol1_fidelity(const SourceCoefficients& c) {
  validate(c);
  return detail::protocol1_fidelity_raw(c.alpha, c.beta, c.gamma);
}

inline PureBipartiteSource schmidt_source(const std::vector<double>& coeffs) {
  i64 t = static_cast<i64>(coeffs.size());
  Vec amps = Vec::Zero(t * t);
  for (i64 j = 0; j < t; ++j) amps(j * t + j) = coeffs[j];
  return {DenseState({t, t}, std::move(amps)), 1};
}

inline std::array<PureBipartiteSource, 3> protocol1_sources(const SourceCoefficients& c) {
  return {schmidt_source(c.alpha), schmidt_source(c.beta), schmidt_source(c.gamma)};
}

// Output state on the three qubits, built cellwise.
inline DenseOperator protocol1_output(const SourceCoefficients& c) {
  validate(c);
  int t = static_cast<int>(c.alpha.size());
  if (t < 2) throw std::invalid_argument("protocol 1 output needs t >= 2");
  auto blocks = protocol1_measurement(t);
  std::vector<int> block_of(static_cast<std::size_t>(t) * t, -1);
  std::vector<int> sig_of(static_cast<std::size_t>(t) * t, 0);
  for (std::size_t id = 0; id < blocks.size(); ++id)
    for (std::size_t s = 0; s < blocks[id].size(); ++s) {
      int cell = blocks[id][s].first * t + blocks[id][s].second;
      block_of[cell] = static_cast<int>(id);
      sig_of[cell] = static_cast<int>(s);
    }
  struct Term {
    int b1, b2, b3, row;
    double amp;
  };
  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(t) * t * t);
  for (int u = 0; u < t; ++u)
    for (int v = 0; v < t; ++v)
      for (int w = 0; w < t; ++w) {
        int c1 = u * t + w, c2 = v * t + u, c3 = w * t + v;
        int row = sig_of[c1] * 4 + sig_of[c2] * 2 + sig_of[c3];
        terms.push_back({block_of[c1], block_of[c2], block_of[c3], row,
                         c.alpha[u] * c.beta[v] * c.gamma[w]});
      }
  Mat rho = Mat::Zero(8, 8);
  for (const auto& x : terms)
    for (const auto& y : terms)
      if (x.b1 == y.b1 && x.b2 == y.b2 && x.b3 == y.b3) rho(x.row, y.row) += x.amp * y.amp;
  return DenseOperator({2, 2, 2}, std::move(rho));
}

inline ProtocolResult protocol1_optimize(int t, int restarts = 64, std::uint64_t seed = 1) {
  if (t < 2) throw std::invalid_argument("protocol 1 optimization needs t >= 2");
  OptimizeOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  for (double ratio : {0.35, 0.55, 0.75, 1.0}) {  // decaying profiles escape the F=1/2 basin
    std::vector<double> w(3 * static_cast<std::size_t>(t));
    for (int s = 0; s < 3; ++s)
      for (int j = 0; j < t; ++j) w[s * t + j] = std::pow(ratio, j);
    opts.warm_starts.push_back(std::move(w));
  }
  std::vector<int> blocks{t, t, t};
  auto split = [t](const std::vector<double>& p) {
    return std::array<std::vector<double>, 3>{
        std::vector<double>(p.begin(), p.begin() + t),
        std::vector<double>(p.begin() + t, p.begin() + 2 * t),
        std::vector<double>(p.begin() + 2 * t, p.end())};
  };
  Objective f = [&](const std::vector<double>& p) {
    auto s = split(p);
    return detail::protocol1_fidelity_raw(s[0], s[1], s[2]);
  };
  Gradient g = [&](const std::vector<double>& p) {
    auto s = split(p);
    return detail::protocol1_gradient_raw(s[0], s[1], s[2]);
  };
  auto res = maximize_on_spheres(f, blocks, opts, g);
  for (double& v : res.params) v = std::abs(v);  // termwise at least as good
  detail::normalize_blocks(res.params, blocks);
  auto s = split(res.params);
  SourceCoefficients coeffs{s[0], s[1], s[2]};
  ProtocolResult out;
  out.coefficients = coeffs;
  out.fidelity = protocol1_fidelity(coeffs);
  out.rho_out = protocol1_output(coeffs);
  out.gme = out.fidelity > 0.5;
  return out;
}

// ---------------------------------------------------------------------------
// Protocol 2: each source emits k qubit pairs; each node sifts its 2k qubits
// pair by pair and encodes the first non-|00> pair into a qutrit.

// Pair basis index b = 2*(slot 1 bit) + (slot 2 bit); b = 0 means |00>.
inline i64 protocol2_encode_level(int b, i64 shift) {
  i64 base = b == 1 ? 0 : b == 3 ? 1 : 2;
  return mod_pos(base + shift, 3);
}

inline NodeChannel protocol2_channel(int node_index, int k,
                                     std::optional<i64> shift_override = std::nullopt) {
  if (node_index < 0 || node_index > 2) throw std::invalid_argument("node index must be 0, 1 or 2");
  if (k < 1 || k > 8) throw std::invalid_argument("protocol 2 channel supports 1 <= k <= 8");
  i64 shift = shift_override.value_or(node_index);
  NodeChannel ch;
  ch.in_dims.assign(2 * static_cast<std::size_t>(k), 2);
  ch.out_dim = 3;
  i64 dim = i64{1} << (2 * k);
  auto bit = [&](i64 x, int site) { return static_cast<int>((x >> (2 * k - 1 - site)) & 1); };
  for (int m = 0; m < k; ++m) {
    i64 rest = i64{1} << (2 * (k - 1 - m));
    for (i64 r = 0; r < rest; ++r) {
      Mat K = Mat::Zero(3, dim);
      for (i64 x = 0; x < dim; ++x) {
        bool clean_prefix = true;
        for (int i = 0; i < m && clean_prefix; ++i)
          clean_prefix = bit(x, i) == 0 && bit(x, k + i) == 0;
        if (!clean_prefix) continue;
        int b = 2 * bit(x, m) + bit(x, k + m);
        if (b == 0) continue;
        i64 rr = 0;
        for (int i = m + 1; i < k; ++i) rr = rr * 4 + 2 * bit(x, i) + bit(x, k + i);
        if (rr != r) continue;
        K(protocol2_encode_level(b, shift), x) = 1.0;
      }
      ch.kraus.push_back(std::move(K));
    }
  }
  Mat fail = Mat::Zero(3, dim);
  fail(0, 0) = 1.0;  // every pair in |00>
  ch.kraus.push_back(std::move(fail));
  check_trace_preserving(ch);
  return ch;
}

// Real amplitudes of one pair state in the basis |slot1 bit, slot2 bit>.
using PairAmps = std::array<double, 4>;

inline PureBipartiteSource protocol2_source(const std::vector<PairAmps>& pairs) {
  int k = static_cast<int>(pairs.size());
  if (k < 1) throw std::invalid_argument("protocol 2 source needs at least one pair");
  std::vector<i64> dims(2 * static_cast<std::size_t>(k), 2);
  i64 dim = i64{1} << (2 * k);
  Vec amps(dim);
  for (i64 x = 0; x < dim; ++x) {
    double a = 1.0;
    for (int m = 0; m < k; ++m) {
      int b1 = static_cast<int>((x >> (2 * k - 1 - m)) & 1);
      int b2 = static_cast<int>((x >> (k - 1 - m)) & 1);
      a *= pairs[m][2 * b1 + b2];
    }
    amps(x) = a;
  }
  return {DenseState(std::move(dims), std::move(amps)), k};
}

namespace detail {

inline std::vector<PairAmps> p2_normalized(const std::vector<PairAmps>& pairs) {
  std::vector<PairAmps> out = pairs;
  for (auto& p : out) {
    double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    if (n == 0.0) throw std::invalid_argument("pair state must be nonzero");
    for (double& v : p) v /= n;
  }
  return out;
}

// Required pair basis at a node for output level g.
inline int p2_active_basis(i64 shift, int g) {
  i64 base = mod_pos(g - shift, 3);
  return base == 0 ? 1 : base == 1 ? 3 : 2;
}

enum class P2Role { prefix, active, suffix };

inline P2Role p2_role(int m, int node_m, int k) {
  if (node_m >= k || m < node_m) return P2Role::prefix;
  return m == node_m ? P2Role::active : P2Role::suffix;
}

}  // namespace detail

// GHZ_3 fidelity of protocol 2 via per-pair transfer factors; agrees with
// the dense simulation but costs O(k (k+1)^3) per call.
inline double protocol2_fidelity(const std::array<std::vector<PairAmps>, 3>& pairs,
                                 const std::array<i64, 3>& shifts = {0, 1, 2}) {
  int k = static_cast<int>(pairs[0].size());
  for (const auto& p : pairs)
    if (static_cast<int>(p.size()) != k)
      throw std::invalid_argument("sources must use the same number of pairs");
  std::array<std::vector<PairAmps>, 3> ps{detail::p2_normalized(pairs[0]),
                                          detail::p2_normalized(pairs[1]),
                                          detail::p2_normalized(pairs[2])};
  // Source s sends its slot 1 bit to node s and its slot 2 bit to node s+1.
  auto side_constraint = [&](detail::P2Role role, int node, int g, int g2, bool slot1, int& q,
                             int& q2) -> bool {
    switch (role) {
      case detail::P2Role::prefix:
        q = q2 = 0;
        return true;
      case detail::P2Role::active: {
        int b = detail::p2_active_basis(shifts[node], g);
        int b2 = detail::p2_active_basis(shifts[node], g2);
        q = slot1 ? (b >> 1) : (b & 1);
        q2 = slot1 ? (b2 >> 1) : (b2 & 1);
        return true;
      }
      case detail::P2Role::suffix:
        q = q2 = -1;  // summed with q == q2
        return true;
    }
    return false;
  };
  double fid = 0.0;
  std::array<int, 3> mvec{};
  for (mvec[0] = 0; mvec[0] <= k; ++mvec[0])
    for (mvec[1] = 0; mvec[1] <= k; ++mvec[1])
      for (mvec[2] = 0; mvec[2] <= k; ++mvec[2])
        for (int g = 0; g < 3; ++g)
          for (int g2 = 0; g2 < 3; ++g2) {
            bool ok = true;
            for (int j = 0; j < 3 && ok; ++j)
              if (mvec[j] == k) ok = g == 0 && g2 == 0;
            if (!ok) continue;
            double prod = 1.0;
            for (int s = 0; s < 3 && prod != 0.0; ++s) {
              int u = s, v = (s + 1) % 3;
              for (int m = 0; m < k && prod != 0.0; ++m) {
                int a, a2, b, b2;
                side_constraint(detail::p2_role(m, mvec[u], k), u, g, g2, true, a, a2);
                side_constraint(detail::p2_role(m, mvec[v], k), v, g, g2, false, b, b2);
                const PairAmps& psi = ps[s][m];
                double T = 0.0;
                for (int qa = 0; qa < 2; ++qa)
                  for (int qb = 0; qb < 2; ++qb) {
                    if (a >= 0 && qa != a) continue;
                    if (b >= 0 && qb != b) continue;
                    for (int qa2 = 0; qa2 < 2; ++qa2)
                      for (int qb2 = 0; qb2 < 2; ++qb2) {
                        if (a >= 0 ? qa2 != a2 : qa2 != qa) continue;
                        if (b >= 0 ? qb2 != b2 : qb2 != qb) continue;
                        T += psi[2 * qa + qb] * psi[2 * qa2 + qb2];
                      }
                  }
                prod *= T;
              }
            }
            fid += prod / 3.0;
          }
  return fid;
}

inline std::array<NodeChannel, 3> protocol2_channels(int k,
                                                     const std::array<i64, 3>& shifts = {0, 1, 2}) {
  return {protocol2_channel(0, k, shifts[0]), protocol2_channel(1, k, shifts[1]),
          protocol2_channel(2, k, shifts[2])};
}

inline ProtocolResult protocol2_optimize(int k, int restarts = 64, std::uint64_t seed = 1,
                                         bool free_pairs = false,
                                         const std::array<i64, 3>& shifts = {0, 1, 2}) {
  if (k < 1 || k > 3) throw std::invalid_argument("protocol 2 supports 1 <= k <= 3");
  int per_source = free_pairs ? k : 1;
  std::vector<int> blocks(3 * static_cast<std::size_t>(per_source), 4);
  auto unpack = [&](const std::vector<double>& p) {
    std::array<std::vector<PairAmps>, 3> pairs;
    for (int s = 0; s < 3; ++s) {
      pairs[s].resize(k);
      for (int m = 0; m < k; ++m) {
        int blk = s * per_source + (free_pairs ? m : 0);
        for (int b = 0; b < 4; ++b) pairs[s][m][b] = p[4 * blk + b];
      }
    }
    return pairs;
  };
  OptimizeOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  for (double u : {0.30, 0.36, 0.45}) {  // diagonal pair profiles near the optimum
    std::vector<double> w;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      w.push_back(std::sqrt(u));
      w.push_back(0.0);
      w.push_back(0.0);
      w.push_back(std::sqrt(1.0 - u));
    }
    opts.warm_starts.push_back(std::move(w));
  }
  Objective f = [&](const std::vector<double>& p) { return protocol2_fidelity(unpack(p), shifts); };
  auto res = maximize_on_spheres(f, blocks, opts);
  auto pairs = unpack(res.params);
  ProtocolResult out;
  out.fidelity = protocol2_fidelity(pairs, shifts);
  auto flatten = [&](int s) {
    std::vector<double> v;
    for (const auto& p : detail::p2_normalized(pairs[s])) v.insert(v.end(), p.begin(), p.end());
    return v;
  };
  out.coefficients = SourceCoefficients{flatten(0), flatten(1), flatten(2)};
  std::array<PureBipartiteSource, 3> sources{protocol2_source(detail::p2_normalized(pairs[0])),
                                             protocol2_source(detail::p2_normalized(pairs[1])),
                                             protocol2_source(detail::p2_normalized(pairs[2]))};
  out.rho_out = simulate_triangle_pure(protocol2_channels(k, shifts), sources);
  out.gme = out.fidelity > 1.0 / 3.0;
  return out;
}

// ---------------------------------------------------------------------------
// Protocol 3: qudit sources of Schmidt rank k produce the GHZ_{k^2}-fidelity
// 1/k state exactly; variants embed or project it for other dimensions.

inline DenseState protocol3_state_weighted(int k, const std::vector<double>& a,
                                           const std::vector<double>& b,
                                           const std::vector<double>& c) {
  if (k < 2) throw std::invalid_argument("protocol 3 needs k >= 2");
  if (static_cast<int>(a.size()) != k || static_cast<int>(b.size()) != k ||
      static_cast<int>(c.size()) != k)
    throw std::invalid_argument("coefficient vectors must have length k");
  i64 D = static_cast<i64>(k) * k;
  Vec amps = Vec::Zero(D * D * D);
  for (int i1 = 0; i1 < k; ++i1)
    for (int i2 = 0; i2 < k; ++i2)
      for (int i3 = 0; i3 < k; ++i3) {
        i64 A = static_cast<i64>(k) * i1 + i3;
        i64 B = static_cast<i64>(k) * i1 + mod_pos(i2 - i1, k);
        i64 C = static_cast<i64>(k) * mod_pos(i2 - i3, k) + i3;
        amps((A * D + B) * D + C) += a[i1] * b[i2] * c[i3];
      }
  return DenseState({D, D, D}, std::move(amps));
}

inline DenseState protocol3_state(int k) {
  std::vector<double> u(k, 1.0 / std::sqrt(static_cast<double>(k)));
  return protocol3_state_weighted(k, u, u, u);
}

// Pads each party of a three-party pure state up to local dimension d.
inline DenseState embed_parties(const DenseState& s, i64 d) {
  if (s.dims.size() != 3) throw std::invalid_argument("embed_parties expects three parties");
  i64 D = s.dims[0];
  check_same_dims(s.dims, {D, D, D});
  if (d < D) throw std::invalid_argument("target dimension is smaller than the state");
  Vec amps = Vec::Zero(d * d * d);
  for (i64 A = 0; A < D; ++A)
    for (i64 B = 0; B < D; ++B)
      for (i64 C = 0; C < D; ++C) amps((A * d + B) * d + C) = s.amps((A * D + B) * D + C);
  return DenseState({d, d, d}, std::move(amps));
}

// Channel dropping the bottom level: |j> -> |j-1> for j >= 1, |0> -> |0>.
inline NodeChannel protocol3_drop_channel(i64 dim) {
  if (dim < 2) throw std::invalid_argument("drop channel needs dimension >= 2");
  NodeChannel ch;
  ch.in_dims = {dim};
  ch.out_dim = dim - 1;
  Mat K1 = Mat::Zero(dim - 1, dim);
  for (i64 j = 1; j < dim; ++j) K1(j - 1, j) = 1.0;
  Mat K2 = Mat::Zero(dim - 1, dim);
  K2(0, 0) = 1.0;
  ch.kraus = {std::move(K1), std::move(K2)};
  check_trace_preserving(ch);
  return ch;
}

namespace detail {

inline std::vector<double> p3_family_coeffs(int k, double x) {
  double y = std::sqrt(std::max(0.0, (1.0 - x * x) / (k - 1)));
  std::vector<double> c(k, y);
  c[0] = x;
  return c;
}

}  // namespace detail

// GHZ_{k^2-1} fidelity of the projected one-parameter source family.
inline double protocol3_x_fidelity(int k, double x) {
  if (k < 2) throw std::invalid_argument("protocol 3 needs k >= 2");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("x must lie in [0, 1]");
  auto c = detail::p3_family_coeffs(k, x);
  DenseState phi = protocol3_state_weighted(k, c, c, c);
  NodeChannel drop = protocol3_drop_channel(static_cast<i64>(k) * k);
  std::array<NodeChannel, 3> chs{drop, drop, drop};
  return channel3_fidelity(phi, chs, ghz_state(static_cast<i64>(k) * k - 1));
}

inline ProtocolResult protocol3_variants(i64 d) {
  if (d < 2) throw std::invalid_argument("protocol 3 variants need d >= 2");
  auto isqrt = [](i64 v) {
    i64 r = static_cast<i64>(std::llround(std::floor(std::sqrt(static_cast<double>(v)))));
    while ((r + 1) * (r + 1) <= v) ++r;
    while (r * r > v) --r;
    return r;
  };
  ProtocolResult best;
  i64 k_embed = isqrt(d);
  DenseState witness = [&] {
    if (k_embed >= 2) return embed_parties(protocol3_state(static_cast<int>(k_embed)), d);
    Vec amps = Vec::Zero(d * d * d);
    amps(0) = 1.0;
    return DenseState({d, d, d}, std::move(amps));
  }();
  DenseState target = ghz_state(d);
  best.fidelity = fidelity(witness, target);
  best.rho_out = projector_onto(witness);
  std::vector<double> u(std::max<i64>(k_embed, 1), 1.0 / std::sqrt(std::max(1.0, static_cast<double>(k_embed))));
  best.coefficients = SourceCoefficients{u, u, u};

  i64 kk = isqrt(d + 1);
  if (kk >= 2 && kk * kk == d + 1) {
    int k = static_cast<int>(kk);
    NodeChannel drop = protocol3_drop_channel(d + 1);
    std::array<NodeChannel, 3> chs{drop, drop, drop};
    auto value = [&](double x) { return protocol3_x_fidelity(k, x); };
    // coarse grid, then golden-section refinement
    int grid = 512;
    double bx = 1.0 / std::sqrt(static_cast<double>(k)), bf = value(bx);
    for (int i = 0; i <= grid; ++i) {
      double x = static_cast<double>(i) / grid;
      double fx = value(x);
      if (fx > bf) {
        bf = fx;
        bx = x;
      }
    }
    double lo = std::max(0.0, bx - 1.0 / grid), hi = std::min(1.0, bx + 1.0 / grid);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    while (hi - lo > 1e-12) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = value(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = value(x1);
      }
    }
    double xstar = 0.5 * (lo + hi), fstar = value(xstar);
    if (fstar < bf) {
      fstar = bf;
      xstar = bx;
    }
    if (fstar > best.fidelity) {
      auto c = detail::p3_family_coeffs(k, xstar);
      best.fidelity = fstar;
      best.x = xstar;
      best.coefficients = SourceCoefficients{c, c, c};
      best.rho_out = channel3_output(protocol3_state_weighted(k, c, c, c), chs);
    }
  }
  best.gme = best.fidelity > 1.0 / static_cast<double>(d);
  return best;
}

}  // namespace qnet
