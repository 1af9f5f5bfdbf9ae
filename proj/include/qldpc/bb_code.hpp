#pragma once

// Bivariate-bicycle CSS code construction over the group Z_l x Z_m.
// Group elements are flattened as g = u*m + v. The polynomial A acts by
// right-translation x^i y^j : g -> g + (i,j), so each monomial is an
// lm x lm permutation matrix.

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qldpc/gf2.hpp"

#include "json.hpp"

namespace qldpc {

struct Monomial {
  int x_exp = 0;
  int y_exp = 0;
};

// CNOT layer order within a cycle, as slots into (a1,a2,a3,b1,b2,b3).
using Schedule = std::array<int, 6>;

inline constexpr Schedule kDefaultSchedule = {0, 1, 2, 3, 4, 5};

struct BbSpec {
  int l = 0;
  int m = 0;
  std::vector<Monomial> a_terms;
  std::vector<Monomial> b_terms;
  std::string name;
  int distance = 0;  // label only; used as the default cycle count
  Schedule z_schedule = kDefaultSchedule;
};

inline int group_size(const BbSpec& spec) { return spec.l * spec.m; }

inline int group_add(int g, const Monomial& mono, int l, int m) {
  int u = g / m, v = g % m;
  u = (u + mono.x_exp) % l;
  v = (v + mono.y_exp) % m;
  return u * m + v;
}

inline int group_sub(int g, const Monomial& mono, int l, int m) {
  int u = g / m, v = g % m;
  u = ((u - mono.x_exp) % l + l) % l;
  v = ((v - mono.y_exp) % m + m) % m;
  return u * m + v;
}

// x = S_l (x) I_m, y = I_l (x) S_m, both lm x lm cyclic permutations.
inline std::pair<BitMatrix, BitMatrix> shift_matrices(int l, int m) {
  if (l < 1 || m < 1) throw std::invalid_argument("shift_matrices: l, m must be >= 1");
  int n = l * m;
  BitMatrix x(n, n), y(n, n);
  for (int u = 0; u < l; ++u) {
    for (int v = 0; v < m; ++v) {
      int g = u * m + v;
      x.set(g, ((u + 1) % l) * m + v, true);
      y.set(g, u * m + (v + 1) % m, true);
    }
  }
  return {x, y};
}

inline BitMatrix monomial_matrix(const Monomial& mono, int l, int m) {
  int n = l * m;
  BitMatrix out(n, n);
  for (int g = 0; g < n; ++g) out.set(g, group_add(g, mono, l, m), true);
  return out;
}

struct CssCode {
  BbSpec spec;
  BitMatrix h_x;  // X stabilizers x data qubits
  BitMatrix h_z;  // Z stabilizers x data qubits
  int n_data = 0;
  int k = 0;
  std::vector<std::vector<int>> z_check_adjacency;  // per Z check, ascending data indices
  std::vector<std::vector<int>> data_adjacency_z;   // per data qubit, ascending Z-check indices
  std::vector<BitVec> logical_z;                    // k logical-Z representatives
};

namespace detail {

// Row-echelon accumulator for building a basis incrementally.
struct Echelon {
  std::vector<BitVec> rows;
  std::vector<std::size_t> pivots;

  // Reduces v against the current rows; if a nonzero remainder survives it
  // is inserted and true is returned.
  bool insert(BitVec v) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (v.get(pivots[i])) v.xor_with(rows[i]);
    if (!v.any()) return false;
    std::size_t pivot = 0;
    while (!v.get(pivot)) ++pivot;
    rows.push_back(v);
    pivots.push_back(pivot);
    return true;
  }
};

}  // namespace detail

// Logical-Z representatives: vectors commuting with all X stabilizers
// (ker h_x) that are independent of the Z-stabilizer row space.
inline std::vector<BitVec> logical_z_basis(const BitMatrix& h_x, const BitMatrix& h_z) {
  detail::Echelon ech;
  for (std::size_t r = 0; r < h_z.rows(); ++r) ech.insert(h_z.row(r));
  std::vector<BitVec> logicals;
  for (BitVec& v : gf2_nullspace(h_x)) {
    BitVec candidate = v;
    if (ech.insert(std::move(v))) logicals.push_back(std::move(candidate));
  }
  return logicals;
}

inline CssCode build_bb(const BbSpec& spec) {
  if (spec.l < 1 || spec.m < 1) throw std::invalid_argument("build_bb: l, m must be >= 1");
  if (spec.a_terms.empty() || spec.b_terms.empty())
    throw std::invalid_argument("build_bb: empty polynomial");
  int n = group_size(spec);
  BitMatrix a(n, n), b(n, n);
  for (const auto& mono : spec.a_terms)
    for (int g = 0; g < n; ++g) a.flip(g, group_add(g, mono, spec.l, spec.m));
  for (const auto& mono : spec.b_terms)
    for (int g = 0; g < n; ++g) b.flip(g, group_add(g, mono, spec.l, spec.m));

  CssCode code;
  code.spec = spec;
  code.n_data = 2 * n;
  code.h_x = BitMatrix(n, 2 * n);
  code.h_z = BitMatrix(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (a.get(r, c)) {
        code.h_x.set(r, c, true);       // h_x = [A | B]
        code.h_z.set(c, n + r, true);   // h_z = [B^T | A^T]
      }
      if (b.get(r, c)) {
        code.h_x.set(r, n + c, true);
        code.h_z.set(c, r, true);
      }
    }
  }

  if (!(code.h_x * code.h_z.transposed()).is_zero())
    throw std::invalid_argument("build_bb: h_x * h_z^T != 0 for this spec");

  code.k = code.n_data - static_cast<int>(gf2_rank(code.h_x)) -
           static_cast<int>(gf2_rank(code.h_z));

  code.z_check_adjacency.resize(n);
  code.data_adjacency_z.resize(code.n_data);
  for (int c = 0; c < n; ++c) {
    for (int q = 0; q < code.n_data; ++q) {
      if (code.h_z.get(c, q)) {
        code.z_check_adjacency[c].push_back(q);
        code.data_adjacency_z[q].push_back(c);
      }
    }
  }

  code.logical_z = logical_z_basis(code.h_x, code.h_z);
  if (static_cast<int>(code.logical_z.size()) != code.k)
    throw std::runtime_error("build_bb: logical basis size does not match k");
  return code;
}

// ---- built-in code specs -------------------------------------------------
// Polynomials follow the standard BB constructions for these parameter
// labels; n_data and k are verified by rank, distance is a label only.

inline BbSpec bb72_spec() {
  BbSpec s;
  s.l = 6;
  s.m = 6;
  s.a_terms = {{3, 0}, {0, 1}, {0, 2}};  // x^3 + y + y^2
  s.b_terms = {{0, 3}, {1, 0}, {2, 0}};  // y^3 + x + x^2
  s.name = "[[72,8,6]]";
  s.distance = 6;
  return s;
}

inline BbSpec bb90_spec() {
  BbSpec s;
  s.l = 15;
  s.m = 3;
  s.a_terms = {{9, 0}, {0, 1}, {0, 2}};  // x^9 + y + y^2
  s.b_terms = {{0, 0}, {2, 0}, {7, 0}};  // 1 + x^2 + x^7
  s.name = "[[90,8,10]]";
  s.distance = 10;
  return s;
}

inline BbSpec bb144_spec() {
  BbSpec s;
  s.l = 12;
  s.m = 6;
  s.a_terms = {{3, 0}, {0, 1}, {0, 2}};  // x^3 + y + y^2
  s.b_terms = {{0, 3}, {1, 0}, {2, 0}};  // y^3 + x + x^2
  s.name = "[[144,12,12]]";
  s.distance = 12;
  return s;
}

inline std::optional<BbSpec> bb_spec_by_name(const std::string& name) {
  if (name == "bb72" || name == "[[72,8,6]]") return bb72_spec();
  if (name == "bb90" || name == "[[90,8,10]]") return bb90_spec();
  if (name == "bb144" || name == "[[144,12,12]]") return bb144_spec();
  return std::nullopt;
}

// ---- spec file I/O -------------------------------------------------------
// {"l": 6, "m": 6, "a_terms": [[3,0],[0,1],[0,2]], "b_terms": [[0,3],[1,0],[2,0]],
//  "name": "...", "distance": 6, "z_schedule": ["a1","a2","a3","b1","b2","b3"]}

inline BbSpec parse_bb_spec(const nlohmann::json& j) {
  BbSpec s;
  s.l = j.at("l").get<int>();
  s.m = j.at("m").get<int>();
  auto read_terms = [&](const char* key) {
    std::vector<Monomial> terms;
    for (const auto& pair : j.at(key)) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument(std::string("bb spec: ") + key + " entries must be [i,j]");
      Monomial mono{pair[0].get<int>(), pair[1].get<int>()};
      mono.x_exp = ((mono.x_exp % s.l) + s.l) % s.l;
      mono.y_exp = ((mono.y_exp % s.m) + s.m) % s.m;
      terms.push_back(mono);
    }
    return terms;
  };
  s.a_terms = read_terms("a_terms");
  s.b_terms = read_terms("b_terms");
  if (j.contains("name")) s.name = j["name"].get<std::string>();
  if (j.contains("distance")) s.distance = j["distance"].get<int>();
  if (j.contains("z_schedule")) {
    const auto& sched = j["z_schedule"];
    if (sched.size() != 6) throw std::invalid_argument("bb spec: z_schedule needs 6 slots");
    std::array<bool, 6> seen{};
    for (int i = 0; i < 6; ++i) {
      std::string slot = sched[i].get<std::string>();
      int idx = -1;
      if (slot.size() == 2 && (slot[0] == 'a' || slot[0] == 'b') && slot[1] >= '1' && slot[1] <= '3')
        idx = (slot[0] == 'a' ? 0 : 3) + (slot[1] - '1');
      if (idx < 0) throw std::invalid_argument("bb spec: bad z_schedule slot " + slot);
      if (seen[idx]) throw std::invalid_argument("bb spec: duplicate z_schedule slot " + slot);
      seen[idx] = true;
      s.z_schedule[i] = idx;
    }
  }
  return s;
}

inline BbSpec load_bb_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code spec file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_bb_spec(j);
}

}  // namespace qldpc
