#pragma once

// Z-basis syndrome extraction circuit for a BB code, with enumerated
// single-fault locations and their propagation to detector footprints.
//
// Cycle layout (phase = total order of operations within a cycle):
//   phase 0      cycle start: ancilla init, idle fault insertion point
//   phase 1+u    X-extraction CNOT layer u (control = X ancilla, target = data)
//   phase 7+t    Z-extraction CNOT layer t (control = data, target = Z ancilla)
//   phase 13     check measurements
// After the last cycle every data qubit is measured in the Z basis and the
// final syndromes are reconstructed from those outcomes.
//
// A fault with phase p is inserted immediately before the operations at
// phase p. CNOT fault Paulis are therefore applied before their gate, which
// is the convention the detector-pattern case analysis below relies on.
//
// Detectors compare consecutive measurements of one Z check:
//   round 0        m(c,0) against the deterministic |0> init
//   round r        m(c,r) xor m(c,r-1)          (1 <= r <= N_c-1)
//   round N_c      m(c,N_c-1) xor the syndrome reconstructed from data
// Detector index = round * n_z_checks + check.
//
// Only X components of faults are tracked: Z errors on data are invisible to
// Z checks, Z on a Z ancilla does not flip its Z-basis measurement, and Z on
// an X ancilla only back-propagates more invisible Z's.

#include <algorithm>
#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qldpc/bb_code.hpp"

namespace qldpc {

enum class FaultKind : uint8_t { check_init, check_measure, data_idle, cnot_z, cnot_x };

inline const char* fault_kind_name(FaultKind k) {
  switch (k) {
    case FaultKind::check_init: return "init";
    case FaultKind::check_measure: return "measure";
    case FaultKind::data_idle: return "idle";
    case FaultKind::cnot_z: return "cnot_z";
    case FaultKind::cnot_x: return "cnot_x";
  }
  return "?";
}

// Single-qubit Pauli codes: 0=I, 1=X, 2=Y, 3=Z.
// Two-qubit CNOT fault Paulis are indexed 1..15 as 4*control + target.
inline bool pauli_has_x(int pauli1q) { return pauli1q == 1 || pauli1q == 2; }

struct FaultSite {
  FaultKind kind = FaultKind::check_init;
  int check = -1;   // owning Z check; the X check for cnot_x sites
  int qubit = -1;   // data qubit (idle target or CNOT data partner)
  int cycle = 0;
  int layer = -1;   // CNOT layer within the side's schedule
  uint8_t pauli = 0;  // cnot: 1..15; idle: 1..3 (X,Y,Z); init/measure: 0
};

struct Fault {
  FaultSite site;
  double probability = 0.0;
};

struct FaultEffect {
  std::vector<int> detectors;    // sorted, duplicates cancelled
  std::vector<int> observables;  // sorted logical indices
};

struct ExtractionCircuitConfig {
  // X-extraction CNOTs as additional fault sources (detectors stay Z-only).
  bool include_x_side = true;
  // Idle Paulis at p/3 each so the per-qubit idle budget totals p; the
  // alternative charges p per Pauli.
  bool split_idle_budget = true;
};

class ExtractionCircuit {
 public:
  ExtractionCircuit(const CssCode& code, int n_cycles,
                    ExtractionCircuitConfig config = {})
      : code_(&code), n_cycles_(n_cycles), config_(config) {
    if (n_cycles < 2) throw std::invalid_argument("ExtractionCircuit: n_cycles must be >= 2");
    if (code.spec.a_terms.size() != 3 || code.spec.b_terms.size() != 3)
      throw std::invalid_argument("ExtractionCircuit: BB spec needs 3+3 monomials");
    const BbSpec& spec = code.spec;
    n_z_ = group_size(spec);
    z_partners_.resize(n_z_);
    x_partners_.resize(n_z_);
    for (int c = 0; c < n_z_; ++c) {
      for (int layer = 0; layer < 6; ++layer) {
        int slot = spec.z_schedule[layer];
        z_partners_[c][layer] = z_partner_for_slot(c, slot);
        x_partners_[c][layer] = x_partner_for_slot(c, slot);
      }
    }
    data_z_links_.assign(code.n_data, {});
    for (int c = 0; c < n_z_; ++c)
      for (int layer = 0; layer < 6; ++layer)
        data_z_links_[z_partners_[c][layer]].push_back({c, layer});
    for (auto& links : data_z_links_)
      if (links.size() != 3)
        throw std::runtime_error("ExtractionCircuit: data qubit degree != 3");
    idle_qubits_.resize(n_z_);
    for (int c = 0; c < n_z_; ++c)
      idle_qubits_[c] = {z_partner_for_slot(c, 0), z_partner_for_slot(c, 3)};

    obs_masks_.assign(code.n_data, 0);
    if (code.logical_z.size() > 64)
      throw std::runtime_error("ExtractionCircuit: more than 64 observables unsupported");
    for (std::size_t o = 0; o < code.logical_z.size(); ++o)
      for (int q = 0; q < code.n_data; ++q)
        if (code.logical_z[o].get(q)) obs_masks_[q] |= uint64_t(1) << o;
  }

  const CssCode& code() const { return *code_; }
  const ExtractionCircuitConfig& config() const { return config_; }
  int n_cycles() const { return n_cycles_; }
  int n_z_checks() const { return n_z_; }
  int n_detectors() const { return n_z_ * (n_cycles_ + 1); }
  int n_observables() const { return static_cast<int>(code_->logical_z.size()); }

  int detector_index(int check, int round) const { return round * n_z_ + check; }
  int detector_check(int det) const { return det % n_z_; }
  int detector_round(int det) const { return det / n_z_; }

  // Data partner of a Z (or X) check's CNOT in the given layer.
  int z_partner(int check, int layer) const { return z_partners_[check][layer]; }
  int x_partner(int check, int layer) const { return x_partners_[check][layer]; }

  struct DataZLink {
    int check;
    int layer;
  };
  const std::vector<DataZLink>& data_z_links(int qubit) const { return data_z_links_[qubit]; }
  const std::array<int, 2>& idle_qubits(int check) const { return idle_qubits_[check]; }

  uint64_t observable_mask(int data_qubit) const { return obs_masks_[data_qubit]; }

 private:
  int z_partner_for_slot(int c, int slot) const {
    const BbSpec& s = code_->spec;
    if (slot < 3) return n_z_ + group_sub(c, s.a_terms[slot], s.l, s.m);
    return group_sub(c, s.b_terms[slot - 3], s.l, s.m);
  }
  int x_partner_for_slot(int x, int slot) const {
    const BbSpec& s = code_->spec;
    if (slot < 3) return group_add(x, s.a_terms[slot], s.l, s.m);
    return n_z_ + group_add(x, s.b_terms[slot - 3], s.l, s.m);
  }

  const CssCode* code_;
  int n_cycles_;
  int n_z_;
  ExtractionCircuitConfig config_;
  std::vector<std::array<int, 6>> z_partners_;
  std::vector<std::array<int, 6>> x_partners_;
  std::vector<std::vector<DataZLink>> data_z_links_;
  std::vector<std::array<int, 2>> idle_qubits_;
  std::vector<uint64_t> obs_masks_;
};

// The Z-side fault census: 98 sites per Z check per cycle
// (15 Paulis x 6 CNOTs + init + measure + 3 Paulis x 2 idle qubits).
inline std::vector<Fault> enumerate_faults(const ExtractionCircuit& circ, double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("enumerate_faults: need 0 < p < 0.5");
  std::vector<Fault> faults;
  faults.reserve(static_cast<std::size_t>(98) * circ.n_z_checks() * circ.n_cycles());
  double idle_p = circ.config().split_idle_budget ? p / 3.0 : p;
  for (int j = 0; j < circ.n_cycles(); ++j) {
    for (int c = 0; c < circ.n_z_checks(); ++c) {
      faults.push_back({{FaultKind::check_init, c, -1, j, -1, 0}, p});
      for (int layer = 0; layer < 6; ++layer)
        for (uint8_t pauli = 1; pauli <= 15; ++pauli)
          faults.push_back(
              {{FaultKind::cnot_z, c, circ.z_partner(c, layer), j, layer, pauli}, p / 15.0});
      faults.push_back({{FaultKind::check_measure, c, -1, j, -1, 0}, p});
      for (int q : circ.idle_qubits(c))
        for (uint8_t pauli = 1; pauli <= 3; ++pauli)
          faults.push_back({{FaultKind::data_idle, c, q, j, -1, pauli}, idle_p});
    }
  }
  return faults;
}

// X-extraction CNOT faults (90 per X check per cycle). X-ancilla init and
// measurement errors never touch Z detectors and are not enumerated.
inline std::vector<Fault> enumerate_x_faults(const ExtractionCircuit& circ, double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("enumerate_x_faults: need 0 < p < 0.5");
  std::vector<Fault> faults;
  for (int j = 0; j < circ.n_cycles(); ++j)
    for (int x = 0; x < circ.n_z_checks(); ++x)
      for (int layer = 0; layer < 6; ++layer)
        for (uint8_t pauli = 1; pauli <= 15; ++pauli)
          faults.push_back(
              {{FaultKind::cnot_x, x, circ.x_partner(x, layer), j, layer, pauli}, p / 15.0});
  return faults;
}

namespace detail {

struct EffectAccumulator {
  std::vector<int> flips;
  uint64_t obs = 0;

  // Persistent X frame on a data qubit from (cycle, phase) onward.
  void data_x(const ExtractionCircuit& circ, int cycle, int phase, int q) {
    for (const auto& link : circ.data_z_links(q)) {
      int gate_phase = 7 + link.layer;
      int first_cycle = (gate_phase >= phase) ? cycle : cycle + 1;
      int round = (first_cycle <= circ.n_cycles() - 1) ? first_cycle : circ.n_cycles();
      flips.push_back(circ.detector_index(link.check, round));
    }
    obs ^= circ.observable_mask(q);
  }

  // X on a Z ancilla anywhere within cycle j flips exactly m(c, j).
  void z_anc_x(const ExtractionCircuit& circ, int cycle, int c) {
    flips.push_back(circ.detector_index(c, cycle));
    flips.push_back(circ.detector_index(c, cycle + 1));
  }

  // X on an X ancilla spreads onto the data targets of its remaining CNOTs.
  void x_anc_x(const ExtractionCircuit& circ, int cycle, int phase, int x) {
    for (int u = 0; u < 6; ++u)
      if (1 + u >= phase) data_x(circ, cycle, 2 + u, circ.x_partner(x, u));
  }

  FaultEffect finish() {
    std::sort(flips.begin(), flips.end());
    FaultEffect effect;
    for (std::size_t i = 0; i < flips.size();) {
      std::size_t jdx = i;
      while (jdx < flips.size() && flips[jdx] == flips[i]) ++jdx;
      if ((jdx - i) & 1) effect.detectors.push_back(flips[i]);
      i = jdx;
    }
    for (int o = 0; o < 64; ++o)
      if ((obs >> o) & 1) effect.observables.push_back(o);
    return effect;
  }
};

}  // namespace detail

inline FaultEffect propagate(const ExtractionCircuit& circ, const Fault& fault) {
  const FaultSite& site = fault.site;
  if (site.cycle < 0 || site.cycle >= circ.n_cycles())
    throw std::invalid_argument("propagate: fault cycle out of range");
  detail::EffectAccumulator acc;
  switch (site.kind) {
    case FaultKind::check_init:
    case FaultKind::check_measure:
      acc.z_anc_x(circ, site.cycle, site.check);
      break;
    case FaultKind::data_idle:
      if (pauli_has_x(site.pauli)) acc.data_x(circ, site.cycle, 0, site.qubit);
      break;
    case FaultKind::cnot_z: {
      int control = site.pauli >> 2;  // data side
      int target = site.pauli & 3;    // Z-ancilla side
      if (pauli_has_x(control)) acc.data_x(circ, site.cycle, 7 + site.layer, site.qubit);
      if (pauli_has_x(target)) acc.z_anc_x(circ, site.cycle, site.check);
      break;
    }
    case FaultKind::cnot_x: {
      int control = site.pauli >> 2;  // X-ancilla side
      int target = site.pauli & 3;    // data side
      if (pauli_has_x(control)) acc.x_anc_x(circ, site.cycle, 1 + site.layer, site.check);
      if (pauli_has_x(target)) acc.data_x(circ, site.cycle, 1 + site.layer, site.qubit);
      break;
    }
  }
  return acc.finish();
}

// Human-readable dump, one op per line: "tick, op, qubits".
// Qubit numbering: data 0..n_data-1, Z ancillas n_data.., X ancillas n_data+n_z..
inline void dump_circuit(const ExtractionCircuit& circ, std::ostream& out) {
  const CssCode& code = circ.code();
  int n_z = circ.n_z_checks();
  int z_base = code.n_data;
  int x_base = code.n_data + n_z;
  out << "# extraction circuit: n_data=" << code.n_data << " z_checks=" << n_z
      << " x_checks=" << (circ.config().include_x_side ? n_z : 0)
      << " cycles=" << circ.n_cycles() << "\n";
  out << "# qubits: data 0.." << code.n_data - 1 << ", z-ancilla " << z_base << ".."
      << z_base + n_z - 1;
  if (circ.config().include_x_side) out << ", x-ancilla " << x_base << ".." << x_base + n_z - 1;
  out << "\n";
  out << "# idle fault qubits per z-check (applied at cycle start):\n";
  for (int c = 0; c < n_z; ++c)
    out << "#   check " << c << ": " << circ.idle_qubits(c)[0] << " " << circ.idle_qubits(c)[1]
        << "\n";
  const int phases_per_cycle = 14;
  for (int j = 0; j < circ.n_cycles(); ++j) {
    int base_tick = j * phases_per_cycle;
    out << base_tick << ", R,";
    for (int c = 0; c < n_z; ++c) out << " " << z_base + c;
    out << "\n";
    if (circ.config().include_x_side) {
      out << base_tick << ", RX,";
      for (int x = 0; x < n_z; ++x) out << " " << x_base + x;
      out << "\n";
      for (int u = 0; u < 6; ++u) {
        out << base_tick + 1 + u << ", CX,";
        for (int x = 0; x < n_z; ++x) out << " " << x_base + x << " " << circ.x_partner(x, u);
        out << "\n";
      }
    }
    for (int t = 0; t < 6; ++t) {
      out << base_tick + 7 + t << ", CX,";
      for (int c = 0; c < n_z; ++c) out << " " << circ.z_partner(c, t) << " " << z_base + c;
      out << "\n";
    }
    out << base_tick + 13 << ", M,";
    for (int c = 0; c < n_z; ++c) out << " " << z_base + c;
    out << "\n";
    if (circ.config().include_x_side) {
      out << base_tick + 13 << ", MX,";
      for (int x = 0; x < n_z; ++x) out << " " << x_base + x;
      out << "\n";
    }
  }
  out << circ.n_cycles() * phases_per_cycle << ", M,";
  for (int q = 0; q < code.n_data; ++q) out << " " << q;
  out << "\n";
}

}  // namespace qldpc
