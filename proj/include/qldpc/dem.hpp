#pragma once

// Detector error model: independent error events with a probability, a
// detector footprint and logical-observable flips. The event list doubles as
// the decoding matrix D (detectors x events) and the channel vector P.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qldpc/circuit.hpp"

namespace qldpc {

using ChannelVector = std::vector<double>;

struct DemEvent {
  double probability = 0.0;
  std::vector<int> detectors;    // sorted
  std::vector<int> observables;  // sorted
  std::vector<int> provenance;   // fault ids from the enumeration (empty after file read)
};

namespace detail {

struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace detail

class DetectorErrorModel {
 public:
  int n_detectors = 0;
  int n_observables = 0;
  std::vector<DemEvent> events;

  void rebuild_footprint_index() {
    footprint_index_.clear();
    for (std::size_t i = 0; i < events.size(); ++i)
      if (!events[i].detectors.empty())
        footprint_index_[events[i].detectors].push_back(static_cast<int>(i));
  }

  // Exact-match event ids for a sorted detector set; empty when unknown.
  const std::vector<int>& lookup_footprint(const std::vector<int>& detectors) const {
    static const std::vector<int> kEmpty;
    auto it = footprint_index_.find(detectors);
    return it == footprint_index_.end() ? kEmpty : it->second;
  }

  std::size_t footprint_index_size() const { return footprint_index_.size(); }

  ChannelVector channel() const {
    ChannelVector priors;
    priors.reserve(events.size());
    for (const auto& e : events) priors.push_back(e.probability);
    return priors;
  }

  uint64_t observable_mask(int event) const {
    uint64_t mask = 0;
    for (int o : events[event].observables) mask |= uint64_t(1) << o;
    return mask;
  }

 private:
  std::unordered_map<std::vector<int>, std::vector<int>, detail::IntVecHash> footprint_index_;
};

inline std::vector<int> lookup_footprint(const DetectorErrorModel& dem,
                                         const std::vector<int>& detectors) {
  return dem.lookup_footprint(detectors);
}

// Builds the DEM for a circuit at uniform physical rate p. Unmerged: one
// event per enumerated fault. Merged: events with identical (detectors,
// observables) are combined with p' = p1(1-p2) + p2(1-p1), and events that
// touch no detector and no observable are dropped.
inline DetectorErrorModel build_dem(const ExtractionCircuit& circ, double p, bool merge) {
  std::vector<Fault> faults = enumerate_faults(circ, p);
  if (circ.config().include_x_side) {
    std::vector<Fault> x_faults = enumerate_x_faults(circ, p);
    faults.insert(faults.end(), x_faults.begin(), x_faults.end());
  }

  DetectorErrorModel dem;
  dem.n_detectors = circ.n_detectors();
  dem.n_observables = circ.n_observables();

  if (!merge) {
    dem.events.reserve(faults.size());
    for (std::size_t i = 0; i < faults.size(); ++i) {
      FaultEffect effect = propagate(circ, faults[i]);
      DemEvent event;
      event.probability = faults[i].probability;
      event.detectors = std::move(effect.detectors);
      event.observables = std::move(effect.observables);
      event.provenance = {static_cast<int>(i)};
      dem.events.push_back(std::move(event));
    }
    dem.rebuild_footprint_index();
    return dem;
  }

  // Merge keyed on (detectors, observables); first-appearance order.
  std::unordered_map<std::vector<int>, int, detail::IntVecHash> key_to_event;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    FaultEffect effect = propagate(circ, faults[i]);
    if (effect.detectors.empty() && effect.observables.empty()) continue;
    std::vector<int> key = effect.detectors;
    key.push_back(-1);  // separator; detector ids are non-negative
    key.insert(key.end(), effect.observables.begin(), effect.observables.end());
    auto [it, inserted] = key_to_event.try_emplace(std::move(key), static_cast<int>(dem.events.size()));
    if (inserted) {
      DemEvent event;
      event.probability = faults[i].probability;
      event.detectors = std::move(effect.detectors);
      event.observables = std::move(effect.observables);
      event.provenance = {static_cast<int>(i)};
      dem.events.push_back(std::move(event));
    } else {
      DemEvent& event = dem.events[it->second];
      double q = faults[i].probability;
      event.probability = event.probability * (1.0 - q) + q * (1.0 - event.probability);
      event.provenance.push_back(static_cast<int>(i));
    }
  }
  dem.rebuild_footprint_index();
  return dem;
}

// ---- text format -----------------------------------------------------------
//   detectors <n>
//   observables <n>
//   error(<prob>) D<i> D<j> ... [L<k> ...]
// Probabilities are printed with 17 significant digits so doubles round-trip.

inline void write_dem(const DetectorErrorModel& dem, std::ostream& out) {
  out << "detectors " << dem.n_detectors << "\n";
  out << "observables " << dem.n_observables << "\n";
  char buf[64];
  for (const auto& event : dem.events) {
    std::snprintf(buf, sizeof buf, "%.17g", event.probability);
    out << "error(" << buf << ")";
    for (int d : event.detectors) out << " D" << d;
    for (int o : event.observables) out << " L" << o;
    out << "\n";
  }
}

inline void write_dem(const DetectorErrorModel& dem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_dem(dem, out);
}

class DemParseError : public std::runtime_error {
 public:
  DemParseError(int line, const std::string& reason)
      : std::runtime_error("dem parse error at line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline DetectorErrorModel read_dem(std::istream& in) {
  DetectorErrorModel dem;
  std::string line;
  int line_no = 0;
  bool saw_detectors = false, saw_observables = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "detectors") {
      if (!(ls >> dem.n_detectors)) throw DemParseError(line_no, "bad detector count");
      saw_detectors = true;
    } else if (head == "observables") {
      if (!(ls >> dem.n_observables)) throw DemParseError(line_no, "bad observable count");
      saw_observables = true;
    } else if (head.rfind("error(", 0) == 0) {
      if (!saw_detectors || !saw_observables)
        throw DemParseError(line_no, "error line before header");
      auto close = head.find(')');
      if (close == std::string::npos || close + 1 != head.size())
        throw DemParseError(line_no, "malformed error(...)");
      DemEvent event;
      try {
        event.probability = std::stod(head.substr(6, close - 6));
      } catch (const std::exception&) {
        throw DemParseError(line_no, "bad probability");
      }
      std::string tok;
      bool seen_observable = false;
      while (ls >> tok) {
        if (tok.size() < 2 || (tok[0] != 'D' && tok[0] != 'L'))
          throw DemParseError(line_no, "bad target " + tok);
        int idx;
        try {
          idx = std::stoi(tok.substr(1));
        } catch (const std::exception&) {
          throw DemParseError(line_no, "bad target " + tok);
        }
        if (tok[0] == 'D') {
          if (seen_observable) throw DemParseError(line_no, "detector after observable");
          if (idx < 0 || idx >= dem.n_detectors)
            throw DemParseError(line_no, "detector index out of range");
          event.detectors.push_back(idx);
        } else {
          seen_observable = true;
          if (idx < 0 || idx >= dem.n_observables)
            throw DemParseError(line_no, "observable index out of range");
          event.observables.push_back(idx);
        }
      }
      dem.events.push_back(std::move(event));
    } else {
      throw DemParseError(line_no, "unrecognized line: " + head);
    }
  }
  if (!saw_detectors || !saw_observables) throw DemParseError(line_no, "missing header");
  dem.rebuild_footprint_index();
  return dem;
}

inline DetectorErrorModel read_dem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dem file: " + path);
  return read_dem(in);
}

}  // namespace qldpc
