#pragma once

// Ordered-statistics post-processing. Columns of D are ranked by BP soft
// output, a greedy elimination picks rank(D) pivot columns as the
// information set, and (for order > 0) subsets of the most likely non-pivot
// columns are swept exhaustively, keeping the candidate with the largest
// probability weight sum(ln(P_i / (1-P_i)) * xi_i).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qldpc/dem.hpp"
#include "qldpc/gf2.hpp"

namespace qldpc {

struct OsdConfig {
  int order = 0;  // 0 = OSD-0; otherwise sweep 2^order non-pivot subsets
};

class OsdDecoder {
 public:
  explicit OsdDecoder(const DetectorErrorModel& dem)
      : n_events_(static_cast<int>(dem.events.size())), n_detectors_(dem.n_detectors) {
    columns_.reserve(n_events_);
    for (const auto& event : dem.events) {
      BitVec col(n_detectors_);
      for (int d : event.detectors) col.set(d, true);
      columns_.push_back(std::move(col));
    }
    BitMatrix d_matrix(n_detectors_, n_events_);
    for (int e = 0; e < n_events_; ++e)
      for (int d : dem.events[e].detectors) d_matrix.set(d, e, true);
    rank_ = gf2_rank(std::move(d_matrix));
  }

  int rank() const { return static_cast<int>(rank_); }

  std::vector<uint8_t> decode(const ChannelVector& priors, const std::vector<double>& posteriors,
                              const std::vector<uint8_t>& syndrome, const OsdConfig& config) const {
    if (static_cast<int>(posteriors.size()) != n_events_)
      throw std::invalid_argument("decode_osd: posteriors length != event count");
    if (static_cast<int>(priors.size()) != n_events_)
      throw std::invalid_argument("decode_osd: priors length != event count");
    if (static_cast<int>(syndrome.size()) != n_detectors_)
      throw std::invalid_argument("decode_osd: syndrome length != detector count");
    if (config.order < 0) throw std::invalid_argument("decode_osd: order must be >= 0");

    // Sort by decreasing error likelihood: ascending posterior LLR,
    // ties broken by ascending event index.
    std::vector<int> order(n_events_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (posteriors[a] != posteriors[b]) return posteriors[a] < posteriors[b];
      return a < b;
    });

    // Greedy elimination in sorted order; pivot row = first nonzero row.
    std::vector<BitVec> pivot_cols;       // reduced columns
    std::vector<int> pivot_rows;          // leading row of each reduced column
    std::vector<int> pivot_events;        // original event ids
    std::vector<int> non_pivot_events;    // sorted-order rejects (most likely first)
    for (int idx = 0; idx < n_events_ && static_cast<int>(pivot_cols.size()) < rank(); ++idx) {
      int e = order[idx];
      BitVec v = columns_[e];
      reduce(v, pivot_cols, pivot_rows, nullptr);
      int lead = first_set_bit(v);
      if (lead < 0) {
        non_pivot_events.push_back(e);
        continue;
      }
      pivot_cols.push_back(std::move(v));
      pivot_rows.push_back(lead);
      pivot_events.push_back(e);
    }

    // Base solution on the information set.
    BitVec sigma(n_detectors_);
    for (int d = 0; d < n_detectors_; ++d)
      if (syndrome[d]) sigma.set(d, true);
    std::vector<uint8_t> base_pivot_bits(pivot_cols.size(), 0);
    BitVec residual = sigma;
    reduce(residual, pivot_cols, pivot_rows, &base_pivot_bits);
    if (residual.any())
      throw std::runtime_error("decode_osd: syndrome outside the column space of D");

    std::vector<double> weight_of(n_events_);
    for (int e = 0; e < n_events_; ++e)
      weight_of[e] = std::log(priors[e] / (1.0 - priors[e]));

    auto candidate_weight = [&](const std::vector<uint8_t>& pivot_bits,
                                uint64_t flip_mask, const std::vector<int>& flips) {
      double w = 0.0;
      for (std::size_t i = 0; i < pivot_bits.size(); ++i)
        if (pivot_bits[i]) w += weight_of[pivot_events[i]];
      for (std::size_t i = 0; i < flips.size(); ++i)
        if ((flip_mask >> i) & 1) w += weight_of[flips[i]];
      return w;
    };

    int sweep = std::min<int>(config.order, static_cast<int>(non_pivot_events.size()));
    if (sweep > 30) throw std::invalid_argument("decode_osd: order sweep too large");
    std::vector<int> flips(non_pivot_events.begin(), non_pivot_events.begin() + sweep);

    std::vector<uint8_t> best_pivot_bits = base_pivot_bits;
    uint64_t best_mask = 0;
    double best_weight = candidate_weight(base_pivot_bits, 0, flips);

    std::vector<uint8_t> pivot_bits(pivot_cols.size());
    for (uint64_t mask = 1; mask < (uint64_t(1) << sweep); ++mask) {
      BitVec rhs = sigma;
      for (int i = 0; i < sweep; ++i)
        if ((mask >> i) & 1) rhs.xor_with(columns_[flips[i]]);
      std::fill(pivot_bits.begin(), pivot_bits.end(), 0);
      reduce(rhs, pivot_cols, pivot_rows, &pivot_bits);
      if (rhs.any()) continue;  // this flip pattern is not completable
      double w = candidate_weight(pivot_bits, mask, flips);
      if (w > best_weight) {
        best_weight = w;
        best_pivot_bits = pivot_bits;
        best_mask = mask;
      }
    }

    std::vector<uint8_t> solution(n_events_, 0);
    for (std::size_t i = 0; i < best_pivot_bits.size(); ++i)
      if (best_pivot_bits[i]) solution[pivot_events[i]] = 1;
    for (int i = 0; i < sweep; ++i)
      if ((best_mask >> i) & 1) solution[flips[i]] ^= 1;

    // D * solution == syndrome, always.
    BitVec verify(n_detectors_);
    for (int e = 0; e < n_events_; ++e)
      if (solution[e]) verify.xor_with(columns_[e]);
    if (!(verify == sigma)) throw std::runtime_error("decode_osd: solution check failed");
    return solution;
  }

 private:
  static int first_set_bit(const BitVec& v) {
    const auto& words = v.words();
    for (std::size_t w = 0; w < words.size(); ++w)
      if (words[w]) return static_cast<int>(w * 64 + __builtin_ctzll(words[w]));
    return -1;
  }

  static void reduce(BitVec& v, const std::vector<BitVec>& pivot_cols,
                     const std::vector<int>& pivot_rows, std::vector<uint8_t>* used) {
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      if (v.get(pivot_rows[i])) {
        v.xor_with(pivot_cols[i]);
        if (used) (*used)[i] ^= 1;
      }
    }
  }

  int n_events_;
  int n_detectors_;
  std::vector<BitVec> columns_;
  std::size_t rank_;
};

inline std::vector<uint8_t> decode_osd(const DetectorErrorModel& dem, const ChannelVector& priors,
                                       const std::vector<double>& posteriors,
                                       const std::vector<uint8_t>& syndrome,
                                       const OsdConfig& config) {
  return OsdDecoder(dem).decode(priors, posteriors, syndrome, config);
}

inline std::vector<uint8_t> decode_osd(const DetectorErrorModel& dem,
                                       const std::vector<double>& posteriors,
                                       const std::vector<uint8_t>& syndrome,
                                       const OsdConfig& config) {
  return OsdDecoder(dem).decode(dem.channel(), posteriors, syndrome, config);
}

}  // namespace qldpc
