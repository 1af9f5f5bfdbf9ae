#pragma once

// Min-sum belief propagation over the Tanner graph of a merged DEM.
// Flooding schedule; convergence (D * hard_decision == syndrome) is tested
// after every full iteration and the decoder stops at first satisfaction.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qldpc/dem.hpp"

namespace qldpc {

struct BpConfig {
  int max_iterations = 100;
  double min_sum_factor = 1.0;  // 1.0 = plain min-sum
  double llr_clip = 50.0;
};

struct BpResult {
  bool converged = false;
  int iterations_used = 0;
  std::vector<uint8_t> hard_decision;  // per event
  std::vector<double> posteriors;      // per-event LLR; negative = likely error
};

class BpDecoder {
 public:
  explicit BpDecoder(const DetectorErrorModel& dem)
      : n_events_(static_cast<int>(dem.events.size())), n_detectors_(dem.n_detectors) {
    var_start_.assign(n_events_ + 1, 0);
    for (int e = 0; e < n_events_; ++e)
      var_start_[e + 1] = var_start_[e] + static_cast<int>(dem.events[e].detectors.size());
    int n_edges = var_start_[n_events_];
    edge_det_.resize(n_edges);
    for (int e = 0; e < n_events_; ++e) {
      int base = var_start_[e];
      for (std::size_t i = 0; i < dem.events[e].detectors.size(); ++i)
        edge_det_[base + static_cast<int>(i)] = dem.events[e].detectors[i];
    }
    det_start_.assign(n_detectors_ + 1, 0);
    for (int ed : edge_det_) ++det_start_[ed + 1];
    for (int d = 0; d < n_detectors_; ++d) det_start_[d + 1] += det_start_[d];
    det_edges_.resize(n_edges);
    std::vector<int> fill(det_start_.begin(), det_start_.end() - 1);
    for (int edge = 0; edge < n_edges; ++edge) det_edges_[fill[edge_det_[edge]]++] = edge;
  }

  int n_events() const { return n_events_; }
  int n_edges() const { return static_cast<int>(edge_det_.size()); }

  BpResult decode(const ChannelVector& priors, const std::vector<uint8_t>& syndrome,
                  const BpConfig& config) const {
    if (static_cast<int>(priors.size()) != n_events_)
      throw std::invalid_argument("decode_bp: priors length != event count");
    if (static_cast<int>(syndrome.size()) != n_detectors_)
      throw std::invalid_argument("decode_bp: syndrome length != detector count");
    if (config.max_iterations < 1)
      throw std::invalid_argument("decode_bp: max_iterations must be >= 1");

    int n_edges = this->n_edges();
    std::vector<double> prior_llr(n_events_);
    for (int e = 0; e < n_events_; ++e) prior_llr[e] = std::log((1.0 - priors[e]) / priors[e]);

    std::vector<double> v2c(n_edges), c2v(n_edges, 0.0);
    for (int e = 0; e < n_events_; ++e)
      for (int edge = var_start_[e]; edge < var_start_[e + 1]; ++edge) v2c[edge] = prior_llr[e];

    BpResult result;
    result.hard_decision.assign(n_events_, 0);
    result.posteriors = prior_llr;
    std::vector<uint8_t> check_parity(n_detectors_);

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
      // check-to-variable (min-sum)
      for (int d = 0; d < n_detectors_; ++d) {
        int begin = det_start_[d], end = det_start_[d + 1];
        if (begin == end) continue;
        double min1 = std::numeric_limits<double>::infinity();
        double min2 = std::numeric_limits<double>::infinity();
        int argmin = -1;
        int sign_product = 1;
        for (int i = begin; i < end; ++i) {
          double v = v2c[det_edges_[i]];
          if (v < 0.0) sign_product = -sign_product;
          double mag = std::fabs(v);
          if (mag < min1) {
            min2 = min1;
            min1 = mag;
            argmin = i;
          } else if (mag < min2) {
            min2 = mag;
          }
        }
        double syndrome_sign = syndrome[d] ? -1.0 : 1.0;
        for (int i = begin; i < end; ++i) {
          int edge = det_edges_[i];
          double mag = (i == argmin) ? min2 : min1;
          if (mag > config.llr_clip) mag = config.llr_clip;
          double sign = (v2c[edge] < 0.0) ? -sign_product : sign_product;
          c2v[edge] = syndrome_sign * sign * config.min_sum_factor * mag;
        }
      }
      // variable-to-check, posterior, hard decision
      for (int e = 0; e < n_events_; ++e) {
        double total = prior_llr[e];
        for (int edge = var_start_[e]; edge < var_start_[e + 1]; ++edge) total += c2v[edge];
        result.posteriors[e] = total;
        result.hard_decision[e] = total < 0.0 ? 1 : 0;
        for (int edge = var_start_[e]; edge < var_start_[e + 1]; ++edge) {
          double msg = total - c2v[edge];
          if (msg > config.llr_clip) msg = config.llr_clip;
          if (msg < -config.llr_clip) msg = -config.llr_clip;
          v2c[edge] = msg;
        }
      }
      result.iterations_used = iter;
      // convergence test: D * hard_decision == syndrome
      std::fill(check_parity.begin(), check_parity.end(), 0);
      for (int e = 0; e < n_events_; ++e) {
        if (!result.hard_decision[e]) continue;
        for (int edge = var_start_[e]; edge < var_start_[e + 1]; ++edge)
          check_parity[edge_det_[edge]] ^= 1;
      }
      if (check_parity == syndrome) {
        result.converged = true;
        break;
      }
    }
    assert(!result.converged || satisfies(result.hard_decision, syndrome));
    return result;
  }

  bool satisfies(const std::vector<uint8_t>& hard_decision,
                 const std::vector<uint8_t>& syndrome) const {
    std::vector<uint8_t> parity(n_detectors_, 0);
    for (int e = 0; e < n_events_; ++e)
      if (hard_decision[e])
        for (int edge = var_start_[e]; edge < var_start_[e + 1]; ++edge)
          parity[edge_det_[edge]] ^= 1;
    return parity == syndrome;
  }

 private:
  int n_events_;
  int n_detectors_;
  std::vector<int> var_start_;
  std::vector<int> edge_det_;
  std::vector<int> det_start_;
  std::vector<int> det_edges_;
};

inline BpResult decode_bp(const DetectorErrorModel& dem, const ChannelVector& priors,
                          const std::vector<uint8_t>& syndrome, const BpConfig& config) {
  return BpDecoder(dem).decode(priors, syndrome, config);
}

}  // namespace qldpc
