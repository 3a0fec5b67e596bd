#include "photonbox/jump_decoder.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "photonbox/errors.hpp"
#include "photonbox/rng.hpp"

namespace photonbox {

void DecoderParams::validate() const {
  if (window < 1 || window > 4096)
    throw ConfigError("window: vote window must lie in 1..4096");
}

namespace {

/// Incremental majority vote. decode() and the Monte Carlo rate estimate
/// share this so they cannot drift apart.
class VoteState {
 public:
  explicit VoteState(int window) : ring_(window, 0), window_(window) {}

  int push(bool votes_one) {
    std::uint8_t v = votes_one ? 1 : 0;
    if (filled_ < window_) {
      ring_[pos_] = v;
      ++filled_;
      count_ += v;
    } else {
      count_ += v - ring_[pos_];
      ring_[pos_] = v;
    }
    pos_ = (pos_ + 1) % window_;

    if (2 * count_ > filled_) {
      held_ = 1;
    } else if (2 * count_ < filled_ || filled_ < window_) {
      held_ = 0;  // warm-up ties read as empty
    }
    // A tie over the full window keeps the previous value.
    return held_;
  }

 private:
  std::vector<std::uint8_t> ring_;
  int window_ = 0;
  int filled_ = 0;
  int count_ = 0;
  int pos_ = 0;
  int held_ = 0;
};

double binomial_coefficient(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / i;
  return c;
}

}  // namespace

DecodedTrace decode(const std::vector<AtomRecord>& atoms, const DecoderParams& params) {
  params.validate();

  DecodedTrace trace;
  trace.samples.reserve(atoms.size());

  VoteState vote(params.window);
  double t_prev = -1.0;
  int prev = 0;
  bool first = true;
  for (const auto& atom : atoms) {
    if (!first && !(atom.time > t_prev))
      throw ConfigError("decode: atom times must be strictly increasing");
    t_prev = atom.time;

    int inferred = vote.push(atom.detected == AtomState::E);
    if (!first && inferred != prev)
      trace.jumps.push_back({atom.time, prev, inferred});
    trace.samples.push_back({atom.time, inferred});
    prev = inferred;
    first = false;
  }
  return trace;
}

VoteError vote_error_probability(double p_flip, int window) {
  if (!(p_flip >= 0.0) || p_flip >= 1.0)
    throw ConfigError("vote_error_probability: p_flip must lie in [0, 1)");
  DecoderParams params{window};
  params.validate();

  VoteError err;
  double q = 1.0 - p_flip;
  for (int k = params.majority(); k <= window; ++k) {
    double term = binomial_coefficient(window, k) * std::pow(p_flip, k) *
                  std::pow(q, window - k);
    if (k == params.majority()) err.leading_term = term;
    err.exact_tail += term;
  }
  return err;
}

double false_jump_rate(double p_flip, const DecoderParams& params, double atom_rate,
                       FalseJumpMethod method, long n_atoms, std::uint64_t seed) {
  params.validate();
  if (!(p_flip >= 0.0) || p_flip >= 0.5)
    throw ConfigError("false_jump_rate: p_flip must lie in [0, 0.5)");
  if (!(atom_rate > 0.0)) throw ConfigError("false_jump_rate: atom_rate must be positive");

  if (method == FalseJumpMethod::conditional) {
    // A false departure needs the incoming reading wrong, the outgoing one
    // right, and the surviving window-1 readings one short of a majority.
    int m = params.majority();
    double q = 1.0 - p_flip;
    double p_flip_event = binomial_coefficient(params.window - 1, m - 1) *
                          std::pow(p_flip, m) * std::pow(q, params.window - m + 1);
    return atom_rate * p_flip_event;
  }

  if (n_atoms < params.window * 100L)
    throw ConfigError("false_jump_rate: stream too short for a rate estimate");
  VoteState vote(params.window);
  Rng rng(seed);
  long departures = 0;
  int prev = 0;
  for (long i = 0; i < n_atoms; ++i) {
    int inferred = vote.push(rng.bernoulli(p_flip));
    if (prev == 0 && inferred == 1) ++departures;
    prev = inferred;
  }
  return static_cast<double>(departures) * atom_rate / static_cast<double>(n_atoms);
}

VoteLatency vote_latency(const DecoderParams& params, const ArrivalParams& arr) {
  params.validate();
  arr.validate();
  VoteLatency lat;
  lat.duration = static_cast<double>(params.window - 1) * arr.slot_period / arr.occupancy;
  lat.delay = 0.5 * lat.duration;
  return lat;
}

}  // namespace photonbox
