#pragma once

#include <cstdint>
#include <vector>

#include "photonbox/detection_chain.hpp"

namespace photonbox {

/// Sliding majority vote over the most recent probe readings.
struct DecoderParams {
  int window = 8;  ///< number of atoms taking part in the vote

  void validate() const;
  /// Votes needed for a strict majority: floor(window/2) + 1.
  int majority() const { return window / 2 + 1; }
};

/// Inferred level attached to the probe atom that produced it.
struct DecodedSample {
  double time = 0.0;
  int inferred = 0;
};

/// Change of the inferred level between consecutive probe atoms, stamped
/// with the time of the atom that completed the new majority.
struct DecodedJump {
  double time = 0.0;
  int from = 0;
  int to = 0;
};

struct DecodedTrace {
  std::vector<DecodedSample> samples;  ///< one per input atom, same order
  std::vector<DecodedJump> jumps;
};

/// Majority-vote decoding of a probe stream into a 0/1 photon record.
/// An e reading votes for one photon, g for none. While the window is still
/// filling, a strict majority of the atoms seen so far is required (ties
/// read as empty); once full, an exact tie keeps the previous inferred
/// value, which suppresses chatter on the fringe. Atom times must be
/// strictly increasing.
DecodedTrace decode(const std::vector<AtomRecord>& atoms, const DecoderParams& params);

/// Probability that a full window of readings over a constant field votes
/// the wrong way when each reading independently misreads with p_flip.
struct VoteError {
  double leading_term = 0.0;  ///< exactly `majority` wrong readings
  double exact_tail = 0.0;    ///< majority or more wrong readings
};

VoteError vote_error_probability(double p_flip, int window);

enum class FalseJumpMethod {
  conditional,  ///< newest reading wrong, departing one right, window at the edge
  monte_carlo,  ///< decode a long synthetic constant-field stream
};

/// Rate [1/s] at which the decoder falsely abandons a constant level when
/// each reading misreads with p_flip and atoms arrive at atom_rate.
/// n_atoms and seed apply to the monte_carlo method only.
double false_jump_rate(double p_flip, const DecoderParams& params, double atom_rate,
                       FalseJumpMethod method, long n_atoms = 20'000'000,
                       std::uint64_t seed = 1);

/// Time the vote needs to register a change of the field.
struct VoteLatency {
  double duration = 0.0;  ///< span of one full window of detected atoms [s]
  double delay = 0.0;     ///< mean lag of the inferred flip behind the jump [s]
};

VoteLatency vote_latency(const DecoderParams& params, const ArrivalParams& arr);

}  // namespace photonbox
