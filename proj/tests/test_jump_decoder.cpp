#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "photonbox/errors.hpp"
#include "photonbox/jump_decoder.hpp"
#include "photonbox/rng.hpp"

using namespace photonbox;

namespace {

/// Builds a probe stream from a compact "GGEE..." description, one atom
/// per millisecond.
std::vector<AtomRecord> stream_of(const std::string& readings) {
  std::vector<AtomRecord> atoms;
  for (std::size_t i = 0; i < readings.size(); ++i) {
    AtomState s = readings[i] == 'E' ? AtomState::E : AtomState::G;
    atoms.push_back({1.0e-3 * static_cast<double>(i + 1), 0, s});
  }
  return atoms;
}

std::vector<int> inferred_of(const DecodedTrace& trace) {
  std::vector<int> out;
  for (const auto& s : trace.samples) out.push_back(s.inferred);
  return out;
}

}  // namespace

TEST_CASE("a clean photon arrival is recognised by the fifth contrary reading") {
  DecoderParams params{8};
  DecodedTrace trace = decode(stream_of("GGGGGGGGEEEEEEEE"), params);

  // Warm-up and the full g window keep the estimate at zero; the e readings
  // then need a strict majority of 5, reached on atom 13. Atom 12 makes an
  // exact 4-4 tie which holds the previous value.
  std::vector<int> expected{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
  CHECK(inferred_of(trace) == expected);

  REQUIRE(trace.jumps.size() == 1);
  CHECK(trace.jumps[0].time == doctest::Approx(13.0e-3).epsilon(1e-12));
  CHECK(trace.jumps[0].from == 0);
  CHECK(trace.jumps[0].to == 1);
}

TEST_CASE("warm-up majorities resolve ties towards the empty cavity") {
  DecoderParams params{8};

  CHECK(inferred_of(decode(stream_of("EE"), params)) == std::vector<int>{1, 1});
  CHECK(inferred_of(decode(stream_of("EG"), params)) == std::vector<int>{1, 0});
  CHECK(inferred_of(decode(stream_of("GEE"), params)) == std::vector<int>{0, 0, 1});
  CHECK(inferred_of(decode(stream_of("GE"), params)) == std::vector<int>{0, 0});
}

TEST_CASE("a full-window tie holds the previous estimate in both directions") {
  DecoderParams params{8};

  // Four e then four g: the vote rides at one until the 4-4 tie on atom 8,
  // which holds one; the ninth reading breaks the tie downwards.
  DecodedTrace up = decode(stream_of("EEEEGGGGG"), params);
  CHECK(inferred_of(up) == std::vector<int>{1, 1, 1, 1, 1, 1, 1, 1, 0});

  // Mirrored stream: tie on atom 8 holds zero, broken upwards by atom 9
  // only once the majority of 5 e readings exists (atom 13 overall).
  DecodedTrace down = decode(stream_of("GGGGEEEEE"), params);
  CHECK(inferred_of(down) == std::vector<int>{0, 0, 0, 0, 0, 0, 0, 0, 1});
}

TEST_CASE("decoding requires increasing times and tolerates empty input") {
  DecoderParams params{8};
  CHECK(decode({}, params).samples.empty());

  std::vector<AtomRecord> bad = stream_of("GG");
  bad[1].time = bad[0].time;
  CHECK_THROWS_AS(decode(bad, params), ConfigError);

  CHECK_THROWS_AS((DecoderParams{0}.validate()), ConfigError);
  CHECK_THROWS_AS(decode(stream_of("G"), DecoderParams{0}), ConfigError);
}

TEST_CASE("decoder state is a pure function of the recent window") {
  // After the first full window without an exact tie, a decoder started
  // mid-stream agrees with one that saw the whole history.
  DecoderParams params{8};
  Rng rng(5150);
  std::vector<AtomRecord> atoms;
  for (int i = 0; i < 400; ++i) {
    AtomState s = rng.bernoulli(0.3) ? AtomState::E : AtomState::G;
    atoms.push_back({1.0e-3 * (i + 1), 0, s});
  }
  DecodedTrace full = decode(atoms, params);

  for (std::size_t cut : {31u, 57u, 200u}) {
    std::vector<AtomRecord> suffix(atoms.begin() + cut, atoms.end());
    DecodedTrace partial = decode(suffix, params);

    // Find the first full window in the suffix that is not a 4-4 tie.
    std::size_t start = 0;
    for (std::size_t j = params.window - 1; j < suffix.size(); ++j) {
      int count = 0;
      for (int k = 0; k < params.window; ++k)
        count += suffix[j - k].detected == AtomState::E ? 1 : 0;
      if (2 * count != params.window) {
        start = j;
        break;
      }
    }
    REQUIRE(start > 0);
    for (std::size_t j = start; j < suffix.size(); ++j)
      CHECK(partial.samples[j].inferred == full.samples[cut + j].inferred);
  }
}

TEST_CASE("wrong-majority probabilities match direct binomial summation") {
  // Frozen: C(8,5) p^5 q^3 and the full tail for both error rates.
  VoteError e1 = vote_error_probability(0.13, 8);
  CHECK(e1.leading_term == doctest::Approx(1.369187e-3).epsilon(1e-4));
  CHECK(e1.exact_tail == doctest::Approx(1.4759414e-3).epsilon(1e-4));
  CHECK(e1.leading_term > 1.35e-3);
  CHECK(e1.leading_term < 1.45e-3);

  VoteError e0 = vote_error_probability(0.09, 8);
  CHECK(e0.leading_term == doctest::Approx(2.49192e-4).epsilon(1e-4));
  CHECK(e0.exact_tail == doctest::Approx(2.61867e-4).epsilon(1e-3));
  CHECK(e0.leading_term > 2.4e-4);
  CHECK(e0.leading_term < 2.6e-4);

  // Independent re-summation with explicit factorials.
  auto direct = [](double p, int w, int m) {
    auto fact = [](int n) {
      double f = 1.0;
      for (int i = 2; i <= n; ++i) f *= i;
      return f;
    };
    double sum = 0.0;
    for (int k = m; k <= w; ++k)
      sum += fact(w) / (fact(k) * fact(w - k)) * std::pow(p, k) * std::pow(1.0 - p, w - k);
    return sum;
  };
  CHECK(e1.exact_tail == doctest::Approx(direct(0.13, 8, 5)).epsilon(1e-12));
  CHECK(e0.exact_tail == doctest::Approx(direct(0.09, 8, 5)).epsilon(1e-12));

  // Perfect readings never produce a wrong majority.
  VoteError clean = vote_error_probability(0.0, 8);
  CHECK(clean.leading_term == 0.0);
  CHECK(clean.exact_tail == 0.0);

  CHECK(DecoderParams{8}.majority() == 5);
  CHECK(DecoderParams{7}.majority() == 4);
}

TEST_CASE("conditional false-jump rates for the default working point") {
  DecoderParams params{8};
  double r1 = false_jump_rate(0.13, params, 900.0, FalseJumpMethod::conditional);
  double r0 = false_jump_rate(0.09, params, 900.0, FalseJumpMethod::conditional);

  // Frozen: 900 * C(7,4) p^5 q^4.
  CHECK(r1 == doctest::Approx(0.670048).epsilon(1e-4));
  CHECK(r0 == doctest::Approx(0.1275523).epsilon(1e-4));
  CHECK(r1 == doctest::Approx(900.0 * 35.0 * std::pow(0.13, 5) * std::pow(0.87, 4)).epsilon(1e-12));
}

TEST_CASE("simulated false-jump rate stays near the conditional estimate") {
  DecoderParams params{8};
  for (double p : {0.13, 0.09}) {
    double cond = false_jump_rate(p, params, 900.0, FalseJumpMethod::conditional);
    double mc = false_jump_rate(p, params, 900.0, FalseJumpMethod::monte_carlo, 5'000'000, 17);
    CHECK(std::abs(mc - cond) / cond < 0.30);
    CHECK(mc > 0.0);
  }
  CHECK_THROWS_AS(
      false_jump_rate(0.13, params, 900.0, FalseJumpMethod::monte_carlo, 100, 1),
      ConfigError);
}

TEST_CASE("vote latency spans one window of detected atoms") {
  VoteLatency lat = vote_latency(DecoderParams{8}, ArrivalParams{70.0e-6, 0.063});
  CHECK(lat.duration == doctest::Approx(7.0 * 70.0e-6 / 0.063).epsilon(1e-12));
  CHECK(std::abs(lat.duration - 7.8e-3) < 1.0e-4);
  CHECK(lat.delay == doctest::Approx(0.5 * lat.duration).epsilon(1e-12));
  CHECK(std::abs(lat.delay - 3.9e-3) < 5.0e-5);

  // Twice the occupancy halves the latency.
  VoteLatency dense = vote_latency(DecoderParams{8}, ArrivalParams{70.0e-6, 0.126});
  CHECK(dense.duration == doctest::Approx(0.5 * lat.duration).epsilon(1e-12));
}

TEST_CASE("decoded pipeline output keeps samples and jumps consistent") {
  BathParams bath{0.129, 0.063, 5};
  PhaseTable table = build_phase_table(ProbeGeometry{}, 5);
  MonitoredRun run = sample_monitored_trajectory(1, 2.5, bath, ArrivalParams{},
                                                 DetectorParams{}, table, 4242);
  DecodedTrace trace = decode(run.atoms, DecoderParams{8});

  REQUIRE(trace.samples.size() == run.atoms.size());
  int prev = trace.samples.front().inferred;
  std::size_t jump_idx = 0;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    int cur = trace.samples[i].inferred;
    CHECK((cur == 0 || cur == 1));
    if (cur != prev) {
      REQUIRE(jump_idx < trace.jumps.size());
      CHECK(trace.jumps[jump_idx].time == trace.samples[i].time);
      CHECK(trace.jumps[jump_idx].from == prev);
      CHECK(trace.jumps[jump_idx].to == cur);
      ++jump_idx;
    }
    prev = cur;
  }
  CHECK(jump_idx == trace.jumps.size());
}
