#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "qmaxsat/analysis.hpp"
#include "qmaxsat/oracle.hpp"
#include "qmaxsat/structured_state.hpp"
#include "qmaxsat/validation.hpp"

using namespace qmaxsat;

TEST_CASE("preparation is the uniform superposition") {
  const StructuredState s(fixtures::two_clause(), 0);
  const double amp = 1.0 / std::sqrt(8.0);
  REQUIRE(s.aux_zero_amps().size() == 8);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(std::abs(s.aux_zero_amps()[k] - Complex(amp, 0.0)) < 1e-15);
    CHECK(std::abs(s.aux_one_amps()[k]) == 0.0);
  }
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("cached densities agree with the brute-force profile entry by entry") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Formula f = generate_random(4, 9, seed);
    const DensityProfile profile = density_profile(f);
    for (int mu : {0, 2}) {
      const StructuredState s(f, mu);
      REQUIRE(s.shifted_densities().size() == profile.densities.size());
      for (std::size_t k = 0; k < profile.densities.size(); ++k) {
        CHECK(s.shifted_densities()[k] == profile.densities[k] + mu);
      }
    }
  }
}

TEST_CASE("dummy qubits shift every density and widen the root") {
  const StructuredState s(fixtures::two_clause(), 1);
  CHECK(s.root_order() == 3);
  int threes = 0, twos = 0;
  for (std::uint32_t d : s.shifted_densities()) {
    threes += d == 3;
    twos += d == 2;
  }
  CHECK(threes == 6);
  CHECK(twos == 2);
}

TEST_CASE("full negation lands the whole pair on aux one") {
  // Single clause: the 7 satisfying assignments carry d = root order = 1.
  const Formula f(3, {Clause{Literal{0, false}, Literal{1, false},
                             Literal{2, false}}});
  StructuredState s(f, 0);
  s.apply_partial_negation();
  const double unit = 1.0 / 8.0;
  for (std::size_t k = 0; k < 8; ++k) {
    if (s.shifted_densities()[k] == 1) {
      CHECK(std::norm(s.aux_zero_amps()[k]) < 1e-24);
      CHECK(std::abs(std::norm(s.aux_one_amps()[k]) - unit) < 1e-15);
    } else {
      // d = 0 leaves the pair untouched
      CHECK(std::abs(std::norm(s.aux_zero_amps()[k]) - unit) < 1e-15);
      CHECK(std::norm(s.aux_one_amps()[k]) == 0.0);
    }
  }
}

TEST_CASE("half negation splits the density-1 pairs evenly") {
  StructuredState s(fixtures::two_clause(), 0);
  s.apply_partial_negation();
  for (std::size_t k = 0; k < 8; ++k) {
    if (s.shifted_densities()[k] == 1) {
      CHECK(std::abs(std::norm(s.aux_one_amps()[k]) * 8.0 - 0.5) < 1e-12);
    }
  }
}

TEST_CASE("aux probabilities after one pass") {
  StructuredState s(fixtures::two_clause(), 0);
  s.apply_partial_negation();
  CHECK(std::abs(s.prob_aux_one() - 0.875) < 1e-12);

  StructuredState tuned(fixtures::two_clause(), 1);
  tuned.apply_partial_negation();
  CHECK(std::abs(tuned.prob_aux_one() - 0.9375) < 1e-12);

  StructuredState complete(generate_complete(3), 0);
  complete.apply_partial_negation();
  const double expected = std::pow(std::sin(7.0 * std::numbers::pi / 16.0), 2);
  CHECK(std::abs(complete.prob_aux_one() - expected) < 1e-12);
}

TEST_CASE("measurement collapses and renormalizes") {
  StructuredState s(fixtures::two_clause(), 0);
  s.apply_partial_negation();
  const auto measured = s.measure_aux_forced(1);
  CHECK(measured.outcome == 1);
  CHECK(std::abs(measured.prob_one - 0.875) < 1e-12);
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
  CHECK(s.prob_aux_one() == 0.0);  // reset moved the survivors to the a-slot

  StructuredState z(fixtures::two_clause(), 0);
  z.apply_partial_negation();
  const auto zero = z.measure_aux_forced(0);
  CHECK(zero.outcome == 0);
  CHECK(std::abs(z.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("sampled collapse equals forced collapse of the same outcome") {
  Rng rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    StructuredState sampled(fixtures::sat_n3m4(), 1);
    sampled.apply_partial_negation();
    StructuredState forced = sampled;
    const int outcome = sampled.measure_aux(rng).outcome;
    forced.measure_aux_forced(outcome);
    for (std::size_t k = 0; k < sampled.aux_zero_amps().size(); ++k) {
      CHECK(sampled.aux_zero_amps()[k] == forced.aux_zero_amps()[k]);
      CHECK(sampled.aux_one_amps()[k] == forced.aux_one_amps()[k]);
    }
  }
}

TEST_CASE("forcing an impossible outcome raises") {
  StructuredState s(fixtures::two_clause(), 0);
  CHECK_THROWS_AS(s.measure_aux_forced(1), std::runtime_error);  // b is empty
}

TEST_CASE("sampled measurement follows the aux distribution") {
  Rng rng(404);
  int ones = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    StructuredState s(fixtures::two_clause(), 0);
    s.apply_partial_negation();
    ones += s.measure_aux(rng).outcome;
  }
  const double freq = static_cast<double>(ones) / trials;
  const double se = std::sqrt(0.875 * 0.125 / trials);
  CHECK(std::abs(freq - 0.875) < 3.0 * se);
}

TEST_CASE("forced-success statistics match the closed forms") {
  const DensityProfile profile = density_profile(fixtures::two_clause());
  StructuredState s(fixtures::two_clause(), 0);
  for (int r = 1; r <= 5; ++r) {
    s.apply_partial_negation();
    const auto measured = s.measure_aux_forced(1);
    CHECK(std::abs(measured.prob_one - pr_aux_one_at(profile, 0, r)) < 1e-9);
    const double joint = measured.prob_one * s.max_density_mass();
    CHECK(std::abs(joint - pr_max_density_at(profile, 0, r)) < 1e-9);
  }
  // After the fifth success the maximal mass is 6/(6 + 2/32).
  CHECK(std::abs(s.max_density_mass() - 6.0 / 6.0625) < 1e-9);
}

TEST_CASE("amplitude ratios follow the sine power law") {
  const Formula f = generate_random(5, 12, 77);
  for (int mu : {0, 1}) {
    const int r = 6;
    const ForcedRun run = forced_successes(f, mu, r);
    const auto& amps = run.state.aux_zero_amps();
    const auto& dens = run.state.shifted_densities();
    const PartialNegation negation(run.state.root_order());
    for (std::size_t k = 0; k < amps.size(); ++k) {
      for (std::size_t j = 0; j < amps.size(); ++j) {
        const double sk = std::sin(negation.angle(dens[k]));
        const double sj = std::sin(negation.angle(dens[j]));
        if (sj <= 0.0 || sk > sj || std::norm(amps[j]) == 0.0) continue;
        const double amp_ratio = std::norm(amps[k]) / std::norm(amps[j]);
        const double sine_ratio = std::pow(sk / sj, 2 * r);
        CHECK(std::abs(amp_ratio - sine_ratio) < 1e-8);
      }
    }
  }
}

TEST_CASE("an amplified satisfiable instance samples an optimal assignment") {
  const ForcedRun run = forced_successes(fixtures::sat_n3m4(), 0, 60);
  Rng rng(7);
  const auto sample = run.state.sample_solution(rng);
  CHECK(sample.truth_vector.to_string() == "1111");
  CHECK(std::set<Assignment>{3, 4, 5, 6}.contains(sample.assignment));
}

TEST_CASE("norm stays unit through long runs") {
  StructuredState s(generate_random(4, 10, 5), 2);
  for (int i = 0; i < 200; ++i) {
    s.apply_partial_negation();
    s.measure_aux_forced(1);
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
  }
}

TEST_CASE("amplitude dump has the documented columns") {
  StructuredState s(fixtures::two_clause(), 0);
  const std::string csv = s.amplitude_csv();
  CHECK(csv.starts_with("k,density,re_a,im_a,re_b,im_b\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("negative mu and the enumeration cap are rejected") {
  CHECK_THROWS_AS(StructuredState(fixtures::two_clause(), -1),
                  std::invalid_argument);
  const Clause c{Literal{0, false}, Literal{1, false}, Literal{2, false}};
  CHECK_THROWS_AS(StructuredState(Formula(25, {c}), 0), CapExceeded);
}
