#include <catch2/catch_amalgamated.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include <softlogic/joint.hpp>
#include <softlogic/random.hpp>

using namespace softlogic;
using Catch::Matchers::WithinAbs;

namespace {

ProbabilityVector random_vector(UniformSampler& rng, std::size_t arity) {
  std::vector<double> v(arity);
  for (auto& x : v) x = rng.next();
  return ProbabilityVector(std::move(v));
}

void check_round_trip(const ProbabilityVector& m, double target) {
  const JointDistribution j = construct_joint(m, target);
  REQUIRE_THAT(joint_conjunction_prob(j), WithinAbs(target, kIdentityTol));
  for (std::size_t i = 0; i < m.arity(); ++i) {
    REQUIRE_THAT(joint_marginal(j, i), WithinAbs(m[i], kIdentityTol));
  }
}

}  // namespace

TEST_CASE("joint distribution validation") {
  const BinaryVector p11({1, 1});
  const BinaryVector p00({0, 0});
  REQUIRE_THROWS_AS(JointDistribution(2, {{p11, 0.5}, {p00, 0.4}}),
                    DomainError);
  REQUIRE_THROWS_AS(JointDistribution(2, {{p11, 1.5}, {p00, -0.5}}),
                    DomainError);
  REQUIRE_THROWS_AS(JointDistribution(2, {{BinaryVector({1}), 1.0}}),
                    ArityError);
  REQUIRE_THROWS_AS(
      JointDistribution(17, {{BinaryVector::ones(17), 1.0}}), ArityError);

  // Duplicate patterns merge; zero-mass patterns are dropped.
  const JointDistribution j(
      2, {{p11, 0.25}, {p11, 0.25}, {p00, 0.5}, {BinaryVector({0, 1}), 0.0}});
  REQUIRE(j.entries().size() == 2);
  REQUIRE(j.mass_on(p11) == 0.5);
}

TEST_CASE("the three canonical couplings of (0.5, 0.5)") {
  const ProbabilityVector m{0.5, 0.5};

  const JointDistribution independent = construct_joint(m, 0.25);
  REQUIRE(independent.entries().size() == 4);
  REQUIRE(independent.mass_on(BinaryVector({0, 0})) == 0.25);
  REQUIRE(independent.mass_on(BinaryVector({0, 1})) == 0.25);
  REQUIRE(independent.mass_on(BinaryVector({1, 0})) == 0.25);
  REQUIRE(independent.mass_on(BinaryVector({1, 1})) == 0.25);
  REQUIRE(joint_conjunction_prob(independent) == 0.25);
  REQUIRE(joint_marginal(independent, 0) == 0.5);
  REQUIRE(joint_marginal(independent, 1) == 0.5);

  const JointDistribution equivalent = construct_joint(m, 0.5);
  REQUIRE(equivalent.entries().size() == 2);
  REQUIRE(equivalent.mass_on(BinaryVector({1, 1})) == 0.5);
  REQUIRE(equivalent.mass_on(BinaryVector({0, 0})) == 0.5);
  REQUIRE(joint_conjunction_prob(equivalent) == 0.5);

  const JointDistribution exclusive = construct_joint(m, 0.0);
  REQUIRE(exclusive.entries().size() == 2);
  REQUIRE(exclusive.mass_on(BinaryVector({1, 0})) == 0.5);
  REQUIRE(exclusive.mass_on(BinaryVector({0, 1})) == 0.5);
  REQUIRE(joint_conjunction_prob(exclusive) == 0.0);
  REQUIRE(joint_marginal(exclusive, 1) == 0.5);
}

TEST_CASE("point mass on the all-ones pattern") {
  const JointDistribution j = construct_joint({1.0, 1.0, 1.0}, 1.0);
  REQUIRE(j.entries().size() == 1);
  for (std::size_t i = 0; i < 3; ++i) REQUIRE(joint_marginal(j, i) == 1.0);
  REQUIRE(joint_conjunction_prob(j) == 1.0);
}

TEST_CASE("single-event joint") {
  const JointDistribution j = construct_joint({0.3}, 0.3);
  REQUIRE(joint_conjunction_prob(j) == 0.3);
  REQUIRE(joint_marginal(j, 0) == 0.3);
  REQUIRE_THROWS_AS(construct_joint({0.3}, 0.4), InfeasibleTargetError);
}

TEST_CASE("marginal index bounds") {
  const JointDistribution j = construct_joint({0.5, 0.5}, 0.25);
  REQUIRE_THROWS_AS(joint_marginal(j, 2), IndexError);
}

TEST_CASE("infeasible targets are rejected") {
  REQUIRE_THROWS_AS(construct_joint({0.5, 0.5}, 0.75), InfeasibleTargetError);
  REQUIRE_THROWS_AS(construct_joint({0.5, 0.5}, -0.1), InfeasibleTargetError);
  REQUIRE_THROWS_AS(construct_joint({0.9, 0.8}, 0.65), InfeasibleTargetError);
  REQUIRE_THROWS_AS(construct_joint({0.5, 0.5}, 0.5 + 1e-11),
                    InfeasibleTargetError);
  // Inside the acceptance tolerance: clamps to the nearest extreme.
  const JointDistribution j = construct_joint({0.5, 0.5}, 0.5 + 5e-13);
  REQUIRE_THAT(joint_conjunction_prob(j), WithinAbs(0.5 + 5e-13, kIdentityTol));
}

TEST_CASE("seeded round trips across the whole interval") {
  UniformSampler rng(160915);
  for (int s = 0; s < 1000; ++s) {
    const std::size_t arity = 2 + static_cast<std::size_t>(s % 5);
    const ProbabilityVector m = random_vector(rng, arity);
    const FrechetInterval bounds = frechet_bounds(m);
    const double target = bounds.lower + rng.next() * bounds.width();
    check_round_trip(m, std::min(target, bounds.upper));
    check_round_trip(m, bounds.lower);
    check_round_trip(m, bounds.upper);
  }
}

TEST_CASE("support stays linear in the arity") {
  UniformSampler rng(2718);
  for (int s = 0; s < 300; ++s) {
    const std::size_t arity = 2 + static_cast<std::size_t>(s % 5);
    const ProbabilityVector m = random_vector(rng, arity);
    const FrechetInterval bounds = frechet_bounds(m);
    const double target = bounds.lower + rng.next() * bounds.width();
    const JointDistribution j = construct_joint(m, std::min(target, bounds.upper));
    REQUIRE(j.entries().size() <= 4 * arity + 2);
  }
}

TEST_CASE("csv serialization") {
  const JointDistribution j = construct_joint({0.5, 0.5}, 0.25);
  REQUIRE(j.to_csv() ==
          "pattern,mass\n00,0.25\n01,0.25\n10,0.25\n11,0.25\n");

  const JointDistribution k = construct_joint({0.9, 0.8}, 0.8);
  const std::string csv = k.to_csv();
  REQUIRE(csv.rfind("pattern,mass\n", 0) == 0);
  REQUIRE(csv.find("11,0.8\n") != std::string::npos);

  // Same inputs, same bytes.
  REQUIRE(construct_joint({0.3, 0.7, 0.9}, 0.2).to_csv() ==
          construct_joint({0.3, 0.7, 0.9}, 0.2).to_csv());
}
