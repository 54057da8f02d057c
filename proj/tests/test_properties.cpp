#include "properties.hpp"

#include <gtest/gtest.h>

namespace {

void expect_clean(const props::SuiteResult& r) {
  EXPECT_GE(r.cases, 200u);
  EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.first_failure;
}

}  // namespace

TEST(Properties, GroupAxioms) { expect_clean(props::group_axioms(100, 400)); }
TEST(Properties, SubspaceModularIdentity) { expect_clean(props::subspace_modular(101, 300)); }
TEST(Properties, TrajectoryMonotoneSubadditiveEquivariant) { expect_clean(props::trajectory_properties(102, 300)); }
TEST(Properties, LambdaComposition) { expect_clean(props::lambda_composition(103, 300)); }
TEST(Properties, EstimateMonotonicity) { expect_clean(props::estimate_monotonicity(104, 300)); }
