#include "oracle.hpp"
#include "properties.hpp"

#include <entrolen/shift_modules.hpp>

#include <gtest/gtest.h>

using namespace entrolen;

namespace {

const GroupSpec kZ = GroupSpec::free_abelian(1);

SubshiftPresentation<PrimeField> principal(const PrimeField& f, const GroupSpec& G, const std::string& x) {
  return SubshiftPresentation<PrimeField>::principal(CocycleData<PrimeField>::trivial(f, G), parse_crossed(f, G, x));
}

}  // namespace

TEST(ShiftModules, BernoulliTrajectoryIsFull) {
  const PrimeField f(2);
  for (std::size_t r : {1u, 2u, 3u}) {
    const auto p = SubshiftPresentation<PrimeField>::bernoulli(CocycleData<PrimeField>::trivial(f, kZ), r);
    for (std::size_t n = 0; n <= 10; ++n) {
      const auto Fn = FolnerScheme::standard(kZ).set(n);
      EXPECT_EQ(trajectory_dim(p, Fn), r * Fn.size());
    }
  }
}

TEST(ShiftModules, PrincipalIdealOfTMinusOne) {
  const auto p = principal(PrimeField(3), kZ, "1*(1) + 2*(0)");
  for (std::size_t n = 1; n <= 10; ++n) EXPECT_EQ(trajectory_dim(p, FolnerScheme::standard(kZ).set(n)), 2 * n + 1);
}

TEST(ShiftModules, TrajectoryResultCarriesSubspace) {
  const auto p = principal(PrimeField(3), GroupSpec::z_cross_z2(), "1*(0,0) + 1*(0,1)");
  const auto Fn = FolnerScheme::standard(GroupSpec::z_cross_z2()).set(2);
  const auto t = trajectory(p, Fn);
  EXPECT_EQ(t.dim, 5u);
  EXPECT_EQ(t.subspace.dim(), 5u);
  EXPECT_EQ(t.window, Fn);
}

TEST(ShiftModules, TrajectoryMatchesDenseOracleOnHeisenberg) {
  const PrimeField f(3);
  const GroupSpec H = GroupSpec::heisenberg();
  const auto p = principal(f, H, "1*(0,0,0) + 1*(1,0,0) + 2*(0,1,0)");
  const auto Fn = FolnerScheme::standard(H).set(2);
  std::vector<oracle::Point> window;
  for (const auto& g : Fn) window.push_back(props::coords(g));
  const auto dim = oracle::trajectory_dim(window, {props::to_map(f, p.generators()[0])}, oracle::heisenberg_mul, 3);
  EXPECT_EQ(trajectory_dim(p, Fn), dim);
}

TEST(ShiftModules, QuotientOfTMinusOne) {
  const PrimeField f(3);
  const auto whole = SubshiftPresentation<PrimeField>::bernoulli(CocycleData<PrimeField>::trivial(f, kZ), 1);
  const auto ideal = principal(f, kZ, "1*(1) + 2*(0)");
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto q = trajectory_dim_quotient(whole, ideal, FolnerScheme::standard(kZ).set(n), StabilizationConfig{});
    EXPECT_TRUE(q.stabilized);
    EXPECT_EQ(q.value, 1u);
  }
}

TEST(ShiftModules, SesIdentityAndZeroSubmodule) {
  const PrimeField f(3);
  const auto M = SubshiftPresentation<PrimeField>::bernoulli(CocycleData<PrimeField>::trivial(f, kZ), 2);
  const auto Fn = FolnerScheme::standard(kZ).set(4);
  const auto zero = ses_dims(M, M.zero_submodule(), Fn, StabilizationConfig{});
  EXPECT_EQ(zero.dim_T_cap_N, 0u);
  EXPECT_EQ(zero.dim_image, 18u);
  const auto self = ses_dims(M, M, Fn, StabilizationConfig{});
  EXPECT_EQ(self.dim_T_cap_N, 18u);
  EXPECT_EQ(self.dim_image, 0u);
  EXPECT_TRUE(self.exact());
}

TEST(ShiftModules, StabilizationBudgetIsReported) {
  const PrimeField f(3);
  const auto whole = SubshiftPresentation<PrimeField>::bernoulli(CocycleData<PrimeField>::trivial(f, kZ), 1);
  const auto ideal = principal(f, kZ, "1*(1) + 2*(0)");
  const auto q = trajectory_dim_quotient(whole, ideal, FolnerScheme::standard(kZ).set(3), StabilizationConfig{5, 2});
  EXPECT_FALSE(q.stabilized);
  EXPECT_GE(q.value, 1u);
  EXPECT_THROW(StabilizationConfig({0, 4}).validate(), std::invalid_argument);
}

TEST(ShiftModules, DifferentAmbientsAreRejected) {
  const auto a = principal(PrimeField(3), kZ, "1*(0)");
  const auto b = principal(PrimeField(5), kZ, "1*(0)");
  const auto c = principal(PrimeField(3), GroupSpec::free_abelian(2), "1*(0,0)");
  const auto Fn = FolnerScheme::standard(kZ).set(1);
  EXPECT_THROW(ses_dims(a, b, Fn, StabilizationConfig{}), FieldMismatch);
  EXPECT_THROW(ses_dims(a, c, Fn, StabilizationConfig{}), GroupMismatch);
}

TEST(ShiftModules, ConstructorValidation) {
  const PrimeField f(2);
  const auto c = CocycleData<PrimeField>::trivial(f, kZ);
  EXPECT_THROW(SubshiftPresentation<PrimeField>(c, 0, {}), std::invalid_argument);
  const auto v = embed(f, parse_crossed(f, kZ, "1*(0)"), 2);
  EXPECT_THROW(SubshiftPresentation<PrimeField>(c, 1, {v}), std::invalid_argument);
  EXPECT_NO_THROW(SubshiftPresentation<PrimeField>(c, 2, {v}));
}

TEST(ShiftModules, MinimalFileParses) {
  const auto any = parse_presentation("group=Z\nfield=gf2\nrank=1\n(0)|1|1\n");
  const auto& p = std::get<SubshiftPresentation<PrimeField>>(any);
  EXPECT_EQ(p.rank(), 1u);
  EXPECT_EQ(p.generators().size(), 1u);
}

TEST(ShiftModules, RoundTripIsCanonical) {
  const std::string text = "# comment\ngroup=ZxZ2\nfield=gf3\nrank=2\n(0,1)|1|2;(0,0)|2|1;(0,0)|2|1\n(1,0)|1|1;(1,0)|2|1;(0,0)|1|1\n";
  const auto any = parse_presentation(text);
  const auto& p = std::get<SubshiftPresentation<PrimeField>>(any);
  const std::string canonical = serialize_presentation(p);
  EXPECT_EQ(canonical, "group=ZxZ2\nfield=gf3\nrank=2\n(0,0)|1|1;(0,1)|1|2\n(0,0)|1|1\n");
  EXPECT_EQ(serialize_presentation(std::get<SubshiftPresentation<PrimeField>>(parse_presentation(canonical))), canonical);
}

TEST(ShiftModules, TwistedPresentationRoundTrip) {
  const std::string text = "group=Z^2\nfield=gf9\nsigma=frobenius\nrho=bilinear:2+0*w\nrank=1\n(0,0)|w|1;(1,0)|1|1\n";
  const auto any = parse_presentation(text);
  const auto& p = std::get<SubshiftPresentation<QuadraticField>>(any);
  EXPECT_EQ(p.cocycle().sigma_name(), "frobenius");
  EXPECT_EQ(serialize_presentation(p), "group=Z^2\nfield=gf9\nsigma=frobenius\nrho=bilinear:2+0*w\nrank=1\n(0,0)|0+1*w|1;(1,0)|1+0*w|1\n");
}

TEST(ShiftModules, ParseErrorsCarryLocation) {
  auto where = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_presentation(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  EXPECT_EQ(where("group=Z\nfield=gf3\nrank=1\n(0)|1|1;(1)|0|1\n"), std::make_pair(std::size_t{4}, std::size_t{13}));
  EXPECT_EQ(where("group=Z\nfield=gf3\nrank=1\n(0)|1|2\n"), std::make_pair(std::size_t{4}, std::size_t{7}));
  EXPECT_EQ(where("group=Z\nfield=gf3\ncolour=red\nrank=1\n"), std::make_pair(std::size_t{3}, std::size_t{1}));
  EXPECT_EQ(where("group=Z\nfield=gf3\nrank=1\n(0)|1|1;(0)|2|1\n").first, 4u);
  EXPECT_EQ(where("group=Z\nfield=gf6\nrank=1\n").first, 2u);
  EXPECT_EQ(where("group=Z\nfield=gf3\nsigma=frobenius\nrank=1\n").first, 3u);
  EXPECT_EQ(where("group=F2\nfield=gf3\nrank=1\n").first, 1u);
  EXPECT_EQ(where("group=Z\nfield=gf3\nrank=1\n(0,0)|1|1\n"), std::make_pair(std::size_t{4}, std::size_t{1}));
}

TEST(ShiftModules, ParsesDataFile) {
  const auto any = parse_presentation_file(std::string(ENTROLEN_TEST_DATA) + "/rank2.pres");
  const auto& p = std::get<SubshiftPresentation<PrimeField>>(any);
  EXPECT_EQ(p.rank(), 2u);
  EXPECT_EQ(p.generators().size(), 2u);
  EXPECT_THROW(parse_presentation_file("/nonexistent/file.pres"), std::runtime_error);
}

TEST(ShiftModules, GeneratorListSyntax) {
  const PrimeField f(3);
  const auto gens = parse_generator_list(f, kZ, 2, "1*(0)|1 & 2*(1)|2; 1*(3)|2");
  ASSERT_EQ(gens.size(), 2u);
  EXPECT_EQ(gens[0].entries().size(), 2u);
  EXPECT_THROW(parse_generator_list(f, kZ, 2, "1*(0)"), std::invalid_argument);
  EXPECT_THROW(parse_generator_list(f, kZ, 1, "1*(0) + 2*(0)"), std::invalid_argument);
  EXPECT_THROW(parse_generator_list(f, kZ, 1, "1*(0)|3"), std::invalid_argument);
}
