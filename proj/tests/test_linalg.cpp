#include "oracle.hpp"
#include "properties.hpp"

#include <entrolen/linalg.hpp>

#include <gtest/gtest.h>

using namespace entrolen;

namespace {

const GroupSpec kZ = GroupSpec::free_abelian(1);

SparseVector<PrimeField> vec(const PrimeField& f, std::vector<std::pair<std::int64_t, std::uint32_t>> terms) {
  std::vector<SparseVector<PrimeField>::Entry> e;
  for (const auto& [g, a] : terms) e.emplace_back(ColumnLabel{kZ.element({g}), 1}, a);
  return SparseVector<PrimeField>::from_entries(f, std::move(e));
}

}  // namespace

TEST(Linalg, FromEntriesSumsDuplicatesAndDropsZeros) {
  const PrimeField f(3);
  const auto v = vec(f, {{0, 1}, {0, 2}, {1, 2}, {1, 2}});
  ASSERT_EQ(v.entries().size(), 1u);
  EXPECT_EQ(v.at(f, ColumnLabel{kZ.element({1}), 1}), 1u);
  EXPECT_TRUE(vec(f, {{4, 1}, {4, 2}}).is_zero());
}

TEST(Linalg, SpanOfDependentVectors) {
  const PrimeField f(5);
  const auto a = vec(f, {{0, 1}, {1, 2}});
  const auto b = vec(f, {{1, 1}, {2, 3}});
  const auto c = add(f, scale(f, 2u, a), scale(f, 4u, b));
  const auto U = span(f, std::vector{a, b, c});
  EXPECT_EQ(U.dim(), 2u);
  EXPECT_TRUE(membership(c, U));
  EXPECT_FALSE(membership(vec(f, {{2, 1}}), U));
  EXPECT_FALSE(membership(vec(f, {{7, 1}}), U));
}

TEST(Linalg, ReducedBasisIsCanonical) {
  const PrimeField f(7);
  const auto a = vec(f, {{0, 3}, {1, 2}}), b = vec(f, {{0, 1}, {2, 5}}), c = vec(f, {{1, 1}, {2, 1}});
  const auto U1 = span(f, std::vector{a, b, c});
  const auto U2 = span(f, std::vector{c, add(f, a, b), b});
  EXPECT_EQ(U1.basis(), U2.basis());
}

TEST(Linalg, RankAgreesWithDenseElimination) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const PrimeField f(k % 2 ? 2 : 5);
    const auto vs = props::random_vectors(f, GroupSpec::free_abelian(2), rng, 1 + props::pick(rng, 0, 8));
    std::vector<oracle::SparseMap> maps;
    for (const auto& v : vs) maps.push_back(props::to_map(f, v));
    EXPECT_EQ(span_dim(f, vs), oracle::rank_of_maps(maps, f.characteristic()));
    EXPECT_EQ(span(f, vs).dim(), span_dim(f, vs));
  }
}

TEST(Linalg, IntersectionElementsLieInBoth) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const PrimeField f(3);
    const auto U = span(f, props::random_vectors(f, kZ, rng, 1 + props::pick(rng, 0, 4)));
    const auto W = span(f, props::random_vectors(f, kZ, rng, 1 + props::pick(rng, 0, 4)));
    const auto I = intersect(U, W);
    for (const auto& v : I.basis()) {
      EXPECT_TRUE(membership(v, U));
      EXPECT_TRUE(membership(v, W));
    }
    EXPECT_EQ(I.dim() + sum(U, W).dim(), U.dim() + W.dim());
  }
}

TEST(Linalg, QuotientDimension) {
  const PrimeField f(2);
  const auto U = span(f, std::vector{vec(f, {{0, 1}}), vec(f, {{1, 1}}), vec(f, {{2, 1}})});
  const auto W = span(f, std::vector{vec(f, {{0, 1}, {1, 1}}), vec(f, {{5, 1}})});
  EXPECT_EQ(quotient_dim(U, W), 2u);
  EXPECT_EQ(quotient_dim(W, U), 1u);
}

TEST(Linalg, RationalCoefficients) {
  const RationalField q;
  std::vector<SparseVector<RationalField>> vs;
  for (int i = 1; i <= 3; ++i) {
    std::vector<SparseVector<RationalField>::Entry> e;
    e.emplace_back(ColumnLabel{kZ.element({0}), 1}, Rational(1, i));
    e.emplace_back(ColumnLabel{kZ.element({1}), 1}, Rational(1, i + 1));
    vs.push_back(SparseVector<RationalField>::from_entries(q, std::move(e)));
  }
  EXPECT_EQ(span_dim(q, vs), 2u);
}

TEST(Linalg, MixedFieldsAreRejected) {
  const PrimeField f2(2), f3(3);
  const auto U = span(f2, std::vector{vec(f2, {{0, 1}})});
  const auto W = span(f3, std::vector{vec(f3, {{0, 1}})});
  EXPECT_THROW(sum(U, W), FieldMismatch);
}
