#include <gtest/gtest.h>

#include "qsteg/core.hpp"
#include "qsteg/error.hpp"
#include "test_util.hpp"

namespace qsteg {
namespace {

using testing::diag;
using testing::ket;
using testing::max_diff;

TEST(DensityMatrix, RejectsInvalidInputs) {
  EXPECT_THROW(DensityMatrix(diag({0.7, 0.7})), Error);
  EXPECT_THROW(DensityMatrix(diag({1.2, -0.2})), Error);
  Matrix nonherm = diag({0.5, 0.5});
  nonherm(0, 1) = 0.3;
  EXPECT_THROW((DensityMatrix(nonherm)), Error);
  EXPECT_NO_THROW(DensityMatrix(diag({0.25, 0.75})));
}

TEST(PureState, RequiresUnitNorm) {
  Vector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW((PureState(v)), Error);
  EXPECT_NO_THROW(PureState(v / v.norm()));
}

TEST(Tensor, MaximallyMixedAndBasis) {
  const auto mm = tensor(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2));
  EXPECT_LT(max_diff(mm.matrix(), DensityMatrix::maximally_mixed(4).matrix()), 1e-15);
  const auto b = tensor(DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1));
  EXPECT_LT(max_diff(b.matrix(), DensityMatrix::basis(4, 1).matrix()), 1e-15);
}

TEST(Tensor, DimensionLimit) {
  const auto big = DensityMatrix::maximally_mixed(64);
  try {
    tensor(big, big, 1000);
    FAIL() << "expected a dimension limit error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionLimit);
  }
}

TEST(Tensor, RandomTraceIsOne) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto r = tensor(random_density(2, rng), random_density(2, rng));
    Complex tr = 0;
    for (long i = 0; i < r.dim(); ++i) tr += r.matrix()(i, i);
    EXPECT_NEAR(tr.real(), 1.0, 1e-12);
    EXPECT_NEAR(tr.imag(), 0.0, 1e-12);
  }
}

TEST(PartialTrace, MaximallyEntangledMarginal) {
  const auto phi = PureState::maximally_entangled(2).density();
  EXPECT_LT(max_diff(partial_trace(phi, {2, 2}, {0}).matrix(),
                     DensityMatrix::maximally_mixed(2).matrix()),
            1e-15);
  EXPECT_LT(max_diff(partial_trace(phi, {2, 2}, {0, 1}).matrix(), phi.matrix()), 1e-15);
}

TEST(PartialTrace, ShapeError) {
  try {
    partial_trace(DensityMatrix::maximally_mixed(4), {2, 3}, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShapeError);
  }
}

// tr_A(ρ ⊗ σ) on 2 × 3 against an explicit index sum.
TEST(PartialTrace, IndexSummationOracle) {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random_density(2, rng);
    const auto sigma = random_density(3, rng);
    const Matrix joint = kron(rho.matrix(), sigma.matrix());
    Matrix oracle = Matrix::Zero(3, 3);
    for (long i = 0; i < 3; ++i)
      for (long j = 0; j < 3; ++j)
        for (long a = 0; a < 2; ++a) oracle(i, j) += joint(a * 3 + i, a * 3 + j);
    const Matrix got = partial_trace(joint, {2, 3}, {1});
    EXPECT_LT(max_diff(got, oracle), 1e-13);
    EXPECT_LT(max_diff(got, sigma.matrix()), 1e-10);
    EXPECT_LT(max_diff(partial_trace(joint, {2, 3}, {0}), rho.matrix()), 1e-10);
  }
}

TEST(PartialTrace, KeepOrderPermutes) {
  const auto r = tensor(DensityMatrix::basis(2, 0), DensityMatrix::basis(3, 2));
  const auto swapped = partial_trace(r, {2, 3}, {1, 0});
  EXPECT_LT(max_diff(swapped.matrix(), DensityMatrix::basis(6, 4).matrix()), 1e-15);
}

TEST(PermuteSystems, RoundTrip) {
  Rng rng(3);
  const Vector v = random_pure(24, rng);
  const std::vector<long> dims{2, 3, 4};
  const Vector p = permute_systems(v, dims, {2, 0, 1});
  const Vector back = permute_systems(p, {4, 2, 3}, {1, 2, 0});
  EXPECT_LT((back - v).norm(), 1e-14);
}

TEST(TraceNorm, Examples) {
  const auto rho = DensityMatrix::basis(2, 0);
  EXPECT_NEAR(trace_norm(rho.matrix() - rho.matrix()), 0.0, 1e-15);
  EXPECT_NEAR(trace_norm(rho.matrix() - DensityMatrix::basis(2, 1).matrix()), 2.0, 1e-14);
  EXPECT_NEAR(trace_norm(rho.matrix() - DensityMatrix::maximally_mixed(2).matrix()), 1.0, 1e-14);
}

TEST(Fidelity, Examples) {
  const auto z0 = DensityMatrix::basis(2, 0);
  EXPECT_NEAR(fidelity(z0, z0), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(z0, DensityMatrix::basis(2, 1)), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(z0, DensityMatrix::maximally_mixed(2)), 0.5, 1e-12);
}

TEST(Fidelity, FuchsVanDeGraaf) {
  Rng rng(11);
  for (long d = 2; d <= 4; ++d) {
    for (int t = 0; t < 100; ++t) {
      const auto rho = random_density(d, rng);
      const auto sigma = random_density(d, rng, 1 + t % d);
      const double f = fidelity(rho, sigma);
      const double dist = trace_norm(rho.matrix() - sigma.matrix());
      EXPECT_GE(dist + 1e-9, 2.0 * (1.0 - std::sqrt(f)));
      EXPECT_LE(dist, 2.0 * std::sqrt(std::max(0.0, 1.0 - f)) + 1e-9);
    }
  }
}

TEST(Purify, MaximallyMixedGivesMaximallyEntangled) {
  const auto p = purify(DensityMatrix::maximally_mixed(2));
  EXPECT_EQ(p.dim(), 4);
  const auto d = p.density();
  EXPECT_LT(max_diff(partial_trace(d, {2, 2}, {1}).matrix(), 0.5 * Matrix::Identity(2, 2)), 1e-14);
  EXPECT_LT(max_diff(partial_trace(d, {2, 2}, {0}).matrix(), 0.5 * Matrix::Identity(2, 2)), 1e-14);
}

TEST(Purify, PureInputIsProduct) {
  const auto rho = ket({1.0, Complex(0.0, 1.0)});
  const auto p = purify(rho, true);
  EXPECT_EQ(p.dim(), 2);
  const auto sd = schmidt_decompose(p, 1, 2);
  EXPECT_NEAR(sd.weights[0], 1.0, 1e-12);
}

TEST(Purify, RoundTripOnRandomStates) {
  Rng rng(5);
  for (long d = 2; d <= 5; ++d) {
    for (int t = 0; t < 10; ++t) {
      const auto rho = random_density(d, rng, 1 + t % d);
      const auto p = purify(rho);
      EXPECT_LT(max_diff(partial_trace(p.density(), {d, d}, {1}).matrix(), rho.matrix()), 1e-9);
    }
  }
}

TEST(DistinctEigenvalues, Examples) {
  for (long d = 1; d <= 6; ++d) {
    EXPECT_EQ(distinct_eigenvalue_count(DensityMatrix::maximally_mixed(d).matrix()), 1);
  }
  EXPECT_EQ(distinct_eigenvalue_count(diag({0.5, 0.3, 0.2})), 3);
  EXPECT_EQ(distinct_eigenvalue_count(diag({0.5, 0.5 - 1e-12, 1e-12})), 2);
  EXPECT_EQ(count_distinct({0.1, 0.1 + 5e-9, 0.1 + 1e-8 + 5e-9}), 1);
}

TEST(MatrixPower, Examples) {
  const auto half = DensityMatrix::maximally_mixed(2);
  EXPECT_LT(max_diff(matrix_power(half, 2.0).matrix(), 0.25 * Matrix::Identity(2, 2)), 1e-15);
  Rng rng(2);
  const auto rho = random_density(3, rng);
  EXPECT_LT(max_diff(matrix_power(rho, 1.0).matrix(), rho.matrix()), 1e-12);
  const auto partial = DensityMatrix(diag({0.5, 0.5, 0.0}));
  EXPECT_LT(max_diff(matrix_power(partial, -1.0).matrix(), diag({2.0, 2.0, 0.0})), 1e-12);
}

TEST(MatrixPower, ProductIsSupportProjector) {
  Rng rng(9);
  for (long d = 2; d <= 4; ++d) {
    for (int t = 0; t < 20; ++t) {
      const auto rho = random_density(d, rng, 1 + t % d);
      const double a = 0.1 + 0.2 * (t % 5);
      const Matrix prod = matrix_power(rho, a).matrix() * matrix_power(rho, -a).matrix();
      EXPECT_LT(max_diff(prod, support_projector(rho.matrix())), 1e-8);
    }
  }
}

TEST(Schmidt, Examples) {
  const auto phi = schmidt_decompose(PureState::maximally_entangled(2), 2, 2);
  ASSERT_GE(phi.weights.size(), 2u);
  EXPECT_NEAR(phi.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(phi.weights[1], 0.5, 1e-12);
  const Vector prod = kron(PureState::basis(2, 1).vector(), PureState::basis(3, 2).vector());
  const auto sp = schmidt_decompose(prod, 2, 3);
  EXPECT_NEAR(sp.weights[0], 1.0, 1e-12);
}

TEST(Schmidt, ReconstructsRandomVectors) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Vector v = random_pure(6, rng);
    const auto sd = schmidt_decompose(v, 2, 3);
    Vector rec = Vector::Zero(6);
    for (std::size_t x = 0; x < sd.weights.size(); ++x) {
      rec += std::sqrt(sd.weights[x]) * kron(Vector(sd.vectors_a.col(x)), Vector(sd.vectors_b.col(x)));
    }
    EXPECT_LT((rec - v).norm(), 1e-9);
  }
}

TEST(HermitianEigen, DiagonalKeepsIndexOrder) {
  const auto es = hermitian_eigen(diag({0.2, 0.7, 0.1}));
  EXPECT_NEAR(es.values(0), 0.2, 1e-15);
  EXPECT_NEAR(es.values(1), 0.7, 1e-15);
  EXPECT_LT(max_diff(es.vectors, Matrix::Identity(3, 3)), 1e-15);
}

TEST(DensityMatrix, RandomStatesAreValid) {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const auto rho = random_density(1 + t % 5, rng);
    EXPECT_TRUE(is_hermitian(rho.matrix()));
    for (double e : testing::eigenvalues(rho.matrix())) EXPECT_GE(e, -1e-12);
  }
}

}  // namespace
}  // namespace qsteg
