#include <gtest/gtest.h>

#include "qsteg/error.hpp"
#include "qsteg/fixtures.hpp"
#include "qsteg/verify.hpp"
#include "test_util.hpp"

namespace qsteg {
namespace {

TEST(Gentle, PerfectMeasurement) {
  const auto z0 = DensityMatrix::basis(2, 0), z1 = DensityMatrix::basis(2, 1);
  const auto r = verify_gentle_composition({z0, z1}, {depolarizing(0.3), amplitude_damping(0.2)},
                                           Povm({z0.matrix(), z1.matrix()}), Pmf({0.4, 0.6}));
  EXPECT_NEAR(r.lhs, 0.0, 1e-12);
  EXPECT_NEAR(r.eps, 0.0, 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(Gentle, UninformativeMeasurementClosedForm) {
  for (double q : {0.1, 0.3, 0.5}) {
    const auto r = verify_gentle_composition(
        {DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)}, {identity_channel(2), unitary_channel(pauli_x())},
        Povm({q * Matrix::Identity(2, 2), (1 - q) * Matrix::Identity(2, 2)}), Pmf({q, 1 - q}));
    EXPECT_NEAR(r.lhs, 4 * q * (1 - q), 1e-12);
    EXPECT_NEAR(r.eps, 2 * q * (1 - q), 1e-12);
    EXPECT_NEAR(r.bound, 2 * std::sqrt(r.eps) + r.eps, 1e-12);
    EXPECT_TRUE(r.holds);
  }
}

TEST(Gentle, RandomInstancesNeverViolate) {
  Rng rng(2718);
  for (int t = 0; t < 100; ++t) {
    const long d = 1 + t % 4, dout = 1 + (t / 4) % 4;
    const std::size_t nx = 1 + t % 3;
    std::vector<DensityMatrix> states;
    std::vector<QuantumChannel> chans;
    for (std::size_t x = 0; x < nx; ++x) {
      states.push_back(random_density(d, rng));
      chans.push_back(random_channel(d, dout, d * dout, rng));
    }
    const auto r = verify_gentle_composition(states, chans, random_povm(d, nx, rng), random_pmf(nx, rng));
    EXPECT_TRUE(r.holds) << "instance " << t << " lhs " << r.lhs << " bound " << r.bound;
  }
}

TEST(PjBound, PerfectCodeEquality) {
  const auto m = tensor_power(bit_flip(0.0), 3);
  const auto code = bit_flip_repetition_code(m);
  for (double delta : {0.2, 0.4}) {
    const auto r = verify_pj_minentropy_bound(code, m, delta);
    EXPECT_NEAR(r.eps, 0.0, 1e-12);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-9);
    EXPECT_TRUE(r.holds);
  }
}

TEST(PjBound, SingleFlipChannelEquality) {
  const auto ch = single_flip_channel(0.05);
  const auto code = bit_flip_repetition_code(ch, {0, 1, 2, 3});
  const auto r = verify_pj_minentropy_bound(code, ch, 0.2);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-9);
  EXPECT_NEAR(r.lhs, 0.6214883767, 1e-9);
}

TEST(PjBound, VacuousUnlessClamped) {
  const auto m = tensor_power(bit_flip(0.1), 3);
  const auto code = bit_flip_repetition_code(m);
  try {
    verify_pj_minentropy_bound(code, m, 0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBoundVacuous);
  }
  const auto r = verify_pj_minentropy_bound(code, m, 0.2, true);
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.smoothing, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(PjBound, NonVacuousBitFlip) {
  const auto m = tensor_power(bit_flip(0.1), 3);
  const auto r = verify_pj_minentropy_bound(bit_flip_repetition_code(m), m, 0.4);
  EXPECT_FALSE(r.vacuous);
  EXPECT_NEAR(r.smoothing, 0.4 - 2 * std::sqrt(r.eps), 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(PjBound, UnitaryBothSidesEqual) {
  const auto m = tensor_power(identity_channel(2), 3);
  // Deterministic P_J and a pure environment: sub-normalized smoothing by δ leaves
  // −log₂(1−δ) on both sides, which vanishes as δ → 0.
  for (double delta : {0.2, 1e-10}) {
    const auto r = verify_pj_minentropy_bound(bit_flip_repetition_code(m, {0}), m, delta);
    EXPECT_NEAR(r.lhs, -std::log2(1 - delta), 1e-9);
    EXPECT_NEAR(r.rhs, -std::log2(1 - delta), 1e-9);
    EXPECT_TRUE(r.holds);
  }
}

}  // namespace
}  // namespace qsteg
