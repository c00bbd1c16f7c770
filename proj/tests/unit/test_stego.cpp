#include <gtest/gtest.h>

#include <algorithm>

#include "qsteg/error.hpp"
#include "qsteg/fixtures.hpp"
#include "qsteg/stego.hpp"
#include "test_util.hpp"

namespace qsteg {
namespace {

using testing::ket;
using testing::max_diff;

double nested_residual(const StegoCcCode& code) {
  double worst = 0.0;
  for (const auto& d : code.decoders) {
    Matrix sum = Matrix::Zero(d.dim(), d.dim());
    for (const auto& e : d.elements()) sum += e;
    worst = std::max(worst, max_diff(sum, Matrix::Identity(d.dim(), d.dim())));
  }
  return worst;
}

void expect_audit_chain(const StegoCcAudit& a) {
  EXPECT_TRUE(a.bound_ok);
  EXPECT_LE(a.distance, a.xi_achieved + 1e-9);
  EXPECT_GE(a.decode_probability, 1 - a.zeta_achieved - 2 * std::sqrt(a.xi_achieved + a.eps_cover) - 1e-6);
  EXPECT_LE(a.povm_residual, 1e-8);
}

TEST(StegoCcNoiseless, DegenerateIdentityCover) {
  const auto cover = make_cc_code({DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)}, majority_vote(1),
                                  identity_channel(2), 1);
  const auto code = build_stego_cc_noiseless(cover, identity_channel(2), 1, 0.1, 3);
  EXPECT_NEAR(code.audit.distance, 0.0, 1e-12);
  EXPECT_NEAR(code.audit.decode_probability, 1.0, 1e-12);
  expect_audit_chain(code.audit);
}

TEST(StegoCcNoiseless, FullyDepolarizedSingleMessage) {
  const auto cover = make_cc_code({DensityMatrix::basis(2, 0)}, Povm({Matrix::Identity(2, 2)}), depolarizing(1.0), 1);
  const auto code = build_stego_cc_noiseless(cover, depolarizing(1.0), 2, 0.1, 1);
  EXPECT_NEAR(code.audit.distance, 0.0, 1e-12);
  EXPECT_NEAR(code.audit.decode_probability, 1.0, 1e-12);
  // The two stego inputs are the two basis states.
  const Matrix sum = code.encode(0, 0, 0).matrix() + code.encode(0, 0, 1).matrix();
  EXPECT_LT(max_diff(sum, Matrix::Identity(2, 2)), 1e-12);
  EXPECT_NEAR(std::abs((code.encode(0, 0, 0).matrix() * code.encode(0, 0, 1).matrix()).trace()), 0.0, 1e-12);
  expect_audit_chain(code.audit);
}

TEST(StegoCcNoiseless, DephasedTwoQubitCover) {
  const auto plus = ket({1, 1}), minus = ket({1, -1});
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const Matrix hh = kron(h, h);
  std::vector<Matrix> dec;
  const Povm vote = majority_vote(2);
  for (const auto& e : vote.elements()) dec.push_back(hh * e * hh.adjoint());
  const auto m = tensor_power(dephasing(0.6), 2);
  const auto cover = make_cc_code({tensor(plus, plus), tensor(minus, minus)}, Povm(dec), m, 2);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto code = build_stego_cc_noiseless(cover, m, 2, 0.1, seed);
    expect_audit_chain(code.audit);
    EXPECT_LE(nested_residual(code), 1e-8);
  }
}

TEST(StegoCcNoiseless, ThreeQubitDepolarizedCover) {
  const auto m = tensor_power(depolarizing(0.3), 3);
  const auto cover = make_cc_code({DensityMatrix::basis(8, 0), DensityMatrix::basis(8, 7)}, majority_vote(3), m, 3);
  const auto code = build_stego_cc_noiseless(cover, m, 4, 0.1, 1);
  expect_audit_chain(code.audit);
  EXPECT_LE(nested_residual(code), 1e-8);
  // Independent recomputation matches the stored audit.
  const auto again = audit_stego_cc(code, cover, m, identity_channel(8));
  EXPECT_NEAR(again.distance, code.audit.distance, 1e-12);
  EXPECT_NEAR(again.decode_probability, code.audit.decode_probability, 1e-12);
}

struct NoisyDemo {
  CcCode cover;
  QuantumChannel m = identity_channel(4);
  QuantumChannel truth;
  std::vector<CqState> side;
};

NoisyDemo noisy_demo() {
  NoisyDemo d;
  d.truth = tensor_product(identity_channel(2), dephasing(0.5));
  const auto mixed = DensityMatrix::maximally_mixed(2);
  Matrix p0 = Matrix::Zero(4, 4), p1 = Matrix::Zero(4, 4);
  p0(0, 0) = p0(1, 1) = 1;
  p1(2, 2) = p1(3, 3) = 1;
  d.cover = make_cc_code({tensor(DensityMatrix::basis(2, 0), mixed), tensor(DensityMatrix::basis(2, 1), mixed)},
                         Povm({p0, p1}), compose(d.truth, d.m), 1);
  for (long w = 0; w < 2; ++w) {
    const auto bw = DensityMatrix::basis(2, w);
    d.side.emplace_back(Pmf::uniform(4), std::vector<DensityMatrix>{
        tensor(bw, ket({1, 0})), tensor(bw, ket({0, 1})), tensor(bw, ket({1, 1})), tensor(bw, ket({1, -1}))});
  }
  return d;
}

TEST(StegoCcNoisy, AuditChainHolds) {
  const auto d = noisy_demo();
  for (int k : {1, 2}) {
    const auto code = build_stego_cc_noisy(d.cover, d.m, d.truth, d.side, 2, k, 0.3, 0.3, 11);
    expect_audit_chain(code.audit);
    EXPECT_LE(nested_residual(code), 1e-8);
    EXPECT_TRUE(code.resolvability);
  }
}

TEST(StegoCcNoisy, SideStateMismatch) {
  auto d = noisy_demo();
  d.side[0] = CqState(Pmf::uniform(2), {DensityMatrix::basis(4, 3), DensityMatrix::basis(4, 2)});
  try {
    build_stego_cc_noisy(d.cover, d.m, d.truth, d.side, 2, 1, 0.3, 0.3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSideStateMismatch);
  }
}

TEST(StegoCcNoisy, DistanceShrinksWithKeys) {
  const auto d = noisy_demo();
  std::vector<double> medians;
  for (int k : {1, 4, 16}) {
    std::vector<double> dist;
    for (std::uint64_t s = 0; s < 20; ++s) {
      dist.push_back(build_stego_cc_noisy(d.cover, d.m, d.truth, d.side, 2, k, 0.3, 0.3, 500 + s).audit.distance);
    }
    std::nth_element(dist.begin(), dist.begin() + 10, dist.end());
    medians.push_back(dist[10]);
  }
  EXPECT_GT(medians[0], medians[1]);
  EXPECT_GT(medians[1], medians[2]);
}

TEST(StegoEsRs, DephasingDemoSharesOneBit) {
  const auto m = tensor_product(identity_channel(2), dephasing(0.5));
  const auto cover = two_use_es_cover(m);
  const auto code = build_stego_es_rs(cover, m, 2, 0.1, 3);
  ASSERT_EQ(code.schmidt_weights.size(), 2u);
  EXPECT_NEAR(code.schmidt_weights[0], 0.5, 1e-12);
  EXPECT_NEAR(code.schmidt_weights[1], 0.5, 1e-12);
  EXPECT_NEAR(code.fidelity, 1.0, 1e-9);
  EXPECT_LE(code.output_gap, 1e-10);
  EXPECT_GE(code.fidelity, code.fidelity_bound - 1e-6);
  EXPECT_TRUE(code.bound_ok);
}

TEST(StegoEsRs, UnitaryWardenLeavesNoRandomness) {
  const auto m = tensor_product(identity_channel(2), identity_channel(2));
  const auto cover = two_use_es_cover(m);
  const auto code = build_stego_es_rs(cover, m, 1, 0.1, 3);
  EXPECT_NEAR(code.schmidt_weights[0], 1.0, 1e-12);
  EXPECT_GE(code.fidelity, 1.0 - 1e-9);
  EXPECT_LE(code.output_gap, 1e-10);
}

class QcCcBitFlip : public ::testing::TestWithParam<double> {};

TEST_P(QcCcBitFlip, StructureAndDistance) {
  const double p = GetParam();
  const auto m = tensor_power(bit_flip(p), 3);
  const auto cover = bit_flip_repetition_code(m);
  const auto code = build_stego_qc_cc(cover, m, 4, 0.1, 7);
  EXPECT_LE(code.split.gram_residual, 1e-8);
  EXPECT_LE(code.split.polar_residual, 1e-8);
  const double q = 1 - p;
  std::vector<double> d{q * q * q, p * q * q, p * q * q, p * q * q};
  const double s = d[0] + 3 * d[1];
  ASSERT_EQ(code.split.pj.size(), 4u);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(code.split.pj[j], d[j] / s, 1e-10);
  EXPECT_NEAR(code.stego_recovery, code.recovery_constant, 1e-9);
  EXPECT_NEAR(code.recovery_constant, s, 1e-9);
  EXPECT_LE(code.stego_recovery_residual, 1e-9);
  EXPECT_LE(code.max_distance, code.distance_bound + 1e-6);
  EXPECT_TRUE(code.bound_ok);
}

INSTANTIATE_TEST_SUITE_P(Probabilities, QcCcBitFlip, ::testing::Values(0.1, 0.25, 0.5));

TEST(QcCc, UniformCaseDecodesPerfectly) {
  const auto m = tensor_power(bit_flip(0.5), 3);
  const auto code = build_stego_qc_cc(bit_flip_repetition_code(m), m, 4, 0.1, 7);
  EXPECT_NEAR(code.hash_defect, 0.0, 1e-12);
  EXPECT_NEAR(code.cypher_decode, 1.0, 1e-9);
  EXPECT_NEAR(code.zeta_achieved, 0.0, 1e-12);
}

TEST(QcCc, UnitaryWardenHasSingleKraus) {
  const auto m = tensor_power(identity_channel(2), 3);
  const auto cover = bit_flip_repetition_code(m, {0});
  const auto code = build_stego_qc_cc(cover, m, 1, 0.1, 1);
  ASSERT_EQ(code.split.pj.size(), 1u);
  EXPECT_NEAR(code.split.pj[0], 1.0, 1e-12);
  EXPECT_NEAR(code.max_distance, 0.0, 1e-10);
}

TEST(QcCc, TestInputsAreStates) {
  const auto inputs = qc_test_inputs(2, 5);
  EXPECT_EQ(inputs.size(), 16u);
  for (const auto& r : inputs) EXPECT_EQ(r.dim(), 2);
}

TEST(Distiller, TrivialAlignerExamples) {
  const auto phi = PureState::maximally_entangled(2).density();
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const Matrix u = kron(h, pauli_y());
  const DensityMatrix rotated(u * phi.matrix() * u.adjoint());
  const auto ok = trivial_aligner_distiller(rotated, 2, 2, 2, 1, 0.01);
  ASSERT_TRUE(ok.has_value());
  // Applying encoder then decoder to the input reproduces Φ.
  const Matrix local = kron(ok->encoder.kraus()[0], Matrix(Matrix::Identity(2, 2)));
  const Matrix after_a = local * rotated.matrix() * local.adjoint();
  Matrix out = Matrix::Zero(4, 4);
  for (const auto& k : ok->decoder.kraus()) {
    const Matrix l = kron(Matrix(Matrix::Identity(2, 2)), k);
    out += l * after_a * l.adjoint();
  }
  EXPECT_LE(trace_norm(out - phi.matrix()), 1e-9);

  EXPECT_FALSE(trivial_aligner_distiller(DensityMatrix::basis(4, 0), 2, 2, 2, 1, 0.01).has_value());
  Vector v = Vector::Zero(4);
  v(0) = std::sqrt(0.9);
  v(3) = std::sqrt(0.1);
  EXPECT_FALSE(trivial_aligner_distiller(DensityMatrix::from_pure(v), 2, 2, 2, 1, 0.01).has_value());
}

TEST(StegoCcEs, DephasedPlusGivesOneEbit) {
  const auto plus = ket({1, 1});
  const auto f2 = DensityMatrix::basis(2, 0);
  const auto warden = tensor_product(dephasing(0.5), identity_channel(2));
  const auto cover = make_cc_code({tensor(plus, f2)}, Povm({Matrix::Identity(4, 4)}), warden, 2);
  const auto code = build_stego_cc_es(cover, {plus}, {f2}, dephasing(0.5), identity_channel(2),
                                      trivial_aligner_distiller, 0.1, 5);
  EXPECT_EQ(code.entangled, 2);
  EXPECT_EQ(code.distillers.front().classical, 1);
  EXPECT_NEAR(code.entanglement_distance, 0.0, 1e-9);
  EXPECT_NEAR(code.distance, 0.0, 1e-9);
  EXPECT_NEAR(code.classical_reliability, 1.0, 1e-9);
  EXPECT_TRUE(code.bound_ok);
}

TEST(StegoCcEs, PureProductBlockGivesNoEntanglement) {
  const auto z = DensityMatrix::basis(2, 0);
  const auto warden = tensor_product(identity_channel(2), identity_channel(2));
  const auto cover = make_cc_code({tensor(z, z)}, Povm({Matrix::Identity(4, 4)}), warden, 2);
  const auto code = build_stego_cc_es(cover, {z}, {z}, identity_channel(2), identity_channel(2),
                                      trivial_aligner_distiller, 0.1, 5);
  EXPECT_EQ(code.entangled, 1);
  EXPECT_TRUE(code.bound_ok);
}

TEST(StegoCcEs, InfeasibleRequestThrows) {
  const auto z = DensityMatrix::basis(2, 0);
  const auto warden = tensor_product(identity_channel(2), identity_channel(2));
  const auto cover = make_cc_code({tensor(z, z)}, Povm({Matrix::Identity(4, 4)}), warden, 2);
  CcEsOptions opts;
  opts.entangled = 2;
  try {
    build_stego_cc_es(cover, {z}, {z}, identity_channel(2), identity_channel(2), trivial_aligner_distiller, 0.1, 5,
                      opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDistillationInfeasible);
  }
}

}  // namespace
}  // namespace qsteg
