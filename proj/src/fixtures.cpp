#include "qsteg/fixtures.hpp"

#include <cmath>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

Matrix flip_on(int qubit) {
  Matrix op = Matrix::Identity(1, 1);
  for (int q = 0; q < 3; ++q) {
    op = kron(op, q == qubit ? pauli_x() : Matrix(Matrix::Identity(2, 2)));
  }
  return op;
}

}  // namespace

Matrix bit_flip_encoder() {
  Matrix v = Matrix::Zero(8, 2);
  v(0, 0) = 1.0;
  v(7, 1) = 1.0;
  return v;
}

QuantumChannel bit_flip_decoder() {
  const Matrix v = bit_flip_encoder();
  std::vector<Matrix> kraus;
  for (int q = -1; q < 3; ++q) {
    const Matrix x = q < 0 ? Matrix(Matrix::Identity(8, 8)) : flip_on(q);
    const Matrix proj = x * v * v.adjoint() * x;
    kraus.push_back(v.adjoint() * x * proj);
  }
  return QuantumChannel(std::move(kraus));
}

QcCode bit_flip_repetition_code(const QuantumChannel& warden,
                                const std::vector<std::size_t>& correctable) {
  return make_qc_code(bit_flip_encoder(), bit_flip_decoder(), warden, correctable);
}

QuantumChannel single_flip_channel(double q) {
  if (!(q >= 0.0 && 3.0 * q <= 1.0)) {
    throw Error(ErrorKind::kBadParameter, "single-flip q must lie in [0, 1/3]");
  }
  std::vector<Matrix> kraus{std::sqrt(1.0 - 3.0 * q) * Matrix(Matrix::Identity(8, 8))};
  for (int k = 0; k < 3; ++k) kraus.push_back(std::sqrt(q) * flip_on(k));
  return QuantumChannel(std::move(kraus));
}

Povm majority_vote(int n) {
  const long d = 1L << n;
  Matrix zero = Matrix::Zero(d, d);
  Matrix one = Matrix::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    int ones = 0;
    for (int b = 0; b < n; ++b) ones += (i >> b) & 1;
    if (2 * ones < n) {
      zero(i, i) = 1.0;
    } else if (2 * ones > n) {
      one(i, i) = 1.0;
    } else {
      zero(i, i) = 0.5;
      one(i, i) = 0.5;
    }
  }
  return Povm({zero, one});
}

EsCode two_use_es_cover(const QuantumChannel& m) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Vector psi = kron(PureState::maximally_entangled(2).vector(), plus);
  return make_es_code(DensityMatrix::from_pure(psi), 2, trace_out({2, 2}, {0}), m);
}

}  // namespace qsteg
