#include "qsteg/channel.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

Matrix stack_kraus(const std::vector<Matrix>& kraus) {
  const long dout = kraus.front().rows(), din = kraus.front().cols();
  const long k = static_cast<long>(kraus.size());
  Matrix v = Matrix::Zero(dout * k, din);
  for (long r = 0; r < dout; ++r) {
    for (long j = 0; j < k; ++j) v.row(r * k + j) = kraus[j].row(r);
  }
  return v;
}

// Shapes are checked before stacking; completeness is a parameter error, not a shape one.
Matrix validated_stack(const std::vector<Matrix>& kraus, double tol) {
  if (kraus.empty()) throw Error(ErrorKind::kShapeError, "no Kraus operators");
  const long dout = kraus.front().rows(), din = kraus.front().cols();
  Matrix sum = Matrix::Zero(din, din);
  for (const auto& f : kraus) {
    if (f.rows() != dout || f.cols() != din) {
      throw Error(ErrorKind::kShapeError, "Kraus operators differ in shape");
    }
    sum += f.adjoint() * f;
  }
  if (max_abs_entry(sum - Matrix::Identity(din, din)) > tol) {
    throw Error(ErrorKind::kBadParameter, "Kraus operators are not trace preserving");
  }
  return stack_kraus(kraus);
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::kBadParameter, std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

Isometry::Isometry(const Matrix& data, double tol) : data_(data) {
  const long m = data.cols();
  if (m == 0 || data.rows() < m ||
      max_abs_entry(data.adjoint() * data - Matrix::Identity(m, m)) > tol) {
    throw Error(ErrorKind::kShapeError, "matrix is not an isometry");
  }
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus, double tol)
    : kraus_(std::move(kraus)), isometry_(validated_stack(kraus_, tol), tol) {}

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& f : kraus) out.noalias() += f * rho * f.adjoint();
  return out;
}

Matrix apply(const QuantumChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in()) {
    throw Error(ErrorKind::kShapeError, "state does not match channel input");
  }
  return apply_kraus(ch.kraus(), rho);
}

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(apply(ch, rho.matrix()), 1e-9);
}

QuantumChannel tensor_product(const QuantumChannel& a, const QuantumChannel& b,
                              long max_dim) {
  if (a.dim_in() * b.dim_in() > max_dim || a.dim_out() * b.dim_out() > max_dim) {
    throw Error(ErrorKind::kDimensionLimit, "tensor product too large");
  }
  std::vector<Matrix> kraus;
  kraus.reserve(a.num_kraus() * b.num_kraus());
  for (const auto& f : a.kraus()) {
    for (const auto& g : b.kraus()) kraus.push_back(kron(f, g));
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel tensor_power(const QuantumChannel& ch, int n, long max_dim) {
  if (n < 1) throw Error(ErrorKind::kBadParameter, "tensor power needs n >= 1");
  QuantumChannel out = ch;
  for (int i = 1; i < n; ++i) out = tensor_product(out, ch, max_dim);
  return out;
}

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
  if (inner.dim_out() != outer.dim_in()) {
    throw Error(ErrorKind::kShapeError, "channels cannot be composed");
  }
  std::vector<Matrix> kraus;
  for (const auto& g : outer.kraus()) {
    for (const auto& f : inner.kraus()) kraus.push_back(g * f);
  }
  return QuantumChannel(std::move(kraus));
}

Isometry isometric_extension(const QuantumChannel& ch) { return ch.isometry(); }

Matrix complementary(const QuantumChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.dim_in()) {
    throw Error(ErrorKind::kShapeError, "state does not match channel input");
  }
  const long k = static_cast<long>(ch.num_kraus());
  std::vector<Matrix> frho;
  frho.reserve(k);
  for (const auto& f : ch.kraus()) frho.push_back(f * rho);
  Matrix env(k, k);
  for (long j = 0; j < k; ++j) {
    for (long l = 0; l < k; ++l) {
      // tr(F_j ρ F_l†)
      env(j, l) = (frho[j].array() * ch.kraus()[l].conjugate().array()).sum();
    }
  }
  return env;
}

DensityMatrix complementary(const QuantumChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(complementary(ch, rho.matrix()), 1e-9);
}

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix pauli_y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0, -1);
  m(1, 0) = Complex(0, 1);
  return m;
}

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

QuantumChannel identity_channel(long dim) {
  return QuantumChannel({Matrix::Identity(dim, dim)});
}

QuantumChannel depolarizing(double p) {
  check_probability(p, "depolarizing p");
  const Matrix id = Matrix::Identity(2, 2);
  return QuantumChannel({std::sqrt(1.0 - 0.75 * p) * id, std::sqrt(p / 4) * pauli_x(),
                         std::sqrt(p / 4) * pauli_y(), std::sqrt(p / 4) * pauli_z()});
}

QuantumChannel dephasing(double p) {
  check_probability(p, "dephasing p");
  return QuantumChannel(
      {std::sqrt(1.0 - p) * Matrix::Identity(2, 2), std::sqrt(p) * pauli_z()});
}

QuantumChannel bit_flip(double p) {
  check_probability(p, "bit-flip p");
  return QuantumChannel(
      {std::sqrt(1.0 - p) * Matrix::Identity(2, 2), std::sqrt(p) * pauli_x()});
}

QuantumChannel amplitude_damping(double gamma) {
  check_probability(gamma, "damping gamma");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel({k0, k1});
}

QuantumChannel unitary_channel(const Matrix& u) {
  if (u.rows() != u.cols() ||
      max_abs_entry(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) > kCptpTol) {
    throw Error(ErrorKind::kBadParameter, "matrix is not unitary");
  }
  return QuantumChannel({u});
}

QuantumChannel trace_out(const std::vector<long>& dims, const std::vector<long>& keep) {
  const long total = product(dims);
  std::vector<bool> kept(dims.size(), false);
  for (long k : keep) kept.at(k) = true;
  long dkeep = 1;
  for (long k : keep) dkeep *= dims[k];
  const long dtr = total / dkeep;
  // Kraus t maps the basis vector whose kept digits spell k and traced digits
  // spell t to |k⟩.
  std::vector<Matrix> kraus(dtr, Matrix::Zero(dkeep, total));
  for (long idx = 0; idx < total; ++idx) {
    std::vector<long> digit(dims.size());
    long rest = idx;
    for (long s = static_cast<long>(dims.size()) - 1; s >= 0; --s) {
      digit[s] = rest % dims[s];
      rest /= dims[s];
    }
    long k = 0, t = 0;
    for (long s : keep) k = k * dims[s] + digit[s];
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (!kept[s]) t = t * dims[s] + digit[s];
    }
    kraus[t](k, idx) = 1.0;
  }
  return QuantumChannel(std::move(kraus));
}

Isometry haar_random_subspace(long dim_ambient, long m, std::uint64_t seed) {
  if (m < 1 || m > dim_ambient) {
    throw Error(ErrorKind::kBadParameter, "subspace dimension out of range");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim_ambient, m);
  for (long j = 0; j < m; ++j) {
    for (long i = 0; i < dim_ambient; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim_ambient, m);
  const Matrix r = qr.matrixQR();
  for (long j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return Isometry(q);
}

}  // namespace qsteg
