#include "qsteg/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::kShapeError, std::string(what) + " must be square");
  }
}

// offsets[i] = flat index contribution of the i-th joint value of `systems`.
std::vector<long> subsystem_offsets(const std::vector<long>& dims,
                                    const std::vector<long>& systems) {
  std::vector<long> strides(dims.size(), 1);
  for (long i = static_cast<long>(dims.size()) - 2; i >= 0; --i) {
    strides[i] = strides[i + 1] * dims[i + 1];
  }
  std::vector<long> offsets{0};
  for (long s : systems) {
    std::vector<long> next;
    next.reserve(offsets.size() * dims[s]);
    for (long base : offsets) {
      for (long k = 0; k < dims[s]; ++k) next.push_back(base + k * strides[s]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

void validate_subsystems(const std::vector<long>& dims,
                         const std::vector<long>& systems, long total) {
  if (product(dims) != total) {
    throw Error(ErrorKind::kShapeError, "subsystem dims do not match operator");
  }
  std::vector<bool> seen(dims.size(), false);
  for (long s : systems) {
    if (s < 0 || s >= static_cast<long>(dims.size()) || seen[s]) {
      throw Error(ErrorKind::kShapeError, "bad subsystem index");
    }
    seen[s] = true;
  }
}

std::vector<long> complement(const std::vector<long>& systems, std::size_t n) {
  std::vector<bool> in(n, false);
  for (long s : systems) in[s] = true;
  std::vector<long> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) out.push_back(static_cast<long>(i));
  }
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(const Matrix& data, double tol) {
  require_square(data, "density matrix");
  if (!is_hermitian(data, tol)) {
    throw Error(ErrorKind::kInvalidState, "not Hermitian");
  }
  data_ = hermitize(data);
  const double tr = data_.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorKind::kInvalidState, "trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalError, "eigensolver failed");
  }
  if (es.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorKind::kInvalidState, "negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(long dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis(long dim, long index) {
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::from_pure(const Vector& v) {
  return PureState(v).density();
}

DensityMatrix DensityMatrix::classically_correlated(long m) {
  Matrix out = Matrix::Zero(m * m, m * m);
  for (long i = 0; i < m; ++i) out(i * m + i, i * m + i) = 1.0 / m;
  return DensityMatrix(out);
}

PureState::PureState(const Vector& data, double tol) : data_(data) {
  if (data.size() == 0 || std::abs(data.norm() - 1.0) > tol) {
    throw Error(ErrorKind::kInvalidState, "vector is not normalized");
  }
}

PureState PureState::basis(long dim, long index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(v);
}

PureState PureState::maximally_entangled(long m) {
  Vector v = Vector::Zero(m * m);
  for (long i = 0; i < m; ++i) v(i * m + i) = 1.0 / std::sqrt(static_cast<double>(m));
  return PureState(v);
}

DensityMatrix PureState::density() const {
  return DensityMatrix(data_ * data_.adjoint());
}

HermitianOperator::HermitianOperator(const Matrix& data, double tol) {
  require_square(data, "operator");
  if (!is_hermitian(data, tol)) {
    throw Error(ErrorKind::kInvalidState, "operator is not Hermitian");
  }
  data_ = hermitize(data);
}

Povm::Povm(std::vector<Matrix> elements, double tol) {
  if (elements.empty()) throw Error(ErrorKind::kShapeError, "empty POVM");
  const long d = elements.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (auto& e : elements) {
    if (e.rows() != d || e.cols() != d) {
      throw Error(ErrorKind::kShapeError, "POVM elements differ in dimension");
    }
    if (!is_hermitian(e, kHermTol)) {
      throw Error(ErrorKind::kInvalidState, "POVM element is not Hermitian");
    }
    e = hermitize(e);
    Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kHermTol) {
      throw Error(ErrorKind::kInvalidState, "POVM element is not positive");
    }
    sum += e;
  }
  if (max_abs_entry(sum - Matrix::Identity(d, d)) > tol) {
    throw Error(ErrorKind::kInvalidState, "POVM is not complete");
  }
  elements_ = std::move(elements);
}

Eigensystem hermitian_eigen(const Matrix& h) {
  require_square(h, "operator");
  const long d = h.rows();
  double off = 0.0;
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      if (i != j) off = std::max(off, std::abs(h(i, j)));
    }
  }
  if (off == 0.0) {
    return {h.diagonal().real(), Matrix::Identity(d, d)};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalError, "eigensolver failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs_entry(m - m.adjoint()) <= tol;
}

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

long product(const std::vector<long>& dims) {
  long p = 1;
  for (long d : dims) {
    if (d <= 0) throw Error(ErrorKind::kShapeError, "nonpositive dimension");
    p *= d;
  }
  return p;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b,
                     long max_dim) {
  if (a.dim() * b.dim() > max_dim) {
    throw Error(ErrorKind::kDimensionLimit,
                std::to_string(a.dim() * b.dim()) + " > " + std::to_string(max_dim));
  }
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix& rho, const std::vector<long>& dims,
                     const std::vector<long>& keep) {
  require_square(rho, "operator");
  validate_subsystems(dims, keep, rho.rows());
  const auto traced = complement(keep, dims.size());
  const auto ok = subsystem_offsets(dims, keep);
  const auto ot = subsystem_offsets(dims, traced);
  const long dk = static_cast<long>(ok.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (long r = 0; r < dk; ++r) {
    for (long c = 0; c < dk; ++c) {
      Complex s = 0.0;
      for (long t : ot) s += rho(ok[r] + t, ok[c] + t);
      out(r, c) = s;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<long>& dims,
                            const std::vector<long>& keep) {
  return DensityMatrix(partial_trace(rho.matrix(), dims, keep), 1e-9);
}

Vector permute_systems(const Vector& v, const std::vector<long>& dims,
                       const std::vector<long>& perm) {
  if (perm.size() != dims.size()) {
    throw Error(ErrorKind::kShapeError, "permutation size mismatch");
  }
  validate_subsystems(dims, perm, v.size());
  // Offsets enumerate input positions in the output's row-major order.
  const auto src = subsystem_offsets(dims, perm);
  Vector out(v.size());
  for (long i = 0; i < v.size(); ++i) out(i) = v(src[i]);
  return out;
}

Matrix permute_systems(const Matrix& op, const std::vector<long>& dims,
                       const std::vector<long>& perm) {
  if (perm.size() != dims.size()) {
    throw Error(ErrorKind::kShapeError, "permutation size mismatch");
  }
  require_square(op, "operator");
  validate_subsystems(dims, perm, op.rows());
  const auto src = subsystem_offsets(dims, perm);
  const long d = op.rows();
  Matrix out(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) out(i, j) = op(src[i], src[j]);
  }
  return out;
}

Vector apply_local(const Matrix& op, const Vector& v,
                   const std::vector<long>& dims, long index) {
  if (product(dims) != v.size() || index < 0 ||
      index >= static_cast<long>(dims.size()) || op.cols() != dims[index]) {
    throw Error(ErrorKind::kShapeError, "local operator does not fit");
  }
  long left = 1, right = 1;
  for (long i = 0; i < index; ++i) left *= dims[i];
  for (long i = index + 1; i < static_cast<long>(dims.size()); ++i) right *= dims[i];
  const long din = op.cols(), dout = op.rows();
  Vector out = Vector::Zero(left * dout * right);
  for (long l = 0; l < left; ++l) {
    for (long r = 0; r < right; ++r) {
      Vector slice(din);
      for (long k = 0; k < din; ++k) slice(k) = v((l * din + k) * right + r);
      Vector res = op * slice;
      for (long k = 0; k < dout; ++k) out((l * dout + k) * right + r) = res(k);
    }
  }
  return out;
}

double trace_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  if (x.rows() == x.cols() && is_hermitian(x, 1e-12)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(x), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::kNumericalError, "eigensolver failed");
    }
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::kShapeError, "fidelity of states of different dims");
  }
  const Matrix sr = psd_power(rho.matrix(), 0.5);
  const Matrix inner = hermitize(sr * sigma.matrix() * sr);
  Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalError, "eigensolver failed");
  }
  double root = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    root += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  }
  return root * root;
}

PureState purify(const DensityMatrix& rho, bool trim_to_rank) {
  const auto es = hermitian_eigen(rho.matrix());
  const long d = rho.dim();
  std::vector<long> kept;
  for (long i = 0; i < d; ++i) {
    if (!trim_to_rank || es.values(i) > kZeroCut) kept.push_back(i);
  }
  const long r = static_cast<long>(kept.size());
  Vector v = Vector::Zero(r * d);
  for (long k = 0; k < r; ++k) {
    const double lam = std::max(es.values(kept[k]), 0.0);
    v.segment(k * d, d) = std::sqrt(lam) * es.vectors.col(kept[k]);
  }
  v /= v.norm();
  return PureState(v, 1e-9);
}

int count_distinct(std::vector<double> values, double tol) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  int clusters = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - values[i - 1] > tol) ++clusters;
  }
  return clusters;
}

int distinct_eigenvalue_count(const Matrix& x, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::kBadParameter, "tol must be positive");
  const auto es = hermitian_eigen(x);
  return count_distinct({es.values.data(), es.values.data() + es.values.size()}, tol);
}

Matrix psd_power(const Matrix& x, double a) {
  const auto es = hermitian_eigen(x);
  RealVector f(es.values.size());
  for (long i = 0; i < f.size(); ++i) {
    const double lam = es.values(i);
    f(i) = lam > kZeroCut ? std::pow(lam, a) : 0.0;
  }
  return es.vectors * f.asDiagonal() * es.vectors.adjoint();
}

HermitianOperator matrix_power(const DensityMatrix& rho, double a) {
  return HermitianOperator(psd_power(rho.matrix(), a), 1e-8);
}

Matrix support_projector(const Matrix& x) { return psd_power(x, 0.0); }

SchmidtDecomposition schmidt_decompose(const Vector& v, long dim_a, long dim_b) {
  if (dim_a * dim_b != v.size()) {
    throw Error(ErrorKind::kShapeError, "Schmidt split does not match vector");
  }
  Matrix c(dim_a, dim_b);
  for (long i = 0; i < dim_a; ++i) {
    for (long j = 0; j < dim_b; ++j) c(i, j) = v(i * dim_b + j);
  }
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  const long r = svd.singularValues().size();
  for (long k = 0; k < r; ++k) {
    out.weights.push_back(svd.singularValues()(k) * svd.singularValues()(k));
  }
  out.vectors_a = svd.matrixU();
  out.vectors_b = svd.matrixV().conjugate();
  return out;
}

SchmidtDecomposition schmidt_decompose(const PureState& v, long dim_a,
                                       long dim_b) {
  return schmidt_decompose(v.vector(), dim_a, dim_b);
}

}  // namespace qsteg
