#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qsteg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kStateTol = 1e-10;
inline constexpr double kPureNormTol = 1e-12;
inline constexpr double kPovmTol = 1e-9;
inline constexpr double kZeroCut = 1e-12;
inline constexpr double kDefaultNuTol = 1e-8;
inline constexpr long kDefaultMaxDim = 4096;

// Positive unit-trace Hermitian operator. Validated on construction and
// immutable afterwards; the stored matrix is exactly Hermitian.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& data, double tol = kStateTol);

  static DensityMatrix maximally_mixed(long dim);
  static DensityMatrix basis(long dim, long index);
  static DensityMatrix from_pure(const Vector& v);
  // (1/M) Σ_i |i⟩⟨i| ⊗ |i⟩⟨i|.
  static DensityMatrix classically_correlated(long m);

  long dim() const { return data_.rows(); }
  const Matrix& matrix() const { return data_; }

 private:
  Matrix data_;
};

class PureState {
 public:
  explicit PureState(const Vector& data, double tol = kPureNormTol);

  static PureState basis(long dim, long index);
  // (1/√M) Σ_i |i⟩ ⊗ |i⟩.
  static PureState maximally_entangled(long m);

  long dim() const { return data_.size(); }
  const Vector& vector() const { return data_; }
  DensityMatrix density() const;

 private:
  Vector data_;
};

class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& data, double tol = kHermTol);

  long dim() const { return data_.rows(); }
  const Matrix& matrix() const { return data_; }

 private:
  Matrix data_;
};

class Povm {
 public:
  // The one-outcome measurement on a one-dimensional space.
  Povm() : elements_{Matrix::Identity(1, 1)} {}
  explicit Povm(std::vector<Matrix> elements, double tol = kPovmTol);

  std::size_t size() const { return elements_.size(); }
  long dim() const { return elements_.front().rows(); }
  const Matrix& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Matrix>& elements() const { return elements_; }

 private:
  std::vector<Matrix> elements_;
};

struct Eigensystem {
  RealVector values;  // ascending unless the input was diagonal
  Matrix vectors;     // columns
};

// Diagonal inputs keep the standard basis in index order, so that
// eigenbasis-derived objects are reproducible.
Eigensystem hermitian_eigen(const Matrix& h);

bool is_hermitian(const Matrix& m, double tol = kHermTol);
double max_abs_entry(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
long product(const std::vector<long>& dims);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b,
                     long max_dim = kDefaultMaxDim);

// Subsystems are ordered with system 0 most significant. `keep` lists the
// subsystems retained, in the order they should appear in the result.
Matrix partial_trace(const Matrix& rho, const std::vector<long>& dims,
                     const std::vector<long>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<long>& dims,
                            const std::vector<long>& keep);

// Reorders the tensor factors of a vector: result factor i is input factor perm[i].
Vector permute_systems(const Vector& v, const std::vector<long>& dims,
                       const std::vector<long>& perm);
Matrix permute_systems(const Matrix& op, const std::vector<long>& dims,
                       const std::vector<long>& perm);
// Applies `op` (d_out × dims[index]) to one tensor factor of `v`.
Vector apply_local(const Matrix& op, const Vector& v,
                   const std::vector<long>& dims, long index);

double trace_norm(const Matrix& x);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Σ √λ_i |i⟩_R ⊗ |e_i⟩ with the reference first. With trim_to_rank the
// reference keeps only the eigenvectors above the zero cut.
PureState purify(const DensityMatrix& rho, bool trim_to_rank = false);

int count_distinct(std::vector<double> values, double tol = kDefaultNuTol);
int distinct_eigenvalue_count(const Matrix& x, double tol = kDefaultNuTol);

// Functional calculus on a positive semidefinite operator; eigenvalues at or
// below kZeroCut map to 0 for every exponent (pseudo-inverse convention).
Matrix psd_power(const Matrix& x, double a);
HermitianOperator matrix_power(const DensityMatrix& rho, double a);
Matrix support_projector(const Matrix& x);

struct SchmidtDecomposition {
  std::vector<double> weights;  // squared coefficients, descending
  Matrix vectors_a;             // column x is |α_x⟩
  Matrix vectors_b;             // column x is |β_x⟩
};

SchmidtDecomposition schmidt_decompose(const Vector& v, long dim_a, long dim_b);
SchmidtDecomposition schmidt_decompose(const PureState& v, long dim_a,
                                       long dim_b);

}  // namespace qsteg
