#pragma once

#include <cstdint>
#include <vector>

#include "qsteg/core.hpp"

namespace qsteg {

inline constexpr double kCptpTol = 1e-9;

class Isometry {
 public:
  Isometry() : data_(Matrix::Identity(1, 1)) {}
  explicit Isometry(const Matrix& data, double tol = kCptpTol);

  long dim_in() const { return data_.cols(); }
  long dim_out() const { return data_.rows(); }
  const Matrix& matrix() const { return data_; }

 private:
  Matrix data_;
};

// CPTP map stored as a Kraus family F_j (dim_out × dim_in).
class QuantumChannel {
 public:
  // Identity on a one-dimensional space.
  QuantumChannel() : kraus_{Matrix::Identity(1, 1)} {}
  explicit QuantumChannel(std::vector<Matrix> kraus, double tol = kCptpTol);

  long dim_in() const { return kraus_.front().cols(); }
  long dim_out() const { return kraus_.front().rows(); }
  std::size_t num_kraus() const { return kraus_.size(); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  // V = Σ_j F_j ⊗ |j⟩_E, output ordered (out, E).
  const Isometry& isometry() const { return isometry_; }

 private:
  std::vector<Matrix> kraus_;
  Isometry isometry_;
};

// Σ_j F_j ρ F_j† with no positivity or trace checks.
Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho);
Matrix apply(const QuantumChannel& ch, const Matrix& rho);
DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho);

QuantumChannel tensor_power(const QuantumChannel& ch, int n,
                            long max_dim = kDefaultMaxDim);
QuantumChannel tensor_product(const QuantumChannel& a, const QuantumChannel& b,
                              long max_dim = kDefaultMaxDim);
// outer ∘ inner.
QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner);

Isometry isometric_extension(const QuantumChannel& ch);
// tr_out(VρV†), entries tr(F_j ρ F_k†).
Matrix complementary(const QuantumChannel& ch, const Matrix& rho);
DensityMatrix complementary(const QuantumChannel& ch, const DensityMatrix& rho);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

QuantumChannel identity_channel(long dim);
// (1−p)ρ + p·I/2 on a qubit.
QuantumChannel depolarizing(double p);
// (1−p)ρ + p·ZρZ; Kraus {√(1−p) I, √p Z}.
QuantumChannel dephasing(double p);
// Kraus {√(1−p) I, √p X}.
QuantumChannel bit_flip(double p);
QuantumChannel amplitude_damping(double gamma);
QuantumChannel unitary_channel(const Matrix& u);
// Partial trace onto the `keep` subsystems; Kraus t selects the traced digits t.
QuantumChannel trace_out(const std::vector<long>& dims, const std::vector<long>& keep);

// Column span of a complex Gaussian matrix, orthonormalized by QR with the
// phases of R's diagonal absorbed into Q.
Isometry haar_random_subspace(long dim_ambient, long m, std::uint64_t seed);

}  // namespace qsteg
