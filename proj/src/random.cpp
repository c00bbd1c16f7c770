#include "qsteg/random.hpp"

#include "qsteg/error.hpp"

namespace qsteg {

Matrix random_ginibre(long rows, long cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix g(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

DensityMatrix random_density(long dim, Rng& rng, long rank) {
  const Matrix g = random_ginibre(dim, rank > 0 ? rank : dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho, 1e-9);
}

Vector random_pure(long dim, Rng& rng) {
  Vector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

QuantumChannel random_channel(long dim_in, long dim_out, long kraus, Rng& rng) {
  if (dim_out * kraus < dim_in) {
    throw Error(ErrorKind::kBadParameter, "too few Kraus operators for an isometry");
  }
  const Isometry v = haar_random_subspace(dim_out * kraus, dim_in, rng());
  std::vector<Matrix> ops;
  // Row r·K + j of V = Σ F_j ⊗ |j⟩ belongs to F_j.
  for (long j = 0; j < kraus; ++j) {
    Matrix f(dim_out, dim_in);
    for (long r = 0; r < dim_out; ++r) f.row(r) = v.matrix().row(r * kraus + j);
    ops.push_back(f);
  }
  return QuantumChannel(std::move(ops), 1e-8);
}

Povm random_povm(long dim, std::size_t outcomes, Rng& rng) {
  std::vector<Matrix> a;
  Matrix s = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < outcomes; ++i) {
    const Matrix g = random_ginibre(dim, dim, rng);
    a.push_back(g * g.adjoint());
    s += a.back();
  }
  const Matrix root = psd_power(s, -0.5);
  for (auto& e : a) e = root * e * root;
  return Povm(std::move(a), 1e-8);
}

Pmf random_pmf(std::size_t size, Rng& rng) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> p(size);
  double total = 0.0;
  for (auto& x : p) total += (x = draw(rng));
  for (auto& x : p) x /= total;
  return Pmf(p, 1e-9);
}

}  // namespace qsteg
