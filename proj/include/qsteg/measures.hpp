#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "qsteg/core.hpp"

namespace qsteg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Pmf {
 public:
  explicit Pmf(std::vector<double> probs, double tol = 1e-10);

  static Pmf uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Σ_x P(x)|x⟩⟨x| ⊗ ρ^x.
class CqState {
 public:
  CqState(Pmf pmf, std::vector<DensityMatrix> states);

  const Pmf& pmf() const { return pmf_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  std::size_t alphabet() const { return states_.size(); }
  long dim() const { return states_.front().dim(); }
  // Σ_x P(x) ρ^x.
  DensityMatrix marginal() const;
  // Block-diagonal operator on X ⊗ B.
  DensityMatrix joint() const;

 private:
  Pmf pmf_;
  std::vector<DensityMatrix> states_;
};

double log2_of(double x);
std::vector<double> spectrum(const Matrix& h);

// Entropies and Rényi quantities are in bits. Order a means α = 1 + a.
double renyi_entropy(const DensityMatrix& rho, double a);
double renyi_entropy_of_spectrum(const std::vector<double>& spec, double a);
double von_neumann_entropy(const DensityMatrix& rho);
double shannon_entropy(const std::vector<double>& p);
double holevo_information(const CqState& sigma);

double renyi_mi_up(const CqState& sigma, double a);
double renyi_mi_down(const CqState& sigma, double a);

struct NeymanPearsonTest {
  Matrix test;         // 0 ≤ Q ≤ I with tr Qρ = 1 − ε
  double type2;        // tr Qσ
  double divergence;   // −log₂ tr Qσ, kInfinity when tr Qσ vanishes
  double threshold;    // μ with Q built from the positive part of μρ − σ
};

NeymanPearsonTest neyman_pearson_test(const DensityMatrix& rho,
                                      const DensityMatrix& sigma, double eps);
double hypothesis_testing_divergence(const DensityMatrix& rho,
                                     const DensityMatrix& sigma, double eps);

// Cap-and-spill: −log₂ λ* with λ* = min{λ : Σ max(P(x) − λ, 0) ≤ ε}.
double smooth_min_entropy_classical(const std::vector<double>& p, double eps);
double smooth_min_entropy_classical(const Pmf& p, double eps);
double smooth_min_entropy_quantum(const DensityMatrix& rho, double eps);

struct OrderSearch {
  double lo = 0.0;         // open interval end (or closed end when !open_ends)
  double hi = 1.0;
  double grid_lo = 0.005;
  double grid_hi = 0.995;
  int points = 199;
  bool log_spaced = false;  // spacing uniform in log|a|; grid must not straddle 0
  bool open_ends = true;    // refinement may extend from the grid toward lo/hi
  double edge_margin = 1e-6;  // open ends are searched up to lo + margin, hi - margin
  double tol = 1e-10;
};

OrderSearch default_negative_order_search();

struct OrderOptimum {
  double a = 0.0;
  double value = 0.0;
  bool at_boundary = false;  // optimum sits at an end of the searched range
};
// When the optimum is at an open end and the objective is smooth there, value is the
// extrapolated one-sided limit and a is the end itself.

std::vector<double> order_grid(const OrderSearch& opts);
OrderOptimum sup_over_order(const std::function<double(double)>& f,
                            const OrderSearch& opts = {});
OrderOptimum inf_over_order(const std::function<double(double)>& f,
                            const OrderSearch& opts);

}  // namespace qsteg
