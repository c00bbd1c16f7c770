#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qsteg/channel.hpp"
#include "qsteg/codes.hpp"
#include "qsteg/measures.hpp"

namespace qsteg {

struct RateResult {
  double value = 0.0;  // max(raw, 0), bits
  double raw = 0.0;
  double argmax = 0.0;
  bool at_boundary = false;
  std::map<std::string, double> terms;
};

// Number of messages supported by a clamped rate: ⌊2^value⌋, at least 1.
long messages_from_rate(const RateResult& r);

// Eigenvalues with multiplicities, so that very large maximally mixed
// states can be described without building them.
struct Spectrum {
  std::vector<double> values;
  std::vector<double> multiplicity;

  static Spectrum of(const DensityMatrix& rho);
  static Spectrum flat(double log2_dim);  // I / 2^log2_dim
};

double renyi_entropy(const Spectrum& s, double a);

// min_w sup_{a∈(0,1)} H^a(ρ^w) − (4/a) log(2/ζ).
RateResult rate_cc_noiseless(const std::vector<Spectrum>& outputs, double zeta,
                             const OrderSearch& search = {});
RateResult rate_cc_noiseless(const std::vector<DensityMatrix>& outputs, double zeta,
                             const OrderSearch& search = {});

struct NoisyRate {
  RateResult messages;               // log M̄ = min_w log M̄_w
  RateResult key;                    // log K̄
  std::vector<double> per_message;   // clamped log M̄_w
};

// `side_outputs[w]` is σ_{XB^n}^w (per-symbol output states).
NoisyRate rate_cc_noisy(const std::vector<CqState>& side_outputs, double zeta, double xi,
                        double nu_tol = kDefaultNuTol, const OrderSearch& sup_search = {},
                        const OrderSearch& inf_search = default_negative_order_search());

// log₂ η_α(x), η_α(x) = 2^α / ((x+1)^α − (x−1)^α).
double log2_eta(double alpha, double x);
// Per-point objective of the Gaussian rate at order a.
double gaussian_objective(double nu0, double nu1, double n, double r, double zeta,
                          double a);
RateResult rate_gaussian(double nu0, double nu1, double n, double r, double zeta,
                         const OrderSearch& search = {});

enum class ProductMode { kNoiseless, kNoisy };

// `inputs` are the states of P on A^k, `m` the k-use degradation. In noisy
// mode `candidates[i]` lists cq states on B^k whose marginal must equal m(inputs[i]).
RateResult rate_product_structure(const std::vector<DensityMatrix>& inputs,
                                  const QuantumChannel& m, double delta, int n, int k,
                                  ProductMode mode = ProductMode::kNoiseless,
                                  const std::vector<std::vector<CqState>>& candidates = {});

struct SutherlandReport {
  double lhs = 0.0;              // sup_a H^a(ℳ^{c⊗n}(ℰ(I/M)))
  double a_star = 0.0;           // the supremum is the a → 0⁺ limit
  double rhs = 0.0;              // n(H(p) − δ)
  std::vector<double> single_use_weights;  // p_j
  std::vector<double> pj;        // P_J of the n-use code
  double pj_entropy = 0.0;
  double margin = 0.0;           // lhs − rhs
  bool holds = false;
};

SutherlandReport experiment_sutherland_bound(const QcCode& code, const QuantumChannel& m,
                                             int n, double delta);

struct RandomCodeReport {
  std::vector<double> samples;
  double mean = 0.0;
  double stderr_mean = 0.0;
  long rank_a = 0;   // rank tr_A(VV†)
  long rank_e = 0;   // rank tr_E(VV†)
  double bound = 0.0;
  bool holds = false;
};

RandomCodeReport experiment_random_code_entropy(long dim_a, int n, long m_dim,
                                                const QuantumChannel& m, int samples,
                                                std::uint64_t seed, double delta);

}  // namespace qsteg
