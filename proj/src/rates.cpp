#include "qsteg/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsteg/error.hpp"
#include "qsteg/stego.hpp"

namespace qsteg {

namespace {

RateResult finish(double raw, const OrderOptimum& opt) {
  RateResult r;
  r.raw = raw;
  r.value = std::max(raw, 0.0);
  r.argmax = opt.a;
  r.at_boundary = opt.at_boundary;
  return r;
}

void require_fraction(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorKind::kBadParameter, std::string(name) + " must lie in (0, 1)");
  }
}

int joint_distinct_count(const CqState& sigma, double tol) {
  // Eigenvalues of σ_X ⊗ σ_B are the products P(x)·λ_j.
  const auto lam = spectrum(sigma.marginal().matrix());
  std::vector<double> prods;
  for (double p : sigma.pmf().probs()) {
    for (double l : lam) prods.push_back(p * l);
  }
  return count_distinct(prods, tol);
}

std::vector<double> channel_weights(const QuantumChannel& ch) {
  // Eigenvalues of the Hilbert-Schmidt Gram matrix tr(F_j†F_k)/d are the
  // weights of the canonical (trace-orthogonal) Kraus representation.
  const long k = static_cast<long>(ch.num_kraus());
  Matrix g(k, k);
  for (long a = 0; a < k; ++a) {
    for (long b = 0; b < k; ++b) {
      g(a, b) = (ch.kraus()[a].adjoint() * ch.kraus()[b]).trace() /
                static_cast<double>(ch.dim_in());
    }
  }
  std::vector<double> w;
  for (double v : spectrum(g)) {
    if (v > kZeroCut) w.push_back(v);
  }
  return w;
}

// sup_{a∈(0,1)} H^a(ρ): H^a is nonincreasing in a, so the supremum is the
// a → 0⁺ limit, the von Neumann entropy.
double sup_renyi_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho); }

long operator_rank(const Matrix& x) {
  long r = 0;
  for (double v : spectrum(x)) r += v > 1e-10 ? 1 : 0;
  return r;
}

}  // namespace

long messages_from_rate(const RateResult& r) {
  if (r.value >= 62.0) return std::numeric_limits<long>::max();
  return std::max(1L, static_cast<long>(std::floor(std::exp2(r.value))));
}

Spectrum Spectrum::of(const DensityMatrix& rho) {
  Spectrum s;
  for (double v : spectrum(rho.matrix())) {
    s.values.push_back(v);
    s.multiplicity.push_back(1.0);
  }
  return s;
}

Spectrum Spectrum::flat(double log2_dim) {
  return Spectrum{{std::exp2(-log2_dim)}, {std::exp2(log2_dim)}};
}

double renyi_entropy(const Spectrum& s, double a) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw Error(ErrorKind::kInvalidOrder, "order a must be finite and nonzero");
  }
  // log₂ Σ m_i λ_i^{1+a} by log-sum-exp. The zero cut applies to the total
  // weight m_i λ_i of a level, so tiny eigenvalues of huge degeneracy count.
  std::vector<double> logs;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.values[i] > 0.0 && s.multiplicity[i] * s.values[i] > kZeroCut) {
      logs.push_back(std::log2(s.multiplicity[i]) + (1.0 + a) * std::log2(s.values[i]));
    }
  }
  if (logs.empty()) throw Error(ErrorKind::kInvalidState, "empty spectrum");
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp2(l - top);
  return -(top + std::log2(sum)) / a;
}

RateResult rate_cc_noiseless(const std::vector<Spectrum>& outputs, double zeta,
                             const OrderSearch& search) {
  require_fraction(zeta, "ζ");
  if (outputs.empty()) throw Error(ErrorKind::kBadParameter, "no cover outputs");
  const double penalty = 4.0 * std::log2(2.0 / zeta);
  RateResult best;
  for (std::size_t w = 0; w < outputs.size(); ++w) {
    const Spectrum& s = outputs[w];
    const OrderOptimum opt = sup_over_order(
        [&](double a) { return renyi_entropy(s, a) - penalty / a; }, search);
    if (w == 0 || opt.value < best.raw) {
      best = finish(opt.value, opt);
      best.terms["w"] = static_cast<double>(w);
      best.terms["entropy"] = renyi_entropy(s, opt.a);
      best.terms["penalty"] = penalty / opt.a;
    }
  }
  return best;
}

RateResult rate_cc_noiseless(const std::vector<DensityMatrix>& outputs, double zeta,
                             const OrderSearch& search) {
  std::vector<Spectrum> specs;
  for (const auto& rho : outputs) specs.push_back(Spectrum::of(rho));
  return rate_cc_noiseless(specs, zeta, search);
}

NoisyRate rate_cc_noisy(const std::vector<CqState>& side_outputs, double zeta, double xi,
                        double nu_tol, const OrderSearch& sup_search,
                        const OrderSearch& inf_search) {
  require_fraction(zeta, "ζ");
  require_fraction(xi, "ξ");
  if (side_outputs.empty()) throw Error(ErrorKind::kBadParameter, "no side states");
  const double msg_const = 4.0 * std::log2(12.0 / zeta);
  const double key_const = std::log2(12.0 / xi);
  NoisyRate out;
  for (std::size_t w = 0; w < side_outputs.size(); ++w) {
    const CqState& sigma = side_outputs[w];
    const double log_nu_joint = std::log2(joint_distinct_count(sigma, nu_tol));
    const double log_nu_out = std::log2(distinct_eigenvalue_count(sigma.marginal().matrix(), nu_tol));

    const OrderOptimum up = sup_over_order(
        [&](double a) { return renyi_mi_up(sigma, a) - (log_nu_joint + msg_const) / a; },
        sup_search);
    const double log_m = std::max(up.value, 0.0);
    out.per_message.push_back(log_m);

    const OrderOptimum down = inf_over_order(
        [&](double a) {
          return renyi_mi_down(sigma, a) + log_nu_out + (2.0 - 2.0 / a) * key_const;
        },
        inf_search);
    const double log_k = down.value - log_m + 1.0;

    if (w == 0 || up.value < out.messages.raw) {
      out.messages = finish(up.value, up);
      out.messages.terms["w"] = static_cast<double>(w);
      out.messages.terms["log_nu"] = log_nu_joint;
    }
    if (w == 0 || log_k > out.key.raw) {
      out.key = finish(log_k, down);
      out.key.terms["w"] = static_cast<double>(w);
      out.key.terms["log_nu"] = log_nu_out;
      out.key.terms["log_M_w"] = log_m;
    }
  }
  return out;
}

double log2_eta(double alpha, double x) {
  if (!(x >= 1.0)) {
    throw Error(ErrorKind::kInvalidSymplecticEigenvalue, "symplectic eigenvalue below 1");
  }
  return alpha - std::log2(std::pow(x + 1.0, alpha) - std::pow(x - 1.0, alpha));
}

double gaussian_objective(double nu0, double nu1, double n, double r, double zeta, double a) {
  const double mix = (n - r) * log2_eta(1.0 + a, nu0) + r * log2_eta(1.0 + a, nu1);
  return -mix / a - 4.0 * std::log2(2.0 / zeta) / a;
}

RateResult rate_gaussian(double nu0, double nu1, double n, double r, double zeta,
                         const OrderSearch& search) {
  if (!(nu0 >= 1.0) || !(nu1 >= 1.0)) {
    throw Error(ErrorKind::kInvalidSymplecticEigenvalue, "symplectic eigenvalue below 1");
  }
  require_fraction(zeta, "ζ");
  if (!(n >= 1.0) || r < 0.0 || r > n) {
    throw Error(ErrorKind::kBadParameter, "need n ≥ 1 and 0 ≤ r ≤ n");
  }
  const OrderOptimum opt = sup_over_order(
      [&](double a) { return gaussian_objective(nu0, nu1, n, r, zeta, a); }, search);
  RateResult res = finish(opt.value, opt);
  res.terms["penalty"] = 4.0 * std::log2(2.0 / zeta) / opt.a;
  return res;
}

RateResult rate_product_structure(const std::vector<DensityMatrix>& inputs,
                                  const QuantumChannel& m, double delta, int n, int k,
                                  ProductMode mode,
                                  const std::vector<std::vector<CqState>>& candidates) {
  if (k < 1 || n < 1 || n % k != 0) {
    throw Error(ErrorKind::kDivisibility, "n must be a positive multiple of k");
  }
  if (inputs.empty()) throw Error(ErrorKind::kBadParameter, "empty input family");
  if (mode == ProductMode::kNoisy && candidates.size() != inputs.size()) {
    throw Error(ErrorKind::kShapeError, "one candidate list per input state is required");
  }
  const double blocks = static_cast<double>(n / k);
  double best = kInfinity;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].dim() != m.dim_in()) {
      throw Error(ErrorKind::kShapeError, "input state does not fit the channel");
    }
    const DensityMatrix out = qsteg::apply(m, inputs[i]);
    double v = 0.0;
    if (mode == ProductMode::kNoiseless) {
      v = von_neumann_entropy(out);
    } else {
      if (candidates[i].empty()) throw Error(ErrorKind::kBadParameter, "empty candidate list");
      v = -kInfinity;
      for (const auto& sigma : candidates[i]) {
        if (sigma.dim() != out.dim() ||
            max_abs_entry(sigma.marginal().matrix() - out.matrix()) > 1e-8) {
          throw Error(ErrorKind::kSideStateMismatch, "candidate marginal differs from m(ρ)");
        }
        v = std::max(v, holevo_information(sigma));
      }
    }
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  RateResult r;
  r.raw = blocks * (best - delta);
  r.value = std::max(r.raw, 0.0);
  r.terms["per_block"] = best;
  r.terms["state"] = static_cast<double>(arg);
  return r;
}

SutherlandReport experiment_sutherland_bound(const QcCode& code, const QuantumChannel& m,
                                             int n, double delta) {
  if (n < 1) throw Error(ErrorKind::kBadParameter, "n must be positive");
  const QuantumChannel mn = tensor_power(m, n);
  if (mn.dim_in() != code.encoder.dim_out()) {
    throw Error(ErrorKind::kShapeError, "code does not live on n uses of the channel");
  }
  SutherlandReport rep;
  const KrausSplit split = split_correctable_kraus(code, mn);
  rep.pj = split.pj;
  rep.pj_entropy = shannon_entropy(rep.pj);
  rep.single_use_weights = channel_weights(m);

  const Matrix& v = code.encoder.matrix();
  const Matrix rho = v * v.adjoint() / static_cast<double>(code.messages);
  const DensityMatrix env(complementary(mn, rho), 1e-9);
  rep.lhs = sup_renyi_entropy(env);
  rep.a_star = 0.0;
  rep.rhs = n * (shannon_entropy(rep.single_use_weights) - delta);
  rep.margin = rep.lhs - rep.rhs;
  rep.holds = rep.margin >= -1e-9;
  return rep;
}

RandomCodeReport experiment_random_code_entropy(long dim_a, int n, long m_dim,
                                                const QuantumChannel& m, int samples,
                                                std::uint64_t seed, double delta) {
  if (n < 1 || samples < 1 || m_dim < 1) {
    throw Error(ErrorKind::kBadParameter, "n, samples and M must be positive");
  }
  if (m.dim_in() != dim_a || m.dim_out() != dim_a) {
    throw Error(ErrorKind::kShapeError, "channel must act on the dim_a system");
  }
  const double total = std::pow(static_cast<double>(dim_a), n);
  if (total > 256.0) throw Error(ErrorKind::kDimensionLimit, "dim_a^n exceeds 256");
  const long d = static_cast<long>(total);
  if (m_dim > d) throw Error(ErrorKind::kBadParameter, "M exceeds the code space");
  const QuantumChannel mn = tensor_power(m, n);

  RandomCodeReport rep;
  for (int s = 0; s < samples; ++s) {
    const Isometry v = haar_random_subspace(d, m_dim, derive_seed(seed, s));
    const Matrix rho = v.matrix() * v.matrix().adjoint() / static_cast<double>(m_dim);
    const DensityMatrix env(complementary(mn, rho), 1e-9);
    rep.samples.push_back(sup_renyi_entropy(env));
  }
  double sum = 0.0;
  for (double x : rep.samples) sum += x;
  rep.mean = sum / samples;
  if (samples > 1) {
    double ss = 0.0;
    for (double x : rep.samples) ss += (x - rep.mean) * (x - rep.mean);
    rep.stderr_mean = std::sqrt(ss / (samples - 1) / samples);
  }

  // Stinespring projector VV† of the single-use channel on A ⊗ E.
  const Matrix& iso = m.isometry().matrix();
  const Matrix proj = iso * iso.adjoint();
  const long de = iso.rows() / dim_a;
  rep.rank_a = operator_rank(partial_trace(proj, {dim_a, de}, {1}));
  rep.rank_e = operator_rank(partial_trace(proj, {dim_a, de}, {0}));
  rep.bound = n * (std::log2(static_cast<double>(std::min(rep.rank_a, rep.rank_e))) - delta);
  rep.holds = rep.mean >= rep.bound;
  return rep;
}

}  // namespace qsteg
