#include "qsteg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

void require_order(double a) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw Error(ErrorKind::kInvalidOrder, "order a must be finite and nonzero");
  }
}

double safe_eval(const std::function<double(double)>& f, double a) {
  const double v = f(a);
  return std::isfinite(v) ? v : -kInfinity;
}

}  // namespace

Pmf::Pmf(std::vector<double> probs, double tol) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorKind::kBadParameter, "empty distribution");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= -tol)) throw Error(ErrorKind::kBadParameter, "negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw Error(ErrorKind::kBadParameter, "probabilities do not sum to 1");
  }
  for (double& p : probs_) p = std::max(p, 0.0);
}

Pmf Pmf::uniform(std::size_t n) {
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

CqState::CqState(Pmf pmf, std::vector<DensityMatrix> states)
    : pmf_(std::move(pmf)), states_(std::move(states)) {
  if (states_.size() != pmf_.size()) {
    throw Error(ErrorKind::kShapeError, "pmf and state list differ in length");
  }
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw Error(ErrorKind::kShapeError, "cq branches differ in dimension");
    }
  }
}

DensityMatrix CqState::marginal() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (std::size_t x = 0; x < alphabet(); ++x) m += pmf_[x] * states_[x].matrix();
  return DensityMatrix(m, 1e-9);
}

DensityMatrix CqState::joint() const {
  const long d = dim();
  const long n = static_cast<long>(alphabet());
  Matrix m = Matrix::Zero(n * d, n * d);
  for (long x = 0; x < n; ++x) m.block(x * d, x * d, d, d) = pmf_[x] * states_[x].matrix();
  return DensityMatrix(m, 1e-9);
}

double log2_of(double x) { return std::log2(x); }

std::vector<double> spectrum(const Matrix& h) {
  const auto es = hermitian_eigen(h);
  return {es.values.data(), es.values.data() + es.values.size()};
}

double renyi_entropy_of_spectrum(const std::vector<double>& spec, double a) {
  require_order(a);
  double s = 0.0;
  for (double lam : spec) {
    if (lam > kZeroCut) s += std::pow(lam, 1.0 + a);
  }
  return -std::log2(s) / a;
}

double renyi_entropy(const DensityMatrix& rho, double a) {
  return renyi_entropy_of_spectrum(spectrum(rho.matrix()), a);
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > kZeroCut) h -= v * std::log2(v);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return shannon_entropy(spectrum(rho.matrix()));
}

double holevo_information(const CqState& sigma) {
  double h = von_neumann_entropy(sigma.marginal());
  for (std::size_t x = 0; x < sigma.alphabet(); ++x) {
    h -= sigma.pmf()[x] * von_neumann_entropy(sigma.states()[x]);
  }
  return h;
}

double renyi_mi_up(const CqState& sigma, double a) {
  require_order(a);
  const Matrix rb_half = psd_power(sigma.marginal().matrix(), a / 2.0);
  double total = 0.0;
  for (std::size_t x = 0; x < sigma.alphabet(); ++x) {
    const double p = sigma.pmf()[x];
    if (p <= 0.0) continue;
    const Matrix& rx = sigma.states()[x].matrix();
    const Matrix inner = rx * rb_half * psd_power(rx, -a) * rb_half;
    total += p * inner.trace().real();
  }
  return -std::log2(total) / a;
}

double renyi_mi_down(const CqState& sigma, double a) {
  require_order(a);
  // tr ρ^{1-a} σ^a as a sum of λ^{1-a} μ^a |<v|w>|^2: every term is nonnegative, so
  // negative orders do not amplify the rounding of two separately built powers.
  const auto marginal = hermitian_eigen(sigma.marginal().matrix());
  double total = 0.0;
  for (std::size_t x = 0; x < sigma.alphabet(); ++x) {
    const double p = sigma.pmf()[x];
    if (p <= 0.0) continue;
    const auto branch = hermitian_eigen(sigma.states()[x].matrix());
    const Matrix overlap = branch.vectors.adjoint() * marginal.vectors;
    double t = 0.0;
    for (long i = 0; i < overlap.rows(); ++i) {
      const double lam = branch.values(i);
      if (lam <= kZeroCut) continue;
      for (long j = 0; j < overlap.cols(); ++j) {
        const double mu = marginal.values(j);
        if (mu <= kZeroCut) continue;
        t += std::pow(lam, 1.0 - a) * std::pow(mu, a) * std::norm(overlap(i, j));
      }
    }
    total += p * t;
  }
  return -std::log2(total) / a;
}

namespace {

// Projector onto the strictly positive eigenspace of μρ − σ.
Matrix positive_part_projector(const Matrix& rho, const Matrix& sigma, double mu) {
  const auto es = hermitian_eigen(mu * rho - sigma);
  Matrix p = Matrix::Zero(rho.rows(), rho.cols());
  for (long i = 0; i < es.values.size(); ++i) {
    if (es.values(i) > 0.0) p += es.vectors.col(i) * es.vectors.col(i).adjoint();
  }
  return p;
}

double weight(const Matrix& q, const Matrix& rho) { return (q * rho).trace().real(); }

}  // namespace

NeymanPearsonTest neyman_pearson_test(const DensityMatrix& rho,
                                      const DensityMatrix& sigma, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::kBadParameter, "hypothesis-testing eps must lie in (0,1)");
  }
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::kShapeError, "dimension mismatch");
  const Matrix& r = rho.matrix();
  const Matrix& s = sigma.matrix();
  const double target = 1.0 - eps;

  // tr(P₊(μ)ρ) is nondecreasing in μ; bracket the crossing of 1 − ε.
  double lo = 0.0, hi = 1.0;
  Matrix p_hi = positive_part_projector(r, s, hi);
  for (int i = 0; i < 400 && weight(p_hi, r) < target; ++i) {
    lo = hi;
    hi *= 2.0;
    p_hi = positive_part_projector(r, s, hi);
  }
  Matrix p_lo = positive_part_projector(r, s, lo);
  for (int i = 0; i < 300 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    Matrix p_mid = positive_part_projector(r, s, mid);
    if (weight(p_mid, r) >= target) {
      hi = mid;
      p_hi = std::move(p_mid);
    } else {
      lo = mid;
      p_lo = std::move(p_mid);
    }
  }
  // Mix the two threshold tests so that tr Qρ hits 1 − ε exactly; the
  // difference P_hi − P_lo spans the boundary eigenspace.
  const double w_lo = weight(p_lo, r), w_hi = weight(p_hi, r);
  double t = 1.0;
  if (w_hi - w_lo > 0.0) t = std::clamp((target - w_lo) / (w_hi - w_lo), 0.0, 1.0);
  NeymanPearsonTest out;
  out.test = (1.0 - t) * p_lo + t * p_hi;
  out.type2 = std::max(weight(out.test, s), 0.0);
  out.divergence = out.type2 <= 1e-15 ? kInfinity : -std::log2(out.type2);
  out.threshold = hi;
  return out;
}

double hypothesis_testing_divergence(const DensityMatrix& rho,
                                     const DensityMatrix& sigma, double eps) {
  return neyman_pearson_test(rho, sigma, eps).divergence;
}

double smooth_min_entropy_classical(const std::vector<double>& p, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::kBadParameter, "smoothing parameter must lie in [0,1)");
  }
  std::vector<double> q(p);
  std::sort(q.begin(), q.end(), std::greater<>());
  double prefix = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    prefix += q[k];
    const double lam = (prefix - eps) / static_cast<double>(k + 1);
    const double next = k + 1 < q.size() ? q[k + 1] : 0.0;
    if (lam >= next) {
      if (lam <= 0.0) return kInfinity;
      return -std::log2(lam);
    }
  }
  return kInfinity;
}

double smooth_min_entropy_classical(const Pmf& p, double eps) {
  return smooth_min_entropy_classical(p.probs(), eps);
}

double smooth_min_entropy_quantum(const DensityMatrix& rho, double eps) {
  std::vector<double> spec = spectrum(rho.matrix());
  for (double& v : spec) v = std::max(v, 0.0);
  return smooth_min_entropy_classical(spec, eps);
}

OrderSearch default_negative_order_search() {
  OrderSearch s;
  s.lo = -8.0;
  s.hi = -0.01;
  s.grid_lo = -8.0;
  s.grid_hi = -0.01;
  s.log_spaced = true;
  s.open_ends = false;
  return s;
}

std::vector<double> order_grid(const OrderSearch& opts) {
  if (opts.points < 2 || !(opts.grid_lo < opts.grid_hi)) {
    throw Error(ErrorKind::kBadParameter, "order grid needs two or more increasing points");
  }
  std::vector<double> grid(opts.points);
  const double n1 = static_cast<double>(opts.points - 1);
  if (opts.log_spaced) {
    if (opts.grid_lo * opts.grid_hi <= 0.0) {
      throw Error(ErrorKind::kBadParameter, "log-spaced grid must not straddle 0");
    }
    const double sign = opts.grid_lo < 0 ? -1.0 : 1.0;
    const double l0 = std::log(std::abs(opts.grid_lo));
    const double l1 = std::log(std::abs(opts.grid_hi));
    for (int i = 0; i < opts.points; ++i) grid[i] = sign * std::exp(l0 + (l1 - l0) * i / n1);
    grid.front() = opts.grid_lo;
    grid.back() = opts.grid_hi;
  } else {
    for (int i = 0; i < opts.points; ++i) {
      grid[i] = opts.grid_lo + (opts.grid_hi - opts.grid_lo) * i / n1;
    }
  }
  return grid;
}

OrderOptimum sup_over_order(const std::function<double(double)>& f,
                            const OrderSearch& opts) {
  const auto grid = order_grid(opts);
  std::size_t best = 0;
  double best_val = -kInfinity;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = safe_eval(f, grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (!std::isfinite(best_val)) {
    throw Error(ErrorKind::kNoFiniteValue, "objective is not finite on the order grid");
  }
  const double range_lo = opts.open_ends ? opts.lo + opts.edge_margin : opts.lo;
  const double range_hi = opts.open_ends ? opts.hi - opts.edge_margin : opts.hi;
  double left = best == 0 ? range_lo : grid[best - 1];
  double right = best + 1 == grid.size() ? range_hi : grid[best + 1];
  left = std::max(left, range_lo);
  right = std::min(right, range_hi);

  OrderOptimum out{grid[best], best_val, false};
  auto consider = [&](double a, double v) {
    if (v > out.value) {
      out.value = v;
      out.a = a;
    }
  };
  consider(left, safe_eval(f, left));
  consider(right, safe_eval(f, right));

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = left, b = right;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = safe_eval(f, c), fd = safe_eval(f, d);
  for (int it = 0; it < 200 && b - a > opts.tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = safe_eval(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = safe_eval(f, d);
    }
    consider(c, fc);
    consider(d, fd);
  }
  const double span = range_hi - range_lo;
  const bool near_lo = std::abs(out.a - range_lo) <= 1e-6 * span;
  const bool near_hi = std::abs(out.a - range_hi) <= 1e-6 * span;
  out.at_boundary = near_lo || near_hi;
  if (opts.open_ends && out.at_boundary) {
    // The supremum over an open range is the one-sided limit at its end. Extrapolate
    // linearly from inside, but only where successive differences show the slope has
    // settled; a singular end keeps the best evaluated value.
    const double end = near_hi ? opts.hi : opts.lo;
    const double dir = near_hi ? -1.0 : 1.0;
    const double m = opts.edge_margin;
    const double f1 = safe_eval(f, end + dir * m);
    const double f2 = safe_eval(f, end + dir * 2 * m);
    const double f4 = safe_eval(f, end + dir * 4 * m);
    const double d1 = f1 - f2, d2 = f2 - f4;
    const double limit = f1 + d1;
    if (std::isfinite(limit) && std::isfinite(d2) &&
        std::abs(2 * d1 - d2) <= 1e-2 * std::abs(d2) + 1e-13 && limit >= out.value) {
      out.value = limit;
      out.a = end;
    }
  }
  return out;
}

OrderOptimum inf_over_order(const std::function<double(double)>& f,
                            const OrderSearch& opts) {
  auto neg = [&f](double a) { return -f(a); };
  OrderOptimum r = sup_over_order(neg, opts);
  r.value = -r.value;
  return r;
}

}  // namespace qsteg
