#include "qsteg/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

constexpr double kScoreTie = 1e-15;

// ‖P_W − U_M‖₁ for the pushforward of p under f.
double pushforward_distance(const std::vector<double>& p, const std::vector<int>& f,
                            int m, std::vector<double>& scratch) {
  scratch.assign(m, 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) scratch[f[x]] += p[x];
  double d = 0.0;
  const double u = 1.0 / m;
  for (double v : scratch) d += std::abs(v - u);
  return d;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

}  // namespace

HashEncoder encoder_from_function(const Pmf& p, const std::vector<int>& f,
                                  int messages, FallbackRow fallback) {
  if (messages < 1) throw Error(ErrorKind::kBadParameter, "M must be at least 1");
  if (f.size() != p.size()) throw Error(ErrorKind::kShapeError, "hash table size mismatch");
  HashEncoder enc;
  enc.alphabet = p.size();
  enc.messages = messages;
  enc.f = f;
  std::vector<double> pw(messages, 0.0);
  std::vector<int> preimage(messages, 0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (f[x] < 0 || f[x] >= messages) {
      throw Error(ErrorKind::kShapeError, "hash value out of range");
    }
    pw[f[x]] += p[x];
    ++preimage[f[x]];
  }
  enc.cond.assign(messages, std::vector<double>(p.size(), 0.0));
  for (int w = 0; w < messages; ++w) {
    auto& row = enc.cond[w];
    if (pw[w] > 0.0) {
      for (std::size_t x = 0; x < p.size(); ++x) {
        if (f[x] == w) row[x] = p[x] / pw[w];
      }
      continue;
    }
    enc.fallback_used = true;
    if (fallback == FallbackRow::kPreimageUniform && preimage[w] > 0) {
      for (std::size_t x = 0; x < p.size(); ++x) {
        if (f[x] == w) row[x] = 1.0 / preimage[w];
      }
    } else {
      for (std::size_t x = 0; x < p.size(); ++x) row[x] = p[x];
    }
  }
  enc.quality = measure_hash_quality(enc, p);
  return enc;
}

HashQuality measure_hash_quality(const HashEncoder& enc, const Pmf& p) {
  if (enc.alphabet != p.size()) throw Error(ErrorKind::kShapeError, "alphabet mismatch");
  const double qw = 1.0 / enc.messages;
  HashQuality q;
  std::vector<double> qx(p.size(), 0.0);
  for (int w = 0; w < enc.messages; ++w) {
    for (std::size_t x = 0; x < p.size(); ++x) {
      const double joint = qw * enc.cond[w][x];
      qx[x] += joint;
      if (enc.f[x] != w) q.error += joint;
    }
  }
  for (std::size_t x = 0; x < p.size(); ++x) q.defect += std::abs(qx[x] - p[x]);
  return q;
}

HashEncoder build_classical_hash(const Pmf& p, int messages, double eps,
                                 std::uint64_t seed, int attempts,
                                 const HashOptions& opts) {
  if (messages < 1) throw Error(ErrorKind::kBadParameter, "M must be at least 1");
  if (!(eps >= 0.0 && eps <= 2.0)) throw Error(ErrorKind::kBadParameter, "invalid ε");
  const std::size_t nx = p.size();
  const auto& probs = p.probs();
  HashSearch mode = opts.search;
  if (mode == HashSearch::kAuto) {
    mode = (nx <= 12 && messages <= 4) ? HashSearch::kExhaustive : HashSearch::kRandomFunction;
  }

  std::vector<double> scratch;
  std::vector<int> best(nx, 0);
  double best_score = pushforward_distance(probs, best, messages, scratch);
  std::string label;

  if (mode == HashSearch::kExhaustive) {
    label = "exhaustive";
    // Odometer over function tables in lexicographic order (f[0] most significant);
    // only strict improvements replace the incumbent.
    std::vector<int> f(nx, 0);
    while (best_score > kScoreTie) {
      long pos = static_cast<long>(nx) - 1;
      while (pos >= 0 && f[pos] == messages - 1) f[pos--] = 0;
      if (pos < 0) break;
      ++f[pos];
      const double s = pushforward_distance(probs, f, messages, scratch);
      if (s < best_score - kScoreTie) {
        best_score = s;
        best = f;
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::vector<int> f(nx);
    bool first = true;
    if (mode == HashSearch::kRandomFunction) {
      label = "random-function";
      std::uniform_int_distribution<int> pick(0, messages - 1);
      for (int t = 0; t < std::max(attempts, 1); ++t) {
        for (auto& v : f) v = pick(rng);
        const double s = pushforward_distance(probs, f, messages, scratch);
        if (first || s < best_score - kScoreTie) {
          best_score = s;
          best = f;
          first = false;
        }
      }
    } else {
      label = "two-universal";
      long prime = static_cast<long>(std::max<std::size_t>(nx, messages));
      while (!is_prime(prime)) ++prime;
      std::uniform_int_distribution<long> pa(1, std::max(prime - 1, 1L));
      std::uniform_int_distribution<long> pb(0, prime - 1);
      for (int t = 0; t < std::max(attempts, 1); ++t) {
        const long a = pa(rng), b = pb(rng);
        for (std::size_t x = 0; x < nx; ++x) {
          f[x] = static_cast<int>(((a * static_cast<long>(x) + b) % prime) % messages);
        }
        const double s = pushforward_distance(probs, f, messages, scratch);
        if (first || s < best_score - kScoreTie) {
          best_score = s;
          best = f;
          first = false;
        }
      }
    }
  }
  HashEncoder enc = encoder_from_function(p, best, messages, opts.fallback);
  enc.search = label;
  enc.within_tolerance = enc.quality.defect <= eps + 1e-12;
  return enc;
}

QuantumHashCode build_quantum_hash(const DensityMatrix& rho, int messages,
                                   double eps, std::uint64_t seed, int attempts,
                                   const HashOptions& opts) {
  const auto es = hermitian_eigen(rho.matrix());
  const long d = rho.dim();
  std::vector<double> spec(d);
  double total = 0.0;
  for (long i = 0; i < d; ++i) {
    spec[i] = std::max(es.values(i), 0.0);
    total += spec[i];
  }
  for (double& v : spec) v /= total;
  const Pmf p(spec, 1e-9);
  HashEncoder enc = build_classical_hash(p, messages, eps, seed, attempts, opts);

  std::vector<Matrix> proj(d);
  for (long x = 0; x < d; ++x) proj[x] = es.vectors.col(x) * es.vectors.col(x).adjoint();
  std::vector<DensityMatrix> g;
  std::vector<Matrix> lambda(messages, Matrix::Zero(d, d));
  Matrix avg = Matrix::Zero(d, d);
  for (int w = 0; w < messages; ++w) {
    Matrix gw = Matrix::Zero(d, d);
    for (long x = 0; x < d; ++x) gw += enc.cond[w][x] * proj[x];
    g.emplace_back(gw, 1e-9);
    avg += gw / messages;
  }
  for (long x = 0; x < d; ++x) lambda[enc.f[x]] += proj[x];
  QuantumHashCode code{messages, std::move(g), Povm(std::move(lambda)), std::move(enc),
                       es.vectors, spec, 0.0, 0.0};
  code.defect = trace_norm(avg - rho.matrix());
  double succ = 0.0;
  for (int w = 0; w < messages; ++w) {
    succ += (code.povm[w] * code.g[w].matrix()).trace().real() / messages;
  }
  code.success = succ;
  return code;
}

}  // namespace qsteg
