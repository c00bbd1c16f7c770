// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "qsteg/experiments.hpp"
#include "qsteg/fixtures.hpp"
#include "qsteg/random.hpp"
#include "qsteg/rates.hpp"
#include "qsteg/stego.hpp"
#include "qsteg/verify.hpp"

using namespace qsteg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s) {
    out.pass = false;
    out.detail += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

DensityMatrix ket(double a, double b) {
  Vector v(2);
  v << a, b;
  return DensityMatrix::from_pure(v / v.norm());
}

Outcome information_measures() {
  Rng rng(1);
  double worst = 0.0;
  const std::vector<double> orders{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, -0.5, -2.0};
  for (long d = 2; d <= 8; ++d) {
    const auto mixed = DensityMatrix::maximally_mixed(d);
    const auto rho = random_density(d, rng);
    const CqState product(random_pmf(3, rng), {rho, rho, rho});
    for (double a : orders) {
      worst = std::max(worst, std::abs(renyi_entropy(mixed, a) - std::log2(double(d))));
      worst = std::max(worst, std::abs(renyi_mi_up(product, a)));
      worst = std::max(worst, std::abs(renyi_mi_down(product, a)));
    }
  }
  return {worst <= 1e-9, "max deviation " + fmt("%.3g", worst)};
}

Outcome resolvability_trend() {
  const CqState sigma(Pmf::uniform(2), {ket(1, 0), ket(1, 1)});
  const int m = 2;
  std::vector<double> medians;
  std::string detail = "medians";
  bool decreasing = true;
  bool reliable = true;
  std::string reliability_note;
  const NoisyRate achievable = rate_cc_noisy({sigma}, 0.3, 0.3);
  for (int mk : {2, 8, 32, 128}) {
    std::vector<double> dist;
    double min_rel = 1.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto rc = build_resolvability_code(sigma, m, mk / m, derive_seed(2024, s));
      dist.push_back(rc.distance);
      min_rel = std::min(min_rel, rc.reliability);
    }
    medians.push_back(median(dist));
    detail += " " + fmt("%.4f", medians.back());
    if (medians.size() > 1 && !(medians.back() < medians[medians.size() - 2])) decreasing = false;
    // Reliability is only required when log M sits a full bit below the achievable rate.
    if (std::log2(double(m)) <= achievable.messages.raw - 1.0 && min_rel < 0.9) reliable = false;
  }
  if (std::log2(double(m)) > achievable.messages.raw - 1.0) {
    reliability_note = "; reliability clause not triggered (achievable log M = " +
                       fmt("%.3f", achievable.messages.raw) + ")";
  }
  return {decreasing && reliable, detail + reliability_note};
}

Outcome noiseless_end_to_end() {
  struct Demo {
    CcCode cover;
    QuantumChannel m;
    int mbar;
  };
  std::vector<Demo> demos;
  {
    const auto m = depolarizing(1.0);
    demos.push_back({make_cc_code({DensityMatrix::basis(2, 0)}, Povm({Matrix::Identity(2, 2)}), m, 1), m, 2});
  }
  {
    const auto m = tensor_power(dephasing(0.6), 2);
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    const Matrix hh = kron(h, h);
    std::vector<Matrix> dec;
    const Povm vote = majority_vote(2);
    for (const auto& e : vote.elements()) dec.push_back(hh * e * hh.adjoint());
    const auto pp = tensor(ket(1, 1), ket(1, 1)), mm = tensor(ket(1, -1), ket(1, -1));
    demos.push_back({make_cc_code({pp, mm}, Povm(dec), m, 2), m, 2});
  }
  {
    const auto m = tensor_power(depolarizing(0.3), 3);
    demos.push_back({make_cc_code({DensityMatrix::basis(8, 0), DensityMatrix::basis(8, 7)}, majority_vote(3), m, 3), m, 4});
  }
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < demos.size(); ++i) {
    const auto code = build_stego_cc_noiseless(demos[i].cover, demos[i].m, demos[i].mbar, 0.1, 7 + i);
    const auto& a = code.audit;
    const double bound = 1 - a.zeta_achieved - 2 * std::sqrt(a.zeta_achieved + a.eps_cover) - 1e-6;
    const bool good = a.distance <= a.zeta_achieved + 1e-12 && a.decode_probability >= bound;
    ok = ok && good;
    detail += (i ? "; " : "") + std::string("demo ") + std::to_string(i + 1) + " dist " + fmt("%.4f", a.distance) +
              " <= zeta " + fmt("%.4f", a.zeta_achieved) + ", decode " + fmt("%.4f", a.decode_probability) +
              " >= " + fmt("%.4f", bound);
  }
  return {ok, detail};
}

Outcome qc_cc_end_to_end() {
  bool ok = true;
  std::string detail;
  for (double p : {0.1, 0.25, 0.5}) {
    const auto m = tensor_power(bit_flip(p), 3);
    const auto cover = bit_flip_repetition_code(m);
    const auto code = build_stego_qc_cc(cover, m, 4, 0.1, 7);
    const bool a = code.split.gram_residual <= 1e-8 && code.split.polar_residual <= 1e-8;
    const double q = 1 - p;
    const std::vector<double> d{q * q * q, p * q * q, p * q * q, p * q * q};
    const double sum = d[0] + 3 * d[1];
    bool b = code.split.pj.size() == 4;
    for (std::size_t j = 0; b && j < 4; ++j) b = std::abs(code.split.pj[j] - d[j] / sum) <= 1e-10;
    bool c = true;
    if (p == 0.5) {
      c = code.cypher_messages == 4 && std::abs(code.hash_defect) <= 1e-9 && std::abs(code.cypher_decode - 1) <= 1e-9;
    }
    const double eps = 1 - cover.recovery_constant;
    const double bound = eps + code.zeta_achieved + (1 - cover.recovery_constant) + 1e-6;
    const bool dd = code.max_distance <= bound;
    ok = ok && a && b && c && dd;
    detail += (detail.empty() ? "" : "; ") + std::string("p=") + fmt("%g", p) + " (a)" + (a ? "ok" : "no") + " (b)" +
              (b ? "ok" : "no") + (p == 0.5 ? std::string(" (c)") + (c ? "ok" : "no") : "") + " (d) " +
              fmt("%.4f", code.max_distance) + "<=" + fmt("%.4f", bound);
  }
  return {ok, detail};
}

Outcome es_rs_end_to_end() {
  const auto m = tensor_product(identity_channel(2), dephasing(0.5));
  const auto cover = two_use_es_cover(m);
  const auto code = build_stego_es_rs(cover, m, 2, 0.1, 3);
  const double s = std::sqrt(code.eps_cover) + code.zeta_achieved;
  const double bound = 1 - s * s - 1e-6;
  const bool ok = code.fidelity >= bound && code.output_gap <= 1e-10 && code.cypher_messages == 2;
  return {ok, "fidelity " + fmt("%.12f", code.fidelity) + " >= " + fmt("%.6f", bound) + ", output gap " +
                  fmt("%.2g", code.output_gap)};
}

Outcome gentle_random() {
  const auto r = run_experiment_file(std::string(QSTEG_CONFIG_DIR) + "/verify-gentle.json");
  return {r.rows.size() == 100 && r.passed(),
          std::to_string(r.rows.size()) + " instances, " + std::to_string(r.failures()) + " violations"};
}

Outcome pj_bound_family() {
  bool ok = true;
  std::string detail;
  for (double p : {0.0, 0.1, 0.25}) {
    const auto m = tensor_power(bit_flip(p), 3);
    const auto cover = bit_flip_repetition_code(m);
    for (double delta : {0.2, 0.4}) {
      const double eps = 1 - cover.recovery_constant;
      std::string tag = "p=" + fmt("%g", p) + ",d=" + fmt("%g", delta) + ":";
      if (delta <= 2 * std::sqrt(eps)) {
        const auto r = verify_pj_minentropy_bound(cover, m, delta, true);
        ok = ok && r.holds;
        tag += r.holds ? "vacuous(clamped holds)" : "vacuous(clamped FAILS)";
      } else {
        const auto r = verify_pj_minentropy_bound(cover, m, delta);
        bool good = r.holds;
        if (eps <= 1e-12) good = good && std::abs(r.lhs - r.rhs) <= 1e-9;
        ok = ok && good;
        tag += (good ? "holds" : "FAILS") + std::string(eps <= 1e-12 ? "(equality " + fmt("%.2g", std::abs(r.lhs - r.rhs)) + ")" : "");
      }
      detail += (detail.empty() ? "" : " ") + tag;
    }
  }
  return {ok, detail};
}

// Two-stage dense scan of the order for the Gaussian rate objective over (0, 1]; the
// objective is continuous at a = 1, so the closure has the same supremum.
double gaussian_oracle(double n0, double n1) {
  const auto f = [&](double a) { return gaussian_objective(n0, n1, 1e6, 5e5, 1e-3, a); };
  const int points = 100000;
  double best = -INFINITY, arg = 0.5;
  for (int i = 1; i <= points; ++i) {
    const double a = static_cast<double>(i) / points;
    const double v = f(a);
    if (v > best) best = v, arg = a;
  }
  const double step = 1.0 / points;
  const double lo = std::max(1e-9, arg - step), hi = std::min(1.0, arg + step);
  for (int i = 0; i <= points; ++i) best = std::max(best, f(lo + (hi - lo) * i / points));
  return best;
}

Outcome gaussian_reproduction() {
  std::string grid = "[";
  std::vector<double> nus;
  for (int i = 0; i <= 8; ++i) {
    nus.push_back(1.0 + 0.25 * i);
    grid += (i ? ", " : "") + fmt("%g", nus.back());
  }
  grid += "]";
  const std::string cfg = R"({"kind": "rates.gaussian", "defaults": {"n": 1000000, "r": 500000, "zeta": 0.001},
    "grid": {"nu0": )" + grid + R"(, "nu1": )" + grid + "}}";
  const auto res = run_experiment(cfg);
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "qsteg_gaussian_rates.csv";
  if (FILE* f = std::fopen(out.c_str(), "w")) {
    std::fputs(res.csv().c_str(), f);
    std::fclose(f);
  }
  const std::size_t n = nus.size();
  std::vector<std::vector<double>> value(n, std::vector<double>(n));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = rate_gaussian(nus[i], nus[j], 1e6, 5e5, 1e-3);
      value[i][j] = r.value;
      worst = std::max(worst, std::abs(r.raw - gaussian_oracle(nus[i], nus[j])));
      const auto& row = res.rows[i * n + j];
      worst = std::max(worst, std::abs(std::stod(row[7]) - r.raw) / std::max(1.0, std::abs(r.raw)) * 1e-6);
    }
  }
  bool monotone = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + 1 < n && value[i + 1][j] < value[i][j]) monotone = false;
      if (j + 1 < n && value[i][j + 1] < value[i][j]) monotone = false;
    }
  }
  const bool zero = value[0][0] == 0.0;
  return {zero && monotone && worst <= 1e-4,
          std::to_string(n * n) + " points, rate(1,1)=" + fmt("%g", value[0][0]) + ", monotone " +
              (monotone ? "yes" : "no") + ", max oracle gap " + fmt("%.3g", worst) + " bits, csv " + out.string()};
}

Outcome random_code() {
  const auto rep = experiment_random_code_entropy(2, 3, 2, dephasing(0.5), 500, 2025, 0.5);
  return {rep.mean >= rep.bound, "mean " + fmt("%.4f", rep.mean) + " +- " + fmt("%.4f", rep.stderr_mean) +
                                     " >= bound " + fmt("%.4f", rep.bound)};
}

Outcome determinism() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(QSTEG_CONFIG_DIR)) {
    if (e.path().extension() == ".json") names.push_back(e.path().string());
  }
  std::sort(names.begin(), names.end());
  int same = 0;
  std::string diff;
  for (const auto& path : names) {
    RunOptions opts;
    opts.seed = 31337;
    const bool a = run_experiment_file(path).csv() == run_experiment_file(path).csv();
    const bool b = run_experiment_file(path, opts).csv() == run_experiment_file(path, opts).csv();
    if (a && b) {
      ++same;
    } else {
      diff += " " + std::filesystem::path(path).filename().string();
    }
  }
  return {same == static_cast<int>(names.size()) && !names.empty(),
          std::to_string(same) + "/" + std::to_string(names.size()) + " configs byte-identical" +
              (diff.empty() ? "" : "; differing:" + diff)};
}

}  // namespace

int main() {
  criterion(1, "information-measure suite", 5, information_measures);
  criterion(2, "resolvability Monte Carlo", 120, resolvability_trend);
  criterion(3, "noiseless CC stego end-to-end", 60, noiseless_end_to_end);
  criterion(4, "QC cover with CC cypher end-to-end", 60, qc_cc_end_to_end);
  criterion(5, "ES cover with shared-randomness end-to-end", 0, es_rs_end_to_end);
  criterion(6, "gentle composition verifier", 0, gentle_random);
  criterion(7, "P_J min-entropy verifier", 0, pj_bound_family);
  criterion(8, "Gaussian rate reproduction", 30, gaussian_reproduction);
  criterion(9, "random code entropy Monte Carlo", 180, random_code);
  criterion(10, "determinism", 0, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
