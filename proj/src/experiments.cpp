#include "qsteg/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "qsteg/error.hpp"
#include "qsteg/fixtures.hpp"
#include "qsteg/random.hpp"
#include "qsteg/rates.hpp"
#include "qsteg/stego.hpp"
#include "qsteg/verify.hpp"

namespace qsteg {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorKind::kConfig, what); }

const json& need(const json& p, const std::string& key) {
  if (!p.contains(key)) bad_config("missing parameter '" + key + "'");
  return p.at(key);
}

double num(const json& p, const std::string& key) { return need(p, key).get<double>(); }
double num(const json& p, const std::string& key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}
long integer(const json& p, const std::string& key) { return need(p, key).get<long>(); }
long integer(const json& p, const std::string& key, long fallback) {
  return p.contains(key) ? p.at(key).get<long>() : fallback;
}

// ---- fixture language ----------------------------------------------------

Complex amplitude(const json& a) {
  if (a.is_number()) return Complex(a.get<double>(), 0.0);
  if (a.is_array() && a.size() == 2) return Complex(a[0].get<double>(), a[1].get<double>());
  bad_config("complex entries are numbers or [re, im] pairs");
}

Matrix matrix_from(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) bad_config("matrix must be a list of rows");
  const long r = static_cast<long>(rows.size());
  const long c = static_cast<long>(rows[0].size());
  Matrix m(r, c);
  for (long i = 0; i < r; ++i) {
    if (static_cast<long>(rows[i].size()) != c) bad_config("ragged matrix");
    for (long j = 0; j < c; ++j) m(i, j) = amplitude(rows[i][j]);
  }
  return m;
}

DensityMatrix qubit_letter(char ch) {
  const double h = 1.0 / std::sqrt(2.0);
  Vector v(2);
  switch (ch) {
    case '0': v << 1.0, 0.0; break;
    case '1': v << 0.0, 1.0; break;
    case '+': v << h, h; break;
    case '-': v << h, -h; break;
    default: bad_config(std::string("unknown qubit letter '") + ch + "'");
  }
  return DensityMatrix::from_pure(v);
}

DensityMatrix parse_state(const json& s) {
  if (s.is_string()) {
    const std::string t = s.get<std::string>();
    if (t.empty()) bad_config("empty state string");
    DensityMatrix rho = qubit_letter(t[0]);
    for (std::size_t i = 1; i < t.size(); ++i) rho = tensor(rho, qubit_letter(t[i]));
    return rho;
  }
  if (!s.is_object()) bad_config("state must be a string or an object");
  if (s.contains("basis")) return DensityMatrix::basis(integer(s, "dim", 2), s.at("basis").get<long>());
  if (s.contains("mixed")) return DensityMatrix::maximally_mixed(s.at("mixed").get<long>());
  if (s.contains("phi")) return PureState::maximally_entangled(s.at("phi").get<long>()).density();
  if (s.contains("pure")) {
    const json& a = s.at("pure");
    Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(i) = amplitude(a[i]);
    return DensityMatrix::from_pure(v / v.norm());
  }
  if (s.contains("matrix")) return DensityMatrix(matrix_from(s.at("matrix")), 1e-9);
  if (s.contains("product")) {
    const json& parts = s.at("product");
    if (!parts.is_array() || parts.empty()) bad_config("empty product state");
    DensityMatrix rho = parse_state(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) rho = tensor(rho, parse_state(parts[i]));
    return rho;
  }
  bad_config("unrecognized state spec " + s.dump());
}

std::vector<DensityMatrix> parse_states(const json& list) {
  if (!list.is_array()) bad_config("expected a list of states");
  std::vector<DensityMatrix> out;
  for (const auto& s : list) out.push_back(parse_state(s));
  return out;
}

QuantumChannel parse_channel(const json& c) {
  if (!c.is_object()) bad_config("channel must be an object");
  if (c.contains("product")) {
    const json& parts = c.at("product");
    if (!parts.is_array() || parts.empty()) bad_config("empty channel product");
    QuantumChannel ch = parse_channel(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) ch = tensor_product(ch, parse_channel(parts[i]));
    return ch;
  }
  if (c.contains("compose")) {
    const json& parts = c.at("compose");
    if (!parts.is_array() || parts.size() != 2) bad_config("compose takes [outer, inner]");
    return compose(parse_channel(parts[0]), parse_channel(parts[1]));
  }
  const std::string kind = need(c, "kind").get<std::string>();
  QuantumChannel ch;
  if (kind == "identity") {
    ch = identity_channel(integer(c, "dim", 2));
  } else if (kind == "depolarizing") {
    ch = depolarizing(num(c, "p"));
  } else if (kind == "dephasing") {
    ch = dephasing(num(c, "p"));
  } else if (kind == "bit_flip") {
    ch = bit_flip(num(c, "p"));
  } else if (kind == "amplitude_damping") {
    ch = amplitude_damping(num(c, "gamma"));
  } else if (kind == "single_flip") {
    ch = single_flip_channel(num(c, "q"));
  } else if (kind == "unitary") {
    ch = unitary_channel(matrix_from(need(c, "matrix")));
  } else if (kind == "kraus") {
    std::vector<Matrix> ops;
    for (const auto& m : need(c, "ops")) ops.push_back(matrix_from(m));
    ch = QuantumChannel(std::move(ops));
  } else if (kind == "trace_out") {
    ch = trace_out(need(c, "dims").get<std::vector<long>>(), need(c, "keep").get<std::vector<long>>());
  } else {
    bad_config("unknown channel kind '" + kind + "'");
  }
  const long n = integer(c, "n", 1);
  return n == 1 ? ch : tensor_power(ch, static_cast<int>(n));
}

Povm parse_povm(const json& p) {
  if (!p.is_object()) bad_config("POVM must be an object");
  const std::string kind = need(p, "kind").get<std::string>();
  if (kind == "majority") {
    const int n = static_cast<int>(integer(p, "n"));
    Povm vote = majority_vote(n);
    if (p.value("basis", std::string("z")) == "x") {
      Matrix h(2, 2);
      h << 1.0, 1.0, 1.0, -1.0;
      h /= std::sqrt(2.0);
      Matrix hn = Matrix::Identity(1, 1);
      for (int i = 0; i < n; ++i) hn = kron(hn, h);
      std::vector<Matrix> rotated;
      for (const auto& e : vote.elements()) rotated.push_back(hn * e * hn.adjoint());
      vote = Povm(std::move(rotated));
    }
    return vote;
  }
  if (kind == "basis") {
    const long d = integer(p, "dim");
    std::vector<Matrix> elems;
    for (long i = 0; i < d; ++i) elems.push_back(DensityMatrix::basis(d, i).matrix());
    return Povm(std::move(elems));
  }
  if (kind == "trivial") return Povm({Matrix::Identity(integer(p, "dim"), integer(p, "dim"))});
  if (kind == "elements") {
    std::vector<Matrix> elems;
    for (const auto& m : need(p, "ops")) elems.push_back(matrix_from(m));
    return Povm(std::move(elems), 1e-8);
  }
  bad_config("unknown POVM kind '" + kind + "'");
}

CcCode parse_cc_cover(const json& c, const QuantumChannel& warden, int uses) {
  return make_cc_code(parse_states(need(c, "codewords")), parse_povm(need(c, "decoder")), warden,
                      uses);
}

QcCode parse_qc_cover(const json& c, const QuantumChannel& warden) {
  const std::string code = need(c, "code").get<std::string>();
  if (code != "bit-flip-3") bad_config("unknown QC cover '" + code + "'");
  std::vector<std::size_t> corr = kBitFlipCorrectable;
  if (c.contains("correctable")) corr = c.at("correctable").get<std::vector<std::size_t>>();
  return bit_flip_repetition_code(warden, corr);
}

CqState parse_cq(const json& c) {
  return CqState(Pmf(need(c, "pmf").get<std::vector<double>>(), 1e-9),
                 parse_states(need(c, "states")));
}

OrderSearch negative_search(const json& p) {
  OrderSearch s = default_negative_order_search();
  s.lo = s.grid_lo = -num(p, "a_max", 8.0);
  s.hi = s.grid_hi = -num(p, "a_min", 0.01);
  return s;
}

// ---- output --------------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> ok;
};

struct Cell {
  std::string text;
  Cell(double x) : text(csv_number(x)) {}
  Cell(int x) : text(std::to_string(x)) {}
  Cell(long x) : text(std::to_string(x)) {}
  Cell(std::size_t x) : text(std::to_string(x)) {}
  Cell(bool x) : text(x ? "1" : "0") {}
  Cell(const char* s) : text(s) {}
  Cell(std::string s) : text(std::move(s)) {}
};

void add_row(Table& t, std::vector<Cell> cells, bool ok) {
  if (cells.size() != t.columns.size()) {
    throw Error(ErrorKind::kShapeError, "row width does not match the header");
  }
  std::vector<std::string> row;
  for (auto& c : cells) row.push_back(std::move(c.text));
  t.rows.push_back(std::move(row));
  t.ok.push_back(ok);
}

std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_number(v[i]);
  return s;
}

// ---- experiment kinds -----------------------------------------------------

using Runner = std::function<void(const json& p, std::uint64_t seed, long point, Table& t)>;

struct Kind {
  std::vector<std::string> columns;
  Runner run;
};

void run_rates_cc_noiseless(const json& p, std::uint64_t, long point, Table& t) {
  const double zeta = num(p, "zeta");
  std::vector<Spectrum> specs;
  const bool mapped = p.contains("channel");
  const QuantumChannel ch = mapped ? parse_channel(p.at("channel")) : QuantumChannel();
  for (const auto& o : need(p, "outputs")) {
    if (o.is_object() && o.contains("flat")) {
      specs.push_back(Spectrum::flat(o.at("flat").get<double>()));
    } else {
      const DensityMatrix rho = parse_state(o);
      specs.push_back(Spectrum::of(mapped ? qsteg::apply(ch, rho) : rho));
    }
  }
  const RateResult r = rate_cc_noiseless(specs, zeta);
  add_row(t, {point, zeta, r.value, r.raw, r.argmax, r.at_boundary, messages_from_rate(r)}, true);
}

void run_rates_cc_noisy(const json& p, std::uint64_t, long point, Table& t) {
  const double zeta = num(p, "zeta");
  const double xi = num(p, "xi");
  const double tol = num(p, "nu_tol", kDefaultNuTol);
  std::vector<CqState> side;
  for (const auto& s : need(p, "side")) side.push_back(parse_cq(s));
  if (p.contains("channel")) {
    const QuantumChannel ch = parse_channel(p.at("channel"));
    for (auto& s : side) {
      std::vector<DensityMatrix> outs;
      for (const auto& rho : s.states()) outs.push_back(qsteg::apply(ch, rho));
      s = CqState(s.pmf(), outs);
    }
  }
  const NoisyRate r = rate_cc_noisy(side, zeta, xi, tol, {}, negative_search(p));
  add_row(t,
          {point, zeta, xi, tol, r.messages.value, r.messages.raw, r.messages.argmax, r.key.value,
           r.key.raw, r.key.argmax, r.key.at_boundary},
          true);
}

void run_rates_gaussian(const json& p, std::uint64_t, long point, Table& t) {
  const double nu0 = num(p, "nu0"), nu1 = num(p, "nu1"), n = num(p, "n"), zeta = num(p, "zeta");
  const double r = num(p, "r", n / 2.0);
  const RateResult res = rate_gaussian(nu0, nu1, n, r, zeta);
  add_row(t, {point, nu0, nu1, n, r, zeta, res.value, res.raw, res.argmax, res.at_boundary}, true);
}

void run_rates_product(const json& p, std::uint64_t, long point, Table& t) {
  const auto states = parse_states(need(p, "states"));
  const QuantumChannel ch = parse_channel(need(p, "channel"));
  const std::string mode = p.value("mode", std::string("noiseless"));
  std::vector<std::vector<CqState>> cands;
  ProductMode pm = ProductMode::kNoiseless;
  if (mode == "noisy") {
    pm = ProductMode::kNoisy;
    for (const auto& list : need(p, "candidates")) {
      std::vector<CqState> c;
      for (const auto& s : list) c.push_back(parse_cq(s));
      cands.push_back(std::move(c));
    }
  } else if (mode != "noiseless") {
    bad_config("mode must be 'noiseless' or 'noisy'");
  }
  const int n = static_cast<int>(integer(p, "n"));
  const int k = static_cast<int>(integer(p, "k", 1));
  const double delta = num(p, "delta", 0.0);
  const RateResult r = rate_product_structure(states, ch, delta, n, k, pm, cands);
  add_row(t,
          {point, n, k, delta, mode, r.value, r.raw, r.terms.at("per_block"),
           static_cast<long>(r.terms.at("state"))},
          true);
}

void run_simulate_cc_noiseless(const json& p, std::uint64_t seed, long point, Table& t) {
  const QuantumChannel m = parse_channel(need(p, "m"));
  const int uses = static_cast<int>(integer(p, "n", 1));
  const CcCode cover = parse_cc_cover(need(p, "cover"), m, uses);
  const int mb = static_cast<int>(integer(p, "M_bar"));
  const StegoCcCode code = build_stego_cc_noiseless(cover, m, mb, num(p, "zeta"), seed,
                                                    static_cast<int>(integer(p, "attempts", 64)));
  const StegoCcAudit& a = code.audit;
  for (int w = 0; w < cover.messages(); ++w) {
    const bool ok = a.bound_ok && a.distances[w] <= a.zeta_achieved + 1e-9;
    add_row(t, {point, w, uses, mb, a.zeta_achieved, a.distances[w], a.decode_probabilities[w], ok},
            ok);
  }
}

void run_simulate_cc_noisy(const json& p, std::uint64_t seed, long point, Table& t) {
  const QuantumChannel m = parse_channel(need(p, "m"));
  const QuantumChannel truth = parse_channel(need(p, "true_channel"));
  const CcCode cover = parse_cc_cover(need(p, "cover"), compose(truth, m), 1);
  std::vector<CqState> side;
  for (const auto& s : need(p, "side")) side.push_back(parse_cq(s));
  const int mb = static_cast<int>(integer(p, "M_bar"));
  const int kb = static_cast<int>(integer(p, "K_bar"));
  NoisyOptions opts;
  opts.block = static_cast<int>(integer(p, "block", 1));
  opts.trials = static_cast<int>(integer(p, "trials", 1));
  const StegoCcCode code = build_stego_cc_noisy(cover, m, truth, side, mb, kb, num(p, "zeta"),
                                                num(p, "xi"), seed, opts);
  const StegoCcAudit& a = code.audit;
  for (int w = 0; w < cover.messages(); ++w) {
    add_row(t,
            {point, w, mb, kb, a.distances[w], a.errors[w], a.zeta_achieved, a.xi_achieved,
             a.decode_probabilities[w], a.decode_bound, a.bound_ok},
            a.bound_ok);
  }
}

void run_simulate_es_rs(const json& p, std::uint64_t seed, long point, Table& t) {
  const QuantumChannel m = parse_channel(need(p, "m"));
  const json& c = need(p, "cover");
  const EsCode cover =
      c.value("code", std::string()) == "two-use"
          ? two_use_es_cover(m)
          : make_es_code(parse_state(need(c, "input")), static_cast<int>(integer(c, "messages")),
                         parse_channel(need(c, "decoder")), m);
  const int mb = static_cast<int>(integer(p, "M_bar"));
  const StegoEsRsCode code = build_stego_es_rs(cover, m, mb, num(p, "zeta"), seed);
  add_row(t,
          {point, cover.messages, mb, code.eps_cover, code.zeta_achieved, code.fidelity,
           code.fidelity_bound, code.output_gap, code.bound_ok},
          code.bound_ok);
}

void run_simulate_qc_cc(const json& p, std::uint64_t seed, long point, Table& t) {
  const QuantumChannel m = parse_channel(need(p, "m"));
  const QcCode cover = parse_qc_cover(need(p, "cover"), m);
  const int mb = static_cast<int>(integer(p, "M_bar"));
  const StegoQcCcCode code = build_stego_qc_cc(cover, m, mb, num(p, "zeta"), seed);
  add_row(t,
          {point, mb, join_numbers(code.split.pj), code.hash_defect, code.twirl_defect,
           code.cypher_decode, code.recovery_constant, code.stego_recovery, code.max_distance,
           code.distance_bound, code.split.gram_residual, code.split.polar_residual, code.bound_ok},
          code.bound_ok);
}

void run_simulate_cc_es(const json& p, std::uint64_t seed, long point, Table& t) {
  const auto f1 = parse_states(need(p, "f1"));
  const auto f2 = parse_states(need(p, "f2"));
  const QuantumChannel m1 = parse_channel(need(p, "m1"));
  const QuantumChannel m2 = parse_channel(need(p, "m2"));
  if (f1.size() != f2.size()) bad_config("f1 and f2 must have the same length");
  std::vector<DensityMatrix> words;
  for (std::size_t w = 0; w < f1.size(); ++w) words.push_back(tensor(f1[w], f2[w]));
  const CcCode cover = make_cc_code(words, parse_povm(need(p, "decoder")), tensor_product(m1, m2),
                                    static_cast<int>(integer(p, "n", 2)));
  const std::string oracle = p.value("distiller", std::string("trivial-aligner"));
  if (oracle != "trivial-aligner") bad_config("unknown distiller '" + oracle + "'");
  CcEsOptions opts;
  opts.cypher_messages = static_cast<int>(integer(p, "M_bar_cc", 0));
  opts.entangled = integer(p, "M_bar", 0);
  opts.attempts = static_cast<int>(integer(p, "attempts", 64));
  const StegoCcEsCode code = build_stego_cc_es(cover, f1, f2, m1, m2, trivial_aligner_distiller,
                                               num(p, "zeta"), seed, opts);
  add_row(t,
          {point, code.entangled, code.cypher_messages, code.classical_reliability,
           code.entanglement_distance, code.distillation_distance, code.entanglement_bound,
           code.distance, code.zeta_achieved, code.key_bits, code.bound_ok},
          code.bound_ok);
}

void run_simulate_resolvability(const json& p, std::uint64_t seed, long point, Table& t) {
  const CqState sigma = parse_cq(p);
  const int m = static_cast<int>(integer(p, "M"));
  const int k = static_cast<int>(integer(p, "K", 1));
  const ResolvabilityCode rc =
      build_resolvability_code(sigma, m, k, seed, static_cast<int>(integer(p, "trials", 1)));
  add_row(t, {point, m, k, std::to_string(seed), rc.distance, rc.mean_distance, rc.reliability},
          true);
}

void run_verify_gentle(const json& p, std::uint64_t seed, long point, Table& t) {
  if (p.contains("random")) {
    const json& r = p.at("random");
    const long count = integer(r, "count", 100);
    const long max_dim = integer(r, "max_dim", 4);
    const long max_symbols = integer(r, "max_symbols", 3);
    Rng rng(seed);
    for (long i = 0; i < count; ++i) {
      const long d = std::uniform_int_distribution<long>(1, max_dim)(rng);
      const long dout = std::uniform_int_distribution<long>(1, max_dim)(rng);
      const long nx = std::uniform_int_distribution<long>(1, max_symbols)(rng);
      std::vector<DensityMatrix> states;
      std::vector<QuantumChannel> chans;
      for (long x = 0; x < nx; ++x) {
        states.push_back(random_density(d, rng));
        const long kraus = std::uniform_int_distribution<long>((d + dout - 1) / dout, d * dout)(rng);
        chans.push_back(random_channel(d, dout, kraus, rng));
      }
      const Povm povm = random_povm(d, static_cast<std::size_t>(nx), rng);
      const Pmf pmf = random_pmf(static_cast<std::size_t>(nx), rng);
      const GentleReport g = verify_gentle_composition(states, chans, povm, pmf);
      add_row(t, {point, i, d, nx, g.lhs, g.eps, g.bound, g.holds}, g.holds);
    }
    return;
  }
  std::vector<QuantumChannel> chans;
  for (const auto& c : need(p, "channels")) chans.push_back(parse_channel(c));
  const auto states = parse_states(need(p, "states"));
  const GentleReport g = verify_gentle_composition(
      states, chans, parse_povm(need(p, "povm")), Pmf(need(p, "pmf").get<std::vector<double>>()));
  add_row(t, {point, 0L, states.front().dim(), states.size(), g.lhs, g.eps, g.bound, g.holds},
          g.holds);
}

void run_verify_pj_bound(const json& p, std::uint64_t, long point, Table& t) {
  const QuantumChannel m = parse_channel(need(p, "m"));
  const QcCode cover = parse_qc_cover(need(p, "cover"), m);
  const double delta = num(p, "delta");
  const bool clamp = p.value("clamp", false);
  const double eps = std::max(0.0, 1.0 - cover.recovery_constant);
  if (!clamp && delta <= 2.0 * std::sqrt(eps)) {
    // Nothing to check: reported, not counted as a failure.
    add_row(t, {point, delta, eps, "", true, "", "", "vacuous"}, true);
    return;
  }
  const PjBoundReport r = verify_pj_minentropy_bound(cover, m, delta, clamp);
  add_row(t, {point, delta, r.eps, r.smoothing, r.vacuous, r.lhs, r.rhs, r.holds}, r.holds);
}

void run_verify_sutherland(const json& p, std::uint64_t, long point, Table& t) {
  const QuantumChannel single = parse_channel(need(p, "channel"));
  const int n = static_cast<int>(integer(p, "n", 3));
  const QcCode cover = parse_qc_cover(need(p, "cover"), tensor_power(single, n));
  const double delta = num(p, "delta", 0.0);
  const SutherlandReport r = experiment_sutherland_bound(cover, single, n, delta);
  add_row(t, {point, n, delta, r.lhs, r.rhs, r.pj_entropy, r.margin, r.holds}, r.holds);
}

void run_verify_random_code(const json& p, std::uint64_t seed, long point, Table& t) {
  const long da = integer(p, "dim_a", 2);
  const int n = static_cast<int>(integer(p, "n"));
  const long mm = integer(p, "M");
  const int samples = static_cast<int>(integer(p, "samples"));
  const double delta = num(p, "delta");
  const RandomCodeReport r = experiment_random_code_entropy(
      da, n, mm, parse_channel(need(p, "channel")), samples, seed, delta);
  add_row(t,
          {point, da, n, mm, samples, r.mean, r.stderr_mean, r.rank_a, r.rank_e, r.bound, r.holds},
          r.holds);
}

const std::map<std::string, Kind>& registry() {
  static const std::map<std::string, Kind> kinds = {
      {"rates.cc-noiseless",
       {{"point", "zeta", "rate", "raw", "argmax", "at_boundary", "M_bar"}, run_rates_cc_noiseless}},
      {"rates.cc-noisy",
       {{"point", "zeta", "xi", "nu_tol", "log_M", "log_M_raw", "argmax_up", "log_K", "log_K_raw",
         "argmax_down", "key_at_boundary"},
        run_rates_cc_noisy}},
      {"rates.gaussian",
       {{"point", "nu0", "nu1", "n", "r", "zeta", "rate", "raw", "argmax", "at_boundary"},
        run_rates_gaussian}},
      {"rates.product",
       {{"point", "n", "k", "delta", "mode", "rate", "raw", "per_block", "state_index"},
        run_rates_product}},
      {"simulate.cc-noiseless",
       {{"point", "w", "n", "M_bar", "zeta_achieved", "dist_trace", "p_decode", "bound_ok"},
        run_simulate_cc_noiseless}},
      {"simulate.cc-noisy",
       {{"point", "w", "M_bar", "K_bar", "dist_trace", "error", "zeta_achieved", "xi_achieved",
         "p_decode", "decode_bound", "bound_ok"},
        run_simulate_cc_noisy}},
      {"simulate.es-rs",
       {{"point", "M", "M_bar", "eps_cover", "zeta_achieved", "fidelity", "fidelity_bound",
         "output_gap", "bound_ok"},
        run_simulate_es_rs}},
      {"simulate.qc-cc",
       {{"point", "M_bar", "pj", "hash_defect", "twirl_defect", "cypher_decode",
         "recovery_constant", "stego_recovery", "max_distance", "distance_bound", "gram_residual",
         "polar_residual", "bound_ok"},
        run_simulate_qc_cc}},
      {"simulate.cc-es",
       {{"point", "M_bar", "M_bar_cc", "classical_reliability", "entanglement_distance",
         "distillation_distance", "entanglement_bound", "dist_trace", "zeta_achieved", "key_bits",
         "bound_ok"},
        run_simulate_cc_es}},
      {"simulate.resolvability",
       {{"point", "M", "K", "seed", "distance", "mean_distance", "reliability"},
        run_simulate_resolvability}},
      {"verify.gentle",
       {{"point", "instance", "dim", "symbols", "lhs", "eps", "bound", "holds"}, run_verify_gentle}},
      {"verify.pj-bound",
       {{"point", "delta", "eps", "smoothing", "vacuous", "lhs", "rhs", "holds"},
        run_verify_pj_bound}},
      {"verify.sutherland",
       {{"point", "n", "delta", "lhs", "rhs", "pj_entropy", "margin", "holds"},
        run_verify_sutherland}},
      {"verify.random-code",
       {{"point", "dim_a", "n", "M", "samples", "mean", "stderr", "rank_a", "rank_e", "bound",
         "holds"},
        run_verify_random_code}},
  };
  return kinds;
}

const Kind& lookup(const std::string& kind) {
  const auto it = registry().find(kind);
  if (it == registry().end()) bad_config("unknown experiment kind '" + kind + "'");
  return it->second;
}

std::vector<json> expand_points(const json& cfg) {
  const json defaults = cfg.value("defaults", json::object());
  if (!defaults.is_object()) bad_config("'defaults' must be an object");
  std::vector<json> points;
  const bool has_sweep = cfg.contains("sweep");
  const bool has_grid = cfg.contains("grid");
  if (!has_sweep && !has_grid) return {defaults};
  if (has_sweep) {
    if (!cfg.at("sweep").is_array()) bad_config("'sweep' must be a list");
    for (const auto& over : cfg.at("sweep")) {
      if (!over.is_object()) bad_config("sweep entries must be objects");
      json p = defaults;
      p.update(over);
      points.push_back(std::move(p));
    }
  }
  if (has_grid) {
    const json& grid = cfg.at("grid");
    if (!grid.is_object()) bad_config("'grid' must be an object of lists");
    std::vector<json> combos{defaults};
    for (const auto& [key, values] : grid.items()) {
      if (!values.is_array()) bad_config("grid entry '" + key + "' must be a list");
      std::vector<json> next;
      for (const auto& base : combos) {
        for (const auto& v : values) {
          json p = base;
          p[key] = v;
          next.push_back(std::move(p));
        }
      }
      combos = std::move(next);
    }
    points.insert(points.end(), combos.begin(), combos.end());
  }
  return points;
}

}  // namespace

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

long ExperimentResult::failures() const {
  long f = 0;
  for (bool ok : row_ok) f += ok ? 0 : 1;
  return f;
}

std::string ExperimentResult::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

std::string ExperimentResult::summary_json() const {
  json j;
  j["kind"] = kind;
  j["seed"] = seed;
  j["version"] = "1.0.0";
  j["points"] = points;
  j["rows"] = rows.size();
  j["failures"] = failures();
  j["passed"] = passed();
  j["columns"] = columns;
  j["wall_time_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const std::string& config_text, const RunOptions& opts) {
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::parse_error& e) {
    bad_config(e.what());
  }
  if (!cfg.is_object()) bad_config("config must be a JSON object");
  ExperimentResult res;
  try {
    std::string kind = cfg.value("kind", std::string());
    if (!opts.kind.empty()) {
      if (!kind.empty() && kind != opts.kind) {
        bad_config("config kind '" + kind + "' does not match requested '" + opts.kind + "'");
      }
      kind = opts.kind;
    }
    if (kind.empty()) bad_config("no experiment kind given");
    const Kind& k = lookup(kind);
    res.kind = kind;
    res.seed = opts.seed ? *opts.seed : cfg.value("seed", std::uint64_t{0});
    res.columns = k.columns;

    const auto start = std::chrono::steady_clock::now();
    const auto points = expand_points(cfg);
    res.points = static_cast<long>(points.size());
    Table table{k.columns, {}, {}};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const json& p = points[i];
      const std::uint64_t seed =
          p.contains("seed") ? p.at("seed").get<std::uint64_t>() : derive_seed(res.seed, i);
      k.run(p, seed, static_cast<long>(i), table);
    }
    res.rows = std::move(table.rows);
    res.row_ok = std::move(table.ok);
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } catch (const json::exception& e) {
    bad_config(e.what());
  }
  return res;
}

ExperimentResult run_experiment_file(const std::string& path, const RunOptions& opts) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return run_experiment(buf.str(), opts);
}

std::vector<std::string> experiment_kinds() {
  std::vector<std::string> out;
  for (const auto& [name, k] : registry()) out.push_back(name);
  return out;
}

std::vector<std::string> experiment_columns(const std::string& kind) { return lookup(kind).columns; }

}  // namespace qsteg
