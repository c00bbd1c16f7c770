#include "qsteg/stego.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsteg/error.hpp"
#include "qsteg/rates.hpp"

namespace qsteg {

namespace {

double real_trace(const Matrix& m) { return m.trace().real(); }

Matrix unit_column(long dim, long index) {
  Matrix e = Matrix::Zero(dim, 1);
  e(index, 0) = 1.0;
  return e;
}

double povm_residual(const Povm& p) {
  Matrix sum = Matrix::Zero(p.dim(), p.dim());
  for (const auto& e : p.elements()) sum += e;
  return max_abs_entry(sum - Matrix::Identity(p.dim(), p.dim()));
}

// Unitary factor of the polar decomposition, from a full SVD.
Matrix polar_unitary(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

void check_cover_fits(const CcCode& cover, const QuantumChannel& warden) {
  if (cover.messages() < 1) throw Error(ErrorKind::kInvalidCover, "cover has no messages");
  if (cover.codewords.front().dim() != warden.dim_in() ||
      cover.decoder.dim() != warden.dim_out()) {
    throw Error(ErrorKind::kShapeError, "cover code does not fit the warden channel");
  }
}

}  // namespace

StegoCcAudit audit_stego_cc(const StegoCcCode& code, const CcCode& cover,
                            const QuantumChannel& warden,
                            const QuantumChannel& true_channel) {
  const int m = cover.messages();
  const int mb = code.cypher_messages;
  const int k = code.keys;
  if (static_cast<int>(code.per_message.size()) != m ||
      static_cast<int>(code.decoders.size()) != k) {
    throw Error(ErrorKind::kShapeError, "stego code does not match its cover");
  }
  StegoCcAudit a;
  a.eps_cover = std::max(0.0, 1.0 - cc_reliability(cover.codewords, cover.decoder, warden));
  const long dout = true_channel.dim_out();
  double joint = 0.0;
  for (int w = 0; w < m; ++w) {
    const Matrix target = qsteg::apply(warden, cover.codewords[w].matrix());
    const KeyedSubcode& sub = code.per_message[w];
    Matrix avg = Matrix::Zero(dout, dout);
    double ok = 0.0;
    double joint_w = 0.0;
    for (int s = 0; s < k; ++s) {
      for (int wb = 0; wb < mb; ++wb) {
        const Matrix out = qsteg::apply(true_channel, sub.inputs[s][wb].matrix());
        avg += out;
        ok += real_trace(sub.decoders[s][wb] * out);
        joint_w += real_trace(code.decoders[s][w * mb + wb] * out);
      }
    }
    const double count = static_cast<double>(mb) * k;
    joint += joint_w;
    a.decode_probabilities.push_back(joint_w / count);
    a.distances.push_back(trace_norm(avg / count - target));
    a.errors.push_back(std::max(0.0, 1.0 - ok / count));
  }
  a.decode_probability = joint / (static_cast<double>(m) * mb * k);
  a.distance = *std::max_element(a.distances.begin(), a.distances.end());
  const double max_error = *std::max_element(a.errors.begin(), a.errors.end());
  if (code.resolvability) {
    a.zeta_achieved = max_error;
    a.xi_achieved = a.distance;
  } else {
    a.zeta_achieved = std::max(a.distance, max_error);
    a.xi_achieved = a.zeta_achieved;
  }
  a.decode_bound = 1.0 - a.zeta_achieved - 2.0 * std::sqrt(a.xi_achieved + a.eps_cover);
  for (const auto& d : code.decoders) a.povm_residual = std::max(a.povm_residual, povm_residual(d));
  a.key_bits = std::log2(static_cast<double>(k));
  a.bound_ok = a.distance <= a.xi_achieved + 1e-9 &&
               a.decode_probability >= a.decode_bound - 1e-6 && a.povm_residual <= 1e-8;
  return a;
}

StegoCcCode build_stego_cc_noiseless(const CcCode& cover, const QuantumChannel& m,
                                     int cypher_messages, double zeta, std::uint64_t seed,
                                     int attempts) {
  check_cover_fits(cover, m);
  if (cypher_messages < 1) throw Error(ErrorKind::kBadParameter, "M̄ must be positive");
  StegoCcCode code;
  code.cover_messages = cover.messages();
  code.cypher_messages = cypher_messages;
  std::vector<std::vector<Matrix>> inner;
  for (int w = 0; w < cover.messages(); ++w) {
    const DensityMatrix rho = qsteg::apply(m, cover.codewords[w]);
    QuantumHashCode qh = build_quantum_hash(rho, cypher_messages, zeta, derive_seed(seed, w),
                                            attempts);
    code.warning = code.warning || !qh.classical.within_tolerance;
    KeyedSubcode sub;
    sub.messages = cypher_messages;
    sub.inputs = {qh.g};
    sub.decoders = {qh.povm};
    sub.defect = qh.defect;
    sub.error = 1.0 - qh.success;
    inner.push_back(qh.povm.elements());
    code.per_message.push_back(std::move(sub));
  }
  code.decoders = {nested_povm(cover.decoder, inner)};
  code.audit = audit_stego_cc(code, cover, m, identity_channel(m.dim_out()));
  return code;
}

StegoCcCode build_stego_cc_noisy(const CcCode& cover, const QuantumChannel& m,
                                 const QuantumChannel& true_channel,
                                 const std::vector<CqState>& side_states,
                                 int cypher_messages, int keys, double zeta, double xi,
                                 std::uint64_t seed, const NoisyOptions& opts) {
  const QuantumChannel warden = compose(true_channel, m);
  check_cover_fits(cover, warden);
  if (static_cast<int>(side_states.size()) != cover.messages()) {
    throw Error(ErrorKind::kShapeError, "one side state per cover message is required");
  }
  if (cypher_messages < 1 || keys < 1 || opts.block < 1) {
    throw Error(ErrorKind::kBadParameter, "M̄, K̄ and the block size must be positive");
  }
  StegoCcCode code;
  code.cover_messages = cover.messages();
  code.cypher_messages = cypher_messages;
  code.keys = keys;
  code.resolvability = true;
  const int mu = opts.block;
  for (int w = 0; w < cover.messages(); ++w) {
    const CqState& sigma = side_states[w];
    if (sigma.dim() != true_channel.dim_in()) {
      throw Error(ErrorKind::kShapeError, "side state does not live on the channel input");
    }
    const Matrix target = qsteg::apply(warden, cover.codewords[w].matrix());
    std::vector<DensityMatrix> outs;
    Matrix marginal = Matrix::Zero(target.rows(), target.cols());
    for (std::size_t x = 0; x < sigma.alphabet(); ++x) {
      outs.push_back(qsteg::apply(true_channel, sigma.states()[x]));
      marginal += sigma.pmf()[x] * outs.back().matrix();
    }
    if (max_abs_entry(marginal - target) > 1e-8) {
      throw Error(ErrorKind::kSideStateMismatch,
                  "output marginal of the side state differs from the cover output");
    }
    const CqState out_cq(sigma.pmf(), outs);
    const ResolvabilityCode rc = build_resolvability_code(
        out_cq, mu * cypher_messages, keys, derive_seed(seed, w), opts.trials);

    KeyedSubcode sub;
    sub.messages = cypher_messages;
    sub.keys = keys;
    sub.defect = rc.distance;
    sub.error = 1.0 - rc.reliability;
    for (int s = 0; s < keys; ++s) {
      std::vector<DensityMatrix> inputs;
      std::vector<Matrix> elems;
      for (int wb = 0; wb < cypher_messages; ++wb) {
        Matrix in = Matrix::Zero(sigma.dim(), sigma.dim());
        Matrix el = Matrix::Zero(rc.decoders[s].dim(), rc.decoders[s].dim());
        for (int g = wb * mu; g < (wb + 1) * mu; ++g) {
          in += sigma.states()[rc.codebooks[s][g]].matrix();
          el += rc.decoders[s][g];
        }
        inputs.emplace_back(in / static_cast<double>(mu), 1e-9);
        elems.push_back(std::move(el));
      }
      sub.inputs.push_back(std::move(inputs));
      sub.decoders.emplace_back(std::move(elems), 1e-8);
    }
    code.warning = code.warning || sub.defect > xi || sub.error > zeta;
    code.per_message.push_back(std::move(sub));
  }
  for (int s = 0; s < keys; ++s) {
    std::vector<std::vector<Matrix>> inner;
    for (const auto& sub : code.per_message) inner.push_back(sub.decoders[s].elements());
    code.decoders.push_back(nested_povm(cover.decoder, inner));
  }
  code.audit = audit_stego_cc(code, cover, warden, true_channel);
  return code;
}

StegoEsRsCode build_stego_es_rs(const EsCode& cover, const QuantumChannel& m,
                                int cypher_messages, double zeta, std::uint64_t seed) {
  const long msg = cover.messages;
  const long da = m.dim_in();
  const long db = m.dim_out();
  if (cover.input.dim() != msg * da || cover.decoder.dim_in() != db ||
      cover.decoder.dim_out() != msg) {
    throw Error(ErrorKind::kShapeError, "entanglement-sharing cover does not fit the channel");
  }
  if (cypher_messages < 1) throw Error(ErrorKind::kBadParameter, "M̄ must be positive");

  StegoEsRsCode code;
  code.messages = static_cast<int>(msg);
  code.cypher_messages = cypher_messages;

  // |ψ⟩ = (W ⊗ V)|ρ⟩: R keeps the purification, E the environment of the
  // degradation, H the discarded output of the decoder.
  const PureState pur = purify(cover.input, true);
  const long dr = pur.dim() / (msg * da);
  const Matrix& v_iso = m.isometry().matrix();
  const long de = v_iso.rows() / db;
  const Vector psi1 = apply_local(v_iso, pur.vector(), {dr, msg, da}, 2);
  const Matrix& w_iso = cover.decoder.isometry().matrix();
  const long dh = w_iso.rows() / msg;
  const Vector psi2 = apply_local(w_iso, psi1, {dr, msg, db, de}, 2);
  code.psi = permute_systems(psi2, {dr, msg, msg, dh, de}, {1, 2, 0, 4, 3});
  code.dim_reference = dr;
  code.dim_environment = de;
  code.dim_hidden = dh;

  const long pair = msg * msg;
  const long rest = dr * de * dh;
  Matrix psi_mat(pair, rest);
  for (long i = 0; i < pair; ++i) {
    for (long r = 0; r < rest; ++r) psi_mat(i, r) = code.psi(i * rest + r);
  }
  const Vector phi = PureState::maximally_entangled(msg).vector();

  // Overlap with Φ ⊗ |0⟩ on the rest; T maximizes |⟨Φ ⊗ T0|ψ⟩|.
  Matrix x = Matrix::Zero(rest, rest);
  x.row(0) = phi.adjoint() * psi_mat;
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  code.alignment = (svd.matrixV() * svd.matrixU().adjoint()).conjugate();
  code.tau = code.alignment.col(0);
  code.overlap_fidelity = std::norm(kron(phi, code.tau).dot(code.psi));
  const Matrix rho_ab = psi_mat * psi_mat.adjoint();
  code.eps_cover = std::max(0.0, 1.0 - (phi.adjoint() * rho_ab * phi)(0, 0).real());

  const SchmidtDecomposition sd = schmidt_decompose(code.tau, dr * de, dh);
  double total = 0.0;
  for (double p : sd.weights) total += p;
  for (double p : sd.weights) code.schmidt_weights.push_back(p / total);
  code.alice_basis = sd.vectors_a;
  code.bob_basis = sd.vectors_b;
  code.hash = build_classical_hash(Pmf(code.schmidt_weights), cypher_messages, zeta, seed);
  code.warning = !code.hash.within_tolerance;
  code.zeta_achieved = code.hash.quality.defect;

  const long dre = dr * de;
  std::vector<Matrix> alice(cypher_messages, Matrix::Zero(dre, dre));
  std::vector<Matrix> bob(cypher_messages, Matrix::Zero(dh, dh));
  Matrix alice_rest = Matrix::Identity(dre, dre);
  Matrix bob_rest = Matrix::Identity(dh, dh);
  for (std::size_t xi = 0; xi < sd.weights.size(); ++xi) {
    const int wb = code.hash.f[xi];
    const Matrix pa = sd.vectors_a.col(xi) * sd.vectors_a.col(xi).adjoint();
    const Matrix pb = sd.vectors_b.col(xi) * sd.vectors_b.col(xi).adjoint();
    alice[wb] += pa;
    bob[wb] += pb;
    alice_rest -= pa;
    bob_rest -= pb;
  }
  alice[0] += alice_rest;
  bob[0] += bob_rest;
  code.alice = Povm(alice, 1e-8);
  code.bob = Povm(bob, 1e-8);

  const long mb = cypher_messages;
  code.final_state = Matrix::Zero(pair * mb * mb, pair * mb * mb);
  for (long a = 0; a < mb; ++a) {
    for (long b = 0; b < mb; ++b) {
      const Matrix l = kron(code.alice[a], code.bob[b]);
      const Matrix sigma = psi_mat * l.transpose() * psi_mat.adjoint();
      const Matrix e = unit_column(mb * mb, a * mb + b);
      code.final_state += kron(sigma, Matrix(e * e.adjoint()));
    }
  }
  Matrix shared = Matrix::Zero(mb * mb, mb * mb);
  for (long wb = 0; wb < mb; ++wb) shared(wb * mb + wb, wb * mb + wb) = 1.0 / mb;
  const Matrix target = kron(Matrix(phi * phi.adjoint()), shared);
  code.fidelity = fidelity(DensityMatrix(code.final_state, 1e-8), DensityMatrix(target, 1e-8));
  const double root = std::sqrt(code.eps_cover) + code.zeta_achieved;
  code.fidelity_bound = 1.0 - root * root;

  // Bob's received state after Alice's measurement on R ⊗ E, against the
  // cover's output.
  const Vector psi_b = permute_systems(psi1, {dr, msg, db, de}, {2, 1, 0, 3});
  const long others = msg * dr * de;
  Matrix pb_mat(db, others);
  for (long i = 0; i < db; ++i) {
    for (long r = 0; r < others; ++r) pb_mat(i, r) = psi_b(i * others + r);
  }
  Matrix rho_bs = Matrix::Zero(db, db);
  for (long a = 0; a < mb; ++a) {
    const Matrix l = kron(Matrix::Identity(msg, msg), code.alice[a]);
    rho_bs += pb_mat * l.transpose() * pb_mat.adjoint();
  }
  const Matrix rho_bc = qsteg::apply(m, partial_trace(cover.input.matrix(), {msg, da}, {1}));
  code.output_gap = max_abs_entry(rho_bs - rho_bc);
  code.bound_ok = code.fidelity >= code.fidelity_bound - 1e-6 && code.output_gap <= 1e-10;
  return code;
}

KrausSplit split_correctable_kraus(const QcCode& cover, const QuantumChannel& m) {
  const Matrix& v = cover.encoder.matrix();
  if (m.dim_in() != v.rows() || m.dim_out() != v.rows()) {
    throw Error(ErrorKind::kShapeError, "degradation does not act on the code space");
  }
  KrausSplit split;
  split.projector = v * v.adjoint();
  const Matrix& pi = split.projector;
  const double tr_pi = static_cast<double>(cover.messages);

  std::vector<Matrix> f;
  for (std::size_t j : cover.correctable) {
    if (j >= m.num_kraus()) {
      throw Error(ErrorKind::kShapeError, "correctable Kraus index out of range");
    }
    f.push_back(m.kraus()[j]);
  }
  const long k = static_cast<long>(f.size());
  if (k == 0) throw Error(ErrorKind::kSplitViolation, "empty correctable set");
  Matrix gram(k, k);
  for (long a = 0; a < k; ++a) {
    for (long b = 0; b < k; ++b) gram(a, b) = (pi * f[a].adjoint() * f[b] * pi).trace() / tr_pi;
  }
  double off = 0.0;
  for (long a = 0; a < k; ++a) {
    for (long b = 0; b < k; ++b) {
      if (a != b) off = std::max(off, std::abs(gram(a, b)));
    }
  }
  Matrix rot = Matrix::Identity(k, k);
  std::vector<double> d(k);
  if (off > 1e-12 * std::max(max_abs_entry(gram), 1e-300)) {
    const Eigensystem es = hermitian_eigen(Matrix(0.5 * (gram + gram.adjoint())));
    rot = es.vectors;
    for (long a = 0; a < k; ++a) d[a] = es.values(a);
  } else {
    for (long a = 0; a < k; ++a) d[a] = gram(a, a).real();
  }
  for (long a = 0; a < k; ++a) {
    if (d[a] <= 1e-14) continue;
    Matrix fa = Matrix::Zero(f[0].rows(), f[0].cols());
    for (long j = 0; j < k; ++j) fa += rot(j, a) * f[j];
    split.kraus.push_back(fa);
    split.weights.push_back(d[a]);
  }
  const std::size_t kept = split.kraus.size();
  if (kept == 0) throw Error(ErrorKind::kSplitViolation, "correctable set has zero weight");
  for (std::size_t a = 0; a < kept; ++a) {
    for (std::size_t b = 0; b < kept; ++b) {
      Matrix g = pi * split.kraus[a].adjoint() * split.kraus[b] * pi;
      if (a == b) g -= split.weights[a] * pi;
      split.gram_residual = std::max(split.gram_residual, max_abs_entry(g));
    }
  }
  if (split.gram_residual > 1e-8) {
    throw Error(ErrorKind::kSplitViolation, "Knill-Laflamme residual " +
                                                std::to_string(split.gram_residual));
  }
  double total = 0.0;
  for (double w : split.weights) total += w;
  for (std::size_t a = 0; a < kept; ++a) {
    split.pj.push_back(split.weights[a] / total);
    const double root = std::sqrt(split.weights[a]);
    const Matrix fp = split.kraus[a] * pi;
    const Matrix u = polar_unitary(fp / root);
    split.polar_residual = std::max(split.polar_residual, max_abs_entry(fp - root * u * pi));
    split.unitaries.push_back(u);
  }
  return split;
}

std::vector<DensityMatrix> qc_test_inputs(long dim, std::uint64_t seed) {
  constexpr std::size_t kCount = 16;
  std::vector<DensityMatrix> out;
  for (long k = 0; k < dim && out.size() < kCount; ++k) out.push_back(DensityMatrix::basis(dim, k));
  const double h = 1.0 / std::sqrt(2.0);
  for (long k = 1; k < dim && out.size() + 1 < kCount; ++k) {
    Vector plus = Vector::Zero(dim);
    plus(0) = h;
    plus(k) = h;
    out.push_back(DensityMatrix::from_pure(plus));
    plus(k) = Complex(0.0, h);
    out.push_back(DensityMatrix::from_pure(plus));
  }
  if (out.size() < kCount) out.push_back(DensityMatrix::maximally_mixed(dim));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  while (out.size() < kCount) {
    Matrix g(dim, dim);
    for (long i = 0; i < dim; ++i) {
      for (long j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    out.emplace_back(rho, 1e-9);
  }
  out.resize(kCount, DensityMatrix::maximally_mixed(dim));
  return out;
}

StegoQcCcCode build_stego_qc_cc(const QcCode& cover, const QuantumChannel& m,
                                int cypher_messages, double zeta, std::uint64_t seed) {
  if (cypher_messages < 1) throw Error(ErrorKind::kBadParameter, "M̄ must be positive");
  if (cover.decoder.dim_in() != m.dim_out() || cover.decoder.dim_out() != cover.messages) {
    throw Error(ErrorKind::kInvalidCover, "cover decoder does not fit the channel");
  }
  StegoQcCcCode code;
  code.messages = cover.messages;
  code.cypher_messages = cypher_messages;
  code.split = split_correctable_kraus(cover, m);
  const KrausSplit& split = code.split;
  const std::size_t terms = split.pj.size();
  code.hash = build_classical_hash(Pmf(split.pj), cypher_messages, zeta, seed);
  code.warning = !code.hash.within_tolerance;
  code.hash_defect = code.hash.quality.defect;

  const long mb = cypher_messages;
  const long dw = cover.messages;
  const long dn = m.dim_in();
  const Matrix& v = cover.encoder.matrix();
  const Matrix& pi = split.projector;

  code.bucket_sizes.assign(mb, 0);
  for (std::size_t j = 0; j < terms; ++j) ++code.bucket_sizes[code.hash.f[j]];
  int empty = 0;
  for (long wb = 0; wb < mb; ++wb) {
    const int mu = code.bucket_sizes[wb];
    std::vector<Matrix> kraus;
    if (mu == 0) {
      ++empty;
      kraus.push_back(v);
    } else {
      for (std::size_t j = 0; j < terms; ++j) {
        if (code.hash.f[j] == wb) kraus.push_back(split.unitaries[j] * v / std::sqrt(mu));
      }
    }
    code.encoders.emplace_back(std::move(kraus));
  }
  code.twirl_defect = static_cast<double>(empty) / mb;
  for (std::size_t j = 0; j < terms; ++j) {
    const double weight = 1.0 / (mb * code.bucket_sizes[code.hash.f[j]]);
    code.twirl_defect += std::abs(split.pj[j] - weight);
  }
  code.zeta_achieved = code.twirl_defect;

  Matrix covered = Matrix::Zero(dn, dn);
  for (const auto& u : split.unitaries) covered += u * pi * u.adjoint();
  const Matrix rest = Matrix::Identity(dn, dn) - covered;
  const Matrix completion = psd_power(Matrix(0.5 * (rest + rest.adjoint())), 0.5);
  std::vector<Matrix> dec;
  for (const auto& d : cover.decoder.kraus()) {
    for (std::size_t j = 0; j < terms; ++j) {
      dec.push_back(kron(Matrix(d * pi * split.unitaries[j].adjoint()),
                         unit_column(mb, code.hash.f[j])));
    }
    dec.push_back(kron(Matrix(d * completion), unit_column(mb, 0)));
  }
  code.decoder = QuantumChannel(std::move(dec), 1e-8);

  const Matrix mixed = Matrix::Identity(dw, dw) / static_cast<double>(dw);
  for (long wb = 0; wb < mb; ++wb) {
    const Matrix out = qsteg::apply(code.decoder, qsteg::apply(code.encoders[wb], mixed));
    for (long w = 0; w < dw; ++w) code.cypher_decode += out(w * mb + wb, w * mb + wb).real();
  }
  code.cypher_decode /= mb;

  // Recovery of W by the stego decoder from the cover transmission through the
  // correctable part of ℳ^{⊗n}, cypher register discarded; equals c·id.
  code.recovery_constant = cover.recovery_constant;
  {
    std::vector<Matrix> kraus;
    for (const auto& kd : code.decoder.kraus()) {
      for (long k = 0; k < mb; ++k) {
        Matrix rows(dw, dn);
        for (long w = 0; w < dw; ++w) rows.row(w) = kd.row(w * mb + k);
        for (const auto& f : split.kraus) kraus.push_back(rows * f * v);
      }
    }
    const IdentityFit fit = fit_to_identity(kraus, dw);
    code.stego_recovery = fit.constant;
    code.stego_recovery_residual = fit.residual;
  }

  code.eps_cover = std::max(0.0, 1.0 - cover.recovery_constant);
  for (const auto& rho : qc_test_inputs(dw, derive_seed(seed, 1))) {
    const Matrix encoded = v * rho.matrix() * v.adjoint();
    const Matrix rc = qsteg::apply(m, encoded);
    Matrix rs = Matrix::Zero(dn, dn);
    for (const auto& e : code.encoders) rs += qsteg::apply(e, rho.matrix());
    rs /= static_cast<double>(mb);
    code.max_distance = std::max(code.max_distance, trace_norm(rs - rc));
  }
  code.distance_bound = code.eps_cover + code.zeta_achieved + (1.0 - cover.recovery_constant);
  code.bound_ok = code.max_distance <= code.distance_bound + 1e-6 &&
                  split.gram_residual <= 1e-8 && split.polar_residual <= 1e-8;
  return code;
}

std::optional<EdCode> trivial_aligner_distiller(const DensityMatrix& rho_ab, long dim_a,
                                                long dim_b, long m, long l, double eps) {
  if (m < 1 || l < 1 || rho_ab.dim() != dim_a * dim_b || m > dim_a || m > dim_b) {
    return std::nullopt;
  }
  const Eigensystem es = hermitian_eigen(rho_ab.matrix());
  long top = 0;
  for (long i = 1; i < es.values.size(); ++i) {
    if (es.values(i) > es.values(top)) top = i;
  }
  if (m > 1 && es.values(top) < 1.0 - 1e-9) return std::nullopt;
  const SchmidtDecomposition sd = schmidt_decompose(Vector(es.vectors.col(top)), dim_a, dim_b);
  if (m > 1) {
    if (static_cast<long>(sd.weights.size()) < m) return std::nullopt;
    for (long i = 0; i < m; ++i) {
      if (std::abs(sd.weights[i] - 1.0 / m) > eps / (4.0 * m)) return std::nullopt;
    }
  }

  // Rotates the top-m Schmidt vectors onto |i⟩ and sends everything else to |0⟩.
  auto aligner = [m](const Matrix& basis, long dim) {
    Matrix keep = Matrix::Zero(m, dim);
    Matrix proj = Matrix::Zero(dim, dim);
    for (long i = 0; i < m; ++i) {
      keep.row(i) = basis.col(i).adjoint();
      proj += basis.col(i) * basis.col(i).adjoint();
    }
    std::vector<Matrix> ops{keep};
    const Eigensystem rest = hermitian_eigen(Matrix(Matrix::Identity(dim, dim) - proj));
    for (long i = 0; i < dim; ++i) {
      if (rest.values(i) > 0.5) {
        Matrix op = Matrix::Zero(m, dim);
        op.row(0) = rest.vectors.col(i).adjoint();
        ops.push_back(op);
      }
    }
    return ops;
  };
  const Matrix e0 = unit_column(l, 0);
  std::vector<Matrix> enc;
  for (const auto& op : aligner(sd.vectors_a, dim_a)) enc.push_back(kron(e0, op));
  std::vector<Matrix> dec;
  for (const auto& op : aligner(sd.vectors_b, dim_b)) {
    for (long c = 0; c < l; ++c) dec.push_back(kron(Matrix(unit_column(l, c).adjoint()), op));
  }
  return EdCode{m, l, QuantumChannel(std::move(enc), 1e-8), QuantumChannel(std::move(dec), 1e-8)};
}

StegoCcEsCode build_stego_cc_es(const CcCode& cover, const std::vector<DensityMatrix>& f1,
                                const std::vector<DensityMatrix>& f2,
                                const QuantumChannel& m1, const QuantumChannel& m2,
                                const DistillerOracle& distiller, double zeta,
                                std::uint64_t seed, const CcEsOptions& opts) {
  const int msg = cover.messages();
  if (static_cast<int>(f1.size()) != msg || static_cast<int>(f2.size()) != msg) {
    throw Error(ErrorKind::kShapeError, "one block codeword per cover message is required");
  }
  const QuantumChannel warden = tensor_product(m1, m2);
  check_cover_fits(cover, warden);
  for (int w = 0; w < msg; ++w) {
    if (max_abs_entry(kron(f1[w].matrix(), f2[w].matrix()) - cover.codewords[w].matrix()) >
        1e-9) {
      throw Error(ErrorKind::kShapeError, "cover codeword does not factor over the blocks");
    }
  }
  const long d1 = m1.dim_out();
  const long d2 = m2.dim_out();

  StegoCcEsCode code;
  code.cover_messages = msg;
  std::vector<DensityMatrix> targets;
  for (int w = 0; w < msg; ++w) targets.push_back(qsteg::apply(m2, f2[w]));
  long mcc = opts.cypher_messages;
  if (mcc <= 0) mcc = messages_from_rate(rate_cc_noiseless(targets, zeta));
  code.cypher_messages = static_cast<int>(mcc);

  std::vector<PureState> phis;
  std::vector<long> refs;
  long cap = d1;
  for (int w = 0; w < msg; ++w) {
    phis.push_back(purify(qsteg::apply(m1, f1[w]), true));
    refs.push_back(phis.back().dim() / d1);
    cap = std::min(cap, refs.back());
  }
  auto distill_all = [&](long mt) -> std::optional<std::vector<EdCode>> {
    std::vector<EdCode> codes;
    for (int w = 0; w < msg; ++w) {
      auto ed = distiller(phis[w].density(), refs[w], d1, mt, mcc, zeta);
      if (!ed || ed->entangled != mt || ed->classical > mcc) return std::nullopt;
      codes.push_back(std::move(*ed));
    }
    return codes;
  };
  std::optional<std::vector<EdCode>> found;
  if (opts.entangled > 0) {
    found = distill_all(opts.entangled);
  } else {
    for (long mt = cap; mt >= 1 && !found; --mt) found = distill_all(mt);
  }
  if (!found) throw Error(ErrorKind::kDistillationInfeasible, "no distiller output");
  code.distillers = std::move(*found);
  const long mt = code.distillers.front().entangled;
  code.entangled = mt;

  std::vector<std::vector<Matrix>> inner;
  const Matrix id1 = Matrix::Identity(d1, d1);
  for (int w = 0; w < msg; ++w) {
    QuantumHashCode qh = build_quantum_hash(targets[w], code.cypher_messages, zeta,
                                            derive_seed(seed, w), opts.attempts);
    KeyedSubcode sub;
    sub.messages = code.cypher_messages;
    sub.inputs = {qh.g};
    sub.decoders = {qh.povm};
    sub.defect = qh.defect;
    sub.error = 1.0 - qh.success;
    std::vector<Matrix> lifted;
    for (const auto& g : qh.povm.elements()) lifted.push_back(kron(id1, g));
    inner.push_back(std::move(lifted));
    code.block2.push_back(std::move(sub));
  }
  code.decoder = nested_povm(cover.decoder, inner);
  std::vector<Matrix> roots;
  for (const auto& e : code.decoder.elements()) roots.push_back(psd_power(e, 0.5));

  // ω_c on Ã ⊗ B₁ for each classical outcome c of the distillation encoder.
  auto encoded_blocks = [&](int w) {
    const EdCode& ed = code.distillers[w];
    const long l = ed.classical;
    const long blk = mt * d1;
    std::vector<Matrix> omega(l, Matrix::Zero(blk, blk));
    for (const auto& k : ed.encoder.kraus()) {
      const Vector out = apply_local(k, phis[w].vector(), {refs[w], d1}, 0);
      for (long c = 0; c < l; ++c) {
        const Vector seg = out.segment(c * blk, blk);
        omega[c] += seg * seg.adjoint();
      }
    }
    return omega;
  };
  auto decode_block = [&](const EdCode& ed, long c, const Matrix& rho) {
    Matrix out = Matrix::Zero(mt * mt, mt * mt);
    const Matrix ida = Matrix::Identity(mt, mt);
    for (const auto& k : ed.decoder.kraus()) {
      const Matrix op = kron(ida, Matrix(k.block(0, c * d1, mt, d1)));
      out += op * rho * op.adjoint();
    }
    return out;
  };

  const Vector phi_t = PureState::maximally_entangled(mt).vector();
  const Matrix target_e = phi_t * phi_t.adjoint();
  code.final_state = Matrix::Zero(mt * mt, mt * mt);
  const double weight = 1.0 / (static_cast<double>(msg) * code.cypher_messages);
  for (int w = 0; w < msg; ++w) {
    const auto omega = encoded_blocks(w);
    Matrix ideal = Matrix::Zero(mt * mt, mt * mt);
    for (long c = 0; c < static_cast<long>(omega.size()); ++c) {
      ideal += decode_block(code.distillers[w], c, omega[c]);
    }
    code.distillation_distance = std::max(code.distillation_distance, trace_norm(ideal - target_e));
    for (long c = 0; c < static_cast<long>(omega.size()); ++c) {
      for (long s1 = 0; s1 < code.cypher_messages; ++s1) {
        const long sent = (c + s1) % code.cypher_messages;
        const Matrix joint = kron(omega[c], code.block2[w].inputs[0][sent].matrix());
        for (int w2 = 0; w2 < msg; ++w2) {
          for (long wb2 = 0; wb2 < code.cypher_messages; ++wb2) {
            const Matrix op = kron(Matrix::Identity(mt, mt), roots[w2 * code.cypher_messages + wb2]);
            const Matrix post = op * joint * op.adjoint();
            const double p = real_trace(post);
            if (p < 1e-15) continue;
            const EdCode& ed = code.distillers[w2];
            long c2 = (wb2 - s1 + code.cypher_messages) % code.cypher_messages;
            if (c2 >= ed.classical) c2 = 0;
            if (w2 == w && c2 == c) code.classical_reliability += weight * p;
            const Matrix kept = partial_trace(post, {mt, d1, d2}, {0, 1});
            code.final_state += weight * decode_block(ed, c2, kept);
          }
        }
      }
    }
  }
  code.entanglement_distance = trace_norm(code.final_state - target_e);

  for (int w = 0; w < msg; ++w) {
    const KeyedSubcode& sub = code.block2[w];
    Matrix avg = Matrix::Zero(d2, d2);
    for (const auto& g : sub.inputs[0]) avg += g.matrix();
    avg /= static_cast<double>(code.cypher_messages);
    const Matrix rho1 = qsteg::apply(m1, f1[w].matrix());
    code.distance = std::max(code.distance,
                             trace_norm(kron(rho1, avg) - kron(rho1, targets[w].matrix())));
    code.zeta_achieved = std::max({code.zeta_achieved, sub.defect, sub.error});
  }
  code.eps_cover = std::max(0.0, 1.0 - cc_reliability(cover.codewords, cover.decoder, warden));
  const double z = std::max(code.zeta_achieved, code.distillation_distance);
  const double inner_root = 2.0 * std::sqrt(code.eps_cover + z);
  code.entanglement_bound = 2.0 * z + inner_root + 2.0 * std::sqrt(z + inner_root);
  code.key_bits = std::log2(static_cast<double>(code.cypher_messages));
  code.bound_ok = code.entanglement_distance <= code.entanglement_bound + 1e-6 &&
                  code.distance <= code.zeta_achieved + 1e-9;
  return code;
}

}  // namespace qsteg
