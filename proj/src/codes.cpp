#include "qsteg/codes.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsteg/error.hpp"

namespace qsteg {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double cc_reliability(const std::vector<DensityMatrix>& codewords, const Povm& decoder,
                      const QuantumChannel& channel) {
  if (codewords.size() != decoder.size()) {
    throw Error(ErrorKind::kShapeError, "codeword and decoder counts differ");
  }
  if (decoder.dim() != channel.dim_out()) {
    throw Error(ErrorKind::kShapeError, "decoder does not act on the channel output");
  }
  double r = 0.0;
  for (std::size_t w = 0; w < codewords.size(); ++w) {
    r += (decoder[w] * apply(channel, codewords[w].matrix())).trace().real();
  }
  return r / static_cast<double>(codewords.size());
}

CcCode make_cc_code(std::vector<DensityMatrix> codewords, Povm decoder,
                    const QuantumChannel& channel, int uses) {
  const double r = cc_reliability(codewords, decoder, channel);
  return CcCode{std::move(codewords), std::move(decoder), uses, r};
}

Matrix QcCode::code_projector() const {
  return encoder.matrix() * encoder.matrix().adjoint();
}

IdentityFit fit_to_identity(const std::vector<Matrix>& kraus, long dim) {
  // Choi J = Σ_{ab} |a⟩⟨b| ⊗ Φ(|a⟩⟨b|), J_id = Σ_{ab} |a⟩⟨b| ⊗ |a⟩⟨b|.
  std::vector<std::vector<Matrix>> blocks(dim, std::vector<Matrix>(dim));
  double overlap = 0.0;
  for (long a = 0; a < dim; ++a) {
    for (long b = 0; b < dim; ++b) {
      Matrix e = Matrix::Zero(dim, dim);
      e(a, b) = 1.0;
      blocks[a][b] = apply_kraus(kraus, e);
      overlap += blocks[a][b](a, b).real();
    }
  }
  IdentityFit fit;
  fit.constant = overlap / static_cast<double>(dim * dim);
  for (long a = 0; a < dim; ++a) {
    for (long b = 0; b < dim; ++b) {
      Matrix target = Matrix::Zero(dim, dim);
      target(a, b) = fit.constant;
      fit.residual = std::max(fit.residual, max_abs_entry(blocks[a][b] - target));
    }
  }
  return fit;
}

QcCode make_qc_code(const Matrix& encoder, QuantumChannel decoder,
                    const QuantumChannel& warden, std::vector<std::size_t> correctable) {
  const long m = encoder.cols();
  if (m < 1 || encoder.rows() < m ||
      max_abs_entry(encoder.adjoint() * encoder - Matrix::Identity(m, m)) > kCptpTol) {
    throw Error(ErrorKind::kInvalidCover, "encoder is not an isometry");
  }
  if (warden.dim_in() != encoder.rows() || decoder.dim_in() != warden.dim_out() ||
      decoder.dim_out() != m) {
    throw Error(ErrorKind::kShapeError, "code pieces do not fit together");
  }
  std::vector<Matrix> kraus;
  for (std::size_t j : correctable) {
    if (j >= warden.num_kraus()) {
      throw Error(ErrorKind::kShapeError, "correctable Kraus index out of range");
    }
    for (const auto& d : decoder.kraus()) kraus.push_back(d * warden.kraus()[j] * encoder);
  }
  const IdentityFit fit = fit_to_identity(kraus, m);
  return QcCode{static_cast<int>(m), Isometry(encoder), std::move(decoder),
                std::move(correctable), fit.constant, fit.residual};
}

EsCode make_es_code(DensityMatrix input, int messages, QuantumChannel decoder,
                    const QuantumChannel& channel) {
  const long da = messages;
  if (input.dim() % da != 0 || input.dim() / da != channel.dim_in() ||
      decoder.dim_in() != channel.dim_out() || decoder.dim_out() != da) {
    throw Error(ErrorKind::kShapeError, "entanglement-sharing cover pieces do not fit");
  }
  const QuantumChannel local = compose(decoder, channel);
  const QuantumChannel full = tensor_product(identity_channel(da), local);
  const DensityMatrix out = apply(full, input);
  const double f = fidelity(PureState::maximally_entangled(da).density(), out);
  return EsCode{messages, std::move(input), std::move(decoder), f};
}

Povm pretty_good_measurement(const std::vector<Matrix>& states) {
  if (states.empty()) throw Error(ErrorKind::kShapeError, "no states to discriminate");
  const long d = states.front().rows();
  Matrix s = Matrix::Zero(d, d);
  for (const auto& r : states) s += r;
  const Matrix s_inv_half = psd_power(s, -0.5);
  const Matrix rest = Matrix::Identity(d, d) - support_projector(s);
  const double share = 1.0 / static_cast<double>(states.size());
  std::vector<Matrix> elems;
  elems.reserve(states.size());
  for (const auto& r : states) elems.push_back(s_inv_half * r * s_inv_half + share * rest);
  return Povm(std::move(elems), 1e-8);
}

Povm nested_povm(const Povm& outer, const std::vector<std::vector<Matrix>>& inner) {
  if (inner.size() != outer.size()) {
    throw Error(ErrorKind::kShapeError, "one inner family per outer outcome is required");
  }
  std::vector<Matrix> elems;
  for (std::size_t w = 0; w < outer.size(); ++w) {
    const Matrix root = psd_power(outer[w], 0.5);
    for (const auto& g : inner[w]) elems.push_back(root * g * root);
  }
  return Povm(std::move(elems), 1e-8);
}

ResolvabilityCode build_resolvability_code(const CqState& sigma, int messages, int keys,
                                           std::uint64_t seed, int trials) {
  if (messages < 1 || keys < 1 || trials < 1) {
    throw Error(ErrorKind::kBadParameter, "M, K and trials must be positive");
  }
  const auto& probs = sigma.pmf().probs();
  const Matrix target = sigma.marginal().matrix();
  std::discrete_distribution<int> draw(probs.begin(), probs.end());
  std::mt19937_64 rng(seed);

  ResolvabilityCode best;
  double distance_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    ResolvabilityCode code;
    code.messages = messages;
    code.keys = keys;
    Matrix avg = Matrix::Zero(sigma.dim(), sigma.dim());
    double rel = 0.0;
    for (int s = 0; s < keys; ++s) {
      std::vector<int> book(messages);
      std::vector<Matrix> outs;
      for (int w = 0; w < messages; ++w) {
        book[w] = draw(rng);
        outs.push_back(sigma.states()[book[w]].matrix());
        avg += outs.back();
      }
      Povm pgm = pretty_good_measurement(outs);
      for (int w = 0; w < messages; ++w) rel += (pgm[w] * outs[w]).trace().real();
      code.codebooks.push_back(std::move(book));
      code.decoders.push_back(std::move(pgm));
    }
    const double mk = static_cast<double>(messages) * keys;
    code.reliability = rel / mk;
    code.distance = trace_norm(avg / mk - target);
    distance_sum += code.distance;
    if (t == 0 || code.distance < best.distance) best = std::move(code);
  }
  best.mean_distance = distance_sum / trials;
  return best;
}

}  // namespace qsteg
