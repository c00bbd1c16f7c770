#pragma once

#include <cstdint>
#include <vector>

#include "qsteg/channel.hpp"
#include "qsteg/core.hpp"
#include "qsteg/measures.hpp"

namespace qsteg {

// Classical communication code over n channel uses: codewords f(w) on the
// n-use input space and a decoding POVM on the n-use output space.
struct CcCode {
  std::vector<DensityMatrix> codewords;
  Povm decoder;
  int uses = 1;
  double reliability = 0.0;  // (1/M) Σ_w tr(Λ^w 𝒩(f(w))) for the channel given at construction

  int messages() const { return static_cast<int>(codewords.size()); }
};

double cc_reliability(const std::vector<DensityMatrix>& codewords, const Povm& decoder,
                      const QuantumChannel& channel);
CcCode make_cc_code(std::vector<DensityMatrix> codewords, Povm decoder,
                    const QuantumChannel& channel, int uses);

// Quantum code with encoding isometry V: W → A^n, decoder 𝒟: B^n → W and a
// recovery split of the warden channel given as the Kraus indices of Ñ.
struct QcCode {
  int messages = 1;
  Isometry encoder;
  QuantumChannel decoder;
  std::vector<std::size_t> correctable;
  double recovery_constant = 0.0;  // c with 𝒟∘Ñ∘ℰ ≈ c·id
  double recovery_residual = 0.0;  // max |J − c·J_id| over Choi entries

  Matrix code_projector() const;
};

// Proportionality constant and residual of a map against the identity
// channel, from the Choi operator built on the basis |a⟩⟨b|.
struct IdentityFit {
  double constant = 0.0;
  double residual = 0.0;
};
IdentityFit fit_to_identity(const std::vector<Matrix>& kraus, long dim);

QcCode make_qc_code(const Matrix& encoder, QuantumChannel decoder,
                    const QuantumChannel& warden, std::vector<std::size_t> correctable);

// Entanglement-sharing cover: joint input ρ_{ÃA^n} with Ã of dimension M,
// and decoder 𝒟: B^n → B̃ (dimension M).
struct EsCode {
  int messages = 1;
  DensityMatrix input;
  QuantumChannel decoder;
  double fidelity = 0.0;  // F(Φ^(M), ρ_{ÃB̃}) for the channel given at construction
};

EsCode make_es_code(DensityMatrix input, int messages, QuantumChannel decoder,
                    const QuantumChannel& channel);

// Square-root measurement over `states`; the complement of the joint support
// is shared evenly among the outcomes.
Povm pretty_good_measurement(const std::vector<Matrix>& states);

// Outer POVM with per-outcome inner operators: element (w, k) = √Λ^w G_w^k √Λ^w,
// indexed w·K + k. Every inner family must sum to the identity.
Povm nested_povm(const Povm& outer, const std::vector<std::vector<Matrix>>& inner);

struct ResolvabilityCode {
  int messages = 1;
  int keys = 1;
  std::vector<std::vector<int>> codebooks;  // codebooks[s][w] ∈ X
  std::vector<Povm> decoders;               // pretty-good measurement per codebook
  double reliability = 0.0;                 // (1/MK) Σ_{s,w} tr(Γ_s^w ρ^{g_s(w)})
  double distance = 0.0;                    // ‖(1/MK) Σ ρ^{g_s(w)} − ρ_B‖₁
  double mean_distance = 0.0;               // over all trials
};

// Draws `trials` independent ensembles of K codebooks with i.i.d. P_X entries
// and keeps the one with the smallest resolvability distance.
ResolvabilityCode build_resolvability_code(const CqState& sigma, int messages, int keys,
                                           std::uint64_t seed, int trials = 1);

// Independent stream for index `i` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace qsteg
