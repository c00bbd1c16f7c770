#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qsteg/channel.hpp"
#include "qsteg/codes.hpp"
#include "qsteg/hashing.hpp"

namespace qsteg {

// Per-cover-message sub-code: for each key s, an input state per cypher
// message and a decoding POVM over cypher messages.
struct KeyedSubcode {
  int messages = 1;
  int keys = 1;
  std::vector<std::vector<DensityMatrix>> inputs;  // inputs[s][w̄]
  std::vector<Povm> decoders;                       // decoders[s]
  double defect = 0.0;  // distance of the key/message average to the cover output
  double error = 0.0;   // 1 − average decoding success before block merging
};

struct StegoCcAudit {
  double distance = 0.0;            // ‖ρ^s − ρ^c‖₁ at the warden
  double decode_probability = 0.0;  // joint (w, w̄) success
  double zeta_achieved = 0.0;
  double xi_achieved = 0.0;         // equals zeta_achieved for hashing sub-codes
  double eps_cover = 0.0;
  double decode_bound = 0.0;        // 1 − ζ − 2√(ξ + ε)
  double povm_residual = 0.0;       // max |Σ Λ̄ − I|
  double key_bits = 0.0;
  std::vector<double> distances;    // per cover message
  std::vector<double> errors;       // per cover message, cypher decoding error
  std::vector<double> decode_probabilities;  // per cover message, joint (w, w̄) success
  bool bound_ok = false;
};

struct StegoCcCode {
  int cover_messages = 1;
  int cypher_messages = 1;
  int keys = 1;
  bool resolvability = false;             // sub-codes are keyed resolvability codes
  std::vector<KeyedSubcode> per_message;  // indexed by w
  std::vector<Povm> decoders;             // decoders[s], element w·M̄ + w̄
  StegoCcAudit audit;
  bool warning = false;                   // a sub-code missed its target accuracy

  const DensityMatrix& encode(int key, int w, int wbar) const {
    return per_message[w].inputs[key][wbar];
  }
};

// Recomputes every metric of a keyed stego CC code from its encoders and
// decoders. `warden` maps A^n to the warden's expected output, `true_channel`
// is the actual channel.
StegoCcAudit audit_stego_cc(const StegoCcCode& code, const CcCode& cover,
                            const QuantumChannel& warden,
                            const QuantumChannel& true_channel);

// Noiseless true channel. `m` is the degradation acting on all n uses.
StegoCcCode build_stego_cc_noiseless(const CcCode& cover, const QuantumChannel& m,
                                     int cypher_messages, double zeta, std::uint64_t seed,
                                     int attempts = 64);

struct NoisyOptions {
  int block = 1;   // μ: resolvability codebooks carry μ·M̄ messages
  int trials = 1;  // ensembles drawn per cover message
};

// `side_states[w]` is σ_{XA^n}^w: a PMF with one input state on A^n per symbol.
StegoCcCode build_stego_cc_noisy(const CcCode& cover, const QuantumChannel& m,
                                 const QuantumChannel& true_channel,
                                 const std::vector<CqState>& side_states,
                                 int cypher_messages, int keys, double zeta, double xi,
                                 std::uint64_t seed, const NoisyOptions& opts = {});

struct StegoEsRsCode {
  int messages = 1;
  int cypher_messages = 1;
  long dim_reference = 1;
  long dim_environment = 1;
  long dim_hidden = 1;               // purifying system of the decoder
  Vector psi;                        // on Ã ⊗ B̃ ⊗ R ⊗ E ⊗ H
  Matrix alignment;                  // Uhlmann unitary T on R ⊗ E ⊗ H
  Vector tau;                        // T|0⟩ on R ⊗ E ⊗ H
  std::vector<double> schmidt_weights;  // P_X
  Matrix alice_basis;                // columns |α_x⟩ on R ⊗ E
  Matrix bob_basis;                  // columns |β_x⟩ on H
  HashEncoder hash;
  Povm alice;                        // on R ⊗ E
  Povm bob;                          // on H
  Matrix final_state;                // on Ã ⊗ B̃ ⊗ W_A ⊗ W_B
  double overlap_fidelity = 0.0;     // |⟨Φ ⊗ τ|ψ⟩|²
  double eps_cover = 0.0;
  double zeta_achieved = 0.0;
  double fidelity = 0.0;             // F(final, Φ^(M) ⊗ Φ̄^(M̄))
  double fidelity_bound = 0.0;       // 1 − (√ε + ζ)²
  double output_gap = 0.0;           // max |ρ_B^s − ρ_B^c|
  bool bound_ok = false;
  bool warning = false;
};

// Noiseless true channel; `m` is the degradation on all n uses.
StegoEsRsCode build_stego_es_rs(const EsCode& cover, const QuantumChannel& m,
                                int cypher_messages, double zeta, std::uint64_t seed);

// Orthogonalized correctable Kraus set on the code space of a QC cover.
struct KrausSplit {
  Matrix projector;                // Π = V V†
  std::vector<Matrix> kraus;       // F'_k with Π F'_k† F'_l Π = δ d_k Π
  std::vector<double> weights;     // d_k
  std::vector<double> pj;          // d_k / Σ d
  std::vector<Matrix> unitaries;   // U_k with F'_k Π = √d_k U_k Π
  double gram_residual = 0.0;      // max entry of Π F'† F' Π − δ d Π
  double polar_residual = 0.0;     // max entry of F'_k Π − √d_k U_k Π
};

KrausSplit split_correctable_kraus(const QcCode& cover, const QuantumChannel& m);

struct StegoQcCcCode {
  int messages = 1;
  int cypher_messages = 1;
  KrausSplit split;
  HashEncoder hash;                      // over P_J
  std::vector<int> bucket_sizes;         // μ_w̄
  std::vector<QuantumChannel> encoders;  // ℰ̄^w̄ : W → A^n
  QuantumChannel decoder;                // 𝒟̄ : A^n → W ⊗ W̄
  double hash_defect = 0.0;              // ‖P_{g(J)} − U‖₁
  double twirl_defect = 0.0;             // Σ_j |P_J(j) − twirl weight of U_j|
  double zeta_achieved = 0.0;            // twirl_defect
  double cypher_decode = 0.0;
  double recovery_constant = 0.0;        // c of the cover
  double stego_recovery = 0.0;           // constant of 𝒟̄_W ∘ Ñ ∘ ℰ, Ñ the correctable part
  double stego_recovery_residual = 0.0;
  double eps_cover = 0.0;                // 1 − c
  double max_distance = 0.0;             // over the test inputs
  double distance_bound = 0.0;           // ε + ζ + (1 − c)
  bool bound_ok = false;
  bool warning = false;
};

// Sixteen states on a dimension-`dim` system: basis states, two families of
// superpositions, the maximally mixed state, and seeded random mixed states.
std::vector<DensityMatrix> qc_test_inputs(long dim, std::uint64_t seed);

StegoQcCcCode build_stego_qc_cc(const QcCode& cover, const QuantumChannel& m,
                                int cypher_messages, double zeta, std::uint64_t seed);

// Entanglement distillation code: 𝒠 : A → C ⊗ Ã with C classical of
// dimension L, and 𝒟 : C ⊗ B → B̃.
struct EdCode {
  long entangled = 1;  // M̄
  long classical = 1;  // L
  QuantumChannel encoder;
  QuantumChannel decoder;
};

using DistillerOracle = std::function<std::optional<EdCode>(
    const DensityMatrix& rho_ab, long dim_a, long dim_b, long m, long l, double eps)>;

// Succeeds only on pure states whose top-M Schmidt weights all lie within
// ε/(4M) of 1/M; the returned code rotates the Schmidt bases onto |i⟩|i⟩.
std::optional<EdCode> trivial_aligner_distiller(const DensityMatrix& rho_ab, long dim_a,
                                                long dim_b, long m, long l, double eps);

struct CcEsOptions {
  int cypher_messages = 0;  // M̄^CC for the second block; 0 derives it from the rate formula
  long entangled = 0;       // requested M̄; 0 picks the largest the distiller accepts
  int attempts = 64;
};

struct StegoCcEsCode {
  int cover_messages = 1;
  int cypher_messages = 1;          // M̄^CC
  long entangled = 1;               // M̄
  std::vector<EdCode> distillers;   // per w
  std::vector<KeyedSubcode> block2; // per w, single key
  Povm decoder;                     // on B^n, element w·M̄^CC + w̄
  Matrix final_state;               // on Ã ⊗ B̃
  double classical_reliability = 0.0;
  double entanglement_distance = 0.0;  // ‖ρ_{ÃB̃} − Φ^(M̄)‖₁
  double distillation_distance = 0.0;  // max_w error of the distiller on its own input
  double distance = 0.0;               // ‖ρ^s − ρ^c‖₁
  double zeta_achieved = 0.0;
  double eps_cover = 0.0;
  double entanglement_bound = 0.0;     // 2ζ + 2√(ε+ζ) + 2√(ζ + 2√(ε+ζ))
  double key_bits = 0.0;
  bool bound_ok = false;
};

// Cover codewords must factor as f₁(w) ⊗ f₂(w). `m1`, `m2` are the
// degradations on the two blocks; the true channel is noiseless.
StegoCcEsCode build_stego_cc_es(const CcCode& cover, const std::vector<DensityMatrix>& f1,
                                const std::vector<DensityMatrix>& f2,
                                const QuantumChannel& m1, const QuantumChannel& m2,
                                const DistillerOracle& distiller, double zeta,
                                std::uint64_t seed, const CcEsOptions& opts = {});

}  // namespace qsteg
