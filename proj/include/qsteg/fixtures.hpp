#pragma once

#include <vector>

#include "qsteg/channel.hpp"
#include "qsteg/codes.hpp"

namespace qsteg {

// Kraus indices of I, X₁, X₂, X₃ in bit_flip(p)^⊗3.
inline const std::vector<std::size_t> kBitFlipCorrectable = {0, 4, 2, 1};

// |0⟩ ↦ |000⟩, |1⟩ ↦ |111⟩.
Matrix bit_flip_encoder();

// Syndrome-measure-and-correct decoder onto the logical qubit.
QuantumChannel bit_flip_decoder();

// Repetition code against `warden` on three qubits, recovering the Kraus
// operators listed in `correctable`.
QcCode bit_flip_repetition_code(const QuantumChannel& warden,
                                const std::vector<std::size_t>& correctable = kBitFlipCorrectable);

// At most one bit flip: Kraus {√(1−3q) I, √q X₁, √q X₂, √q X₃}.
QuantumChannel single_flip_channel(double q);

// Majority vote over n qubits between |0…0⟩ and |1…1⟩.
Povm majority_vote(int n);

// Φ^(2) on Ã ⊗ A₁ and |+⟩ on A₂; Bob keeps B₁.
EsCode two_use_es_cover(const QuantumChannel& m);

}  // namespace qsteg
