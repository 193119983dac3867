#pragma once

#include <cstdint>
#include <random>

#include "obmimo/cmatrix.hpp"

// Uplink one-bit system model: Rayleigh channels, DFT pilot blocks, and the
// sign quantizer applied separately to real and imaginary parts. SNRs are
// linear throughout; dB conversion happens at the CLI boundary only.

namespace obmimo {

struct SystemConfig {
    std::size_t antennas = 1;       // base-station antennas
    std::size_t users = 1;          // single-antenna terminals
    std::size_t coherence_len = 1;  // symbols per coherence interval
    std::size_t training_len = 1;   // symbols spent on pilots
    double pilot_snr = 0.0;
    double data_snr = 0.0;
    std::uint64_t seed = 0;

    // Throws std::invalid_argument when users <= training_len <= coherence_len
    // or SNR nonnegativity is violated.
    void validate() const;
};

struct PilotMatrix {
    CMatrix entries;  // training_len x users, unit-magnitude entries
    std::size_t length() const { return entries.rows(); }
    std::size_t users() const { return entries.cols(); }
};

// First `users` columns of the length x length DFT matrix,
// entries exp(-i 2 pi n k / length). Columns are orthogonal with squared
// norm `length`, and every row carries energy `users`.
PilotMatrix make_dft_pilots(std::size_t length, std::size_t users);

struct ChannelSample {
    CMatrix h;  // antennas x users, i.i.d. CN(0,1)
};

ChannelSample draw_channel(std::size_t antennas, std::size_t users, std::mt19937_64& eng);

// Entries confined to {(+/-1 +/- i)/sqrt(2)}.
struct QuantizedBlock {
    CMatrix entries;
};

// Elementwise (sign(Re y) + i sign(Im y))/sqrt(2) with sign(0) := +1, making
// the quantizer a total deterministic function.
QuantizedBlock quantize_one_bit(const CMatrix& y);

enum class SymbolKind {
    Qpsk,     // unit-magnitude, exact peak power 1
    Gaussian  // CN(0,1); only E|s|^2 = 1 is required downstream
};

// users x 1 vector of unit-power data symbols.
CMatrix draw_symbols(std::size_t users, SymbolKind kind, std::mt19937_64& eng);

// Quantized observation of the training block:
//   Q( sqrt(pilot_snr) * H * Phi^T + N ),  antennas x training_len.
QuantizedBlock simulate_training(const SystemConfig& config, const ChannelSample& channel,
                                 const PilotMatrix& pilots, std::mt19937_64& eng);

// Quantized observation of one data slot:
//   Q( sqrt(data_snr) * H * s + n ),  antennas x 1.
QuantizedBlock simulate_data_slot(const SystemConfig& config, const ChannelSample& channel,
                                  const CMatrix& symbols, std::mt19937_64& eng);

}  // namespace obmimo
