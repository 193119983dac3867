#include "obmimo/system_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "obmimo/kernels.hpp"
#include "obmimo/mc.hpp"

namespace obmimo {

void SystemConfig::validate() const {
    if (antennas < 1) throw std::invalid_argument("config: antennas must be >= 1");
    if (users < 1) throw std::invalid_argument("config: users must be >= 1");
    if (training_len < users) throw std::invalid_argument("config: training_len must be >= users");
    if (training_len > coherence_len)
        throw std::invalid_argument("config: training_len must be <= coherence_len");
    if (!(pilot_snr >= 0.0)) throw std::invalid_argument("config: pilot_snr must be >= 0");
    if (!(data_snr >= 0.0)) throw std::invalid_argument("config: data_snr must be >= 0");
}

PilotMatrix make_dft_pilots(std::size_t length, std::size_t users) {
    if (users < 1 || length < users)
        throw std::invalid_argument("make_dft_pilots: need 1 <= users <= length");
    PilotMatrix pilots{CMatrix(length, users)};
    const double step = -2.0 * std::numbers::pi / static_cast<double>(length);
    for (std::size_t n = 0; n < length; ++n) {
        for (std::size_t k = 0; k < users; ++k) {
            const double phase = step * static_cast<double>(n) * static_cast<double>(k);
            pilots.entries(n, k) = cxd{std::cos(phase), std::sin(phase)};
        }
    }
    return pilots;
}

ChannelSample draw_channel(std::size_t antennas, std::size_t users, std::mt19937_64& eng) {
    ChannelSample sample{CMatrix(antennas, users)};
    fill_complex_gaussian(sample.h, eng);
    return sample;
}

QuantizedBlock quantize_one_bit(const CMatrix& y) {
    QuantizedBlock q{CMatrix(y.rows(), y.cols())};
    kernels::active_kernels().quantize(reinterpret_cast<const double*>(y.data()),
                                       reinterpret_cast<double*>(q.entries.data()),
                                       2 * y.size());
    return q;
}

CMatrix draw_symbols(std::size_t users, SymbolKind kind, std::mt19937_64& eng) {
    CMatrix s(users, 1);
    if (kind == SymbolKind::Qpsk) {
        constexpr double c = 0.70710678118654752440;
        std::uniform_int_distribution<int> quadrant(0, 3);
        for (std::size_t k = 0; k < users; ++k) {
            const int q = quadrant(eng);
            s(k, 0) = cxd{(q & 1) ? -c : c, (q & 2) ? -c : c};
        }
    } else {
        fill_complex_gaussian(s, eng);
    }
    return s;
}

QuantizedBlock simulate_training(const SystemConfig& config, const ChannelSample& channel,
                                 const PilotMatrix& pilots, std::mt19937_64& eng) {
    config.validate();
    if (channel.h.rows() != config.antennas || channel.h.cols() != config.users)
        throw std::invalid_argument("simulate_training: channel shape mismatch");
    if (pilots.users() != config.users || pilots.length() != config.training_len)
        throw std::invalid_argument("simulate_training: pilot shape mismatch");
    CMatrix received(config.antennas, config.training_len);
    fill_complex_gaussian(received, eng);
    const CMatrix pilots_t = transpose(pilots.entries);
    matmul_into(std::sqrt(config.pilot_snr), channel.h, pilots_t, 1.0, received);
    return quantize_one_bit(received);
}

QuantizedBlock simulate_data_slot(const SystemConfig& config, const ChannelSample& channel,
                                  const CMatrix& symbols, std::mt19937_64& eng) {
    config.validate();
    if (channel.h.rows() != config.antennas || channel.h.cols() != config.users)
        throw std::invalid_argument("simulate_data_slot: channel shape mismatch");
    if (symbols.rows() != config.users || symbols.cols() != 1)
        throw std::invalid_argument("simulate_data_slot: symbol vector shape mismatch");
    CMatrix received(config.antennas, 1);
    fill_complex_gaussian(received, eng);
    matmul_into(std::sqrt(config.data_snr), channel.h, symbols, 1.0, received);
    return quantize_one_bit(received);
}

}  // namespace obmimo
