#include "wet/channel.hpp"

#include <cmath>
#include <numbers>

namespace wet {

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer over master xor a Weyl-stepped index
    std::uint64_t z = master ^ (index * 0x9E3779B97F4A7C15ULL + 0xBF58476D1CE4E5B9ULL);
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

std::complex<double> complex_gaussian(std::mt19937_64& rng, double variance) {
    std::normal_distribution<double> dist(0.0, std::sqrt(0.5 * variance));
    const double re = dist(rng);
    const double im = dist(rng);
    return {re, im};
}

ChannelRealization gen_iid(const SystemParams& p, std::mt19937_64& rng) {
    ChannelRealization ch;
    ch.gains.resize(p.n_subbands, p.m);
    for (int n = 0; n < p.n_subbands; ++n)
        for (int m = 0; m < p.m; ++m)
            ch.gains(n, m) = complex_gaussian(rng, p.beta);
    return ch;
}

PdpProfile PdpProfile::standard(double sigma_rms, double bandwidth_hz) {
    if (!(sigma_rms > 0) || !(bandwidth_hz > 0))
        throw ConfigError("PdpProfile: sigma_rms and bandwidth_hz must be > 0");
    PdpProfile prof;
    prof.sigma_rms = sigma_rms;
    // Half the delay-resolution spacing 1/B. A grid at exactly 1/B makes the
    // frequency response periodic with period B, so the two band-edge
    // sub-bands (separation ~B) would alias into near-full correlation; at
    // 1/(2B) the alias sits at 2B and both edge terms stay below 0.03.
    prof.tap_spacing = 0.5 / bandwidth_hz;
    // geometric tap powers with ratio rho; keep cumulative power >= 1 - 1e-4
    const double rho = std::exp(-prof.tap_spacing / sigma_rms);
    prof.num_taps = std::max(1, static_cast<int>(std::ceil(std::log(1e-4) / std::log(rho))));
    return prof;
}

PdpModel::PdpModel(const SystemParams& p, const PdpProfile& profile) : m_(p.m) {
    if (profile.num_taps < 1 || !(profile.sigma_rms > 0) || !(profile.tap_spacing > 0))
        throw ConfigError("PdpModel: invalid profile");
    const int num_taps = profile.num_taps;
    Eigen::VectorXd power(num_taps);
    for (int l = 0; l < num_taps; ++l)
        power(l) = std::exp(-l * profile.tap_spacing / profile.sigma_rms);
    power *= p.beta / power.sum();
    tap_amp_ = power.cwiseSqrt();

    const double subband_spacing = p.bandwidth_hz / p.n_subbands;
    steering_.resize(p.n_subbands, num_taps);
    for (int n = 0; n < p.n_subbands; ++n) {
        const double f_n = (n + 1 - 0.5 * (p.n_subbands + 1)) * subband_spacing;
        for (int l = 0; l < num_taps; ++l) {
            const double phase = -2.0 * std::numbers::pi * f_n * l * profile.tap_spacing;
            steering_(n, l) = std::polar(1.0, phase);
        }
    }
}

ChannelRealization PdpModel::generate(std::mt19937_64& rng) const {
    const int num_taps = static_cast<int>(tap_amp_.size());
    Eigen::MatrixXcd taps(num_taps, m_);
    for (int l = 0; l < num_taps; ++l)
        for (int m = 0; m < m_; ++m)
            taps(l, m) = tap_amp_(l) * complex_gaussian(rng, 1.0);
    return ChannelRealization{steering_ * taps};
}

ChannelRealization gen_pdp(const SystemParams& p, const PdpProfile& profile,
                           std::mt19937_64& rng) {
    return PdpModel(p, profile).generate(rng);
}

} // namespace wet
