#include "sysrisk/synth.hpp"

#include "sysrisk/errors.hpp"

#include <cmath>
#include <numbers>

namespace sysrisk {

void PanelSpec::validate() const {
    if (n_assets < 1) throw ConfigError("panel spec: need at least 1 asset");
    if (n_periods < 2) throw ConfigError("panel spec: need at least 2 periods");
    if (!(base_correlation >= 0.0 && base_correlation < 1.0)) {
        throw ConfigError("panel spec: base correlation must lie in [0, 1)");
    }
    if (!(vol > 0.0)) throw ConfigError("panel spec: vol must be positive");
    if (regime) {
        if (regime->start_index >= regime->end_index || regime->end_index > n_periods) {
            throw ConfigError("panel spec: regime must satisfy 0 <= start < end <= n_periods");
        }
        if (!(regime->correlation >= 0.0 && regime->correlation < 1.0)) {
            throw ConfigError("panel spec: regime correlation must lie in [0, 1)");
        }
    }
}

double NormalSampler::next_uniform() {
    // Top 53 bits, shifted into (0, 1]; never 0, so log() below is safe.
    const std::uint64_t bits = engine_();
    return static_cast<double>((bits >> 11) + 1) * 0x1p-53;
}

double NormalSampler::next() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

AlignedPanel generate(const PanelSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_assets;
    const std::size_t t_len = spec.n_periods;

    AlignedPanel panel;
    panel.asset_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) panel.asset_ids.push_back("asset_" + std::to_string(i + 1));
    panel.dates.reserve(t_len);
    const std::int64_t epoch = kSynthEpoch.serial();
    for (std::size_t t = 0; t < t_len; ++t) {
        panel.dates.push_back(TradingDate::from_serial(epoch + static_cast<std::int64_t>(t)));
    }
    panel.returns.assign(n, std::vector<double>(t_len));

    NormalSampler normals(spec.seed);
    for (std::size_t t = 0; t < t_len; ++t) {
        const bool in_regime =
            spec.regime && t >= spec.regime->start_index && t < spec.regime->end_index;
        const double rho = in_regime ? spec.regime->correlation : spec.base_correlation;
        const double common_load = std::sqrt(rho);
        const double own_load = std::sqrt(1.0 - rho);
        const double common = normals.next();
        for (std::size_t i = 0; i < n; ++i) {
            panel.returns[i][t] = spec.vol * (common_load * common + own_load * normals.next());
        }
    }
    panel.validate();
    return panel;
}

double expected_first_fraction(double rho, std::size_t n) {
    if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("equicorrelation must lie in [0, 1)");
    if (n < 1) throw ConfigError("need at least 1 asset");
    return (1.0 + (static_cast<double>(n) - 1.0) * rho) / static_cast<double>(n);
}

} // namespace sysrisk
