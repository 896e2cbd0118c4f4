#pragma once

#include "sysrisk/series.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace sysrisk {

/// Equicorrelated panel description. One correlation parameter maps to
/// a closed-form first-eigenvalue fraction, so generated panels come
/// with an analytic oracle attached.
struct PanelSpec {
    std::size_t n_assets = 4;
    std::size_t n_periods = 600;
    double base_correlation = 0.0; // [0, 1)
    double vol = 0.01;             // per-period return standard deviation
    struct Regime {
        std::size_t start_index = 0; // inclusive
        std::size_t end_index = 0;   // exclusive
        double correlation = 0.0;    // [0, 1)
    };
    std::optional<Regime> regime;
    std::uint64_t seed = 0;

    void validate() const;
};

/// First calendar day of generated panels; period t maps to this date
/// plus t days.
inline const TradingDate kSynthEpoch{2006, 1, 2};

/// Deterministic standard-normal stream: mt19937_64 drives 53-bit
/// uniforms u = ((x >> 11) + 1) * 2^-53 in (0, 1], and each normal is
/// z = sqrt(-2 ln u1) * cos(2 pi u2) (two raw draws per normal). The
/// whole stream is pinned by the seed, so identical specs reproduce
/// identical panels bit for bit.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double next_uniform(); // (0, 1]
    double next();         // standard normal

private:
    std::mt19937_64 engine_;
};

/// Draw a zero-mean panel with per-period equicorrelation
/// base_correlation (regime periods use the regime's correlation) and
/// per-asset standard deviation `vol`, from the one-factor square root
/// of the equicorrelation matrix:
///   r[i][t] = vol * (sqrt(rho_t) * g0(t) + sqrt(1 - rho_t) * g_i(t)).
/// Per period the common factor g0 is drawn first, then g_0..g_{N-1}.
AlignedPanel generate(const PanelSpec& spec);

/// Leading eigenvalue fraction of the N-asset equicorrelation matrix:
/// (1 + (n-1) rho) / n. The asymptotic target for rolling PCA on
/// generated panels.
double expected_first_fraction(double rho, std::size_t n);

} // namespace sysrisk
