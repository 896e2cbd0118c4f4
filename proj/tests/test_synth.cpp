#include "sysrisk/errors.hpp"
#include "sysrisk/pca.hpp"
#include "sysrisk/synth.hpp"

#include <doctest.h>

#include <cmath>

using namespace sysrisk;

namespace {

// Average pairwise sample correlation across assets.
double mean_pairwise_correlation(const AlignedPanel& panel) {
    const std::size_t n = panel.n_assets();
    const std::size_t t_len = panel.n_periods();
    std::vector<double> means(n, 0.0), sds(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < t_len; ++t) means[i] += panel.returns[i][t];
        means[i] /= static_cast<double>(t_len);
        for (std::size_t t = 0; t < t_len; ++t) {
            const double d = panel.returns[i][t] - means[i];
            sds[i] += d * d;
        }
        sds[i] = std::sqrt(sds[i] / static_cast<double>(t_len));
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double cov = 0.0;
            for (std::size_t t = 0; t < t_len; ++t) {
                cov += (panel.returns[i][t] - means[i]) * (panel.returns[j][t] - means[j]);
            }
            cov /= static_cast<double>(t_len);
            sum += cov / (sds[i] * sds[j]);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

} // namespace

TEST_CASE("identical specs generate bit-identical panels") {
    const PanelSpec spec{.n_assets = 4,
                         .n_periods = 200,
                         .base_correlation = 0.4,
                         .vol = 0.01,
                         .regime = PanelSpec::Regime{50, 120, 0.9},
                         .seed = 99};
    const AlignedPanel p1 = generate(spec);
    const AlignedPanel p2 = generate(spec);
    REQUIRE(p1.n_periods() == p2.n_periods());
    for (std::size_t i = 0; i < p1.n_assets(); ++i) {
        for (std::size_t t = 0; t < p1.n_periods(); ++t) {
            CHECK(p1.returns[i][t] == p2.returns[i][t]);
        }
    }

    PanelSpec other = spec;
    other.seed = 100;
    const AlignedPanel p3 = generate(other);
    bool any_difference = false;
    for (std::size_t t = 0; t < p1.n_periods() && !any_difference; ++t) {
        any_difference = p1.returns[0][t] != p3.returns[0][t];
    }
    CHECK(any_difference);
}

TEST_CASE("dates are consecutive days from the documented epoch") {
    const AlignedPanel panel = generate({.n_assets = 2,
                                         .n_periods = 10,
                                         .base_correlation = 0.0,
                                         .vol = 0.01,
                                         .regime = {},
                                         .seed = 1});
    CHECK(panel.dates[0] == kSynthEpoch);
    for (std::size_t t = 0; t < 10; ++t) {
        CHECK(panel.dates[t].serial() == kSynthEpoch.serial() + static_cast<std::int64_t>(t));
    }
    CHECK(panel.asset_ids[0] == "asset_1");
    CHECK(panel.asset_ids[1] == "asset_2");
}

TEST_CASE("independent panels have near-zero sample correlations") {
    const AlignedPanel panel = generate({.n_assets = 4,
                                         .n_periods = 10000,
                                         .base_correlation = 0.0,
                                         .vol = 0.01,
                                         .regime = {},
                                         .seed = 7});
    const std::size_t n = panel.n_assets();
    // Every pairwise correlation within +-0.05.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            AlignedPanel pair;
            pair.asset_ids = {panel.asset_ids[i], panel.asset_ids[j]};
            pair.dates = panel.dates;
            pair.returns = {panel.returns[i], panel.returns[j]};
            CHECK(std::abs(mean_pairwise_correlation(pair)) <= 0.05);
        }
    }
}

TEST_CASE("sample equicorrelation converges to the spec value") {
    const AlignedPanel panel = generate({.n_assets = 4,
                                         .n_periods = 50000,
                                         .base_correlation = 0.35,
                                         .vol = 0.01,
                                         .regime = {},
                                         .seed = 13});
    CHECK(std::abs(mean_pairwise_correlation(panel) - 0.35) <= 0.02);
}

TEST_CASE("near-perfect correlation drives the first fraction toward 1") {
    const AlignedPanel panel = generate({.n_assets = 2,
                                         .n_periods = 200,
                                         .base_correlation = 0.999,
                                         .vol = 0.01,
                                         .regime = {},
                                         .seed = 17});
    const RollingPcaResult result = rolling_pca(panel, 30);
    for (const auto& entry : result.entries) {
        CHECK(entry.report.fractional[0] > 0.95);
    }
}

TEST_CASE("expected_first_fraction closed form") {
    CHECK(expected_first_fraction(0.0, 4) == 0.25);
    CHECK(expected_first_fraction(0.6, 4) == doctest::Approx(0.70).epsilon(1e-15));
    CHECK(expected_first_fraction(0.999, 7) == doctest::Approx((1.0 + 6.0 * 0.999) / 7.0));
    CHECK_THROWS_AS(expected_first_fraction(1.0, 4), ConfigError);
    CHECK_THROWS_AS(expected_first_fraction(-0.1, 4), ConfigError);
}

TEST_CASE("a high-correlation regime is visible in the rolling first fraction") {
    const AlignedPanel panel = generate({.n_assets = 4,
                                         .n_periods = 600,
                                         .base_correlation = 0.3,
                                         .vol = 0.01,
                                         .regime = PanelSpec::Regime{200, 400, 0.9},
                                         .seed = 19});
    const RollingPcaResult result = rolling_pca(panel, 30);
    double inside = 0.0, outside = 0.0;
    std::size_t inside_count = 0, outside_count = 0;
    for (std::size_t w = 0; w < result.entries.size(); ++w) {
        const std::size_t end = w + 29; // stride 1, window 30
        const std::size_t start = w;
        if (start >= 200 && end < 400) {
            inside += result.entries[w].report.fractional[0];
            ++inside_count;
        } else if (end < 200 || start >= 400) {
            outside += result.entries[w].report.fractional[0];
            ++outside_count;
        }
    }
    REQUIRE(inside_count > 0);
    REQUIRE(outside_count > 0);
    inside /= static_cast<double>(inside_count);
    outside /= static_cast<double>(outside_count);
    CHECK(inside - outside >= 0.15);
}

TEST_CASE("spec validation") {
    PanelSpec spec{.n_assets = 4,
                   .n_periods = 100,
                   .base_correlation = 0.0,
                   .vol = 0.01,
                   .regime = {},
                   .seed = 0};
    CHECK_NOTHROW(spec.validate());
    SUBCASE("correlation bounds") {
        spec.base_correlation = 1.0;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
        spec.base_correlation = -0.01;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
    }
    SUBCASE("regime bounds") {
        spec.regime = PanelSpec::Regime{50, 50, 0.5};
        CHECK_THROWS_AS(spec.validate(), ConfigError);
        spec.regime = PanelSpec::Regime{50, 101, 0.5};
        CHECK_THROWS_AS(spec.validate(), ConfigError);
        spec.regime = PanelSpec::Regime{50, 100, 1.0};
        CHECK_THROWS_AS(spec.validate(), ConfigError);
    }
    SUBCASE("shape bounds") {
        spec.n_periods = 1;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
        spec.n_periods = 100;
        spec.vol = 0.0;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
    }
}
