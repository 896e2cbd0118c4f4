// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include "sysrisk/index_builder.hpp"
#include "sysrisk/ingest.hpp"
#include "sysrisk/pca.hpp"
#include "sysrisk/pipeline.hpp"
#include "sysrisk/synth.hpp"
#include "sysrisk/xcorr.hpp"

#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace sysrisk;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> check;
};

// 1. Significance-band anchor: k = 90 gives 2/sqrt(90) = 0.21082 (~21%).
bool band_anchor(std::string& detail) {
    const double band = significance_band(90);
    std::vector<double> a(90), b(90);
    for (std::size_t i = 0; i < 90; ++i) {
        a[i] = (i % 2 == 0) ? 0.01 : -0.01;
        b[i] = (i % 3 == 0) ? 0.01 : -0.005;
    }
    const XCorrReport report = xcorr(a, b, Direction::ALeadsB);
    std::ostringstream os;
    os << "band=" << band;
    detail = os.str();
    return std::abs(band - 0.21082) <= 1e-5 && std::abs(report.band - 0.21082) <= 1e-5;
}

// 2. Uniform-spread anchor: identity covariance spreads evenly.
bool uniform_spread_anchor(std::string& detail) {
    CovarianceMatrix c;
    c.values = Matrix::identity(4);
    c.divisor = 1.0;
    const EigenReport report = eigen_symmetric(c);
    const double expected[4] = {0.25, 0.5, 0.75, 1.0};
    double worst = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        worst = std::max(worst, std::abs(report.cumulative[j] - expected[j]));
    }
    std::ostringstream os;
    os << "max deviation=" << worst;
    detail = os.str();
    return worst <= 1e-12;
}

// 3. Convolution route equals the brute-force route, 500 random pairs.
bool xcorr_oracle_equivalence(std::string& detail) {
    oracles::TestRng rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 2 + rng.integer(0, 198);
        std::vector<double> a(k), b(k);
        for (std::size_t i = 0; i < k; ++i) {
            a[i] = 0.02 * rng.gaussian();
            b[i] = 0.02 * rng.gaussian();
        }
        const Direction dir = trial % 2 == 0 ? Direction::ALeadsB : Direction::BLeadsA;
        const XCorrReport fast = xcorr(a, b, dir);
        const XCorrReport slow = xcorr_bruteforce(a, b, dir);
        for (std::size_t l = 0; l < k; ++l) {
            worst = std::max(worst, std::abs(fast.r[l] - slow.r[l]));
        }
    }
    std::ostringstream os;
    os << "max |r_fast - r_brute| = " << worst;
    detail = os.str();
    return worst <= 1e-10;
}

// 4. Eigen oracle: bisection roots for N <= 3, reconstruction for N <= 8.
bool eigen_oracle_equivalence(std::string& detail) {
    oracles::TestRng rng(1003);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 3;
        CovarianceMatrix c;
        c.values = oracles::random_psd(n, rng);
        c.divisor = 1.0;
        if (c.values.trace() <= 0.0) continue;
        const EigenReport report = eigen_symmetric(c);
        const std::vector<double> expected = oracles::charpoly_eigenvalues(c.values);
        for (std::size_t j = 0; j < n; ++j) {
            const double scale = std::max(std::abs(expected[j]), 1e-12 * c.values.trace());
            worst_rel = std::max(worst_rel, std::abs(report.eigenvalues[j] - expected[j]) / scale);
        }
    }

    double worst_recon = 0.0; // relative to trace
    for (std::size_t n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            CovarianceMatrix c;
            c.values = oracles::random_psd(n, rng);
            c.divisor = 1.0;
            const double trace = c.values.trace();
            if (trace <= 0.0) continue;
            const EigenReport report = eigen_symmetric(c);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    double rebuilt = 0.0;
                    for (std::size_t k = 0; k < n; ++k) {
                        rebuilt += report.eigenvectors(i, k) * report.eigenvalues[k] *
                                   report.eigenvectors(j, k);
                    }
                    worst_recon =
                        std::max(worst_recon, std::abs(rebuilt - c.values(i, j)) / trace);
                }
            }
        }
    }
    std::ostringstream os;
    os << "max eigenvalue rel err = " << worst_rel << ", max recon/trace = " << worst_recon;
    detail = os.str();
    return worst_rel <= 1e-7 && worst_recon <= 1e-10;
}

// 5. A one-step-shifted pair is detected with r = 1 at lag 1.
bool shift_detection(std::string& detail) {
    constexpr std::size_t length = 489;
    static constexpr double pattern[6] = {1.0, 1.0, -1.0, -1.0, 1.0, -1.0};
    std::vector<double> base(length + 1);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = 0.01 * pattern[i % 6];

    ReturnSeries a, b;
    a.asset_id = "a";
    b.asset_id = "b";
    for (std::size_t t = 0; t < length; ++t) {
        const TradingDate date = TradingDate::from_serial(13149 + static_cast<std::int64_t>(t));
        a.points.push_back({date, base[t + 1]}); // a_t
        b.points.push_back({date, base[t]});     // b_t = a_{t-1}
    }
    const RollingXCorrResult result = rolling_xcorr(a, b, 90, 1, 1, Direction::ALeadsB);
    double worst = 1.0;
    for (const auto& entry : result.entries) {
        if (!entry.r_at_lag) return false;
        worst = std::min(worst, *entry.r_at_lag);
    }
    std::ostringstream os;
    os << result.entries.size() << " windows, min r = " << worst;
    detail = os.str();
    return result.entries.size() == length - 90 + 1 && std::abs(worst - 1.0) <= 1e-9;
}

// 6. Regime detection at desk scale across 50 seeds.
bool regime_detection(std::string& detail) {
    const double inside_floor = expected_first_fraction(0.9, 4) - 0.07;  // 0.855
    const double outside_ceiling = expected_first_fraction(0.3, 4) + 0.10; // 0.575
    int passes = 0;
    double worst_inside = 1.0, worst_outside = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const AlignedPanel panel = generate({.n_assets = 4,
                                             .n_periods = 600,
                                             .base_correlation = 0.3,
                                             .vol = 0.01,
                                             .regime = PanelSpec::Regime{200, 400, 0.9},
                                             .seed = seed});
        const RollingPcaResult result = rolling_pca(panel, 30);
        double inside = 0.0, outside = 0.0;
        std::size_t inside_count = 0, outside_count = 0;
        for (std::size_t w = 0; w < result.entries.size(); ++w) {
            const std::size_t start = w, end = w + 29;
            const double frac1 = result.entries[w].report.fractional[0];
            if (start >= 200 && end < 400) {
                inside += frac1;
                ++inside_count;
            } else if (end < 200 || start >= 400) {
                outside += frac1;
                ++outside_count;
            }
        }
        inside /= static_cast<double>(inside_count);
        outside /= static_cast<double>(outside_count);
        worst_inside = std::min(worst_inside, inside);
        worst_outside = std::max(worst_outside, outside);
        if (inside > inside_floor && outside < outside_ceiling) ++passes;
    }
    std::ostringstream os;
    os << passes << "/50 seeds (inside min " << worst_inside << " vs > " << inside_floor
       << ", outside max " << worst_outside << " vs < " << outside_ceiling << ")";
    detail = os.str();
    return passes >= 48; // >= 95% of 50
}

// 7. False-positive control: independent pair, 1000 windows of 90.
bool false_positive_control(std::string& detail) {
    const AlignedPanel panel = generate({.n_assets = 2,
                                         .n_periods = 1089,
                                         .base_correlation = 0.0,
                                         .vol = 0.01,
                                         .regime = {},
                                         .seed = 8});
    const RollingXCorrResult result =
        rolling_xcorr(panel.row_series(0), panel.row_series(1), 90, 1, 1, Direction::ALeadsB);
    std::size_t exceedances = 0;
    for (const auto& entry : result.entries) {
        if (!entry.r_at_lag) return false;
        if (std::abs(*entry.r_at_lag) > entry.band) ++exceedances;
    }
    const double fraction =
        static_cast<double>(exceedances) / static_cast<double>(result.entries.size());
    std::ostringstream os;
    os << exceedances << "/" << result.entries.size() << " outside the band (" << fraction << ")";
    detail = os.str();
    return result.entries.size() == 1000 && fraction <= 0.10;
}

// 8. Invariance bundle.
bool invariance_suite(std::string& detail) {
    std::ostringstream os;
    bool ok = true;

    // Fractional eigenvalues invariant to divisor mode and panel scale.
    {
        const AlignedPanel panel = generate({.n_assets = 4,
                                             .n_periods = 60,
                                             .base_correlation = 0.4,
                                             .vol = 0.01,
                                             .regime = {},
                                             .seed = 4});
        AlignedPanel scaled = panel;
        for (auto& row : scaled.returns) {
            for (auto& v : row) v *= 5.25;
        }
        const std::vector<double> ref =
            eigen_symmetric(covariance(demean(panel), DivisorMode::PaperTJ)).fractional;
        double worst = 0.0;
        for (const DivisorMode mode :
             {DivisorMode::PaperTJ, DivisorMode::SampleT1, DivisorMode::PopulationT}) {
            for (const AlignedPanel* p : {&panel, static_cast<const AlignedPanel*>(&scaled)}) {
                const std::vector<double> got =
                    eigen_symmetric(covariance(demean(*p), mode)).fractional;
                for (std::size_t j = 0; j < 4; ++j) {
                    worst = std::max(worst, std::abs(got[j] - ref[j]));
                }
            }
        }
        os << "fraction drift " << worst;
        ok = ok && worst <= 1e-9;
    }

    // Index weights sum to 1.
    {
        oracles::TestRng rng(2005);
        double cap_sum = 0.0;
        std::vector<double> caps;
        for (int f = 0; f < 11; ++f) {
            caps.push_back(rng.uniform(1.0, 500.0));
            cap_sum += caps.back();
        }
        double weight_sum = 0.0;
        for (const double cap : caps) weight_sum += cap / cap_sum;
        os << ", weight sum err " << std::abs(weight_sum - 1.0);
        ok = ok && std::abs(weight_sum - 1.0) <= 1e-12;
    }

    // Align idempotence.
    {
        ReturnSeries a, b;
        a.asset_id = "a";
        b.asset_id = "b";
        oracles::TestRng rng(2007);
        for (int t = 0; t < 40; ++t) {
            const TradingDate date = TradingDate::from_serial(13140 + t);
            a.points.push_back({date, 0.01 * rng.gaussian()});
            if (t >= 5 && t < 35) b.points.push_back({date, 0.01 * rng.gaussian()});
        }
        const AlignedPanel once = align({a, b});
        const AlignedPanel twice = align({once.row_series(0), once.row_series(1)});
        bool same = once.n_periods() == twice.n_periods();
        for (std::size_t t = 0; same && t < once.n_periods(); ++t) {
            same = once.dates[t] == twice.dates[t] && once.returns[0][t] == twice.returns[0][t] &&
                   once.returns[1][t] == twice.returns[1][t];
        }
        os << ", align idempotent " << (same ? "yes" : "NO");
        ok = ok && same;
    }

    // Lag-0 self-correlation is 1.
    {
        oracles::TestRng rng(2009);
        std::vector<double> w(90);
        for (auto& v : w) v = 0.01 * rng.gaussian();
        const XCorrReport report = xcorr(w, w, Direction::ALeadsB);
        os << ", self r0 err " << std::abs(report.r[0] - 1.0);
        ok = ok && std::abs(report.r[0] - 1.0) <= 1e-12;
    }

    // Byte-identical reruns of a full pipeline, manifest included.
    {
        testsupport::ScopedTempDir dir;
        SynthConfig synth;
        synth.spec.n_assets = 3;
        synth.spec.n_periods = 120;
        synth.spec.base_correlation = 0.5;
        synth.spec.vol = 0.01;
        synth.spec.seed = 42;
        synth.per_asset_dir = dir.file("in");
        run_synth_pipeline(synth);

        RunConfig cfg;
        for (int i = 1; i <= 3; ++i) {
            cfg.inputs.push_back({dir.file("in/asset_" + std::to_string(i) + ".csv"), ""});
        }
        cfg.window = 30;
        cfg.output_path = dir.file("pca.csv");
        run_pca_pipeline(cfg);
        const std::string csv1 = testsupport::read_file(cfg.output_path);
        const std::string man1 = testsupport::read_file(dir.file("pca.csv.manifest.json"));
        run_pca_pipeline(cfg);
        const bool same = csv1 == testsupport::read_file(cfg.output_path) &&
                          man1 == testsupport::read_file(dir.file("pca.csv.manifest.json"));
        os << ", rerun identical " << (same ? "yes" : "NO");
        ok = ok && same;
    }

    detail = os.str();
    return ok;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"significance band at k=90 is 2/sqrt(90) = 0.21082 (+-1e-5)", band_anchor},
        {"identity 4x4 covariance spreads cumulative fractions .25/.5/.75/1 (+-1e-12)",
         uniform_spread_anchor},
        {"xcorr equals brute-force oracle on 500 random pairs (+-1e-10 per lag)",
         xcorr_oracle_equivalence},
        {"eigenvalues match charpoly bisection (N<=3, 1e-7 rel); reconstruction <= 1e-10*trace "
         "(N<=8)",
         eigen_oracle_equivalence},
        {"one-step-shifted pair gives r=1 at lag 1 in every window (+-1e-9)", shift_detection},
        {"regime detection: inside mean > 0.855, outside < 0.575 on >= 95% of 50 seeds",
         regime_detection},
        {"false positives: |r_lag1| > 2/sqrt(90) in <= 10% of 1000 independent windows",
         false_positive_control},
        {"invariance suite: scaling/divisor, weight sum, align idempotence, self r0, reruns",
         invariance_suite},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  %zu. %s%s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
