#include "sysrisk/xcorr.hpp"

#include "sysrisk/errors.hpp"

#include <cmath>
#include <string>

namespace sysrisk {

namespace {

std::vector<double> demeaned(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - mean;
    return out;
}

double population_sd(const std::vector<double>& centered) {
    double ss = 0.0;
    for (double v : centered) ss += v * v;
    return std::sqrt(ss / static_cast<double>(centered.size()));
}

void check_pair(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw ConfigError("window length mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
    }
    if (a.size() < 2) throw ConfigError("window must have at least 2 points");
}

bool is_constant(const std::vector<double>& x) {
    for (double v : x) {
        if (v != x.front()) return false;
    }
    return true;
}

} // namespace

const char* to_string(Direction d) {
    return d == Direction::ALeadsB ? "a_leads_b" : "b_leads_a";
}

double significance_band(std::size_t k) {
    return 2.0 / std::sqrt(static_cast<double>(k));
}

int significance(double r, double band) {
    if (r > band) return 1;
    if (r < -band) return -1;
    return 0;
}

LagCovariances lag_covariances(const std::vector<double>& a, const std::vector<double>& b) {
    check_pair(a, b);
    const std::size_t k = a.size();
    LagCovariances out;
    out.sums.resize(k);
    out.counts.resize(k);
    for (std::size_t l = 0; l < k; ++l) {
        double sum = 0.0;
        for (std::size_t t = 0; t + l < k; ++t) sum += a[t + l] * b[t];
        out.sums[l] = sum;
        out.counts[l] = k - l;
    }
    return out;
}

XCorrReport xcorr(const std::vector<double>& a, const std::vector<double>& b,
                  Direction direction) {
    check_pair(a, b);
    if (is_constant(a) || is_constant(b)) {
        throw NumericError("constant window: standard deviation is zero");
    }
    const std::size_t k = a.size();
    const std::vector<double> da = demeaned(a);
    const std::vector<double> db = demeaned(b);
    const double sd_a = population_sd(da);
    const double sd_b = population_sd(db);
    if (sd_a == 0.0 || sd_b == 0.0) {
        throw NumericError("constant window: standard deviation is zero");
    }

    // The follower goes first: its values l steps ahead are paired with
    // the leader's earlier ones.
    const LagCovariances lc = direction == Direction::BLeadsA ? lag_covariances(da, db)
                                                              : lag_covariances(db, da);
    XCorrReport report;
    report.k = k;
    report.direction = direction;
    report.band = significance_band(k);
    report.r.resize(k);
    for (std::size_t l = 0; l < k; ++l) {
        report.r[l] = lc.sums[l] / static_cast<double>(lc.counts[l]) / (sd_a * sd_b);
    }
    return report;
}

XCorrReport xcorr_bruteforce(const std::vector<double>& a, const std::vector<double>& b,
                             Direction direction) {
    check_pair(a, b);
    if (is_constant(a) || is_constant(b)) {
        throw NumericError("constant window: standard deviation is zero");
    }
    const std::size_t k = a.size();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        mean_a += a[t];
        mean_b += b[t];
    }
    mean_a /= static_cast<double>(k);
    mean_b /= static_cast<double>(k);
    double ss_a = 0.0, ss_b = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        ss_a += (a[t] - mean_a) * (a[t] - mean_a);
        ss_b += (b[t] - mean_b) * (b[t] - mean_b);
    }
    const double sd_a = std::sqrt(ss_a / static_cast<double>(k));
    const double sd_b = std::sqrt(ss_b / static_cast<double>(k));
    if (sd_a == 0.0 || sd_b == 0.0) {
        throw NumericError("constant window: standard deviation is zero");
    }

    XCorrReport report;
    report.k = k;
    report.direction = direction;
    report.band = significance_band(k);
    report.r.resize(k);
    // Summed highest index first, so agreement with the convolution
    // route is numerical, not an artifact of identical rounding.
    for (std::size_t l = 0; l < k; ++l) {
        double sum = 0.0;
        if (direction == Direction::BLeadsA) {
            for (std::size_t t = k - l; t-- > 0;) {
                sum += (a[t + l] - mean_a) * (b[t] - mean_b);
            }
        } else {
            for (std::size_t t = k - l; t-- > 0;) {
                sum += (b[t + l] - mean_b) * (a[t] - mean_a);
            }
        }
        report.r[l] = sum / static_cast<double>(k - l) / (sd_a * sd_b);
    }
    return report;
}

RollingXCorrResult rolling_xcorr(const ReturnSeries& a, const ReturnSeries& b,
                                 std::size_t window, std::size_t stride, std::size_t lag,
                                 Direction direction) {
    a.validate();
    b.validate();
    if (a.points.size() != b.points.size()) {
        throw DataError("series '" + a.asset_id + "' and '" + b.asset_id +
                        "' are not aligned (different lengths)");
    }
    for (std::size_t t = 0; t < a.points.size(); ++t) {
        if (!(a.points[t].date == b.points[t].date)) {
            throw DataError("series '" + a.asset_id + "' and '" + b.asset_id +
                            "' are not aligned at position " + std::to_string(t));
        }
    }
    const std::size_t shared = a.points.size();
    if (window < 2) throw ConfigError("window must be at least 2");
    if (window > shared) {
        throw ConfigError("window " + std::to_string(window) + " exceeds shared length " +
                          std::to_string(shared));
    }
    if (lag >= window) {
        throw ConfigError("lag " + std::to_string(lag) + " must be smaller than window " +
                          std::to_string(window));
    }
    if (stride < 1) throw ConfigError("stride must be at least 1");

    RollingXCorrResult result;
    result.lag = lag;
    result.window_length = window;
    const double band = significance_band(window);
    const std::size_t count = (shared - window) / stride + 1;
    result.entries.reserve(count);
    std::vector<double> wa(window), wb(window);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t start = w * stride;
        for (std::size_t t = 0; t < window; ++t) {
            wa[t] = a.points[start + t].value;
            wb[t] = b.points[start + t].value;
        }
        const TradingDate end_date = a.points[start + window - 1].date;
        try {
            const XCorrReport report = xcorr(wa, wb, direction);
            result.entries.push_back({end_date, report.r[lag], band});
        } catch (const NumericError&) {
            // Constant window: keep the position as an explicit gap.
            result.entries.push_back({end_date, std::nullopt, band});
        }
    }
    return result;
}

} // namespace sysrisk
