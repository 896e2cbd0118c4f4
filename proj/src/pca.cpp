#include "sysrisk/pca.hpp"

#include "sysrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sysrisk {

namespace {

constexpr int kMaxJacobiSweeps = 100;

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data()) best = std::max(best, std::abs(v));
    return best;
}

void check_symmetric(const Matrix& a) {
    const double scale = max_abs(a);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * std::max(scale, 1e-300)) {
                throw NumericError("covariance matrix is not symmetric");
            }
        }
    }
}

// Cyclic Jacobi rotations on a copy of `a`; diagonal converges to the
// eigenvalues while `v` accumulates the eigenvectors (column j pairs
// with d[j]). Sweeps annihilate off-diagonal entries until they
// underflow to zero.
void jacobi_eigen(Matrix a, std::vector<double>& d, Matrix& v) {
    const std::size_t n = a.rows();
    v = Matrix::identity(n);
    d.assign(n, 0.0);
    std::vector<double> b(n), z(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) b[i] = d[i] = a(i, i);

    for (int sweep = 1; sweep <= kMaxJacobiSweeps; ++sweep) {
        double off_sum = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off_sum += std::abs(a(p, q));
        }
        if (off_sum == 0.0) return;

        const double thresh = sweep < 4 ? 0.2 * off_sum / static_cast<double>(n * n) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double g = 100.0 * std::abs(a(p, q));
                if (sweep > 4 && std::abs(d[p]) + g == std::abs(d[p]) &&
                    std::abs(d[q]) + g == std::abs(d[q])) {
                    a(p, q) = 0.0;
                } else if (std::abs(a(p, q)) > thresh) {
                    double h = d[q] - d[p];
                    double t;
                    if (std::abs(h) + g == std::abs(h)) {
                        t = a(p, q) / h;
                    } else {
                        const double theta = 0.5 * h / a(p, q);
                        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                        if (theta < 0.0) t = -t;
                    }
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const double tau = s / (1.0 + c);
                    h = t * a(p, q);
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    a(p, q) = 0.0;
                    auto rotate = [&](double& x, double& y) {
                        const double gx = x;
                        const double hy = y;
                        x = gx - s * (hy + gx * tau);
                        y = hy + s * (gx - hy * tau);
                    };
                    for (std::size_t j = 0; j < p; ++j) rotate(a(j, p), a(j, q));
                    for (std::size_t j = p + 1; j < q; ++j) rotate(a(p, j), a(j, q));
                    for (std::size_t j = q + 1; j < n; ++j) rotate(a(p, j), a(q, j));
                    for (std::size_t j = 0; j < n; ++j) rotate(v(j, p), v(j, q));
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    throw NumericError("eigendecomposition did not converge within " +
                       std::to_string(kMaxJacobiSweeps) + " sweeps");
}

Matrix reconstruct(const std::vector<double>& d, const Matrix& v) {
    const std::size_t n = d.size();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += v(i, k) * d[k] * v(j, k);
            out(i, j) = sum;
            out(j, i) = sum;
        }
    }
    return out;
}

DemeanedMatrix demean_slice(const AlignedPanel& panel, std::size_t start, std::size_t len) {
    const std::size_t n = panel.n_assets();
    DemeanedMatrix out;
    out.values = Matrix(n, len);
    out.row_means.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t k = 0; k < len; ++k) mean += panel.returns[i][start + k];
        mean /= static_cast<double>(len);
        out.row_means[i] = mean;
        for (std::size_t k = 0; k < len; ++k) {
            out.values(i, k) = panel.returns[i][start + k] - mean;
        }
    }
    return out;
}

} // namespace

const char* to_string(DivisorMode mode) {
    switch (mode) {
        case DivisorMode::PaperTJ: return "paper";
        case DivisorMode::SampleT1: return "sample";
        case DivisorMode::PopulationT: return "population";
    }
    return "unknown";
}

DemeanedMatrix demean(const AlignedPanel& panel) {
    panel.validate();
    return demean_slice(panel, 0, panel.n_periods());
}

CovarianceMatrix covariance(const DemeanedMatrix& m, DivisorMode mode) {
    const std::size_t n = m.values.rows();
    const std::size_t t = m.values.cols();
    double divisor = 0.0;
    switch (mode) {
        case DivisorMode::PaperTJ:
            if (t <= n) {
                throw ConfigError("T-J divisor needs more periods than assets (T=" +
                                  std::to_string(t) + ", J=" + std::to_string(n) +
                                  "): estimator is singular");
            }
            divisor = static_cast<double>(t - n);
            break;
        case DivisorMode::SampleT1:
            if (t < 2) throw ConfigError("T-1 divisor needs at least 2 periods");
            divisor = static_cast<double>(t - 1);
            break;
        case DivisorMode::PopulationT:
            if (t < 1) throw ConfigError("empty window");
            divisor = static_cast<double>(t);
            break;
    }
    CovarianceMatrix cov;
    cov.divisor = divisor;
    cov.values = m.values.multiply_own_transpose();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cov.values(i, j) /= divisor;
    }
    return cov;
}

EigenReport eigen_symmetric(const CovarianceMatrix& c, double tol) {
    if (tol <= 0.0) throw ConfigError("eigen tolerance must be positive");
    const std::size_t n = c.values.rows();
    if (n == 0 || c.values.cols() != n) throw ConfigError("covariance matrix must be square");
    check_symmetric(c.values);

    const double trace = c.values.trace();
    if (trace <= 0.0) {
        throw NumericError("covariance trace is not positive (all assets constant?)");
    }

    EigenReport report;
    jacobi_eigen(c.values, report.eigenvalues, report.eigenvectors);

    // Descending eigenvalue order, stable, with each eigenvector's first
    // nonzero coordinate made positive so outputs are deterministic.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return report.eigenvalues[a] > report.eigenvalues[b];
    });
    std::vector<double> sorted_vals(n);
    Matrix sorted_vecs(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        sorted_vals[j] = report.eigenvalues[src];
        double sign = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (report.eigenvectors(i, src) != 0.0) {
                sign = report.eigenvectors(i, src) > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            sorted_vecs(i, j) = sign * report.eigenvectors(i, src);
        }
    }
    report.eigenvalues = std::move(sorted_vals);
    report.eigenvectors = std::move(sorted_vecs);

    const Matrix rebuilt = reconstruct(report.eigenvalues, report.eigenvectors);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            err = std::max(err, std::abs(rebuilt(i, j) - c.values(i, j)));
        }
    }
    if (err > tol * trace) {
        throw NumericError("eigendecomposition reconstruction error " + std::to_string(err) +
                           " exceeds bound " + std::to_string(tol * trace));
    }

    // Clamp float-level PSD violations to zero; anything worse is real.
    std::vector<double> clamped(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double v = report.eigenvalues[j];
        if (v < -tol * trace) {
            throw NumericError("covariance matrix has negative eigenvalue " + std::to_string(v));
        }
        clamped[j] = std::max(v, 0.0);
    }
    const double total = std::accumulate(clamped.begin(), clamped.end(), 0.0);
    if (total <= 0.0) throw NumericError("eigenvalue sum is not positive");
    report.fractional.resize(n);
    report.cumulative.resize(n);
    double running = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        report.fractional[j] = clamped[j] / total;
        running += report.fractional[j];
        report.cumulative[j] = running;
    }
    return report;
}

RollingPcaResult rolling_pca(const AlignedPanel& panel, std::size_t window, std::size_t stride,
                             DivisorMode mode, double tol) {
    panel.validate();
    const std::size_t t = panel.n_periods();
    const std::size_t n = panel.n_assets();
    if (window < 2) throw ConfigError("window must be at least 2");
    if (window > t) {
        throw ConfigError("window " + std::to_string(window) + " exceeds panel length " +
                          std::to_string(t));
    }
    if (mode == DivisorMode::PaperTJ && window <= n) {
        throw ConfigError("window " + std::to_string(window) +
                          " must exceed asset count " + std::to_string(n) +
                          " under the T-J divisor");
    }
    if (stride < 1) throw ConfigError("stride must be at least 1");

    RollingPcaResult result;
    result.window_length = window;
    result.stride = stride;
    const std::size_t count = (t - window) / stride + 1;
    result.entries.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t start = w * stride;
        const TradingDate end_date = panel.dates[start + window - 1];
        try {
            const DemeanedMatrix dm = demean_slice(panel, start, window);
            const CovarianceMatrix cov = covariance(dm, mode);
            result.entries.push_back({end_date, eigen_symmetric(cov, tol)});
        } catch (const NumericError& e) {
            throw NumericError("window " + std::to_string(w) + " (ending " +
                               end_date.to_string() + "): " + e.what());
        }
    }
    return result;
}

} // namespace sysrisk
