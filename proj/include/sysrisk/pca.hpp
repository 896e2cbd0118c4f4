#pragma once

#include "sysrisk/matrix.hpp"
#include "sysrisk/series.hpp"

#include <cstddef>
#include <vector>

namespace sysrisk {

/// Normalization applied to M*M^T. The windowed estimator divides by
/// T - J (J = asset count); the conventional alternatives are kept as
/// explicit modes. Fractional eigenvalues are divisor-invariant.
enum class DivisorMode { PaperTJ, SampleT1, PopulationT };

const char* to_string(DivisorMode mode);

/// Return matrix with each row's mean subtracted, plus the means that
/// were removed. Every row of `values` sums to ~0.
struct DemeanedMatrix {
    Matrix values;                 // N x T
    std::vector<double> row_means; // length N
};

/// Symmetric positive semidefinite covariance estimate and the divisor
/// that produced it.
struct CovarianceMatrix {
    Matrix values;  // N x N
    double divisor = 1.0;
};

/// Eigendecomposition of one covariance window: eigenvalues descending,
/// eigenvector j in column j, each eigenvalue's share of the total and
/// the running (cumulative) shares.
struct EigenReport {
    std::vector<double> eigenvalues; // descending
    Matrix eigenvectors;             // N x N, column-paired with eigenvalues
    std::vector<double> fractional;  // theta_j / sum(theta), >= 0, sums to 1
    std::vector<double> cumulative;  // prefix sums of fractional, ends at 1
};

/// Rolling-window eigenreports, one per window position, stamped with
/// each window's last date.
struct RollingPcaResult {
    std::size_t window_length = 0;
    std::size_t stride = 1;
    struct Entry {
        TradingDate window_end_date;
        EigenReport report;
    };
    std::vector<Entry> entries;
};

constexpr std::size_t kDefaultPcaWindow = 30;
constexpr double kDefaultEigenTol = 1e-10;

/// Subtract each asset's mean return from its row.
DemeanedMatrix demean(const AlignedPanel& panel);

/// (M * M^T) / divisor with divisor T-N, T-1 or T per mode. Throws
/// ConfigError when PaperTJ is requested with T <= N (the estimator is
/// singular there).
CovarianceMatrix covariance(const DemeanedMatrix& m, DivisorMode mode);

/// Eigendecomposition by cyclic Jacobi rotations. Guarantees the
/// reconstruction bound max|Q Theta Q' - Sigma| <= tol * trace(Sigma).
/// Eigenvalues within -tol*trace of zero are clamped to 0 before the
/// fractional normalization; larger negatives and trace <= 0 are
/// NumericErrors, as is failure to converge within the sweep cap.
EigenReport eigen_symmetric(const CovarianceMatrix& c, double tol = kDefaultEigenTol);

/// Apply covariance + eigen_symmetric to every window slice of the
/// panel. Window errors are rethrown with the window index attached.
RollingPcaResult rolling_pca(const AlignedPanel& panel, std::size_t window = kDefaultPcaWindow,
                             std::size_t stride = 1, DivisorMode mode = DivisorMode::PaperTJ,
                             double tol = kDefaultEigenTol);

} // namespace sysrisk
