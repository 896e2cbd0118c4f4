#pragma once

#include "sysrisk/index_builder.hpp"
#include "sysrisk/pca.hpp"
#include "sysrisk/synth.hpp"
#include "sysrisk/xcorr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sysrisk {

/// One input file. The CSV format (prices vs returns) is detected from
/// the header; prices are converted to returns on load.
struct InputFile {
    std::string path;
    std::string asset_id; // defaults to the file stem when empty
};

/// Shared pipeline configuration. Parameters are validated before any
/// computation starts, and a failed run never leaves an output file.
struct RunConfig {
    std::vector<InputFile> inputs;
    std::optional<TradingDate> from;
    std::optional<TradingDate> to;
    std::size_t window = 0; // 0 picks the measure's default
    std::size_t stride = 1;
    std::size_t lag = kDefaultXCorrLag;
    std::size_t period = 1;
    DivisorMode divisor = DivisorMode::PaperTJ;
    Direction direction = Direction::ALeadsB;
    double tol = kDefaultEigenTol;
    std::string output_path;
    std::string manifest_path; // defaults to <output>.manifest.json
    std::string dump_path;     // optional eigenvector JSON / per-lag CSV
};

struct RunOutputs {
    std::vector<std::string> files_written; // outputs then manifest
};

/// ingest -> align -> clip to [from, to] -> aggregate(period) ->
/// rolling_pca -> CSV `window_end_date,frac_*,cum_*` plus manifest.
RunOutputs run_pca_pipeline(const RunConfig& cfg);

/// ingest -> align -> clip -> rolling_xcorr -> CSV
/// `window_end_date,r_lag,band,significant` plus manifest. With more
/// than two inputs the first is the baseline and one output file per
/// comparison is emitted, named <stem>_<asset>.csv.
RunOutputs run_xcorr_pipeline(const RunConfig& cfg);

struct IndexConfig {
    std::string constituents_path;
    std::string sector;              // name from standard_sector_filters(), or
    std::optional<SectorFilter> explicit_range; // an explicit lo..hi pair
    std::string index_id;            // defaults to the sector name
    std::string output_path;
    std::string manifest_path;
};

/// constituents CSV -> build_index -> returns CSV (format B) + manifest.
RunOutputs run_index_pipeline(const IndexConfig& cfg);

struct SynthConfig {
    PanelSpec spec;
    std::string output_path;    // panel CSV, unless per_asset_dir is set
    std::string per_asset_dir;  // one format-B file per asset
    std::string manifest_path;
};

RunOutputs run_synth_pipeline(const SynthConfig& cfg);

/// Parse and validate inputs, then describe them: per file the format,
/// asset id, row count and date range, plus the aligned common range
/// when two or more series are given.
std::string run_ingest_check(const std::vector<InputFile>& inputs);

/// Load one series input (format A converted to returns, format B as is).
ReturnSeries load_return_series(const InputFile& input);

/// FNV-1a 64-bit digest of a file's bytes, as a hex string. Recorded in
/// manifests so reruns can be checked for identical inputs and outputs.
std::string fnv1a64_file_hex(const std::string& path);

} // namespace sysrisk
