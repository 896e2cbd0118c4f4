#include "sysrisk/pipeline.hpp"

#include "sysrisk/errors.hpp"
#include "sysrisk/ingest.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace sysrisk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string stem_of(const std::string& path) {
    return fs::path(path).stem().string();
}

std::string resolve_asset_id(const InputFile& input) {
    return input.asset_id.empty() ? stem_of(input.path) : input.asset_id;
}

std::string default_manifest_path(const std::string& output_path) {
    return output_path + ".manifest.json";
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    return in;
}

/// Fully materialized outputs, written only after every computation has
/// succeeded. If any write fails, everything written so far is removed.
class OutputSet {
public:
    void add(std::string path, std::string content) {
        staged_.emplace_back(std::move(path), std::move(content));
    }

    std::vector<std::string> commit() {
        std::vector<std::string> written;
        try {
            for (const auto& [path, content] : staged_) {
                const fs::path parent = fs::path(path).parent_path();
                if (!parent.empty()) fs::create_directories(parent);
                std::ofstream out(path, std::ios::binary | std::ios::trunc);
                if (!out) throw DataError("cannot open output file '" + path + "'");
                out.write(content.data(), static_cast<std::streamsize>(content.size()));
                out.flush();
                if (!out) throw DataError("failed writing output file '" + path + "'");
                written.push_back(path);
            }
        } catch (...) {
            std::error_code ec;
            for (const auto& path : written) fs::remove(path, ec);
            throw;
        }
        return written;
    }

private:
    std::vector<std::pair<std::string, std::string>> staged_;
};

void check_paths_distinct(const std::vector<std::string>& input_paths,
                          const std::vector<std::string>& output_paths) {
    std::set<std::string> outs;
    for (const auto& p : output_paths) {
        if (!outs.insert(p).second) {
            throw ConfigError("output path '" + p + "' used more than once");
        }
    }
    for (const auto& p : input_paths) {
        if (outs.count(p)) {
            throw ConfigError("input path '" + p + "' collides with an output path");
        }
    }
}

json inputs_manifest(const std::vector<InputFile>& inputs) {
    json arr = json::array();
    for (const auto& input : inputs) {
        arr.push_back({{"path", input.path},
                       {"asset_id", resolve_asset_id(input)},
                       {"fnv1a64", fnv1a64_file_hex(input.path)}});
    }
    return arr;
}

json outputs_manifest(const std::vector<std::pair<std::string, std::string>>& outputs) {
    // (path, content) pairs; digest the staged bytes so the manifest can
    // be assembled before anything touches the filesystem.
    json arr = json::array();
    for (const auto& [path, content] : outputs) {
        std::uint64_t h = 14695981039346656037ull;
        for (const unsigned char c : content) {
            h ^= c;
            h *= 1099511628211ull;
        }
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        arr.push_back({{"path", path}, {"fnv1a64", buf}});
    }
    return arr;
}

RunOutputs commit_with_manifest(OutputSet& outputs,
                                std::vector<std::pair<std::string, std::string>> staged,
                                const std::string& manifest_path, json manifest) {
    manifest["outputs"] = outputs_manifest(staged);
    for (auto& [path, content] : staged) outputs.add(std::move(path), std::move(content));
    outputs.add(manifest_path, manifest.dump(2) + "\n");
    return RunOutputs{outputs.commit()};
}

AlignedPanel load_aligned_panel(const RunConfig& cfg) {
    std::vector<ReturnSeries> series;
    series.reserve(cfg.inputs.size());
    for (const auto& input : cfg.inputs) series.push_back(load_return_series(input));
    AlignedPanel panel = align(series);
    if (cfg.from || cfg.to) {
        const TradingDate lo = cfg.from.value_or(panel.dates.front());
        const TradingDate hi = cfg.to.value_or(panel.dates.back());
        panel = clip_date_range(panel, lo, hi);
    }
    return panel;
}

json common_params(const RunConfig& cfg, std::size_t window) {
    json params;
    params["window"] = window;
    params["stride"] = cfg.stride;
    if (cfg.from) params["from"] = cfg.from->to_string();
    if (cfg.to) params["to"] = cfg.to->to_string();
    return params;
}

std::string derived_output_path(const std::string& template_path, const std::string& asset_id) {
    fs::path p(template_path);
    const std::string ext = p.extension().string();
    p.replace_extension();
    return p.string() + "_" + asset_id + ext;
}

} // namespace

std::string fnv1a64_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file '" + path + "' for digest");
    std::uint64_t h = 14695981039346656037ull;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

ReturnSeries load_return_series(const InputFile& input) {
    const std::string asset_id = resolve_asset_id(input);
    std::ifstream probe = open_input(input.path);
    const CsvFormat format = detect_format(probe);
    probe.close();

    std::ifstream in = open_input(input.path);
    switch (format) {
        case CsvFormat::Prices:
            return prices_to_returns(parse_price_csv(in, asset_id));
        case CsvFormat::Returns:
            return parse_return_csv(in, asset_id);
        default:
            throw DataError("input '" + input.path + "' is a " + std::string(to_string(format)) +
                            " file, expected prices or returns");
    }
}

RunOutputs run_pca_pipeline(const RunConfig& cfg) {
    if (cfg.inputs.size() < 2) throw ConfigError("pca needs at least 2 input series");
    if (cfg.output_path.empty()) throw ConfigError("output path is required");
    const std::size_t window = cfg.window == 0 ? kDefaultPcaWindow : cfg.window;
    const std::string manifest_path =
        cfg.manifest_path.empty() ? default_manifest_path(cfg.output_path) : cfg.manifest_path;

    std::vector<std::string> in_paths, out_paths{cfg.output_path, manifest_path};
    for (const auto& i : cfg.inputs) in_paths.push_back(i.path);
    if (!cfg.dump_path.empty()) out_paths.push_back(cfg.dump_path);
    check_paths_distinct(in_paths, out_paths);

    AlignedPanel panel = load_aligned_panel(cfg);
    if (cfg.period > 1) panel = aggregate(panel, cfg.period);
    const RollingPcaResult result = rolling_pca(panel, window, cfg.stride, cfg.divisor, cfg.tol);

    const std::size_t n = panel.n_assets();
    std::ostringstream csv;
    csv << "window_end_date";
    for (std::size_t j = 1; j <= n; ++j) csv << ",frac_" << j;
    for (std::size_t j = 1; j <= n; ++j) csv << ",cum_" << j;
    csv << '\n';
    for (const auto& entry : result.entries) {
        csv << entry.window_end_date.to_string();
        for (double f : entry.report.fractional) csv << ',' << format_double(f);
        for (double c : entry.report.cumulative) csv << ',' << format_double(c);
        csv << '\n';
    }

    std::vector<std::pair<std::string, std::string>> staged;
    staged.emplace_back(cfg.output_path, csv.str());

    if (!cfg.dump_path.empty()) {
        json dump = json::array();
        for (const auto& entry : result.entries) {
            json vectors = json::array();
            for (std::size_t j = 0; j < n; ++j) {
                json column = json::array();
                for (std::size_t i = 0; i < n; ++i) column.push_back(entry.report.eigenvectors(i, j));
                vectors.push_back(std::move(column));
            }
            dump.push_back({{"window_end_date", entry.window_end_date.to_string()},
                            {"eigenvalues", entry.report.eigenvalues},
                            {"eigenvectors", std::move(vectors)}});
        }
        staged.emplace_back(cfg.dump_path, dump.dump(2) + "\n");
    }

    json manifest;
    manifest["tool"] = "sysrisk";
    manifest["version"] = kToolVersion;
    manifest["command"] = "pca";
    json params = common_params(cfg, window);
    params["period"] = cfg.period;
    params["divisor"] = to_string(cfg.divisor);
    params["tol"] = cfg.tol;
    manifest["params"] = std::move(params);
    manifest["inputs"] = inputs_manifest(cfg.inputs);

    OutputSet outputs;
    return commit_with_manifest(outputs, std::move(staged), manifest_path, std::move(manifest));
}

RunOutputs run_xcorr_pipeline(const RunConfig& cfg) {
    if (cfg.inputs.size() < 2) throw ConfigError("xcorr needs 2 input series (or 1 baseline + N)");
    if (cfg.output_path.empty()) throw ConfigError("output path is required");
    const std::size_t window = cfg.window == 0 ? kDefaultXCorrWindow : cfg.window;
    const std::string manifest_path =
        cfg.manifest_path.empty() ? default_manifest_path(cfg.output_path) : cfg.manifest_path;
    const bool batch = cfg.inputs.size() > 2;

    std::vector<ReturnSeries> series;
    series.reserve(cfg.inputs.size());
    for (const auto& input : cfg.inputs) series.push_back(load_return_series(input));

    std::vector<std::string> in_paths, out_paths{manifest_path};
    for (const auto& i : cfg.inputs) in_paths.push_back(i.path);
    std::vector<std::pair<std::size_t, std::string>> jobs; // (comparison row, output path)
    for (std::size_t i = 1; i < series.size(); ++i) {
        jobs.emplace_back(i, batch ? derived_output_path(cfg.output_path, series[i].asset_id)
                                   : cfg.output_path);
        out_paths.push_back(jobs.back().second);
    }
    std::vector<std::string> dump_paths(jobs.size());
    if (!cfg.dump_path.empty()) {
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            dump_paths[j] = batch ? derived_output_path(cfg.dump_path, series[jobs[j].first].asset_id)
                                  : cfg.dump_path;
            out_paths.push_back(dump_paths[j]);
        }
    }
    check_paths_distinct(in_paths, out_paths);

    std::vector<std::pair<std::string, std::string>> staged;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto& [row, out_path] = jobs[j];
        // Pairwise alignment so each comparison keeps its own overlap.
        AlignedPanel pair_panel = align({series[0], series[row]});
        if (cfg.from || cfg.to) {
            const TradingDate lo = cfg.from.value_or(pair_panel.dates.front());
            const TradingDate hi = cfg.to.value_or(pair_panel.dates.back());
            pair_panel = clip_date_range(pair_panel, lo, hi);
        }
        const ReturnSeries a = pair_panel.row_series(0);
        const ReturnSeries b = pair_panel.row_series(1);
        const RollingXCorrResult result =
            rolling_xcorr(a, b, window, cfg.stride, cfg.lag, cfg.direction);

        std::ostringstream csv;
        csv << "window_end_date,r_lag,band,significant\n";
        for (const auto& entry : result.entries) {
            csv << entry.window_end_date.to_string() << ',';
            if (entry.r_at_lag) {
                csv << format_double(*entry.r_at_lag) << ',' << format_double(entry.band) << ','
                    << significance(*entry.r_at_lag, entry.band);
            } else {
                csv << "nan," << format_double(entry.band) << ",0";
            }
            csv << '\n';
        }
        staged.emplace_back(out_path, csv.str());

        if (!cfg.dump_path.empty()) {
            std::ostringstream lags;
            lags << "window_end_date,lag,r\n";
            const std::size_t shared = a.points.size();
            std::vector<double> wa(window), wb(window);
            const std::size_t count = (shared - window) / cfg.stride + 1;
            for (std::size_t w = 0; w < count; ++w) {
                const std::size_t start = w * cfg.stride;
                for (std::size_t t = 0; t < window; ++t) {
                    wa[t] = a.points[start + t].value;
                    wb[t] = b.points[start + t].value;
                }
                const std::string end_date = a.points[start + window - 1].date.to_string();
                try {
                    const XCorrReport rep = xcorr(wa, wb, cfg.direction);
                    for (std::size_t l = 0; l < rep.r.size(); ++l) {
                        lags << end_date << ',' << l << ',' << format_double(rep.r[l]) << '\n';
                    }
                } catch (const NumericError&) {
                    lags << end_date << ",0,nan\n";
                }
            }
            staged.emplace_back(dump_paths[j], lags.str());
        }
    }

    json manifest;
    manifest["tool"] = "sysrisk";
    manifest["version"] = kToolVersion;
    manifest["command"] = "xcorr";
    json params = common_params(cfg, window);
    params["lag"] = cfg.lag;
    params["direction"] = to_string(cfg.direction);
    manifest["params"] = std::move(params);
    manifest["inputs"] = inputs_manifest(cfg.inputs);

    OutputSet outputs;
    return commit_with_manifest(outputs, std::move(staged), manifest_path, std::move(manifest));
}

RunOutputs run_index_pipeline(const IndexConfig& cfg) {
    if (cfg.constituents_path.empty()) throw ConfigError("constituents path is required");
    if (cfg.output_path.empty()) throw ConfigError("output path is required");
    SectorFilter filter;
    std::string sector_label;
    if (cfg.explicit_range) {
        filter = *cfg.explicit_range;
        sector_label =
            std::to_string(filter.sic_lo) + ".." + std::to_string(filter.sic_hi);
    } else {
        const auto filters = standard_sector_filters();
        const auto it = filters.find(cfg.sector);
        if (it == filters.end()) {
            throw ConfigError("unknown sector '" + cfg.sector +
                              "' (expected banks, brokerages or insurers, or an explicit range)");
        }
        filter = it->second;
        sector_label = cfg.sector;
    }
    const std::string index_id = cfg.index_id.empty() ? sector_label : cfg.index_id;
    const std::string manifest_path =
        cfg.manifest_path.empty() ? default_manifest_path(cfg.output_path) : cfg.manifest_path;
    check_paths_distinct({cfg.constituents_path}, {cfg.output_path, manifest_path});

    std::ifstream in = open_input(cfg.constituents_path);
    const std::vector<ConstituentRecord> records = parse_constituents_csv(in);
    const ReturnSeries index = build_index(records, filter, index_id);

    std::ostringstream csv;
    write_return_series_csv(csv, index);

    json manifest;
    manifest["tool"] = "sysrisk";
    manifest["version"] = kToolVersion;
    manifest["command"] = "index";
    manifest["params"] = {{"sector", sector_label},
                          {"sic_lo", filter.sic_lo},
                          {"sic_hi", filter.sic_hi},
                          {"index_id", index_id}};
    manifest["inputs"] = inputs_manifest({{cfg.constituents_path, index_id}});

    std::vector<std::pair<std::string, std::string>> staged;
    staged.emplace_back(cfg.output_path, csv.str());
    OutputSet outputs;
    return commit_with_manifest(outputs, std::move(staged), manifest_path, std::move(manifest));
}

RunOutputs run_synth_pipeline(const SynthConfig& cfg) {
    cfg.spec.validate();
    if (cfg.output_path.empty() && cfg.per_asset_dir.empty()) {
        throw ConfigError("synth needs an output path or a per-asset directory");
    }
    const AlignedPanel panel = generate(cfg.spec);

    std::vector<std::pair<std::string, std::string>> staged;
    if (!cfg.output_path.empty()) {
        std::ostringstream csv;
        write_panel_csv(csv, panel);
        staged.emplace_back(cfg.output_path, csv.str());
    }
    if (!cfg.per_asset_dir.empty()) {
        for (std::size_t i = 0; i < panel.n_assets(); ++i) {
            std::ostringstream csv;
            write_return_series_csv(csv, panel.row_series(i));
            staged.emplace_back(
                (fs::path(cfg.per_asset_dir) / (panel.asset_ids[i] + ".csv")).string(),
                csv.str());
        }
    }
    const std::string manifest_anchor =
        cfg.output_path.empty() ? (fs::path(cfg.per_asset_dir) / "panel").string()
                                : cfg.output_path;
    const std::string manifest_path =
        cfg.manifest_path.empty() ? default_manifest_path(manifest_anchor) : cfg.manifest_path;
    {
        std::vector<std::string> outs{manifest_path};
        for (const auto& [p, _] : staged) outs.push_back(p);
        check_paths_distinct({}, outs);
    }

    json manifest;
    manifest["tool"] = "sysrisk";
    manifest["version"] = kToolVersion;
    manifest["command"] = "synth";
    json params = {{"assets", cfg.spec.n_assets},
                   {"periods", cfg.spec.n_periods},
                   {"rho", cfg.spec.base_correlation},
                   {"vol", cfg.spec.vol},
                   {"seed", cfg.spec.seed},
                   {"generator", "mt19937_64+box-muller"}};
    if (cfg.spec.regime) {
        params["regime"] = {{"start", cfg.spec.regime->start_index},
                            {"end", cfg.spec.regime->end_index},
                            {"rho", cfg.spec.regime->correlation}};
    }
    manifest["params"] = std::move(params);
    manifest["inputs"] = json::array();

    OutputSet outputs;
    return commit_with_manifest(outputs, std::move(staged), manifest_path, std::move(manifest));
}

std::string run_ingest_check(const std::vector<InputFile>& inputs) {
    if (inputs.empty()) throw ConfigError("ingest-check needs at least one input file");
    std::ostringstream report;
    std::vector<ReturnSeries> series;
    for (const auto& input : inputs) {
        std::ifstream probe = open_input(input.path);
        const CsvFormat format = detect_format(probe);
        probe.close();
        std::ifstream in = open_input(input.path);
        switch (format) {
            case CsvFormat::Prices: {
                const PriceSeries prices = parse_price_csv(in, resolve_asset_id(input));
                report << input.path << ": prices, asset '" << prices.asset_id << "', "
                       << prices.points.size() << " rows, "
                       << prices.points.front().date.to_string() << ".."
                       << prices.points.back().date.to_string() << "\n";
                series.push_back(prices_to_returns(prices));
                break;
            }
            case CsvFormat::Returns: {
                const ReturnSeries rs = parse_return_csv(in, resolve_asset_id(input));
                report << input.path << ": returns, asset '" << rs.asset_id << "', "
                       << rs.points.size() << " rows, " << rs.points.front().date.to_string()
                       << ".." << rs.points.back().date.to_string() << "\n";
                series.push_back(rs);
                break;
            }
            case CsvFormat::Constituents: {
                const auto records = parse_constituents_csv(in);
                if (records.empty()) throw DataError(input.path + ": no constituent rows");
                report << input.path << ": constituents, " << records.size() << " rows\n";
                break;
            }
            case CsvFormat::Panel: {
                const AlignedPanel panel = parse_panel_csv(in);
                report << input.path << ": panel, " << panel.n_assets() << " assets x "
                       << panel.n_periods() << " dates, " << panel.dates.front().to_string()
                       << ".." << panel.dates.back().to_string() << "\n";
                break;
            }
        }
    }
    if (series.size() >= 2) {
        const AlignedPanel panel = align(series);
        report << "aligned: " << panel.n_assets() << " series over " << panel.n_periods()
               << " common dates, " << panel.dates.front().to_string() << ".."
               << panel.dates.back().to_string() << "\n";
    }
    return report.str();
}

} // namespace sysrisk
