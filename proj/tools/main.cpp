#include "sysrisk/errors.hpp"
#include "sysrisk/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 numeric error.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::vector<sysrisk::InputFile> make_inputs(const std::vector<std::string>& paths,
                                            const std::vector<std::string>& ids) {
    if (!ids.empty() && ids.size() != paths.size()) {
        throw sysrisk::ConfigError("--ids must name exactly one id per input file");
    }
    std::vector<sysrisk::InputFile> inputs;
    inputs.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        inputs.push_back({paths[i], ids.empty() ? std::string{} : ids[i]});
    }
    return inputs;
}

std::optional<sysrisk::TradingDate> parse_date_flag(const std::string& text, const char* flag) {
    if (text.empty()) return std::nullopt;
    try {
        return sysrisk::TradingDate::parse(text);
    } catch (const sysrisk::DataError& e) {
        throw sysrisk::ConfigError(std::string(flag) + ": " + e.what());
    }
}

sysrisk::DivisorMode parse_divisor(const std::string& name) {
    if (name == "paper") return sysrisk::DivisorMode::PaperTJ;
    if (name == "sample") return sysrisk::DivisorMode::SampleT1;
    if (name == "population") return sysrisk::DivisorMode::PopulationT;
    throw sysrisk::ConfigError("--divisor must be paper, sample or population");
}

sysrisk::Direction parse_direction(const std::string& name) {
    if (name == "a-leads-b") return sysrisk::Direction::ALeadsB;
    if (name == "b-leads-a") return sysrisk::Direction::BLeadsA;
    throw sysrisk::ConfigError("--direction must be a-leads-b or b-leads-a");
}

sysrisk::PanelSpec::Regime parse_regime(const std::string& text) {
    // START:END:RHO with END exclusive.
    sysrisk::PanelSpec::Regime regime;
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw sysrisk::ConfigError("--regime expects START:END:RHO, got '" + text + "'");
    }
    try {
        regime.start_index = std::stoul(text.substr(0, first));
        regime.end_index = std::stoul(text.substr(first + 1, second - first - 1));
        regime.correlation = std::stod(text.substr(second + 1));
    } catch (const std::exception&) {
        throw sysrisk::ConfigError("--regime expects START:END:RHO, got '" + text + "'");
    }
    return regime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sysrisk: rolling-window PCA and lagged cross-correlation risk measures\n"
                 "over daily financial return series"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; command-line flags win");

    // Shared option storage; each subcommand binds the flags it uses.
    std::vector<std::string> paths, ids;
    std::string out, manifest, dump, from_text, to_text;
    std::string divisor_name = "paper", direction_name = "a-leads-b";
    std::size_t window = 0, stride = 1, lag = 1, period = 1;

    auto add_common = [&](CLI::App* cmd, std::size_t default_window) {
        cmd->fallthrough(); // lets --config after the subcommand reach the app
        cmd->add_option("inputs", paths, "input CSV files (prices or returns)")->required();
        cmd->add_option("--ids", ids, "asset ids, one per input (default: file stems)")
            ->delimiter(',');
        cmd->add_option("--window", window,
                        "window length in periods (default " + std::to_string(default_window) + ")");
        cmd->add_option("--stride", stride, "window step (default 1)");
        cmd->add_option("--from", from_text, "first date to keep, YYYY-MM-DD");
        cmd->add_option("--to", to_text, "last date to keep, YYYY-MM-DD");
        cmd->add_option("--out", out, "output CSV path")->required();
        cmd->add_option("--manifest", manifest, "manifest path (default <out>.manifest.json)");
    };

    CLI::App* pca = app.add_subcommand("pca", "rolling first-fractional-eigenvalue measure");
    add_common(pca, sysrisk::kDefaultPcaWindow);
    pca->add_option("--period", period, "compound this many consecutive returns into one (default 1)");
    pca->add_option("--divisor", divisor_name, "covariance divisor: paper (T-J), sample (T-1) or population (T)");
    pca->add_option("--dump-eigen", dump, "also write full eigenvalue/eigenvector JSON here");

    CLI::App* xcorr = app.add_subcommand(
        "xcorr", "rolling lagged cross-correlation with significance bands");
    add_common(xcorr, sysrisk::kDefaultXCorrWindow);
    xcorr->add_option("--lag", lag, "report the coefficient at this lag (default 1)");
    xcorr->add_option("--direction", direction_name, "a-leads-b (default) or b-leads-a");
    xcorr->add_option("--dump-lags", dump, "also write per-lag coefficients CSV here");

    std::string constituents_path, sector, index_id;
    int sic_lo = -1, sic_hi = -1;
    CLI::App* index = app.add_subcommand("index", "market-cap-weighted sector return index");
    index->fallthrough();
    index->add_option("constituents", constituents_path,
                      "constituents CSV (date,firm_id,sic,market_cap,return)")
        ->required();
    index->add_option("--sector", sector, "banks, brokerages or insurers");
    index->add_option("--sic-lo", sic_lo, "explicit SIC range start (with --sic-hi)");
    index->add_option("--sic-hi", sic_hi, "explicit SIC range end");
    index->add_option("--id", index_id, "asset id for the output series");
    index->add_option("--out", out, "output returns CSV path")->required();
    index->add_option("--manifest", manifest, "manifest path");

    std::size_t assets = 4, periods = 600;
    double rho = 0.0, vol = 0.01;
    std::uint64_t seed = 0;
    std::string regime_text, per_asset_dir;
    CLI::App* synth = app.add_subcommand("synth", "generate an equicorrelated synthetic panel");
    synth->fallthrough();
    synth->add_option("--assets", assets, "number of assets (default 4)");
    synth->add_option("--periods", periods, "number of periods (default 600)");
    synth->add_option("--rho", rho, "base equicorrelation in [0,1) (default 0)");
    synth->add_option("--vol", vol, "per-period return standard deviation (default 0.01)");
    synth->add_option("--regime", regime_text, "high-correlation regime START:END:RHO (END exclusive)");
    synth->add_option("--seed", seed, "generator seed (default 0)");
    synth->add_option("--out", out, "panel CSV path (date,asset_1,...)");
    synth->add_option("--per-asset", per_asset_dir, "write one returns CSV per asset into this directory");
    synth->add_option("--manifest", manifest, "manifest path");

    CLI::App* check = app.add_subcommand("ingest-check", "parse inputs and report what they contain");
    check->fallthrough();
    check->add_option("inputs", paths, "input CSV files")->required();
    check->add_option("--ids", ids, "asset ids, one per input")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (pca->parsed() || xcorr->parsed()) {
            sysrisk::RunConfig cfg;
            cfg.inputs = make_inputs(paths, ids);
            cfg.from = parse_date_flag(from_text, "--from");
            cfg.to = parse_date_flag(to_text, "--to");
            cfg.window = window;
            cfg.stride = stride;
            cfg.lag = lag;
            cfg.period = period;
            cfg.divisor = parse_divisor(divisor_name);
            cfg.direction = parse_direction(direction_name);
            cfg.output_path = out;
            cfg.manifest_path = manifest;
            cfg.dump_path = dump;
            const sysrisk::RunOutputs result =
                pca->parsed() ? sysrisk::run_pca_pipeline(cfg) : sysrisk::run_xcorr_pipeline(cfg);
            for (const auto& f : result.files_written) std::cout << "wrote " << f << "\n";
        } else if (index->parsed()) {
            sysrisk::IndexConfig cfg;
            cfg.constituents_path = constituents_path;
            cfg.sector = sector;
            if (sic_lo >= 0 || sic_hi >= 0) {
                if (sic_lo < 0 || sic_hi < 0) {
                    throw sysrisk::ConfigError("--sic-lo and --sic-hi must be given together");
                }
                cfg.explicit_range = sysrisk::SectorFilter(sic_lo, sic_hi);
            } else if (sector.empty()) {
                throw sysrisk::ConfigError("either --sector or --sic-lo/--sic-hi is required");
            }
            cfg.index_id = index_id;
            cfg.output_path = out;
            cfg.manifest_path = manifest;
            const sysrisk::RunOutputs result = sysrisk::run_index_pipeline(cfg);
            for (const auto& f : result.files_written) std::cout << "wrote " << f << "\n";
        } else if (synth->parsed()) {
            sysrisk::SynthConfig cfg;
            cfg.spec.n_assets = assets;
            cfg.spec.n_periods = periods;
            cfg.spec.base_correlation = rho;
            cfg.spec.vol = vol;
            cfg.spec.seed = seed;
            if (!regime_text.empty()) cfg.spec.regime = parse_regime(regime_text);
            cfg.output_path = out;
            cfg.per_asset_dir = per_asset_dir;
            cfg.manifest_path = manifest;
            const sysrisk::RunOutputs result = sysrisk::run_synth_pipeline(cfg);
            for (const auto& f : result.files_written) std::cout << "wrote " << f << "\n";
        } else if (check->parsed()) {
            std::cout << sysrisk::run_ingest_check(make_inputs(paths, ids));
        }
    } catch (const sysrisk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const sysrisk::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const sysrisk::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
