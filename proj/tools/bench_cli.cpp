// Experiment harness CLI: scenario execution, plot-script emission, and
// Matrix Market corpus inspection.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "lmcast/compress.hpp"
#include "lmcast/matrix_market.hpp"
#include "lmcast/scenario.hpp"

namespace fs = std::filesystem;
using namespace lmcast;

namespace {

int cmd_run(const std::string& scenario_path,
            const std::vector<std::pair<std::string, std::string>>& overrides,
            const std::string& out_dir, bool plots) {
    scenario::Scenario s;
    if (!scenario_path.empty()) s = scenario::parse_scenario_file(scenario_path);
    for (const auto& [k, v] : overrides) scenario::apply_override(s, k, v);

    const auto lines = scenario::run_scenario(s);

    fs::create_directories(out_dir);
    const std::string csv_path =
        (fs::path(out_dir) / (s.scenario_id + ".csv")).string();
    std::ofstream csv(csv_path, std::ios::binary);
    for (const auto& line : lines) csv << line << '\n';
    csv.close();
    std::cout << "wrote " << csv_path << " (" << lines.size() - 1 << " rows)\n";

    if (plots) {
        for (const auto& p : scenario::emit_plots(csv_path, out_dir))
            std::cout << "wrote " << p << '\n';
    }
    return 0;
}

int cmd_mm_info(const std::vector<std::string>& paths) {
    std::cout << "path,format,field,symmetry,rows,cols,nnz,bytes,"
                 "compressed_bytes,ratio\n";
    for (const auto& path : paths) {
        auto info = mm::load_matrix_market(path);
        auto [stream, stats] = compress::deflate(info.payload, {true, 9});
        std::cout << path << ','
                  << (info.format == mm::Format::Coordinate ? "coordinate" : "array")
                  << ','
                  << (info.field == mm::Field::Real      ? "real"
                      : info.field == mm::Field::Integer ? "integer"
                                                         : "pattern")
                  << ','
                  << (info.symmetry == mm::Symmetry::General ? "general"
                                                             : "symmetric")
                  << ',' << info.rows << ',' << info.cols << ',' << info.nnz
                  << ',' << info.payload.size() << ',' << stats.compressed_len
                  << ',' << stats.ratio << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"layered-multicast dissemination benchmark harness"};
    app.require_subcommand(1);

    // run: execute a scenario sweep and emit CSV (+ optional plot scripts)
    auto* run = app.add_subcommand("run", "execute a scenario and emit CSV");
    std::string scenario_path, out_dir = "results";
    std::vector<std::pair<std::string, std::string>> overrides;
    bool plots = false;
    run->add_option("--scenario", scenario_path, "scenario key=value file");
    run->add_option("--out-dir", out_dir, "output directory");
    run->add_flag("--plots", plots, "also write gnuplot scripts");
    auto add_override = [&](const std::string& key) {
        run->add_option_function<std::string>(
            "--" + key,
            [&overrides, key](const std::string& v) {
                overrides.emplace_back(key, v);
            },
            "override scenario key '" + key + "'");
    };
    for (const char* key :
         {"seed", "nodes", "loss", "channels", "expansion", "compress_level",
          "payload", "strategy", "repetitions", "mtu", "delay_us", "base_rate",
          "symbol_size", "max_k", "scenario_id", "loss_per_datagram"})
        add_override(key);

    // plots: regenerate plot scripts from an existing CSV
    auto* plot = app.add_subcommand("plots", "emit gnuplot scripts for a CSV");
    std::string csv_path, plot_out = "results";
    plot->add_option("csv", csv_path, "CSV produced by `run`")->required();
    plot->add_option("--out-dir", plot_out, "output directory");

    // mm-info: parse Matrix Market files and report sizes + ratios
    auto* mm_info =
        app.add_subcommand("mm-info", "inspect Matrix Market corpus files");
    std::vector<std::string> mm_paths;
    mm_info->add_option("files", mm_paths, "matrix files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(scenario_path, overrides, out_dir, plots);
        if (*plot) {
            for (const auto& p : scenario::emit_plots(csv_path, plot_out))
                std::cout << "wrote " << p << '\n';
            return 0;
        }
        if (*mm_info) return cmd_mm_info(mm_paths);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
