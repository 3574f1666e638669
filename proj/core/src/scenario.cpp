#include "lmcast/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lmcast/matrix_market.hpp"
#include "lmcast/netsim.hpp"

namespace lmcast::scenario {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

void apply_override(Scenario& s, const std::string& key,
                    const std::string& value) {
    if (key == "scenario_id") s.scenario_id = value;
    else if (key == "seed") s.seed = std::stoull(value);
    else if (key == "nodes") s.n_nodes = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "loss") s.loss_p = std::stod(value);
    else if (key == "mtu") s.mtu = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "delay_us") s.delay = std::stoll(value);
    else if (key == "channels")
        s.session.channel_count = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "expansion")
        s.session.expansion = Expansion::from_double(std::stod(value));
    else if (key == "compress_level") {
        int level = std::stoi(value);
        s.session.compression.enabled = level > 0;
        s.session.compression.level = level > 0 ? level : 9;
    } else if (key == "symbol_size")
        s.session.symbol_size = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "max_k")
        s.session.max_k = static_cast<std::uint16_t>(std::stoul(value));
    else if (key == "base_rate") {
        s.session.base_rate = std::stoull(value);
        s.link_rate = s.session.base_rate;
    } else if (key == "staging_buffer")
        s.session.staging_buffer_len = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "payload") s.payload = value;
    else if (key == "repetitions")
        s.repetitions = static_cast<std::uint32_t>(std::stoul(value));
    else if (key == "loss_per_datagram")
        s.loss_per_datagram = value == "1" || value == "true";
    else if (key == "strategy") {
        if (value == "tree") s.strategy = StrategySet::Tree;
        else if (value == "multicast") s.strategy = StrategySet::Multicast;
        else if (value == "both") s.strategy = StrategySet::Both;
        else throw std::invalid_argument("unknown strategy: " + value);
    } else {
        throw std::invalid_argument("unknown scenario key: " + key);
    }
}

Scenario parse_scenario_text(const std::string& text) {
    Scenario s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario line is not key=value: " + line);
        apply_override(s, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return s;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open scenario file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_scenario_text(buf.str());
}

Bytes materialize_payload(const Scenario& s) {
    if (s.payload.rfind("zeros:", 0) == 0)
        return Bytes(std::stoull(s.payload.substr(6)), 0);
    if (s.payload.rfind("synthetic:", 0) == 0) {
        const auto len = std::stoull(s.payload.substr(10));
        Bytes out(len);
        std::uint64_t x = splitmix64(s.seed ^ 0x5eedf00d);
        for (std::size_t i = 0; i < len; i += 8) {
            x = splitmix64(x);
            for (std::size_t j = 0; j < 8 && i + j < len; ++j)
                out[i + j] = static_cast<std::uint8_t>(x >> (8 * j));
        }
        return out;
    }
    return mm::load_matrix_market(s.payload).payload;
}

std::vector<std::string> run_scenario(const Scenario& s) {
    if (s.repetitions < 1)
        throw std::invalid_argument("repetitions must be >= 1");
    if (s.n_nodes < 1) throw std::invalid_argument("nodes must be >= 1");

    std::vector<std::string> lines;
    lines.push_back(bcast::csv_header());

    const Bytes payload = materialize_payload(s);

    for (std::uint32_t rep = 0; rep < s.repetitions; ++rep) {
        bcast::ComparisonScenario cs;
        cs.scenario_id = s.scenario_id + "/" + std::to_string(rep);
        cs.seed = splitmix64(s.seed + rep);
        cs.n_nodes = s.n_nodes;
        cs.payload = payload;
        cs.loss_p = s.loss_p;
        cs.delay = s.delay;
        cs.mtu = s.mtu;
        cs.loss_per_datagram = s.loss_per_datagram;
        cs.link_rate = s.link_rate;
        cs.session = s.session;
        cs.run_tree = s.strategy != StrategySet::Multicast;
        cs.run_multicast = s.strategy != StrategySet::Tree;

        for (const auto& row : bcast::run_comparison(cs))
            lines.push_back(bcast::csv_row(row));
    }
    return lines;
}

std::vector<std::string> emit_plots(const std::string& csv_path,
                                    const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> scripts;

    auto write_script = [&](const std::string& name, const std::string& body) {
        const std::string path = (fs::path(out_dir) / name).string();
        std::ofstream f(path);
        f << "set datafile separator ','\n"
          << "set key autotitle columnhead\n"
          << "set grid\n"
          << body;
        scripts.push_back(path);
    };

    write_script("throughput_vs_size.gp",
                 "set logscale x\n"
                 "set xlabel 'message bytes'\n"
                 "set ylabel 'model throughput (bytes/s)'\n"
                 "set title 'Throughput vs payload size'\n"
                 "plot '" + csv_path + "' using 4:11 with linespoints\n");

    write_script("completion_vs_nodes.gp",
                 "set xlabel 'receivers'\n"
                 "set ylabel 'mean completion (us)'\n"
                 "set title 'Completion time vs node count'\n"
                 "plot '" + csv_path + "' using 3:10 with linespoints\n");

    write_script("loss_sweep.gp",
                 "set xlabel 'message bytes'\n"
                 "set ylabel 'model throughput (bytes/s)'\n"
                 "set title 'Throughput under loss (one series per p)'\n"
                 "plot for [p in system(\"awk -F, 'NR>1 {print $6}' " +
                     csv_path + " | sort -u\")] '" + csv_path +
                     "' using 4:($6==real(p)?$11:1/0) with linespoints"
                     " title sprintf('loss %s', p)\n");

    write_script("compression_ratio.gp",
                 "set xlabel 'original bytes'\n"
                 "set ylabel 'compression ratio'\n"
                 "set yrange [0:1]\n"
                 "set title 'Compression ratio per payload'\n"
                 "plot '" + csv_path + "' using 12:14 with points\n");

    return scripts;
}

}  // namespace lmcast::scenario
