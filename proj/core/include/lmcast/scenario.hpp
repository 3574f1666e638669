#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lmcast/bcast.hpp"
#include "lmcast/sender.hpp"

// Experiment descriptors and sweep execution. A scenario is a flat
// key=value text file; CLI flags override file values; all randomness
// derives from the scenario seed, so the CSV output is a pure function
// of the descriptor.
namespace lmcast::scenario {

enum class StrategySet { Tree, Multicast, Both };

struct Scenario {
    std::string scenario_id = "scenario";
    std::uint64_t seed = 1;
    std::uint32_t n_nodes = 4;        // receivers
    double loss_p = 0.0;
    std::uint32_t mtu = 1472;
    SimTime delay = 500;
    sender::SessionConfig session;
    // Payload source: a Matrix Market file path, "synthetic:<bytes>"
    // (seeded random), or "zeros:<bytes>".
    std::string payload = "zeros:65536";
    StrategySet strategy = StrategySet::Both;
    std::uint32_t repetitions = 1;
    bool loss_per_datagram = false;   // alternate reading of the loss figure
    std::uint64_t link_rate = 1'000'000;
};

Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text);
// Applies "key=value" overrides on top of a parsed scenario.
void apply_override(Scenario& s, const std::string& key,
                    const std::string& value);

Bytes materialize_payload(const Scenario& s);

// Executes all repetitions (seeds derived from s.seed) and returns CSV
// lines including the header. Only deterministic columns are emitted.
std::vector<std::string> run_scenario(const Scenario& s);

// Writes gnuplot scripts rendering the standard figure analogues
// (throughput vs size, loss sweep overlay, node-count sweep) next to the
// CSV. Returns the script paths.
std::vector<std::string> emit_plots(const std::string& csv_path,
                                    const std::string& out_dir);

}  // namespace lmcast::scenario
