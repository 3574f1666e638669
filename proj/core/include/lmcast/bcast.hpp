#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmcast/common.hpp"
#include "lmcast/sender.hpp"

// Unicast baseline (binomial-tree broadcast) and the bandwidth cost
// models for the tree-vs-multicast comparison. The literal published
// formulas (N*m, m + 2m*C) are preserved as-printed next to the exact
// and measured values; they are never silently corrected.
namespace lmcast::bcast {

struct BroadcastPlan {
    std::uint32_t n_nodes = 0;
    std::uint32_t root = 0;
    // rounds[i] = parallel (sender, receiver) pairs of round i
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rounds;

    std::size_t message_count() const {
        std::size_t t = 0;
        for (auto& r : rounds) t += r.size();
        return t;
    }
};

class EmptyWorld : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

BroadcastPlan binomial_tree_plan(std::uint32_t n, std::uint32_t root);

struct CostModel {
    std::uint64_t n_nodes = 0;
    std::uint64_t message_bytes = 0;  // m
    std::uint32_t channels = 5;      // C
    Expansion expansion = Expansion::from_double(2.0);
    double compression_ratio = 0.0;  // r; ignored when compressed_len set
    std::optional<std::uint64_t> compressed_len;  // exact pipeline input
    std::uint32_t symbol_size = 1024;
    std::uint16_t max_k = 64;
    std::uint32_t header_bytes = 66;
};

struct UnicastCost {
    std::uint64_t published_literal = 0;  // N * m, as printed
    std::uint64_t exact_tree = 0;     // (N - 1) * m
};

struct MulticastCost {
    std::uint64_t published_literal = 0;          // m + 2m * C, as printed
    std::uint64_t n_total = 0;                // encoded symbols per walk
    std::uint64_t payload_per_walk = 0;       // n_total * symbol_size
    std::uint64_t predicted_per_cycle = 0;    // C * n_total * (symbol+header)
};

UnicastCost unicast_cost(const CostModel& model);
MulticastCost multicast_cost(const CostModel& model);

// One result row of the comparison harness; the CSV schema is
// scenario_id, strategy, N, m, C, loss_p, compression_level,
// sender_bytes, network_bytes, mean_completion_us, throughput_model.
struct ComparisonRow {
    std::string scenario_id;
    std::string strategy;
    std::uint64_t n_nodes = 0;
    std::uint64_t message_bytes = 0;
    std::uint32_t channels = 0;
    double loss_p = 0.0;
    int compression_level = 0;
    std::uint64_t sender_bytes = 0;
    std::uint64_t network_bytes = 0;
    std::uint64_t mean_completion_us = 0;
    double throughput_model = 0.0;  // original bytes / completion sim-time
    // Extra reporting columns (deterministic ones only go to the CSV).
    std::uint64_t original_len = 0;
    std::uint64_t compressed_len = 0;
    double compression_ratio = 0.0;
    bool unicast_preferred = false;  // tiny payloads where overhead dominates
};

std::string csv_header();
std::string csv_row(const ComparisonRow& row);

struct ComparisonScenario {
    std::string scenario_id = "cmp";
    std::uint64_t seed = 1;
    std::uint32_t n_nodes = 8;  // receivers (tree: world size incl. root)
    Bytes payload;
    double loss_p = 0.0;
    SimTime delay = 500;
    std::uint32_t mtu = 1472;
    bool loss_per_datagram = false;
    std::uint64_t link_rate = 1'000'000;  // tree links and multicast base rate
    sender::SessionConfig session;
    bool run_tree = true;
    bool run_multicast = true;
};

// Executes the requested strategies over netsim and returns one row per
// strategy. Tree rides reliable rate-limited unicast links; multicast
// runs the full compress/FEC/carousel pipeline.
std::vector<ComparisonRow> run_comparison(const ComparisonScenario& scenario);

// Simulated binomial-tree completion time (last node's delivery).
SimTime tree_completion_time(std::uint32_t n, std::uint64_t message_bytes,
                             std::uint64_t link_rate, SimTime delay);

}  // namespace lmcast::bcast
