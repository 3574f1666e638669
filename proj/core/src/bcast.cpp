#include "lmcast/bcast.hpp"

#include <bit>
#include <sstream>

#include "lmcast/netsim.hpp"
#include "lmcast/session.hpp"

namespace lmcast::bcast {

namespace {

std::uint32_t ceil_log2(std::uint32_t n) {
    return n <= 1 ? 0 : std::bit_width(n - 1);
}

}  // namespace

BroadcastPlan binomial_tree_plan(std::uint32_t n, std::uint32_t root) {
    if (n == 0) throw EmptyWorld("no nodes to broadcast to");
    if (root >= n) throw std::invalid_argument("root out of range");

    BroadcastPlan plan;
    plan.n_nodes = n;
    plan.root = root;

    const std::uint32_t rounds = ceil_log2(n);
    // Relative ranks: in round j the holders (multiples of 2*d, with
    // d = 2^(rounds-1-j)) send to their partner at distance d. The last
    // round covers odd ranks, so a node never sends before it received.
    for (std::uint32_t j = 0; j < rounds; ++j) {
        const std::uint32_t d = 1u << (rounds - 1 - j);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::uint32_t r = 0; r + d < n; r += 2 * d) {
            auto abs_from = (r + root) % n;
            auto abs_to = (r + d + root) % n;
            pairs.emplace_back(abs_from, abs_to);
        }
        plan.rounds.push_back(std::move(pairs));
    }
    return plan;
}

UnicastCost unicast_cost(const CostModel& model) {
    return {model.n_nodes * model.message_bytes,
            (model.n_nodes - 1) * model.message_bytes};
}

MulticastCost multicast_cost(const CostModel& model) {
    MulticastCost out;
    out.published_literal =
        model.message_bytes + 2 * model.message_bytes * model.channels;

    const std::uint64_t pipeline_len =
        model.compressed_len
            ? *model.compressed_len
            : static_cast<std::uint64_t>(
                  static_cast<double>(model.message_bytes) *
                      (1.0 - model.compression_ratio) +
                  0.5);
    out.n_total = fec::total_symbols_for(pipeline_len, model.symbol_size,
                                         model.max_k, model.expansion);
    out.payload_per_walk = out.n_total * model.symbol_size;
    out.predicted_per_cycle =
        model.channels * out.n_total * (model.symbol_size + model.header_bytes);
    return out;
}

std::string csv_header() {
    return "scenario_id,strategy,N,m,C,loss_p,compression_level,"
           "sender_bytes,network_bytes,mean_completion_us,throughput_model,"
           "original_len,compressed_len,compression_ratio,unicast_preferred";
}

std::string csv_row(const ComparisonRow& r) {
    std::ostringstream os;
    os << r.scenario_id << ',' << r.strategy << ',' << r.n_nodes << ','
       << r.message_bytes << ',' << r.channels << ',' << r.loss_p << ','
       << r.compression_level << ',' << r.sender_bytes << ','
       << r.network_bytes << ',' << r.mean_completion_us << ','
       << r.throughput_model << ',' << r.original_len << ','
       << r.compressed_len << ',' << r.compression_ratio << ','
       << (r.unicast_preferred ? 1 : 0);
    return os.str();
}

SimTime tree_completion_time(std::uint32_t n, std::uint64_t message_bytes,
                             std::uint64_t link_rate, SimTime delay) {
    auto plan = binomial_tree_plan(n, 0);

    netsim::Netsim net(0);
    std::vector<NodeId> nodes;
    for (std::uint32_t i = 0; i < n; ++i) nodes.push_back(net.add_node());
    for (auto& round : plan.rounds)
        for (auto& [from, to] : round)
            net.set_reliable_link(nodes[from], nodes[to], delay, link_rate);

    std::vector<SimTime> got_at(n, -1);
    got_at[0] = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        net.set_handler(nodes[i], [&got_at, i](NodeId, const Bytes&, SimTime at) {
            if (got_at[i] < 0) got_at[i] = at;
        });
    }

    // Synchronized rounds: every sender in round j holds the data by the
    // end of round j-1, so each round's sends fire in parallel and the
    // next round starts once they all landed.
    Bytes msg(message_bytes, 0xAB);
    for (std::size_t j = 0; j < plan.rounds.size(); ++j) {
        for (auto& [from, to] : plan.rounds[j])
            net.send_datagram(nodes[from], netsim::to_node(nodes[to]), msg);
        net.run_to_completion();
    }

    SimTime last = 0;
    for (auto t : got_at) last = std::max(last, t);
    return last;
}

std::vector<ComparisonRow> run_comparison(const ComparisonScenario& sc) {
    std::vector<ComparisonRow> rows;
    const std::uint64_t m = sc.payload.size();

    if (sc.run_tree) {
        // Tree world: root + N receivers, uncompressed m per edge.
        const std::uint32_t world = sc.n_nodes + 1;
        ComparisonRow row;
        row.scenario_id = sc.scenario_id;
        row.strategy = "tree";
        row.n_nodes = sc.n_nodes;
        row.message_bytes = m;
        row.channels = 0;
        row.loss_p = 0.0;
        row.compression_level = 0;
        row.sender_bytes = unicast_cost({world, m}).exact_tree;
        row.network_bytes = row.sender_bytes;
        row.mean_completion_us = static_cast<std::uint64_t>(
            tree_completion_time(world, m, sc.link_rate, sc.delay));
        row.throughput_model =
            row.mean_completion_us == 0
                ? 0.0
                : static_cast<double>(m) / (row.mean_completion_us / 1e6);
        row.original_len = m;
        row.compressed_len = m;
        rows.push_back(std::move(row));
    }

    if (sc.run_multicast) {
        netsim::Netsim net(sc.seed);
        netsim::LinkParams lp;
        lp.loss_p = sc.loss_p;
        lp.delay = sc.delay;
        lp.mtu = sc.mtu;
        net.set_default_link(lp);
        net.set_loss_mode(sc.loss_per_datagram
                              ? netsim::LossMode::PerDatagram
                              : netsim::LossMode::PerFragment);

        sender::SessionConfig cfg = sc.session;
        cfg.base_rate = sc.link_rate;
        session::SessionHarness h(net, cfg);
        std::set<std::uint8_t> all;
        for (std::uint32_t c = 0; c < cfg.channel_count; ++c)
            all.insert(static_cast<std::uint8_t>(c));
        for (std::uint32_t i = 0; i < sc.n_nodes; ++i) h.add_receiver(all);

        ObjectId obj = h.submit(sc.payload);
        h.run();

        const auto& stats = h.alc.compression_stats(obj);
        std::uint64_t total_completion = 0;
        double decode_wall = 0, decompress_wall = 0;
        for (auto& rx : h.receivers) {
            total_completion += static_cast<std::uint64_t>(
                rx.recv->completion_time(obj).value_or(0));
            decode_wall += rx.recv->decode_wall_s(obj);
            decompress_wall += rx.recv->decompress_wall_s(obj);
        }

        ComparisonRow row;
        row.scenario_id = sc.scenario_id;
        row.strategy = "multicast";
        row.n_nodes = sc.n_nodes;
        row.message_bytes = m;
        row.channels = cfg.channel_count;
        row.loss_p = sc.loss_p;
        row.compression_level =
            cfg.compression.enabled ? cfg.compression.level : 0;
        row.sender_bytes = net.metrics().offered_bytes.count(h.sender_node)
                               ? net.metrics().offered_bytes.at(h.sender_node)
                               : 0;
        row.network_bytes = net.metrics().total_delivered_bytes();
        row.mean_completion_us =
            sc.n_nodes == 0 ? 0 : total_completion / sc.n_nodes;
        // Deterministic model throughput: sim transfer time only. Codec
        // wall time is measured separately (decode_wall/decompress_wall).
        row.throughput_model =
            row.mean_completion_us == 0
                ? 0.0
                : static_cast<double>(m) / (row.mean_completion_us / 1e6);
        row.original_len = stats.original_len;
        row.compressed_len = stats.compressed_len;
        row.compression_ratio = stats.ratio;
        // Payloads below one symbol pay the whole fixed overhead; the
        // published advice is to fall back to plain unicast there.
        row.unicast_preferred = m < cfg.symbol_size;
        rows.push_back(std::move(row));
    }

    return rows;
}

}  // namespace lmcast::bcast
