#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arena/engine.hpp"
#include "arena/policies.hpp"
#include "arena/replay.hpp"
#include "arena/rng.hpp"
#include "arena/stats.hpp"
#include "arena/tournament.hpp"

namespace fs = std::filesystem;
using namespace arena;

namespace {

SimConfig load_cfg(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return SimConfig::parse(buf.str());
}

void print_scores(const MatchScore& score, const std::array<std::string, kTeamCount>& names) {
    std::vector<int> order(kTeamCount);
    for (int t = 0; t < kTeamCount; ++t) order[t] = t;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (score.teams[a].rank != score.teams[b].rank) {
            return score.teams[a].rank < score.teams[b].rank;
        }
        return a < b;
    });
    std::printf("%4s  %-24s %8s %9s %9s %5s\n", "team", "policy", "defeat", "survival",
                "total", "rank");
    for (int t : order) {
        const TeamScore& s = score.teams[t];
        std::printf("%4d  %-24s %8.2f %9.2f %9.2f %5d\n", t, names[t].c_str(),
                    s.defeat_points(), s.survival_points(), s.total_points(), s.rank);
    }
}

int cmd_sim(std::uint64_t seed, const std::string& config, std::vector<std::string> policies,
            const std::string& replay_out) {
    const SimConfig cfg = load_cfg(config);
    if (policies.empty()) policies.push_back("mixture");
    std::array<std::string, kTeamCount> names;
    std::array<std::unique_ptr<TeamPolicy>, kTeamCount> pols;
    for (int t = 0; t < kTeamCount; ++t) {
        names[t] = policies[t % policies.size()];
        pols[t] = make_policy(names[t]);
        pols[t]->set_config(cfg);
    }
    Sim sim(cfg, seed);
    while (!sim.terminal()) {
        MatchActions actions{};
        const int tick = sim.world().tick;
        for (int t = 0; t < kTeamCount; ++t) {
            actions[t] = pols[t]->act(sim.obs(t), derive_seed(derive_seed(seed, 100 + t), tick));
        }
        sim.step(actions);
    }
    const MatchScore score = match_score(sim.world(), cfg);
    print_scores(score, names);
    std::printf("ticks: %d  state hash: %016llx\n", sim.world().tick,
                static_cast<unsigned long long>(sim.state_hash()));
    if (!replay_out.empty()) {
        write_replay(make_replay(sim, seed, names), replay_out);
        std::printf("replay: %s\n", replay_out.c_str());
    }
    return 0;
}

int cmd_pve(const std::string& candidate, int stage, int rounds, std::uint64_t seed,
            const std::string& config, double gate, const std::string& replay_dir) {
    if (!replay_dir.empty()) fs::create_directories(replay_dir);
    const PveReport rep = pve_eval(candidate, stage, rounds, seed, load_cfg(config), gate,
                                   replay_dir);
    std::printf("candidate: %s  stage: %d  rounds: %d\n", candidate.c_str(), stage, rounds);
    for (std::size_t i = 0; i < rep.ranks.size(); ++i) {
        std::printf("  round %2zu: rank %2d  (%lld ms)\n", i, rep.ranks[i],
                    static_cast<long long>(rep.records[i].duration_ms));
    }
    std::printf("top-1 ratio: %.2f  gate: %.2f  stage-2 eligible: %s\n", rep.ratio, gate,
                rep.stage2_eligible ? "yes" : "no");
    return 0;
}

std::vector<Submission> load_pool(const std::string& dir) {
    std::vector<Submission> pool;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        std::ifstream in(file);
        std::string policy;
        std::getline(in, policy);
        while (!policy.empty() && (policy.back() == '\r' || policy.back() == ' ')) {
            policy.pop_back();
        }
        if (policy.empty()) continue;  // not a submission file
        pool.push_back({file.stem().string(), policy});
    }
    if (pool.empty()) throw std::runtime_error("no submissions found in " + dir);
    return pool;
}

int cmd_pvp(const std::string& pool_dir, const std::string& cadence, const std::string& store,
            std::uint64_t seed, const std::string& config, int parallelism, int daily,
            int weekly, bool keep_replays) {
    CampaignConfig cc;
    cc.store_dir = store;
    cc.match_cfg = load_cfg(config);
    cc.parallelism = parallelism;
    cc.daily_matches = daily;
    cc.weekly_matches = weekly;
    cc.write_replays = keep_replays;
    const auto pool = load_pool(pool_dir);
    const Cadence c = cadence == "weekly" ? Cadence::Weekly : Cadence::Daily;
    const auto board = run_campaign(cc, c, pool, seed);
    std::printf("%-24s %8s %8s %13s %8s\n", "submission", "mu", "sigma", "conservative",
                "matches");
    for (const LeaderboardRow& row : board) {
        std::printf("%-24s %8.3f %8.3f %13.3f %8d\n", row.submission.c_str(), row.rating.mu,
                    row.rating.sigma, row.conservative(), row.matches);
    }
    std::printf("store: %s\n", store.c_str());
    return 0;
}

int cmd_stats(const std::string& replay_dir, const std::string& out_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(replay_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Replay> replays;
    for (const fs::path& file : files) replays.push_back(read_replay(file.string()));
    const StatsReport report = compute_stats(replays);
    emit_csv(report, out_dir);
    std::printf("aggregated %lld matches from %zu replays into %s\n",
                static_cast<long long>(report.matches), replays.size(), out_dir.c_str());
    for (const char* name : {"item_distribution.csv", "item_quantity.csv",
                             "buy_sell_ratio.csv", "price_grid.csv", "team_radar.csv"}) {
        std::printf("  %s\n", (fs::path(out_dir) / name).string().c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"neural-mmo style team survival arena"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string config;

    auto* sim = app.add_subcommand("sim", "run one match and print the score table");
    std::vector<std::string> policies;
    std::string replay_out;
    sim->add_option("--seed", seed, "match seed");
    sim->add_option("--config", config, "config file");
    sim->add_option("--policies", policies,
                    "policy specs, assigned to teams in order and cycled when fewer than 16");
    sim->add_option("--replay", replay_out, "write the replay here");

    auto* pve = app.add_subcommand("pve", "screen a candidate against the built-in set");
    std::string candidate;
    int stage = 1;
    int rounds = 10;
    double gate = 0.4;
    std::string replay_dir;
    pve->add_option("--candidate", candidate, "candidate policy spec")->required();
    pve->add_option("--stage", stage, "1 or 2")->check(CLI::Range(1, 2));
    pve->add_option("--rounds", rounds, "evaluation rounds");
    pve->add_option("--seed", seed, "campaign seed");
    pve->add_option("--config", config, "config file");
    pve->add_option("--gate", gate, "top-1 ratio needed for stage 2");
    pve->add_option("--replay-dir", replay_dir, "keep per-round replays here");

    auto* pvp = app.add_subcommand("pvp", "run a rated campaign over a submission pool");
    std::string pool_dir, store, cadence = "daily";
    int parallelism = 1, daily = 100, weekly = 1000;
    bool keep_replays = false;
    pvp->add_option("--pool", pool_dir, "directory of submission files (id = file stem)")
        ->required();
    pvp->add_option("--cadence", cadence, "daily or weekly")
        ->check(CLI::IsMember({"daily", "weekly"}));
    pvp->add_option("--out", store, "result store directory")->required();
    pvp->add_option("--seed", seed, "campaign seed");
    pvp->add_option("--config", config, "config file");
    pvp->add_option("--parallelism", parallelism, "concurrent matches");
    pvp->add_option("--daily", daily, "per-submission matches at daily cadence");
    pvp->add_option("--weekly", weekly, "per-submission matches at weekly cadence");
    pvp->add_flag("--replays", keep_replays, "keep replays under the store");

    auto* stats = app.add_subcommand("stats", "aggregate replays into the analytics CSVs");
    std::string replays_in, csv_out;
    stats->add_option("--replays", replays_in, "directory of replay .jsonl files")->required();
    stats->add_option("--out", csv_out, "output directory for the CSV files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_sim(seed, config, policies, replay_out);
        if (pve->parsed()) return cmd_pve(candidate, stage, rounds, seed, config, gate,
                                          replay_dir);
        if (pvp->parsed()) return cmd_pvp(pool_dir, cadence, store, seed, config, parallelism,
                                          daily, weekly, keep_replays);
        if (stats->parsed()) return cmd_stats(replays_in, csv_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
