#include "arena/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "arena/engine.hpp"
#include "arena/hash.hpp"
#include "arena/replay.hpp"
#include "arena/rng.hpp"

namespace arena {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string padded(std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05zu", n);
    return buf;
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Running mean of each submission's team posteriors; a submission fielding
// several teams in one short-pool match gets their average.
struct RatingBook {
    TrueSkillParams params{};
    std::map<std::string, Rating> ratings;
    std::map<std::string, int> played;

    Rating current(const std::string& id) const {
        const auto it = ratings.find(id);
        return it == ratings.end() ? Rating{params.mu0, params.sigma0} : it->second;
    }

    void apply(const MatchRecord& rec) {
        if (rec.error) return;
        const auto assigned = assigned_slots(rec.spec);
        std::vector<Rating> prior(kTeamCount);
        std::vector<int> ranks(kTeamCount);
        for (int t = 0; t < kTeamCount; ++t) {
            prior[t] = current(assigned[t]);
            ranks[t] = rec.score.teams[t].rank;
        }
        const std::vector<Rating> post = rate_match(prior, ranks, params);
        std::map<std::string, std::pair<Rating, int>> fold;
        for (int t = 0; t < kTeamCount; ++t) {
            auto& [sum, n] = fold[assigned[t]];
            sum.mu = (n == 0 ? 0.0 : sum.mu) + post[t].mu;
            sum.sigma = (n == 0 ? 0.0 : sum.sigma) + post[t].sigma;
            n += 1;
        }
        for (const auto& [id, acc] : fold) {
            ratings[id] = {acc.first.mu / acc.second, acc.first.sigma / acc.second};
            played[id] += 1;
        }
    }
};

// Validates the append-only store. A failing final line is a torn write
// from a crash and is trimmed off; anything else failing refuses the run.
std::vector<MatchRecord> load_store(const fs::path& path) {
    std::vector<MatchRecord> out;
    if (!fs::exists(path)) return out;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<std::pair<std::size_t, std::string>> lines;  // offset, content
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::size_t end = nl == std::string::npos ? text.size() : nl;
        lines.emplace_back(pos, text.substr(pos, end - pos));
        pos = nl == std::string::npos ? text.size() : nl + 1;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(record_from_line(lines[i].second));
        } catch (const std::exception&) {
            if (i + 1 == lines.size()) {
                fs::resize_file(path, lines[i].first);
                break;
            }
            throw std::runtime_error("result store corrupted at line " + std::to_string(i + 1));
        }
    }
    return out;
}

void write_ratings(const fs::path& path, const RatingBook& book) {
    std::string text;
    const std::string now = iso_now();
    for (const auto& [id, rating] : book.ratings) {
        Json row;
        row["submission_id"] = id;
        row["mu"] = rating.mu;
        row["sigma"] = rating.sigma;
        row["matches_played"] = book.played.count(id) ? book.played.at(id) : 0;
        row["updated_at"] = now;
        text += row.dump();
        text += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), std::streamsize(text.size()));
}

void write_leaderboard(const fs::path& path, const std::vector<LeaderboardRow>& rows) {
    std::string text = "submission,mu,sigma,conservative,matches\n";
    for (const LeaderboardRow& r : rows) {
        text += r.submission + "," + fixed4(r.rating.mu) + "," + fixed4(r.rating.sigma) + "," +
                fixed4(r.conservative()) + "," + std::to_string(r.matches) + "\n";
    }
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), std::streamsize(text.size()));
}

}  // namespace

std::array<int, kTeamCount> slot_permutation(const MatchSpec& spec) {
    Rng rng(spec.slot_permutation_seed);
    const std::vector<std::size_t> perm = rng.permutation(kTeamCount);
    std::array<int, kTeamCount> out{};
    for (int t = 0; t < kTeamCount; ++t) out[t] = static_cast<int>(perm[t]);
    return out;
}

std::array<std::string, kTeamCount> assigned_slots(const MatchSpec& spec) {
    const auto perm = slot_permutation(spec);
    std::array<std::string, kTeamCount> out;
    for (int t = 0; t < kTeamCount; ++t) out[t] = spec.slots[perm[t]];
    return out;
}

const PolicyResolver& builtin_resolver() {
    static const PolicyResolver r = [](const std::string& id) { return make_policy(id); };
    return r;
}

MatchRecord run_match(const MatchSpec& spec, const std::string& replay_dir,
                      const PolicyResolver& resolve) {
    MatchRecord rec;
    rec.match_id = spec.match_id;
    rec.spec = spec;
    const auto assigned = assigned_slots(spec);

    std::array<std::unique_ptr<TeamPolicy>, kTeamCount> pols;
    try {
        for (int t = 0; t < kTeamCount; ++t) {
            pols[t] = resolve(assigned[t]);
            if (!pols[t]) throw std::runtime_error("resolver returned nothing for " + assigned[t]);
            pols[t]->set_config(spec.cfg);
        }
    } catch (const std::exception& e) {
        rec.error = true;
        rec.error_text = e.what();
        return rec;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Sim sim(spec.cfg, spec.seed);
    while (!sim.terminal()) {
        MatchActions actions{};
        const int tick = sim.world().tick;
        for (int t = 0; t < kTeamCount; ++t) {
            actions[t] =
                pols[t]->act(sim.obs(t), derive_seed(derive_seed(spec.seed, 100 + t), tick));
        }
        sim.step(actions);
    }
    rec.score = match_score(sim.world(), spec.cfg);
    rec.state_hash = sim.state_hash();
    if (!replay_dir.empty()) {
        const fs::path path = fs::path(replay_dir) / (spec.match_id + ".jsonl");
        write_replay(make_replay(sim, spec.seed, assigned), path.string());
        rec.replay_path = path.string();
    }
    rec.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    return rec;
}

std::string record_to_line(const MatchRecord& record) {
    Json j;
    j["id"] = record.match_id;
    j["seed"] = record.spec.seed;
    j["cfg"] = record.spec.cfg.serialize();
    j["slots"] = record.spec.slots;
    j["perm_seed"] = record.spec.slot_permutation_seed;
    if (record.error) {
        j["error"] = record.error_text;
    } else {
        Json score = Json::array();
        for (const TeamScore& s : record.score.teams) {
            score.push_back(
                Json::array({s.defeat_units, s.survival_units, s.total_units, s.rank}));
        }
        j["score"] = std::move(score);
        j["hash"] = record.state_hash;
    }
    if (!record.replay_path.empty()) j["replay"] = record.replay_path;
    j["ms"] = record.duration_ms;
    j["crc"] = fnv64(j.dump());
    return j.dump();
}

MatchRecord record_from_line(const std::string& line) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("crc")) {
        throw std::runtime_error("record line unreadable");
    }
    const std::uint64_t crc = j["crc"].get<std::uint64_t>();
    j.erase("crc");
    if (fnv64(j.dump()) != crc) throw std::runtime_error("record line checksum mismatch");

    MatchRecord rec;
    rec.match_id = j["id"].get<std::string>();
    rec.spec.match_id = rec.match_id;
    rec.spec.seed = j["seed"].get<std::uint64_t>();
    rec.spec.cfg = SimConfig::parse(j["cfg"].get<std::string>());
    const Json& slots = j["slots"];
    if (!slots.is_array() || slots.size() != kTeamCount) {
        throw std::runtime_error("record line has a bad slot list");
    }
    for (int t = 0; t < kTeamCount; ++t) rec.spec.slots[t] = slots[t].get<std::string>();
    rec.spec.slot_permutation_seed = j["perm_seed"].get<std::uint64_t>();
    if (j.contains("error")) {
        rec.error = true;
        rec.error_text = j["error"].get<std::string>();
    } else {
        const Json& score = j["score"];
        if (!score.is_array() || score.size() != kTeamCount) {
            throw std::runtime_error("record line has a bad score table");
        }
        for (int t = 0; t < kTeamCount; ++t) {
            TeamScore& s = rec.score.teams[t];
            s.team_id = t;
            s.defeat_units = score[t][0].get<std::int64_t>();
            s.survival_units = score[t][1].get<std::int64_t>();
            s.total_units = score[t][2].get<std::int64_t>();
            s.rank = score[t][3].get<int>();
        }
        rec.state_hash = j["hash"].get<std::uint64_t>();
    }
    if (j.contains("replay")) rec.replay_path = j["replay"].get<std::string>();
    rec.duration_ms = j["ms"].get<std::int64_t>();
    return rec;
}

std::vector<std::string> stage_builtins(int stage) {
    std::vector<std::string> out;
    if (stage == 1) {
        for (int i = 0; i < 8; ++i) out.push_back("mixture");
        for (int i = 0; i < 7; ++i) out.push_back("combat");
    } else if (stage == 2) {
        for (int i = 0; i < 5; ++i) out.push_back("reckless");
        for (int i = 0; i < 5; ++i) out.push_back("ruthless");
        for (int i = 0; i < 5; ++i) out.push_back("coward");
    } else {
        throw std::invalid_argument("pve stage must be 1 or 2");
    }
    return out;
}

PveReport pve_eval(const std::string& candidate, int stage, int rounds, std::uint64_t seed,
                   const SimConfig& cfg, double gate, const std::string& replay_dir,
                   const PolicyResolver& resolve) {
    if (rounds <= 0) throw std::invalid_argument("pve needs a positive round count");
    PveReport report;
    report.candidate = candidate;
    report.stage = stage;
    const std::vector<std::string> builtins = stage_builtins(stage);
    for (int round = 0; round < rounds; ++round) {
        MatchSpec spec;
        spec.match_id = "pve-" + std::to_string(seed) + "-" + padded(round);
        spec.seed = derive_seed(seed, 2000 + round);
        spec.slot_permutation_seed = derive_seed(spec.seed, 3);
        spec.cfg = cfg;
        spec.slots[0] = candidate;
        for (int i = 0; i < kTeamCount - 1; ++i) spec.slots[i + 1] = builtins[i];
        MatchRecord rec = run_match(spec, replay_dir, resolve);
        if (rec.error) throw std::runtime_error("pve match aborted: " + rec.error_text);
        const auto perm = slot_permutation(spec);
        for (int t = 0; t < kTeamCount; ++t) {
            if (perm[t] == 0) report.ranks.push_back(rec.score.teams[t].rank);
        }
        report.records.push_back(std::move(rec));
    }
    report.ratio = top1_ratio(report.ranks);
    report.stage2_eligible = report.ratio >= gate;
    return report;
}

std::vector<MatchSpec> pvp_schedule(const std::vector<Submission>& pool, int per_submission,
                                    std::uint64_t seed, const SimConfig& cfg,
                                    const std::string& id_prefix) {
    if (pool.size() < 2) throw std::invalid_argument("pvp pool needs at least 2 submissions");
    if (per_submission <= 0) throw std::invalid_argument("per-submission count must be positive");
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            if (pool[i].id == pool[j].id) {
                throw std::invalid_argument("duplicate submission id " + pool[i].id);
            }
        }
    }
    const bool with_replacement = int(pool.size()) < kTeamCount;
    std::vector<int> seen(pool.size(), 0);
    std::vector<MatchSpec> out;
    Rng rng(derive_seed(seed, 11));
    for (;;) {
        const int focal = int(std::min_element(seen.begin(), seen.end()) - seen.begin());
        if (seen[focal] >= per_submission) break;

        MatchSpec spec;
        spec.match_id = id_prefix + "-" + padded(out.size());
        spec.seed = derive_seed(seed, 1000 + out.size());
        spec.slot_permutation_seed = derive_seed(spec.seed, 3);
        spec.cfg = cfg;
        spec.slots[0] = pool[focal].id;
        seen[focal] += 1;

        std::vector<int> others;
        for (int i = 0; i < int(pool.size()); ++i) {
            if (i != focal) others.push_back(i);
        }
        for (int slot = 1; slot < kTeamCount; ++slot) {
            const std::size_t at = rng.index(others.size());
            const int pick = others[at];
            if (!with_replacement) others.erase(others.begin() + std::ptrdiff_t(at));
            spec.slots[slot] = pool[pick].id;
            seen[pick] += 1;
        }
        out.push_back(std::move(spec));
    }
    return out;
}

std::vector<LeaderboardRow> run_campaign(const CampaignConfig& cfg, Cadence cadence,
                                         const std::vector<Submission>& pool,
                                         std::uint64_t seed, const PolicyResolver& resolve) {
    if (cfg.store_dir.empty()) throw std::invalid_argument("campaign needs a store directory");
    const fs::path store(cfg.store_dir);
    fs::create_directories(store);
    std::string replay_dir;
    if (cfg.write_replays) {
        replay_dir = (store / "replays").string();
        fs::create_directories(replay_dir);
    }

    const int per = cadence == Cadence::Daily ? cfg.daily_matches : cfg.weekly_matches;
    const std::string prefix =
        (cadence == Cadence::Daily ? "daily-" : "weekly-") + std::to_string(seed);
    const std::vector<MatchSpec> schedule = pvp_schedule(pool, per, seed, cfg.match_cfg, prefix);

    const fs::path records_path = store / "records.jsonl";
    std::map<std::string, MatchRecord> stored;
    for (MatchRecord& rec : load_store(records_path)) stored.emplace(rec.match_id, std::move(rec));

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!stored.count(schedule[i].match_id)) pending.push_back(i);
    }

    RatingBook book;
    std::ofstream append(records_path, std::ios::app | std::ios::binary);
    if (!append) throw std::runtime_error("cannot append to " + records_path.string());
    auto commit = [&](const MatchRecord& rec) {
        append << record_to_line(rec) << '\n' << std::flush;
        book.apply(rec);
        write_ratings(store / "ratings.jsonl", book);
    };

    const int workers = std::max(1, cfg.parallelism);
    if (workers == 1 || pending.empty()) {
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            const auto it = stored.find(schedule[i].match_id);
            if (it != stored.end()) {
                book.apply(it->second);
            } else {
                commit(run_match(schedule[i], replay_dir, resolve));
            }
        }
    } else {
        std::mutex mu;
        std::condition_variable cv;
        std::map<std::size_t, MatchRecord> ready;
        std::atomic<std::size_t> cursor{0};
        auto work = [&] {
            for (;;) {
                const std::size_t k = cursor.fetch_add(1);
                if (k >= pending.size()) return;
                MatchRecord rec = run_match(schedule[pending[k]], replay_dir, resolve);
                {
                    std::lock_guard<std::mutex> lock(mu);
                    ready.emplace(pending[k], std::move(rec));
                }
                cv.notify_all();
            }
        };
        std::vector<std::thread> threads;
        const std::size_t n = std::min<std::size_t>(std::size_t(workers), pending.size());
        threads.reserve(n);
        for (std::size_t i = 0; i < n; ++i) threads.emplace_back(work);

        if (cfg.deterministic_order) {
            for (std::size_t i = 0; i < schedule.size(); ++i) {
                const auto it = stored.find(schedule[i].match_id);
                if (it != stored.end()) {
                    book.apply(it->second);
                    continue;
                }
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return ready.count(i) > 0; });
                MatchRecord rec = std::move(ready.at(i));
                ready.erase(i);
                lock.unlock();
                commit(rec);
            }
        } else {
            // throughput mode: stored first, then whatever finishes next
            for (std::size_t i = 0; i < schedule.size(); ++i) {
                const auto it = stored.find(schedule[i].match_id);
                if (it != stored.end()) book.apply(it->second);
            }
            for (std::size_t committed = 0; committed < pending.size(); ++committed) {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return !ready.empty(); });
                MatchRecord rec = std::move(ready.begin()->second);
                ready.erase(ready.begin());
                lock.unlock();
                commit(rec);
            }
        }
        for (std::thread& t : threads) t.join();
    }
    write_ratings(store / "ratings.jsonl", book);

    std::vector<LeaderboardRow> rows;
    for (const Submission& sub : pool) {
        LeaderboardRow row;
        row.submission = sub.id;
        row.rating = book.current(sub.id);
        row.matches = book.played.count(sub.id) ? book.played.at(sub.id) : 0;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
        if (a.conservative() != b.conservative()) return a.conservative() > b.conservative();
        return a.submission < b.submission;
    });
    write_leaderboard(store / "leaderboard.csv", rows);
    return rows;
}

}  // namespace arena
