#include "bpmncheck/explore.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace bpmncheck {

namespace {

using Clock = std::chrono::steady_clock;

struct Expansion {
    std::uint32_t rule;
    std::vector<RuleApplication> apps;
};

// Expands every frontier state against every rule. Workers pull frontier
// positions from an atomic counter; the result slots are disjoint, so no
// further synchronization is needed.
void expand_frontier(const RuleSet& ruleset, const std::vector<ExecutionState>& states,
                     const std::vector<std::uint32_t>& frontier,
                     std::vector<std::vector<Expansion>>& results, unsigned threads) {
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= frontier.size()) return;
            const ExecutionState& state = states[frontier[i]];
            std::vector<Expansion> expansions;
            for (std::uint32_t r = 0; r < ruleset.rules.size(); ++r) {
                auto apps = apply_rule(ruleset.rules[r], state);
                if (!apps.empty()) expansions.push_back({r, std::move(apps)});
            }
            results[i] = std::move(expansions);
        }
    };
    if (threads <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

}  // namespace

Lts explore(const RuleSet& ruleset, const ExploreLimits& limits, unsigned threads) {
    const auto start_time = Clock::now();
    auto elapsed_ms = [&]() {
        return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_time)
            .count();
    };

    Lts lts;
    for (const auto& r : ruleset.rules) lts.rule_names.push_back(r.name);

    ExecutionState initial = normalize(ruleset.start_state);
    CanonicalKey initial_key = canonical_key(initial);
    lts.keys.push_back(initial_key);
    lts.states.push_back(std::move(initial));
    lts.index.emplace(std::move(initial_key), 0);

    std::vector<std::uint32_t> frontier{0};
    bool truncated = false;

    while (!frontier.empty() && !truncated) {
        std::vector<std::vector<Expansion>> results(frontier.size());
        expand_frontier(ruleset, lts.states, frontier, results, threads);

        // Merge in frontier order so discovery indices are deterministic.
        std::vector<std::uint32_t> next_frontier;
        for (std::size_t i = 0; i < frontier.size() && !truncated; ++i) {
            const std::uint32_t src = frontier[i];
            for (auto& expansion : results[i]) {
                std::int64_t last_target = -1;
                for (auto& app : expansion.apps) {
                    auto it = lts.index.find(app.key);
                    std::uint32_t tgt;
                    if (it != lts.index.end()) {
                        tgt = it->second;
                    } else {
                        if (lts.states.size() >= limits.max_states) {
                            truncated = true;
                            break;
                        }
                        tgt = static_cast<std::uint32_t>(lts.states.size());
                        lts.keys.push_back(app.key);
                        lts.states.push_back(std::move(app.state));
                        lts.index.emplace(std::move(app.key), tgt);
                        next_frontier.push_back(tgt);
                    }
                    // Applications are sorted by key, so distinct bindings
                    // with the same successor collapse to one transition.
                    if (static_cast<std::int64_t>(tgt) == last_target) continue;
                    last_target = tgt;
                    lts.transitions.push_back({src, expansion.rule, tgt});
                }
                if (truncated) break;
            }
            if (elapsed_ms() > limits.max_millis) truncated = true;
        }
        frontier = std::move(next_frontier);
    }

    std::sort(lts.transitions.begin(), lts.transitions.end());
    lts.stats.state_count = lts.states.size();
    lts.stats.transition_count = lts.transitions.size();
    lts.stats.exploration_time_ms = elapsed_ms();
    lts.stats.truncated = truncated;
    return lts;
}

}  // namespace bpmncheck
