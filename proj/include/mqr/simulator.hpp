#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mqr/alpha.hpp"
#include "mqr/eval.hpp"
#include "mqr/markov_graph.hpp"
#include "mqr/resolve.hpp"
#include "mqr/session.hpp"

namespace mqr {

inline constexpr double kDefaultRephraseAfterDefect = 0.7;
inline constexpr double kDefaultRephraseAfterSuccess = 0.05;

struct Misrecognition {
    Hypothesis observed;
    double probability = 0.0;
};

struct IntentSpec {
    std::string name;
    double popularity = 1.0;
    /// Hypotheses that satisfy the intent. Customers open with the first.
    std::vector<Hypothesis> correct;
    /// Forms used when rephrasing, all of them in `correct`. Empty means the
    /// whole of `correct`.
    std::vector<Hypothesis> rephrases;
    /// How the opening request may be misheard. Probabilities sum to <= 1.
    std::vector<Misrecognition> misrecognitions;
    double p_rephrase_defect = kDefaultRephraseAfterDefect;
    double p_rephrase_success = kDefaultRephraseAfterSuccess;
    /// After a defect, chance of abandoning the intent for another one.
    double p_switch = 0.0;
};

/// A rewrite applied by another component on days [first_day, last_day],
/// ahead of the deployed model.
struct ExternalRewrite {
    Hypothesis source;
    Hypothesis target;
    std::size_t first_day = 1;
    std::size_t last_day = 1;
    double probability = 1.0;
};

struct WorldModel {
    std::vector<IntentSpec> intents;
    std::vector<ExternalRewrite> external;
    /// Chance that an IQ annotation is flipped. Outcomes stay truthful.
    double label_noise = 0.0;
    std::size_t customers = 50;
    std::size_t max_turns = 6;

    /// Throws ArgumentError on probabilities outside [0,1], an intent without
    /// a correct hypothesis or rephrases outside `correct`.
    void validate() const;
    /// Every hypothesis a customer or an external rewrite can produce, sorted.
    std::vector<Hypothesis> hypotheses() const;
    /// One record per hypothesis. Rewrites to a hypothesis that serves none
    /// of the intents behind the request are negative. When the request only
    /// ever arises from misrecognition, the correct forms of its intents are
    /// positive; when it already serves an intent, rewrites between correct
    /// forms neither help nor hurt and are left out.
    std::vector<EvalRecord> eval_set() const;
};

struct SimulationConfig {
    GraphMode mode = GraphMode::Discounting;
    std::size_t days = 60;
    std::size_t sessions_per_day = 200;
    std::uint64_t seed = 1;
    /// Minimum support of a deployed rewrite edge.
    std::uint64_t rewrite_support = 2;
    BuildOptions build;
    AlphaGate gate;
    double iq_threshold = kDefaultIqThreshold;
    SolverOptions solver;
    bool keep_snapshots = false;
    bool evaluate = true;

    /// Throws ArgumentError unless days >= 1 and sessions_per_day >= 1.
    void validate() const;
};

/// mt19937_64 with distribution code of our own, so a seed yields the same
/// stream on every standard library.
class SimRng {
public:
    explicit SimRng(std::uint64_t seed) : engine_(seed) {}
    /// [0, 1) with 53 random bits.
    double uniform();
    std::size_t index(std::size_t n);
    /// Index drawn proportionally to non-negative weights.
    std::size_t weighted(const std::vector<double>& weights);
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Top rewrite of every transient state, empty for states left alone.
RewriteTable rewrite_table(const MarkovGraph& graph, std::uint64_t min_support, const SolverOptions& options = {});

struct DayTraffic {
    std::vector<Session> sessions;
    std::size_t defective_turns = 0;
    std::size_t failed_sessions = 0;
    std::size_t rewrites = 0;
};

/// One day of customer sessions under the deployed rewrite table. Request
/// turns that are rewritten are followed by a Rewrite turn; IQ annotations
/// come from the world oracle.
DayTraffic simulate_day(const WorldModel& world, const RewriteTable& deployed, std::size_t day,
                        std::size_t sessions, SimRng& rng);

struct DayRecord {
    std::size_t day = 0;
    GraphMode mode = GraphMode::Discounting;
    std::size_t sessions = 0;
    std::size_t defective_turns = 0;
    std::size_t failed_sessions = 0;
    std::size_t rewrites = 0;
    /// Defective turns per session.
    double defect_rate = 0.0;
    /// States whose top rewrite differs from the previous day's table.
    std::size_t flips = 0;
    std::optional<PartitionMetrics> partition;
    std::optional<double> pr_auc;
    std::optional<double> equivalence_f1;
    /// Table of the graph trained at the end of the day.
    RewriteTable table;
    std::string digest;
};

struct SimulationResult {
    std::vector<DayRecord> days;
    /// Filled when keep_snapshots is set.
    std::vector<GraphData> snapshots;
    std::vector<Session> sessions;
};

/// Day 0 is bootstrap traffic with nothing deployed. Each day's graph is
/// trained on every session so far and deployed the next day.
SimulationResult run_loop(const WorldModel& world, const SimulationConfig& config);

/// Days d >= first_day (and d >= 1) whose top rewrite for `state` differs
/// from day d-1. Throws LookupError when no table knows the state,
/// ArgumentError on an empty series.
std::size_t count_flips(const std::vector<RewriteTable>& tables, const std::string& state, std::size_t first_day = 1);

std::vector<RewriteTable> tables_of(const SimulationResult& result);

/// A misheard request ("theme" for "team") whose rephrase becomes a rewrite.
WorldModel scenario_type2();
/// A successful request ("la da dee") that an external component rewrites to
/// a popular but wrong song ("lady") for a few days.
WorldModel scenario_type1();
/// Seeded mix of misheard, externally rewritten and plain intents.
WorldModel benchmark_world(std::uint64_t seed, std::size_t intents = 60);

inline constexpr std::string_view kSimlogHeader = "format=simlog/v1";

std::string serialize_simlog(const SimulationResult& result);
std::vector<DayRecord> parse_simlog(std::string_view contents);
std::string simlog_csv(const SimulationResult& result);
/// FNV-1a over the table's "source\ttarget\n" lines, as 16 hex digits.
std::string table_digest(const RewriteTable& table);

}  // namespace mqr
