#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqr/hypothesis.hpp"
#include "mqr/markov_graph.hpp"
#include "mqr/resolve.hpp"

namespace mqr {

struct EvalRecord {
    Hypothesis request;
    std::vector<Hypothesis> positives;
    std::vector<Hypothesis> negatives;

    bool rewritable() const noexcept { return !positives.empty(); }
    /// Throws DataError when a hypothesis is both a positive and a negative.
    void validate() const;

    friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

struct PartitionMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Undefined precision or recall is reported as 0, as is f1 when both are 0.
/// Throws ArgumentError on empty or mismatched input.
PartitionMetrics partition_metrics(const std::vector<bool>& predictions, const std::vector<bool>& labels);

struct PrPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

struct PrCurve {
    /// One point per distinct score, highest threshold first, preceded by a
    /// recall-0 point carrying the precision of the first threshold.
    std::vector<PrPoint> points;
    double area = 0.0;

    /// Best 2PR/(P+R) over the points.
    double max_f1() const;
};

/// Labels are +1 / -1. Tied scores enter the curve together. Area is the
/// trapezoid rule over recall. Throws UndefinedMetricError without a
/// positive label, ArgumentError on bad input.
PrCurve pr_curve(const std::vector<double>& scores, const std::vector<int>& labels);

/// Top rewrite per state of a snapshot, keyed by canonical hypothesis. An
/// empty target marks a state that is not rewritten; a missing key is read
/// the same way.
using RewriteTable = std::map<std::string, std::string>;

struct ReactivityReport {
    std::map<std::string, double> rates;
    /// Equal-width bins over [0, 1]; a rate of exactly 1 falls in the last.
    std::vector<std::size_t> histogram;
    double mean = 0.0;
};

/// Fraction of day-over-day transitions in which a request's top rewrite
/// changes; a rewrite appearing or disappearing counts as a change. Throws
/// ArgumentError with fewer than two tables or zero bins.
ReactivityReport reactivity_rate(const std::vector<RewriteTable>& tables, const std::vector<std::string>& requests,
                                 std::size_t bins = 10);

/// F1(t) / F1(0) - 1. Throws UndefinedMetricError when F1(0) is 0,
/// ArgumentError on an empty series.
std::vector<double> relative_f1_change(const std::vector<double>& f1);

struct ScoredPairs {
    std::vector<double> scores;
    std::vector<int> labels;
};

/// Phi_inf of every (request, candidate) pair; pairs whose request or
/// candidate is not a state of the graph score 0.
ScoredPairs score_pairs(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                        const SolverOptions& options = {});

/// Rewritability predictions against the labels of the records; requests
/// unknown to the graph are predicted not rewritable.
PartitionMetrics evaluate_partition(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                                    const SolverOptions& options = {});

/// Equivalence F1 at the max-F1 operating point of the PR curve.
double equivalence_f1(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                      const SolverOptions& options = {});

/// Equivalence F1 of each snapshot, relative to the first.
std::vector<double> f1_trend(const std::vector<MarkovGraph>& snapshots, const std::vector<EvalRecord>& records,
                             const SolverOptions& options = {});

struct EvalSummary {
    PartitionMetrics partition;
    /// Absent when the records carry no positive rewrite.
    std::optional<PrCurve> curve;
    std::size_t requests = 0;
    std::size_t pairs = 0;
};

EvalSummary evaluate(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                     const SolverOptions& options = {});

}  // namespace mqr
