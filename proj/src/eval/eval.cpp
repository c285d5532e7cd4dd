#include "mqr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mqr/error.hpp"

namespace mqr {

void EvalRecord::validate() const {
    std::set<std::string> pos;
    for (const auto& h : positives) pos.insert(h.format());
    for (const auto& h : negatives)
        if (pos.count(h.format()))
            throw DataError("rewrite '" + h.format() + "' of '" + request.format() + "' is both positive and negative");
}

namespace {

double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

PartitionMetrics partition_metrics(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
    if (predictions.size() != labels.size())
        throw ArgumentError("partition_metrics: " + std::to_string(predictions.size()) + " predictions for " +
                            std::to_string(labels.size()) + " labels");
    if (predictions.empty()) throw ArgumentError("partition_metrics: empty input");
    PartitionMetrics m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (predictions[i] && labels[i]) ++m.tp;
        else if (predictions[i]) ++m.fp;
        else if (labels[i]) ++m.fn;
        else ++m.tn;
    }
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.accuracy = ratio(m.tp + m.tn, labels.size());
    m.f1 = f1_of(m.precision, m.recall);
    return m;
}

double PrCurve::max_f1() const {
    double best = 0.0;
    for (const auto& p : points) best = std::max(best, f1_of(p.precision, p.recall));
    return best;
}

PrCurve pr_curve(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw ArgumentError("pr_curve: scores and labels differ in length");
    std::size_t positives = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1 && labels[i] != -1) throw ArgumentError("pr_curve: labels must be +1 or -1");
        if (std::isnan(scores[i])) throw ArgumentError("pr_curve: NaN score");
        positives += labels[i] == 1;
    }
    if (positives == 0) throw UndefinedMetricError("pr_curve: no positive labels");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });

    PrCurve curve;
    std::size_t tp = 0, fp = 0;
    for (std::size_t k = 0; k < order.size();) {
        const double t = scores[order[k]];
        for (; k < order.size() && scores[order[k]] == t; ++k) (labels[order[k]] == 1 ? tp : fp) += 1;
        curve.points.push_back({t, ratio(tp, tp + fp), ratio(tp, positives)});
    }
    curve.points.insert(curve.points.begin(), {curve.points.front().threshold, curve.points.front().precision, 0.0});
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        curve.area += (b.recall - a.recall) * (a.precision + b.precision) / 2.0;
    }
    return curve;
}

ReactivityReport reactivity_rate(const std::vector<RewriteTable>& tables, const std::vector<std::string>& requests,
                                 std::size_t bins) {
    if (tables.size() < 2) throw ArgumentError("reactivity_rate needs at least two snapshots");
    if (bins == 0) throw ArgumentError("reactivity_rate: zero histogram bins");
    auto top = [](const RewriteTable& t, const std::string& r) {
        auto it = t.find(r);
        return it == t.end() ? std::string() : it->second;
    };
    ReactivityReport out;
    out.histogram.assign(bins, 0);
    for (const auto& r : requests) {
        std::size_t changes = 0;
        for (std::size_t d = 1; d < tables.size(); ++d) changes += top(tables[d], r) != top(tables[d - 1], r);
        const double rate = static_cast<double>(changes) / static_cast<double>(tables.size() - 1);
        out.rates[r] = rate;
        ++out.histogram[std::min(bins - 1, static_cast<std::size_t>(rate * static_cast<double>(bins)))];
    }
    if (!out.rates.empty()) {
        double sum = 0.0;
        for (const auto& [r, v] : out.rates) sum += v;
        out.mean = sum / static_cast<double>(out.rates.size());
    }
    return out;
}

std::vector<double> relative_f1_change(const std::vector<double>& f1) {
    if (f1.empty()) throw ArgumentError("relative_f1_change: empty series");
    if (f1.front() == 0.0) throw UndefinedMetricError("relative_f1_change: baseline F1 is 0");
    std::vector<double> out;
    out.reserve(f1.size());
    for (double v : f1) out.push_back(v / f1.front() - 1.0);
    return out;
}

ScoredPairs score_pairs(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                        const SolverOptions& options) {
    ScoredPairs out;
    for (const auto& rec : records) {
        const auto src = graph.states().find(rec.request);
        std::vector<double> phi;
        if (src) phi = phi_row(graph, *src, options);
        auto score = [&](const Hypothesis& h) {
            if (!src) return 0.0;
            const auto dst = graph.states().find(h);
            return dst ? phi[*dst] : 0.0;
        };
        for (const auto& h : rec.positives) {
            out.scores.push_back(score(h));
            out.labels.push_back(1);
        }
        for (const auto& h : rec.negatives) {
            out.scores.push_back(score(h));
            out.labels.push_back(-1);
        }
    }
    return out;
}

PartitionMetrics evaluate_partition(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                                    const SolverOptions& options) {
    std::vector<bool> predictions, labels;
    for (const auto& rec : records) {
        const auto src = graph.states().find(rec.request);
        predictions.push_back(src && predict_rewritability(graph, *src, options));
        labels.push_back(rec.rewritable());
    }
    return partition_metrics(predictions, labels);
}

double equivalence_f1(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                      const SolverOptions& options) {
    const auto pairs = score_pairs(graph, records, options);
    return pr_curve(pairs.scores, pairs.labels).max_f1();
}

std::vector<double> f1_trend(const std::vector<MarkovGraph>& snapshots, const std::vector<EvalRecord>& records,
                             const SolverOptions& options) {
    std::vector<double> f1;
    f1.reserve(snapshots.size());
    for (const auto& g : snapshots) f1.push_back(equivalence_f1(g, records, options));
    return relative_f1_change(f1);
}

EvalSummary evaluate(const MarkovGraph& graph, const std::vector<EvalRecord>& records,
                     const SolverOptions& options) {
    EvalSummary out;
    out.partition = evaluate_partition(graph, records, options);
    const auto pairs = score_pairs(graph, records, options);
    out.requests = records.size();
    out.pairs = pairs.scores.size();
    if (std::find(pairs.labels.begin(), pairs.labels.end(), 1) != pairs.labels.end())
        out.curve = pr_curve(pairs.scores, pairs.labels);
    return out;
}

}  // namespace mqr
