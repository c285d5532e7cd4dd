#include "mqr/simulator.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <set>

#include "mqr/error.hpp"
#include "mqr/meta_state.hpp"

namespace mqr {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void require_probability(double p, const std::string& what) {
    if (!is_probability(p)) throw ArgumentError(what + " = " + std::to_string(p) + " is outside [0,1]");
}

// "play team by lorde"-like surface text: intent name followed by the slot
// values in slot order.
std::string utterance_of(const Hypothesis& h) {
    std::string out;
    for (char c : h.intent()) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (const auto& [name, value] : h.slots()) out += ' ' + value;
    return out;
}

bool contains(const std::vector<Hypothesis>& hs, const Hypothesis& h) {
    return std::find(hs.begin(), hs.end(), h) != hs.end();
}

}  // namespace

void WorldModel::validate() const {
    if (intents.empty()) throw ArgumentError("world has no intents");
    if (max_turns == 0) throw ArgumentError("max_turns must be positive");
    if (customers == 0) throw ArgumentError("world needs at least one customer");
    require_probability(label_noise, "label_noise");
    for (const auto& in : intents) {
        if (in.correct.empty()) throw ArgumentError("intent '" + in.name + "' has no correct hypothesis");
        if (!(in.popularity > 0.0)) throw ArgumentError("intent '" + in.name + "' needs positive popularity");
        require_probability(in.p_rephrase_defect, in.name + ".p_rephrase_defect");
        require_probability(in.p_rephrase_success, in.name + ".p_rephrase_success");
        require_probability(in.p_switch, in.name + ".p_switch");
        if (in.p_rephrase_defect + in.p_switch > 1.0)
            throw ArgumentError(in.name + ": rephrase and switch probabilities exceed 1");
        double total = 0.0;
        for (const auto& m : in.misrecognitions) {
            require_probability(m.probability, in.name + " misrecognition");
            total += m.probability;
        }
        if (total > 1.0 + 1e-12) throw ArgumentError(in.name + ": misrecognition probabilities exceed 1");
        for (const auto& r : in.rephrases)
            if (!contains(in.correct, r))
                throw ArgumentError(in.name + ": rephrase '" + r.format() + "' is not a correct hypothesis");
    }
    for (const auto& e : external) {
        require_probability(e.probability, "external rewrite probability");
        if (e.first_day > e.last_day) throw ArgumentError("external rewrite window is empty");
    }
}

std::vector<Hypothesis> WorldModel::hypotheses() const {
    std::set<Hypothesis> all;
    for (const auto& in : intents) {
        all.insert(in.correct.begin(), in.correct.end());
        for (const auto& m : in.misrecognitions) all.insert(m.observed);
    }
    for (const auto& e : external) {
        all.insert(e.source);
        all.insert(e.target);
    }
    return {all.begin(), all.end()};
}

std::vector<EvalRecord> WorldModel::eval_set() const {
    const auto all = hypotheses();
    std::vector<EvalRecord> out;
    for (const auto& h : all) {
        // Intents a customer may mean when `h` is heard, and whether `h`
        // already serves any of them.
        std::set<Hypothesis> serves;
        bool correct_somewhere = false;
        for (const auto& in : intents) {
            const bool correct = contains(in.correct, h);
            const bool misheard = std::any_of(in.misrecognitions.begin(), in.misrecognitions.end(),
                                              [&](const auto& m) { return m.observed == h && m.probability > 0.0; });
            correct_somewhere = correct_somewhere || correct;
            if (correct || misheard) serves.insert(in.correct.begin(), in.correct.end());
        }
        EvalRecord rec;
        rec.request = h;
        for (const auto& r : all) {
            if (r == h) continue;
            if (!serves.count(r)) rec.negatives.push_back(r);
            else if (!correct_somewhere) rec.positives.push_back(r);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void SimulationConfig::validate() const {
    if (days == 0) throw ArgumentError("simulation needs at least one day");
    if (sessions_per_day == 0) throw ArgumentError("simulation needs at least one session per day");
    require_probability(iq_threshold, "iq_threshold");
}

double SimRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t SimRng::index(std::size_t n) {
    if (n == 0) throw ArgumentError("SimRng::index of an empty range");
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

std::size_t SimRng::weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw ArgumentError("SimRng::weighted needs positive total weight");
    double u = uniform() * total;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (u < weights[k]) return k;
        u -= weights[k];
    }
    // Rounding left u just above the last bucket.
    for (std::size_t k = weights.size(); k-- > 0;)
        if (weights[k] > 0.0) return k;
    return weights.size() - 1;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RewriteTable rewrite_table(const MarkovGraph& graph, std::uint64_t min_support, const SolverOptions& options) {
    RewriteTable table;
    for (StateId s = kFirstTransient; s < graph.size(); ++s) {
        const auto top = top_rewrites(graph, s, 1, min_support, options);
        table[graph.states().canonical(s)] = top.empty() ? std::string() : graph.states().canonical(top[0].target);
    }
    return table;
}

DayTraffic simulate_day(const WorldModel& world, const RewriteTable& deployed, std::size_t day,
                        std::size_t sessions, SimRng& rng) {
    std::vector<double> popularity;
    for (const auto& in : world.intents) popularity.push_back(in.popularity);

    auto satisfies = [&](std::size_t intent, const Hypothesis& h) { return contains(world.intents[intent].correct, h); };
    auto annotate = [&](bool ok) {
        double iq = ok ? 1.0 : 0.0;
        if (world.label_noise > 0.0 && rng.uniform() < world.label_noise) iq = 1.0 - iq;
        return iq;
    };
    auto open_request = [&](std::size_t intent) {
        const auto& in = world.intents[intent];
        double u = rng.uniform();
        for (const auto& m : in.misrecognitions) {
            if (u < m.probability) return m.observed;
            u -= m.probability;
        }
        return in.correct.front();
    };
    auto rephrase = [&](std::size_t intent) {
        const auto& in = world.intents[intent];
        const auto& forms = in.rephrases.empty() ? in.correct : in.rephrases;
        return forms[rng.index(forms.size())];
    };
    auto rewrite_of = [&](const Hypothesis& h) -> std::optional<Hypothesis> {
        for (const auto& e : world.external)
            if (e.source == h && day >= e.first_day && day <= e.last_day && rng.uniform() < e.probability)
                return e.target;
        auto it = deployed.find(h.format());
        if (it != deployed.end() && !it->second.empty()) return Hypothesis::parse(it->second);
        return std::nullopt;
    };

    DayTraffic out;
    out.sessions.reserve(sessions);
    const std::int64_t day_base = static_cast<std::int64_t>(day) * 100000000;
    for (std::size_t k = 0; k < sessions; ++k) {
        Session s;
        s.customer_id = "c" + std::to_string(rng.index(world.customers));
        std::int64_t ts = day_base + static_cast<std::int64_t>(k) * 100;
        std::size_t intent = rng.weighted(popularity);
        Hypothesis request = open_request(intent);
        bool ok = false;
        for (std::size_t t = 0; t < world.max_turns; ++t) {
            Turn turn{utterance_of(request), request, ts, TurnKind::User, std::nullopt, false};
            ts += 5;
            const auto rewrite = rewrite_of(request);
            if (rewrite) {
                turn.iq = annotate(satisfies(intent, request));
                s.turns.push_back(std::move(turn));
                ok = satisfies(intent, *rewrite);
                s.turns.push_back({utterance_of(*rewrite), *rewrite, ts, TurnKind::Rewrite, annotate(ok), false});
                ts += 5;
                ++out.rewrites;
            } else {
                ok = satisfies(intent, request);
                turn.iq = annotate(ok);
                s.turns.push_back(std::move(turn));
            }
            if (!ok) ++out.defective_turns;

            const auto& in = world.intents[intent];
            const double u = rng.uniform();
            if (ok) {
                if (u >= in.p_rephrase_success) break;
                request = rephrase(intent);
            } else if (u < in.p_rephrase_defect) {
                request = rephrase(intent);
            } else if (u < in.p_rephrase_defect + in.p_switch && world.intents.size() > 1) {
                std::size_t next = rng.weighted(popularity);
                if (next == intent) next = (next + 1) % world.intents.size();
                intent = next;
                request = open_request(intent);
            } else {
                break;
            }
        }
        s.outcome = ok ? Outcome::Success : Outcome::Failure;
        if (!ok) ++out.failed_sessions;
        out.sessions.push_back(std::move(s));
    }
    return out;
}

namespace {

std::size_t table_changes(const RewriteTable& prev, const RewriteTable& cur) {
    auto top = [](const RewriteTable& t, const std::string& k) {
        auto it = t.find(k);
        return it == t.end() ? std::string() : it->second;
    };
    std::set<std::string> keys;
    for (const auto& [k, v] : prev) keys.insert(k);
    for (const auto& [k, v] : cur) keys.insert(k);
    std::size_t n = 0;
    for (const auto& k : keys) n += top(prev, k) != top(cur, k);
    return n;
}

}  // namespace

SimulationResult run_loop(const WorldModel& world, const SimulationConfig& config) {
    world.validate();
    config.validate();
    const auto eval_records = config.evaluate ? world.eval_set() : std::vector<EvalRecord>{};

    AnnotatedScorer scorer;
    SelfAwareOptions options;
    options.build = config.build;
    options.gate = config.gate;
    options.iq_threshold = config.iq_threshold;
    options.scorer = &scorer;

    SimulationResult result;
    RewriteTable deployed;
    for (std::size_t day = 0; day < config.days; ++day) {
        SimRng rng(splitmix64(config.seed ^ splitmix64(day)));
        auto traffic = simulate_day(world, deployed, day, config.sessions_per_day, rng);
        result.sessions.insert(result.sessions.end(), std::make_move_iterator(traffic.sessions.begin()),
                               std::make_move_iterator(traffic.sessions.end()));

        const MarkovGraph graph = build_graph_for_mode(result.sessions, config.mode, options);

        DayRecord rec;
        rec.day = day;
        rec.mode = config.mode;
        rec.sessions = config.sessions_per_day;
        rec.defective_turns = traffic.defective_turns;
        rec.failed_sessions = traffic.failed_sessions;
        rec.rewrites = traffic.rewrites;
        rec.defect_rate = static_cast<double>(traffic.defective_turns) / static_cast<double>(rec.sessions);
        rec.table = rewrite_table(graph, config.rewrite_support, config.solver);
        rec.digest = table_digest(rec.table);
        rec.flips = result.days.empty() ? 0 : table_changes(result.days.back().table, rec.table);
        if (config.evaluate) {
            const auto summary = evaluate(graph, eval_records, config.solver);
            rec.partition = summary.partition;
            if (summary.curve) {
                rec.pr_auc = summary.curve->area;
                rec.equivalence_f1 = summary.curve->max_f1();
            }
        }
        if (config.keep_snapshots) result.snapshots.push_back(graph.data());
        deployed = rec.table;
        result.days.push_back(std::move(rec));
    }
    return result;
}

std::size_t count_flips(const std::vector<RewriteTable>& tables, const std::string& state, std::size_t first_day) {
    if (tables.empty()) throw ArgumentError("count_flips on an empty series");
    const bool known = std::any_of(tables.begin(), tables.end(), [&](const auto& t) { return t.count(state) > 0; });
    if (!known) throw LookupError("state '" + state + "' appears in no rewrite table");
    auto top = [&](const RewriteTable& t) {
        auto it = t.find(state);
        return it == t.end() ? std::string() : it->second;
    };
    std::size_t flips = 0;
    for (std::size_t d = std::max<std::size_t>(1, first_day); d < tables.size(); ++d)
        flips += top(tables[d]) != top(tables[d - 1]);
    return flips;
}

std::vector<RewriteTable> tables_of(const SimulationResult& result) {
    std::vector<RewriteTable> out;
    out.reserve(result.days.size());
    for (const auto& d : result.days) out.push_back(d.table);
    return out;
}

std::string table_digest(const RewriteTable& table) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [k, v] : table) {
        feed(k);
        feed("\t");
        feed(v);
        feed("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace mqr
