// Acceptance run: one [PASS]/[FAIL] line per criterion, exit 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "builders.hpp"
#include "mqr/alpha.hpp"
#include "mqr/eval.hpp"
#include "mqr/graph_io.hpp"
#include "mqr/harness.hpp"
#include "mqr/io.hpp"
#include "mqr/meta_state.hpp"
#include "mqr/resolve.hpp"
#include "mqr/simulator.hpp"
#include "mqr/stats.hpp"
#include "mqr/template.hpp"
#include "oracles.hpp"
#include "template_fixtures.hpp"

using namespace mqr;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------- 1

// Fraction of walks from `src` absorbed into s+ directly from each state.
std::vector<double> walk_phi(const MarkovGraph& g, StateId src, int walks, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> hits(g.size(), 0.0);
    for (int w = 0; w < walks; ++w) {
        StateId cur = src;
        while (true) {
            double r = u(rng);
            StateId next = kFailureState;
            if (r < g.success_probability(cur)) {
                next = kSuccessState;
            } else {
                r -= g.success_probability(cur);
                for (const auto& e : g.row(cur)) {
                    if (r < e.p) {
                        next = e.state;
                        break;
                    }
                    r -= e.p;
                }
            }
            if (next == kSuccessState) hits[cur] += 1.0;
            if (is_absorbing(next)) break;
            cur = next;
        }
    }
    for (auto& h : hits) h /= walks;
    return hits;
}

Verdict fundamental_matrix() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> density(0.1, 0.9);
    double worst = 0.0;
    for (int c = 0; c < 200; ++c) {
        const std::size_t n = 1 + rng() % 10;
        const MarkovGraph g(fixtures::random_graph(n, rng, density(rng)));
        const auto dense = fixtures::dense_fundamental(g);
        for (StateId i = kFirstTransient; i < g.size(); ++i) {
            const auto row = fundamental_row(g, i);
            for (StateId j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(row[j] - dense(i, j)));
        }
    }
    double mc_worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        const MarkovGraph g(fixtures::random_graph(5, rng, 0.5));
        const auto phi = phi_row(g, kFirstTransient);
        const auto est = walk_phi(g, kFirstTransient, 1000000, rng);
        for (StateId j = kFirstTransient; j < g.size(); ++j) mc_worst = std::max(mc_worst, std::abs(est[j] - phi[j]));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && mc_worst <= 1e-2 && secs < 60.0,
            "max |N - dense| " + fmt("%.2e", worst) + " over 200 chains, max |Phi - walks| " + fmt("%.2e", mc_worst) +
                ", " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------- 2

Verdict beta_superiority_check() {
    const auto t0 = Clock::now();
    double sym = 0.0;
    for (auto [a, b] : std::vector<std::pair<double, double>>{
             {1, 1}, {2, 5}, {0.5, 0.5}, {30, 4}, {120, 130}, {7, 7}, {1, 40}})
        sym = std::max(sym, std::abs(beta_superiority({a, b}, {a, b}) - 0.5));
    // W ~ Beta(1,1), X ~ Beta(1,2)
    const double third = std::abs(beta_superiority({1, 2}, {1, 1}) - 2.0 / 3.0);

    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> par(0.5, 40.0);
    const int draws = 1000000;
    int misses = 0;
    double worst_z = 0.0;
    for (int set = 0; set < 50; ++set) {
        const BetaEvidence x{par(rng), par(rng)}, w{par(rng), par(rng)};
        std::gamma_distribution<double> xa(x.a), xb(x.b), wa(w.a), wb(w.b);
        int wins = 0;
        for (int k = 0; k < draws; ++k) {
            const double gx = xa(rng), px = gx / (gx + xb(rng));
            const double gw = wa(rng), pw = gw / (gw + wb(rng));
            wins += pw > px;
        }
        // Score-test standard error under the value being checked; the plug-in
        // error of a sampled proportion collapses for rare events.
        const double p = static_cast<double>(wins) / draws;
        const double q = beta_superiority(x, w);
        const double se = std::sqrt(std::max(q * (1 - q), 1.0 / draws) / draws);
        const double z = std::abs(q - p) / se;
        worst_z = std::max(worst_z, z);
        if (z > 3.0) {
            ++misses;
            std::fprintf(stderr, "  X~Beta(%.4f, %.4f) W~Beta(%.4f, %.4f): quadrature %.6f, sampled %.6f\n", x.a, x.b,
                         w.a, w.b, q, p);
        }
    }
    const double secs = seconds_since(t0);
    return {sym <= kDefaultQuadEps && third <= 1e-6 && misses == 0 && secs < 60.0,
            "symmetric dev " + fmt("%.1e", sym) + ", |P - 2/3| " + fmt("%.1e", third) + ", MC max " +
                fmt("%.2f", worst_z) + " se over 50 sets, " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------- 3

double reference_z(double conf) {
    const double tail = (1.0 - conf) / 2.0;
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Interval reference_wilson(double k, double n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double p = k / n;
    const double a = p + z * z / (2 * n);
    const double b = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    const double d = 1 + z * z / n;
    return {std::max(0.0, (a - b) / d), std::min(1.0, (a + b) / d)};
}

Verdict wilson_gate() {
    double worst = 0.0;
    for (double conf : {0.89, 0.95, 0.5, 0.99}) {
        const double z = reference_z(conf);
        for (std::uint64_t n = 1; n <= 200; ++n)
            for (std::uint64_t k = 0; k <= n; ++k) {
                const auto got = wilson_interval(k, n, conf);
                const auto ref = reference_wilson(static_cast<double>(k), static_cast<double>(n), z);
                worst = std::max({worst, std::abs(got.lo - ref.lo), std::abs(got.hi - ref.hi)});
            }
    }
    bool monotone = true;
    for (std::uint64_t num : {0u, 1u, 2u, 3u, 4u}) {
        double prev = 2.0;
        for (std::uint64_t m = 1; m <= 100; ++m) {
            const double w = wilson_interval(num * m, 4 * m).width();
            monotone = monotone && w <= prev + 1e-15;
            prev = w;
        }
    }

    const AlphaGate gate;
    const bool defaults = kDefaultEta == 0.588 && kDefaultConfidence == 0.89 && gate.eta == 0.588 &&
                          gate.confidence == 0.89 &&
                          std::abs(normal_critical_value(0.89) - reference_z(0.89)) <= 1e-12;

    // Gate decisions against the reference widths.
    const double z89 = reference_z(0.89);
    std::size_t gate_mismatch = 0;
    for (std::uint64_t n1 = 0; n1 <= 14; ++n1)
        for (std::uint64_t k1 = 0; k1 <= n1; ++k1)
            for (std::uint64_t n2 = 0; n2 <= 14; ++n2)
                for (std::uint64_t k2 = 0; k2 <= n2; k2 += 2) {
                    const TierEvidence ev{{k1, n1}, {k2, n2}};
                    const bool expect = reference_wilson(double(k1), double(n1), z89).width() < 0.588 &&
                                        reference_wilson(double(k2), double(n2), z89).width() < 0.588;
                    gate_mismatch += passes_gate(ev, gate) != expect;
                }

    // Customer, then global, then entity.
    const TierEvidence strong{{10, 100}, {90, 100}}, weak{{0, 1}, {1, 1}};
    const std::vector<double> entity{0.8, 0.35};
    const auto c = select_alpha(strong, weak, entity);
    const auto g = select_alpha(weak, strong, entity);
    const auto e = select_alpha(weak, weak, entity);
    const bool tiers = c.tier == AlphaTier::Customer &&
                       std::abs(c.alpha - beta_superiority({11, 91}, {91, 11})) <= 1e-12 &&
                       g.tier == AlphaTier::Global && e.tier == AlphaTier::Entity && std::abs(e.alpha - 0.3) <= 1e-15;

    return {worst <= 1e-12 && monotone && defaults && gate_mismatch == 0 && tiers,
            "max |Wilson - ref| " + fmt("%.1e", worst) + ", monotone " + (monotone ? "yes" : "no") +
                ", defaults " + (defaults ? "ok" : "wrong") + ", gate mismatches " +
                std::to_string(gate_mismatch) + ", tier order " + (tiers ? "ok" : "wrong")};
}

// ---------------------------------------------------------------- 4

std::vector<Session> random_rewrite_log(std::mt19937& rng, std::size_t states, std::size_t n) {
    std::vector<std::pair<std::string, std::string>> pool;
    for (std::size_t k = 0; k < states; ++k)
        pool.push_back({"song " + std::to_string(k), "Music|Play|SongName:s" + std::to_string(k)});
    std::vector<Session> out;
    for (std::size_t k = 0; k < n; ++k) {
        Session s{"c" + std::to_string(k % 5), {}, rng() % 3 ? Outcome::Success : Outcome::Failure};
        const int len = 1 + static_cast<int>(rng() % 4);
        for (int t = 0; t < len; ++t) {
            const auto& [utt, h] = pool[rng() % pool.size()];
            Turn turn{utt, Hypothesis::parse(h), 1000 + 5 * t, TurnKind::User, std::nullopt, false};
            if (t > 0 && s.turns.back().kind != TurnKind::Rewrite && rng() % 2) turn.kind = TurnKind::Rewrite;
            s.turns.push_back(turn);
        }
        out.push_back(s);
    }
    return out;
}

using Table = std::map<std::string, std::vector<std::string>>;

Table resolved_table(const MarkovGraph& g, std::uint64_t support) {
    Table t;
    for (StateId i = kFirstTransient; i < g.size(); ++i)
        for (const auto& c : top_rewrites(g, i, 0, support)) t[g.states().canonical(i)].push_back(g.states().canonical(c.target));
    return t;
}

// Largest gap between dense Phi rows of two graphs over the same hypotheses.
double phi_gap(const MarkovGraph& a, const MarkovGraph& b) {
    double worst = 0.0;
    for (StateId i = kFirstTransient; i < b.size(); ++i) {
        const auto ia = *a.states().find(b.states().canonical(i));
        const auto pa = fixtures::dense_phi_row(a, ia), pb = fixtures::dense_phi_row(b, i);
        for (StateId j = kFirstTransient; j < b.size(); ++j)
            worst = std::max(worst, std::abs(pa[*a.states().find(b.states().canonical(j))] - pb[j]));
    }
    return worst;
}

Verdict alpha_limits() {
    std::mt19937 rng(404);
    std::mt19937_64 rng64(404);
    std::size_t bit_mismatch = 0, table_mismatch = 0, graphs = 0;
    double worst_phi = 0.0;

    for (std::size_t states = 3; states <= 6; ++states) {
        for (int round = 0; round < 10; ++round) {
            // All edges plain: lambda is 1 whatever the triplet weights.
            auto data = fixtures::random_graph(states, rng64, 0.6);
            std::map<EdgeKey, RoleCounts> roles;
            std::map<EdgeKey, EdgeWeights> params;
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (const auto& [e, c] : data.counts) {
                roles[e] = RoleCounts{0, 0, 0, c};
                params[e] = EdgeWeights{u(rng64), u(rng64), u(rng64), AlphaTier::Fixed};
            }
            const MarkovGraph base(data);
            const auto sup = build_superposition(data.states, data.counts, roles, params);
            for (StateId i = 0; i < base.size(); ++i)
                for (StateId j = 0; j < base.size(); ++j) bit_mismatch += sup.probability(i, j) != base.probability(i, j);

            const auto log = random_rewrite_log(rng, states, 30);
            const BuildOptions keep_all{1};
            SelfAwareOptions zero, one;
            zero.build = one.build = keep_all;
            zero.fixed_alpha = 0.0;
            one.fixed_alpha = 1.0;
            const auto disc = build_graph(log, GraphMode::Discounting, keep_all);
            const auto unroll = build_graph(log, GraphMode::Unrolling, keep_all);
            const auto a0 = build_selfaware(log, zero).graph;
            const auto a1 = build_selfaware(log, one).graph;
            for (std::uint64_t s : {0u, 1u, 2u}) {
                table_mismatch += resolved_table(a0, s) != resolved_table(disc, s);
                table_mismatch += resolved_table(a1, s) != resolved_table(unroll, s);
            }
            worst_phi = std::max({worst_phi, phi_gap(a0, disc), phi_gap(a1, unroll)});
            ++graphs;
        }
    }
    return {bit_mismatch == 0 && table_mismatch == 0 && worst_phi <= 1e-12,
            std::to_string(graphs) + " graphs of 3-6 states: plain-edge mismatches " + std::to_string(bit_mismatch) +
                ", table mismatches " + std::to_string(table_mismatch) + ", max dense Phi gap " +
                fmt("%.1e", worst_phi)};
}

// ---------------------------------------------------------------- 5

const std::string kTheme = "Music|PlayMusicIntent|SongName:theme";
const std::string kLaDaDee = "Music|PlayMusicIntent|SongName:la da dee";
const std::string kLady = "Music|PlayMusicIntent|SongName:lady";

SimulationConfig loop_config(GraphMode mode, std::uint64_t seed, std::size_t sessions) {
    SimulationConfig c;
    c.mode = mode;
    c.days = 60;
    c.sessions_per_day = sessions;
    c.seed = seed;
    return c;
}

std::size_t days_with(const SimulationResult& r, const std::string& src, const std::string& dst) {
    std::size_t n = 0;
    for (const auto& d : r.days) {
        auto it = d.table.find(src);
        n += it != d.table.end() && it->second == dst;
    }
    return n;
}

Verdict degeneracy() {
    const auto t0 = Clock::now();
    const std::uint64_t seed = 7;
    const auto t2 = scenario_type2();
    const auto disc = run_loop(t2, loop_config(GraphMode::Discounting, seed, 200));
    const auto aware = run_loop(t2, loop_config(GraphMode::SelfAware, seed, 200));
    const auto disc_flips = count_flips(tables_of(disc), kTheme);
    const auto aware_flips = count_flips(tables_of(aware), kTheme, 11);

    const auto t1 = scenario_type1();
    const auto unroll = run_loop(t1, loop_config(GraphMode::Unrolling, seed, 200));
    const auto aware1 = run_loop(t1, loop_config(GraphMode::SelfAware, seed, 200));
    const auto unroll_days = days_with(unroll, kLaDaDee, kLady);
    const auto aware_days = days_with(aware1, kLaDaDee, kLady);
    const double secs = seconds_since(t0);

    return {disc_flips >= 2 && aware_flips <= 1 && unroll_days > 0 && unroll_days >= 3 * aware_days && secs < 300.0,
            "type II flips: discounting " + std::to_string(disc_flips) + ", self-aware after day 10 " +
                std::to_string(aware_flips) + "; type I days retained: unrolling " + std::to_string(unroll_days) +
                ", self-aware " + std::to_string(aware_days) + ", " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------- 6

Verdict benchmark_superiority() {
    const auto t0 = Clock::now();
    std::size_t auc_wins = 0, defect_wins = 0;
    std::ostringstream per_seed;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto world = benchmark_world(seed);
        double auc[2], defects[2];
        for (int m = 0; m < 2; ++m) {
            const auto r = run_loop(world, loop_config(m ? GraphMode::SelfAware : GraphMode::Discounting, seed, 400));
            auc[m] = r.days.back().pr_auc.value_or(0.0);
            double sum = 0.0;
            const std::size_t tail = std::min<std::size_t>(10, r.days.size());
            for (std::size_t k = r.days.size() - tail; k < r.days.size(); ++k) sum += r.days[k].defect_rate;
            defects[m] = sum / static_cast<double>(tail);
        }
        auc_wins += auc[1] > auc[0];
        defect_wins += defects[1] < defects[0];
        std::fprintf(stderr, "  seed %2llu  PR-AUC %.4f vs %.4f  defects %.4f vs %.4f\n",
                     static_cast<unsigned long long>(seed), auc[1], auc[0], defects[1], defects[0]);
    }
    return {auc_wins >= 18 && defect_wins >= 18,
            "self-aware higher PR-AUC in " + std::to_string(auc_wins) + "/20 seeds, lower defect rate in " +
                std::to_string(defect_wins) + "/20, " + fmt("%.1f s", seconds_since(t0))};
}

// ---------------------------------------------------------------- 7

Verdict templates() {
    std::mt19937 rng(707);
    std::size_t cyclic = 0, stranded = 0, uncovered = 0;
    for (int round = 0; round < 100; ++round) {
        const auto set = fixtures::random_templates(rng);
        const auto dags = build_dags(set);
        std::set<std::string> paths;
        for (const auto& d : dags) {
            cyclic += !d.is_acyclic();
            std::vector<char> on_path(d.nodes.size(), 0);
            for (const auto& p : d.paths()) {
                paths.insert(d.render(p));
                for (auto n : p) on_path[n] = 1;
            }
            stranded += static_cast<std::size_t>(std::count(on_path.begin(), on_path.end(), 0));
        }
        for (const auto& t : set) uncovered += !paths.count(t.display());
    }
    const auto store = build_dag_store(fixtures::playlist_templates());
    const auto abridged = abridge_dialog(fixtures::playlist_dialog(Outcome::Success), store);
    const std::string want = "add escape by enrique iglesias to kacey's playlist";
    const bool fixture = abridged.turns.size() == 2 && abridged.turns[1].utterance == want;
    return {cyclic == 0 && stranded == 0 && uncovered == 0 && fixture,
            "100 sets: cyclic " + std::to_string(cyclic) + ", nodes off every path " + std::to_string(stranded) +
                ", templates not a path " + std::to_string(uncovered) + "; dialog fixture -> \"" +
                (abridged.turns.size() == 2 ? abridged.turns[1].utterance : std::string("?")) + "\""};
}

// ---------------------------------------------------------------- 8

std::vector<std::pair<double, double>> sweep(const std::vector<double>& s, const std::vector<int>& y) {
    std::set<double, std::greater<>> thresholds(s.begin(), s.end());
    const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
    std::vector<std::pair<double, double>> rp;
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] >= t) (y[i] == 1 ? tp : fp) += 1;
        rp.emplace_back(tp / pos, tp / (tp + fp));
    }
    return rp;
}

double sweep_area(const std::vector<double>& s, const std::vector<int>& y) {
    auto rp = sweep(s, y);
    rp.insert(rp.begin(), {0.0, rp.front().second});
    double a = 0;
    for (std::size_t k = 1; k < rp.size(); ++k)
        a += (rp[k].first - rp[k - 1].first) * (rp[k].second + rp[k - 1].second) / 2;
    return a;
}

Verdict metrics() {
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) failed.push_back(what);
    };

    const auto m = partition_metrics({true, true, true, false, false}, {true, true, false, true, false});
    expect(m.tp == 2 && m.fp == 1 && m.fn == 1 && m.tn == 1, "partition counts");
    expect(m.precision == 2.0 / 3.0 && m.recall == 2.0 / 3.0 && m.accuracy == 3.0 / 5.0 && m.f1 == 2.0 / 3.0,
           "partition ratios");
    const auto none = partition_metrics({false, false}, {true, false});
    expect(none.precision == 0.0 && none.recall == 0.0 && none.f1 == 0.0, "partition zero conventions");

    expect(pr_curve({0.9, 0.8, 0.3, 0.1}, {1, 1, -1, -1}).area == 1.0, "perfect PR");
    const auto four = pr_curve({0.9, 0.8, 0.7, 0.6}, {1, -1, 1, -1});
    expect(std::abs(four.area - (0.5 + 0.5 * (0.5 + 2.0 / 3.0) / 2.0)) <= 1e-15, "four-pair PR");
    expect(pr_curve({0.5, 0.5, 0.5, 0.5}, {1, -1, 1, -1}).area == 0.5, "tied PR");
    std::mt19937 rng(808);
    double worst = 0.0;
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 2 + rng() % 40;
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng() % 8) / 8.0;
            y[i] = rng() % 3 == 0 ? 1 : -1;
        }
        y[0] = 1;
        worst = std::max(worst, std::abs(pr_curve(s, y).area - sweep_area(s, y)));
    }
    expect(worst <= 1e-12, "PR vs sweep");

    const RewriteTable a{{"x", "y"}}, b{{"x", "z"}}, empty{};
    expect(reactivity_rate({a, a, a}, {"x"}).rates.at("x") == 0.0, "reactivity steady");
    expect(reactivity_rate({a, b, a, b}, {"x"}).rates.at("x") == 1.0, "reactivity alternating");
    expect(reactivity_rate({a, a, a, b, b}, {"x"}).rates.at("x") == 0.25, "reactivity one change");
    expect(reactivity_rate({a, empty, a}, {"x"}).rates.at("x") == 1.0, "reactivity dropped rewrite");
    const auto hist = reactivity_rate({a, b, b}, {"x", "w"}, 4);
    expect(hist.histogram == std::vector<std::size_t>{1, 0, 1, 0} && hist.mean == 0.25, "reactivity histogram");

    expect(relative_f1_change({0.5, 0.5, 0.5}) == std::vector<double>{0, 0, 0}, "f1 trend flat");
    expect(relative_f1_change({0.4, 0.8})[1] == 1.0, "f1 trend doubling");
    expect(std::abs(relative_f1_change({0.5, 0.6})[1] - 0.2) <= 1e-15, "f1 trend +20%");
    std::vector<Session> log;
    fixtures::append(log, fixtures::repeat(fixtures::chain({"M|P|S:theme", "M|P|S:team"}, Outcome::Success), 6));
    fixtures::append(log, fixtures::repeat(fixtures::chain({"M|P|S:theme"}, Outcome::Failure), 3));
    fixtures::append(log, fixtures::repeat(fixtures::chain({"M|P|S:team"}, Outcome::Success), 4));
    fixtures::append(log, fixtures::repeat(fixtures::chain({"M|P|S:lady"}, Outcome::Success), 4));
    const auto g = build_graph(log, GraphMode::Discounting);
    const std::vector<EvalRecord> set{
        {Hypothesis::parse("M|P|S:theme"), {Hypothesis::parse("M|P|S:team")}, {Hypothesis::parse("M|P|S:lady")}}};
    expect(f1_trend({g, g}, set) == std::vector<double>{0.0, 0.0}, "f1 trend on snapshots");

    std::mt19937_64 r64(809);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 10000;
    std::vector<double> s(n);
    std::vector<int> y(n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = u(r64);
        y[i] = u(r64) < 0.3 ? 1 : -1;
        pos += y[i] == 1;
    }
    const double gap = std::abs(pr_curve(s, y).area - static_cast<double>(pos) / n);
    expect(gap <= 0.02, "prevalence");

    std::string detail = "hand examples " + std::string(failed.empty() ? "all match" : "failed:");
    for (const auto& f : failed) detail += " [" + f + "]";
    return {failed.empty(), detail + ", PR vs sweep " + fmt("%.1e", worst) + ", |area - prevalence| " +
                                fmt("%.4f", gap)};
}

// ---------------------------------------------------------------- 9

Verdict determinism() {
    SimulationConfig c = loop_config(GraphMode::SelfAware, 99, 120);
    c.days = 12;
    c.keep_snapshots = true;
    const auto a = run_loop(scenario_type2(), c);
    const auto b = run_loop(scenario_type2(), c);
    bool simlog = serialize_simlog(a) == serialize_simlog(b);
    bool snapshots = a.snapshots.size() == b.snapshots.size();
    for (std::size_t k = 0; snapshots && k < a.snapshots.size(); ++k)
        snapshots = serialize_graph(a.snapshots[k]) == serialize_graph(b.snapshots[k]);

    std::size_t resolution_mismatch = 0;
    for (const auto& data : a.snapshots) {
        const MarkovGraph live(data);
        const MarkovGraph loaded(parse_graph(serialize_graph(data)));
        for (StateId i = kFirstTransient; i < live.size(); ++i) {
            resolution_mismatch += top_rewrites(live, i, 0, 0) != top_rewrites(loaded, i, 0, 0);
            resolution_mismatch += phi_row(live, i) != phi_row(loaded, i);
        }
    }

    // Same through the command line.
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mqr_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream out, err;
    auto p = [&](const char* name) { return (dir / name).string(); };
    bool cli = true;
    for (const char* tag : {"1", "2"}) {
        cli = cli && dispatch({"simulate", "--seed", "99", "--scenario", "type1", "--mode", "selfaware", "--days", "8",
                               "--sessions", "100", "--out", p(tag[0] == '1' ? "a.log" : "b.log"), "--snapshots",
                               p(tag[0] == '1' ? "snap_a" : "snap_b")},
                              out, err) == kExitOk;
    }
    cli = cli && io::read_file(p("a.log")) == io::read_file(p("b.log")) &&
          io::read_file(p("snap_a/day_007.graph")) == io::read_file(p("snap_b/day_007.graph"));
    fs::remove_all(dir);

    return {simlog && snapshots && resolution_mismatch == 0 && cli,
            std::string("simlogs ") + (simlog ? "identical" : "differ") + ", snapshots " +
                (snapshots ? "identical" : "differ") + ", reload mismatches " + std::to_string(resolution_mismatch) +
                ", CLI reruns " + (cli ? "identical" : "differ")};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app("Acceptance criteria");
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "fundamental matrix", fundamental_matrix},
        {2, "beta superiority", beta_superiority_check},
        {3, "wilson gate", wilson_gate},
        {4, "alpha limits", alpha_limits},
        {5, "degeneracy reproduction", degeneracy},
        {6, "self-aware superiority", benchmark_superiority},
        {7, "template pipeline", templates},
        {8, "metric arithmetic", metrics},
        {9, "determinism and persistence", determinism},
    };
    int failures = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failures += !v.pass;
        std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << "AC" << c.id << ' ' << c.name << ": " << v.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
