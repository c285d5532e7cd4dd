#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "builders.hpp"
#include "mqr/alpha.hpp"
#include "mqr/error.hpp"
#include "mqr/meta_state.hpp"
#include "mqr/resolve.hpp"
#include "mqr/stats.hpp"
#include "oracles.hpp"

using namespace mqr;
using fixtures::T;

namespace {

constexpr const char* kU = "Music|Play|SongName:theme";
constexpr const char* kR = "Music|Play|SongName:team";
constexpr const char* kJ = "Music|Next";

StateId id(const StateSpace& s, const char* h) { return *s.find(std::string(h)); }

// Independent reference: textbook Wilson bounds with z found by bisection on
// the normal tail.
Interval reference_wilson(double k, double n, double conf) {
    const double tail = (1.0 - conf) / 2.0;
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail ? lo : hi) = mid;
    }
    const double z = 0.5 * (lo + hi);
    const double p = k / n;
    const double a = p + z * z / (2 * n);
    const double b = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    const double d = 1 + z * z / n;
    return {(a - b) / d, (a + b) / d};
}

// Plain DP edit distance with substitution cost 2.
double dp_ratio(const std::string& a, const std::string& b) {
    std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2)});
    const double total = static_cast<double>(a.size() + b.size());
    return (total - d[a.size()][b.size()]) / total;
}

SelfAwareOptions fixed(double alpha) {
    SelfAwareOptions o;
    o.build.min_state_support = 1;
    o.fixed_alpha = alpha;
    return o;
}

}  // namespace

TEST(Wilson, NoEvidence) {
    const auto i = wilson_interval(0, 0);
    EXPECT_EQ(i.lo, 0.0);
    EXPECT_EQ(i.hi, 1.0);
    EXPECT_EQ(i.width(), 1.0);
}

TEST(Wilson, AllSuccessesReachOne) {
    for (std::uint64_t n : {1u, 3u, 17u, 1000u}) EXPECT_EQ(wilson_interval(n, n).hi, 1.0);
    EXPECT_EQ(wilson_interval(0, 9).lo, 0.0);
}

TEST(Wilson, MatchesReferenceFormula) {
    const auto got = wilson_interval(5, 10, 0.89);
    const auto ref = reference_wilson(5, 10, 0.89);
    EXPECT_NEAR(got.lo, ref.lo, 1e-12);
    EXPECT_NEAR(got.hi, ref.hi, 1e-12);
    for (std::uint64_t k = 0; k <= 40; k += 7) {
        const auto g = wilson_interval(k, 40, 0.95);
        const auto r = reference_wilson(static_cast<double>(k), 40, 0.95);
        EXPECT_NEAR(g.lo, std::max(0.0, r.lo), 1e-12);
        EXPECT_NEAR(g.hi, std::min(1.0, r.hi), 1e-12);
    }
}

TEST(Wilson, Errors) {
    EXPECT_THROW(wilson_interval(3, 2), ArgumentError);
    EXPECT_THROW(wilson_interval(1, 2, 1.0), ArgumentError);
}

TEST(Wilson, WidthNonIncreasingInN) {
    for (std::uint64_t ratio_num : {0u, 1u, 2u, 3u, 4u}) {
        double prev = 2.0;
        for (std::uint64_t m = 1; m <= 60; ++m) {
            const double w = wilson_interval(ratio_num * m, 4 * m).width();
            EXPECT_LE(w, prev + 1e-15);
            prev = w;
        }
    }
}

TEST(BetaSuperiority, UniformSymmetry) { EXPECT_NEAR(beta_superiority({1, 1}, {1, 1}), 0.5, 1e-10); }

TEST(BetaSuperiority, AnalyticTwoThirds) {
    // X ~ Beta(1,2), W ~ Beta(1,1): 1 - integral of 2(1-x) * x = 2/3.
    EXPECT_NEAR(beta_superiority({1, 2}, {1, 1}), 2.0 / 3.0, 1e-10);
}

TEST(BetaSuperiority, MatchesMonteCarlo) {
    std::mt19937_64 rng(12345);
    std::gamma_distribution<double> g50(50.0, 1.0), g10(10.0, 1.0);
    const int draws = 1000000;
    int wins = 0;
    auto beta_draw = [&](std::gamma_distribution<double>& ga, std::gamma_distribution<double>& gb) {
        const double x = ga(rng);
        return x / (x + gb(rng));
    };
    for (int k = 0; k < draws; ++k) {
        const double w = beta_draw(g50, g10);
        const double x = beta_draw(g10, g50);
        wins += w > x;
    }
    const double p = static_cast<double>(wins) / draws;
    const double se = std::sqrt(std::max(p * (1 - p), 1.0 / draws) / draws);
    const double got = beta_superiority({10, 50}, {50, 10});
    EXPECT_NEAR(got, p, 3 * se + 1e-12);

    // A closer pair where the estimate is far from the bounds.
    std::gamma_distribution<double> a8(8.0, 1.0), b6(6.0, 1.0), a6(6.0, 1.0), b8(8.0, 1.0);
    wins = 0;
    for (int k = 0; k < draws; ++k) wins += beta_draw(a8, b6) > beta_draw(a6, b8);
    const double q = static_cast<double>(wins) / draws;
    EXPECT_NEAR(beta_superiority({6, 8}, {8, 6}), q, 3 * std::sqrt(q * (1 - q) / draws));
}

TEST(BetaSuperiority, ComplementProperty) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.2, 400.0);
    for (int k = 0; k < 60; ++k) {
        const BetaEvidence x{u(rng), u(rng)}, w{u(rng), u(rng)};
        EXPECT_NEAR(beta_superiority(x, w) + beta_superiority(w, x), 1.0, 2 * kDefaultQuadEps);
    }
}

TEST(BetaSuperiority, ConcentratedPosteriors) {
    EXPECT_NEAR(beta_superiority(BetaEvidence::from_counts(5, 995), BetaEvidence::from_counts(995, 5)), 1.0, 1e-9);
    EXPECT_NEAR(beta_superiority(BetaEvidence::from_counts(995, 5), BetaEvidence::from_counts(5, 995)), 0.0, 1e-9);
    EXPECT_NEAR(beta_superiority({3000, 3000}, {3000, 3000}), 0.5, 1e-8);
}

TEST(BetaSuperiority, ShapesBelowOne) {
    // Reference values from 30-digit adaptive quadrature of the same integral.
    EXPECT_NEAR(beta_superiority({0.5, 0.5}, {0.5, 0.5}), 0.5, 1e-10);
    EXPECT_NEAR(beta_superiority({0.7, 3}, {2, 0.6}), 0.960809793896500, 1e-9);
    EXPECT_NEAR(beta_superiority({0.1, 0.3}, {0.5, 0.2}), 0.832381678835280, 1e-9);
    EXPECT_NEAR(beta_superiority({0.05, 2}, {3, 0.05}), 0.999837645587598, 1e-9);
}

TEST(BetaSuperiority, RejectsNonPositive) {
    EXPECT_THROW(beta_superiority({0, 1}, {1, 1}), ArgumentError);
    EXPECT_THROW(beta_superiority({1, 1}, {1, -2}), ArgumentError);
}

TEST(AlphaEntity, MaxAbsoluteDeviation) {
    EXPECT_EQ(alpha_entity({0.5}), 0.0);
    EXPECT_NEAR(alpha_entity({0.9, 0.4}), 0.4, 1e-15);
    EXPECT_NEAR(alpha_entity({0.1}), 0.4, 1e-15);
    EXPECT_THROW(alpha_entity({}), ArgumentError);
    EXPECT_THROW(alpha_entity({1.2}), ArgumentError);
}

TEST(SelectAlpha, Hierarchy) {
    const TierEvidence strong{{10, 100}, {90, 100}};
    const TierEvidence weak{{0, 1}, {1, 1}};
    const std::vector<double> entity{0.8};

    auto c = select_alpha(strong, weak, entity);
    EXPECT_EQ(c.tier, AlphaTier::Customer);
    EXPECT_NEAR(c.alpha, beta_superiority({11, 91}, {91, 11}), 1e-12);

    auto g = select_alpha(weak, strong, entity);
    EXPECT_EQ(g.tier, AlphaTier::Global);

    auto e = select_alpha(weak, weak, entity);
    EXPECT_EQ(e.tier, AlphaTier::Entity);
    EXPECT_NEAR(e.alpha, 0.3, 1e-15);

    AlphaGate rescale;
    rescale.rescale_entity = true;
    EXPECT_NEAR(select_alpha(std::nullopt, std::nullopt, entity, rescale).alpha, 0.6, 1e-15);
    EXPECT_THROW(select_alpha(weak, weak, std::nullopt), ConfigError);
}

TEST(SelectAlpha, GateUsesBothPopulations) {
    // Plenty of rewritten evidence but a single non-rewritten trial.
    EXPECT_FALSE(passes_gate({{1, 1}, {50, 100}}, AlphaGate{}));
    EXPECT_TRUE(passes_gate({{5, 10}, {50, 100}}, AlphaGate{}));
}

TEST(Relevance, IdenticalAndDisjoint) {
    EXPECT_DOUBLE_EQ(relevance_rho("play team", "play team"), 1.0);
    EXPECT_DOUBLE_EQ(relevance_rho("aaa", "bbb"), 0.0);
}

TEST(Relevance, MatchesDpOracle) {
    const double grapheme = dp_ratio("play team", "play theme");
    const double phoneme = dp_ratio(consonant_skeleton("play team"), consonant_skeleton("play theme"));
    EXPECT_DOUBLE_EQ(grapheme, 16.0 / 19.0);
    EXPECT_NEAR(relevance_rho("play team", "play theme"), 0.5 * (grapheme + phoneme), 1e-15);
}

TEST(Relevance, ConsonantSkeleton) {
    EXPECT_EQ(consonant_skeleton("play theme"), "P4 T5");
    EXPECT_EQ(consonant_skeleton("play team"), "P4 T5");
    EXPECT_EQ(consonant_skeleton("Robert"), "R163");
    EXPECT_EQ(consonant_skeleton("Ashcraft"), "A2613");
    EXPECT_EQ(consonant_skeleton("la da dee"), "L D D");
    EXPECT_EQ(consonant_skeleton("track 22"), "T62 22");
}

TEST(Relevance, PluggableKey) {
    const PhoneticKey constant = [](std::string_view) { return std::string("k"); };
    EXPECT_DOUBLE_EQ(relevance_rho("aaa", "bbb", constant), 0.5);
}

TEST(MstWeights, Limits) {
    auto one = mst_weights(1.0, 0.3);
    EXPECT_EQ(one.beta, 1.0);
    EXPECT_EQ(one.gamma, 0.0);
    auto zero = mst_weights(0.0, 0.5);
    EXPECT_EQ(zero.beta, 0.0);
    EXPECT_EQ(zero.gamma, 1.0);
    auto mid = mst_weights(0.8, 0.5);
    EXPECT_DOUBLE_EQ(mid.beta, std::sqrt(0.8));
    EXPECT_DOUBLE_EQ(mid.gamma, 1.0 - 0.8 * std::sqrt(0.8));
    EXPECT_EQ(mst_weights(0.0, 0.0).beta, 1.0);
    EXPECT_THROW(mst_weights(1.5, 0.5), ArgumentError);
}

TEST(DetectMsts, SingleTriplet) {
    auto s = fixtures::session({{"play theme", kU}, {"play team", kR, TurnKind::Rewrite}, {"next", kJ}},
                              Outcome::Success);
    const auto det = detect_msts({s});
    const auto& st = det.graph.states;
    ASSERT_EQ(det.occurrences.size(), 1u);
    EXPECT_EQ(det.ratios({id(st, kU), id(st, kR)}).alpha, 1.0);
    EXPECT_EQ(det.ratios({id(st, kR), id(st, kJ)}).beta, 1.0);
    EXPECT_EQ(det.ratios({id(st, kU), id(st, kJ)}).gamma, 1.0);
    EXPECT_EQ(det.ratios({id(st, kJ), kSuccessState}).eps, 1.0);
    EXPECT_EQ(det.graph.counts.at({id(st, kU), id(st, kJ)}), 1u);
}

TEST(DetectMsts, MixedRoleRatio) {
    auto rw = fixtures::session({{"play theme", kU}, {"play team", kR, TurnKind::Rewrite}}, Outcome::Success);
    auto plain = fixtures::session({{"play theme", kU}, {"play team", kR}}, Outcome::Success);
    const auto det = detect_msts({rw, plain});
    const auto r = det.ratios({id(det.graph.states, kU), id(det.graph.states, kR)});
    EXPECT_EQ(r.alpha, 0.5);
    EXPECT_EQ(r.eps, 0.5);
}

TEST(DetectMsts, RewriteAbsorbedDirectly) {
    auto s = fixtures::session({{"play theme", kU}, {"play team", kR, TurnKind::Rewrite}}, Outcome::Failure);
    const auto det = detect_msts({s});
    const auto& st = det.graph.states;
    ASSERT_EQ(det.occurrences.size(), 1u);
    EXPECT_EQ(det.occurrences[0].successor, kFailureState);
    EXPECT_FALSE(det.occurrences[0].successor_turn.has_value());
    EXPECT_EQ(det.ratios({id(st, kR), kFailureState}).beta, 1.0);
    EXPECT_EQ(det.ratios({id(st, kU), kFailureState}).gamma, 1.0);
}

TEST(DetectMsts, Errors) {
    auto orphan = fixtures::session({{"play team", kR, TurnKind::Rewrite}}, Outcome::Success);
    EXPECT_THROW(detect_msts({orphan}), DataError);
    EXPECT_THROW(detect_msts({}), EmptyGraphError);
}

TEST(DetectMsts, RatiosSumToOne) {
    std::mt19937 rng(5);
    const std::vector<std::string> hs{"D|A", "D|B", "D|C", "D|E"};
    std::vector<Session> sessions;
    for (int k = 0; k < 200; ++k) {
        Session s{"c" + std::to_string(k % 7), {}, rng() % 2 ? Outcome::Success : Outcome::Failure};
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int t = 0; t < n; ++t) {
            Turn turn;
            turn.hypothesis = Hypothesis::parse(hs[rng() % hs.size()]);
            turn.utterance = turn.hypothesis.intent();
            turn.kind = (t > 0 && s.turns.back().kind != TurnKind::Rewrite && rng() % 3 == 0) ? TurnKind::Rewrite
                                                                                              : TurnKind::User;
            s.turns.push_back(turn);
        }
        sessions.push_back(s);
    }
    const auto det = detect_msts(sessions);
    for (const auto& [edge, rc] : det.roles) {
        const auto r = rc.ratios();
        EXPECT_NEAR(r.alpha + r.beta + r.gamma + r.eps, 1.0, 1e-12);
        EXPECT_EQ(rc.total(), det.graph.counts.at(edge));
    }
}

TEST(Superposition, AllPlainEdgesEqualBaseline) {
    std::vector<Session> s{fixtures::chain({"D|A", "D|B"}, Outcome::Success),
                           fixtures::chain({"D|A"}, Outcome::Failure),
                           fixtures::chain({"D|B", "D|A"}, Outcome::Success)};
    const auto base = build_graph(s, GraphMode::Unrolling, BuildOptions{1});
    const auto aware = build_selfaware(s, fixed(0.5)).graph;
    for (StateId i = kFirstTransient; i < base.size(); ++i)
        for (StateId j = 0; j < base.size(); ++j) EXPECT_EQ(aware.probability(i, j), base.probability(i, j));
}

TEST(Superposition, SuppressedDiscountingEdge) {
    StateSpace st(fixtures::numbered_states(3));
    std::map<EdgeKey, std::uint64_t> counts{{{2, 3}, 2}, {{2, 4}, 2}, {{3, 0}, 1}, {{4, 0}, 1}};
    std::map<EdgeKey, RoleCounts> roles{{{2, 3}, {0, 0, 2, 0}}, {{2, 4}, {0, 0, 0, 2}}};
    std::map<EdgeKey, EdgeWeights> params{{{2, 3}, {1.0, 1.0, 0.0, AlphaTier::Fixed}}};
    const auto g = build_superposition(st, counts, roles, params);
    EXPECT_EQ(g.probability(2, 3), 0.0);
    EXPECT_EQ(g.probability(2, 4), 1.0);
}

TEST(Superposition, HandComputedThreeStateTriplet) {
    // u -rw-> r -> j -> +, u -> j -> +, u -> -. With alpha 0.7 and rho 1:
    // beta 0.7, gamma 0.51. Weights out of u: r 0.7, j 1 + 0.51, - 1.
    std::vector<Session> s{
        fixtures::session({{"play theme", kU}, {"play team", kR, TurnKind::Rewrite}, {"play team", kJ}},
                         Outcome::Success),
        fixtures::session({{"play theme", kU}, {"next", kJ}}, Outcome::Success),
        fixtures::session({{"play theme", kU}}, Outcome::Failure)};
    const auto built = build_selfaware(s, fixed(0.7));
    const auto& g = built.graph;
    const auto u = id(g.states(), kU), r = id(g.states(), kR), j = id(g.states(), kJ);
    ASSERT_EQ(built.triplets.size(), 1u);
    EXPECT_EQ(built.triplets[0].rho, 1.0);
    const double total = 0.7 + 1.51 + 1.0;
    EXPECT_NEAR(g.probability(u, r), 0.7 / total, 1e-15);
    EXPECT_NEAR(g.probability(u, j), 1.51 / total, 1e-15);
    EXPECT_NEAR(g.failure_probability(u), 1.0 / total, 1e-15);
    EXPECT_NEAR(g.probability(r, j), 1.0, 1e-15);
    EXPECT_NEAR(g.success_probability(j), 1.0, 1e-15);

    // Column-stochastic form of the same matrix: (lambda o C)^T D^-1.
    Eigen::MatrixXd lc = Eigen::MatrixXd::Zero(5, 5);
    for (const auto& [e, c] : g.data().counts) lc(e.src, e.dst) = g.weight(e.src, e.dst);
    Eigen::MatrixXd col = lc.transpose();
    for (Eigen::Index k = 0; k < 5; ++k) {
        const double d = lc.row(k).sum();
        if (d > 0) col.col(k) /= d;
    }
    for (StateId a = kFirstTransient; a < 5; ++a)
        for (StateId b = 0; b < 5; ++b) EXPECT_NEAR(col(b, a), g.probability(a, b), 1e-15);
}

namespace {

std::vector<Session> random_rewrite_log(std::mt19937& rng, std::size_t n) {
    const std::vector<std::pair<std::string, std::string>> hs{
        {"play theme", "Music|Play|SongName:theme"}, {"play team", "Music|Play|SongName:team"},
        {"play lady", "Music|Play|SongName:lady"},   {"play la da dee", "Music|Play|SongName:la da dee"},
        {"next", "Music|Next"},                      {"stop", "Global|Stop"}};
    std::vector<Session> out;
    for (std::size_t k = 0; k < n; ++k) {
        Session s{"c" + std::to_string(k % 5), {}, rng() % 3 ? Outcome::Success : Outcome::Failure};
        const int len = 1 + static_cast<int>(rng() % 4);
        for (int t = 0; t < len; ++t) {
            const auto& [utt, h] = hs[rng() % hs.size()];
            Turn turn{utt, Hypothesis::parse(h), 1000 + 5 * t, TurnKind::User, std::nullopt, false};
            if (t > 0 && s.turns.back().kind != TurnKind::Rewrite && rng() % 2) turn.kind = TurnKind::Rewrite;
            s.turns.push_back(turn);
        }
        out.push_back(s);
    }
    return out;
}

using Table = std::map<std::string, std::vector<std::string>>;

Table rewrite_table(const MarkovGraph& g, const std::vector<std::string>& sources, std::uint64_t min_support) {
    Table t;
    for (const auto& src : sources) {
        auto i = g.states().find(src);
        if (!i) continue;
        for (const auto& c : top_rewrites(g, *i, 0, min_support)) t[src].push_back(g.states().canonical(c.target));
    }
    return t;
}

std::vector<std::string> user_sources(const std::vector<Session>& sessions) {
    std::set<std::string> out;
    for (const auto& s : sessions)
        for (const auto& t : s.turns)
            if (t.kind != TurnKind::Rewrite) out.insert(t.hypothesis.format());
    return {out.begin(), out.end()};
}

}  // namespace

TEST(Superposition, AlphaLimitsMatchDeterministicModes) {
    std::mt19937 rng(123);
    for (int round = 0; round < 25; ++round) {
        const auto log = random_rewrite_log(rng, 40);
        const auto sources = user_sources(log);
        const BuildOptions keep_all{1};
        const auto disc = build_graph(log, GraphMode::Discounting, keep_all);
        const auto unroll = build_graph(log, GraphMode::Unrolling, keep_all);
        const auto a0 = build_selfaware(log, fixed(0.0)).graph;
        const auto a1 = build_selfaware(log, fixed(1.0)).graph;
        for (std::uint64_t support : {0u, 1u, 2u}) {
            EXPECT_EQ(rewrite_table(a0, sources, support), rewrite_table(disc, sources, support));
            EXPECT_EQ(rewrite_table(a1, sources, support), rewrite_table(unroll, sources, support));
        }
        for (const auto& src : sources) {
            auto i0 = *a0.states().find(src), id_ = *disc.states().find(src);
            const auto p0 = phi_row(a0, i0), pd = phi_row(disc, id_);
            for (StateId j = kFirstTransient; j < disc.size(); ++j)
                EXPECT_NEAR(p0[*a0.states().find(disc.states().canonical(j))], pd[j], 1e-12);
        }
    }
}

TEST(Superposition, RowsStochasticAndLambdaBounded) {
    std::mt19937 rng(77);
    SelfAwareOptions opts;
    opts.build.min_state_support = 1;
    const auto log = random_rewrite_log(rng, 300);
    const auto built = build_selfaware(log, opts);
    const auto& g = built.graph;
    for (StateId i = kFirstTransient; i < g.size(); ++i) {
        double sum = g.success_probability(i) + g.failure_probability(i);
        for (const auto& e : g.row(i)) sum += e.p;
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    for (const auto& [edge, p] : g.data().meta) {
        EXPECT_GE(p.lambda(), 0.0);
        EXPECT_LE(p.lambda(), 1.0 + 1e-12);
        EXPECT_NEAR(p.j_alpha + p.j_beta + p.j_gamma + p.j_eps, 1.0, 1e-12);
    }
    for (const auto& t : built.triplets) {
        EXPECT_EQ(t.gamma, 1.0 - t.alpha * t.beta);
        EXPECT_NE(t.tier, AlphaTier::None);
    }
}

TEST(SelfAware, AlphaFollowsPopulations) {
    // theme alone almost always fails, the team rewrite succeeds.
    std::vector<Session> log;
    for (int k = 0; k < 40; ++k) {
        const auto cust = "c" + std::to_string(k);
        auto plain =
            fixtures::session({{"play theme", kU}}, k % 10 == 0 ? Outcome::Success : Outcome::Failure, cust);
        plain.turns[0].iq = k % 10 == 0 ? 1.0 : 0.0;
        log.push_back(plain);
        auto rw =
            fixtures::session({{"play theme", kU}, {"play team", kR, TurnKind::Rewrite}}, Outcome::Success, cust);
        rw.turns[1].iq = 1.0;
        log.push_back(rw);
    }
    SelfAwareOptions opts;
    const auto built = build_selfaware(log, opts);
    ASSERT_FALSE(built.triplets.empty());
    EXPECT_EQ(built.triplets[0].tier, AlphaTier::Global);
    EXPECT_GT(built.triplets[0].alpha, 0.999);

    for (auto& s : log)
        if (s.turns.size() == 2) s.turns[1].iq = 0.0;
    const auto bad = build_selfaware(log, opts);
    EXPECT_LT(bad.triplets[0].alpha, 0.2);
}

TEST(EntityKeys, Categories) {
    const auto k = entity_change_keys(Hypothesis::parse("Music|Play|SongName:a|Device:x"),
                                      Hypothesis::parse("Music|Play|SongName:b|ArtistName:c"));
    EXPECT_EQ(k, (std::vector<std::string>{"ArtistName:added", "Device:removed", "SongName:changed"}));
    EXPECT_EQ(entity_change_keys(Hypothesis::parse("A|B"), Hypothesis::parse("C|D")),
              (std::vector<std::string>{"@domain:changed", "@intent:changed"}));
    EXPECT_EQ(entity_change_keys(Hypothesis::parse("A|B"), Hypothesis::parse("A|B")),
              (std::vector<std::string>{"@none:unchanged"}));
}
