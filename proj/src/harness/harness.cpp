#include "mqr/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "mqr/error.hpp"
#include "mqr/eval_io.hpp"
#include "mqr/graph_io.hpp"
#include "mqr/io.hpp"
#include "mqr/meta_state.hpp"
#include "mqr/resolve.hpp"
#include "mqr/session_io.hpp"
#include "mqr/simulator.hpp"
#include "mqr/template_io.hpp"
#include "mqr/text.hpp"

namespace mqr {

namespace {

const std::vector<std::string> kModes = {"baseline", "discounting", "unrolling", "selfaware"};

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& contents, std::ostream& out) {
    if (path.empty())
        out << contents;
    else
        io::write_file_atomic(path, contents);
}

InterjectionLexicon lexicon_of(const RunConfig& c) {
    return c.lexicon.empty() ? InterjectionLexicon::english() : InterjectionLexicon::load(c.lexicon);
}

SolverOptions solver_of(const RunConfig& c) {
    SolverOptions s;
    s.eps = c.eps;
    return s;
}

AlphaGate gate_of(const RunConfig& c) {
    AlphaGate g;
    g.eta = c.eta;
    g.confidence = c.confidence;
    return g;
}

void run_ingest(const RunConfig& c) {
    const auto lexicon = lexicon_of(c);
    const HeuristicScorer heuristic(lexicon);
    const AnnotatedScorer annotated;
    const IqScorer& scorer = c.scorer == "annotated" ? static_cast<const IqScorer&>(annotated) : heuristic;
    auto sessions = segment_sessions(read_log_file(c.input), c.max_gap);
    for (auto& s : sessions) s = assign_outcome(std::move(s), scorer, c.iq_threshold, lexicon);
    write_sessions_file(c.output, sessions);
}

void run_abridge(const RunConfig& c) {
    const auto store = build_dag_store(read_templates_file(c.templates), c.template_support);
    AbridgeOptions options;
    options.language = c.language;
    options.lexicon = lexicon_of(c);
    options.articles = c.articles.empty() ? ArticleRules::builtin(c.language) : ArticleRules::load(c.articles);
    auto sessions = read_sessions_file(c.input);
    for (auto& s : sessions) s = abridge_session(s, store, options);
    write_sessions_file(c.output, sessions);
}

void run_train(const RunConfig& c) {
    const auto sessions = read_sessions_file(c.input);
    const HeuristicScorer heuristic(lexicon_of(c));
    const AnnotatedScorer annotated;
    SelfAwareOptions options;
    options.build.min_state_support = c.min_state_support;
    options.gate = gate_of(c);
    options.iq_threshold = c.iq_threshold;
    options.scorer = c.scorer == "annotated" ? static_cast<const IqScorer*>(&annotated) : &heuristic;
    const auto graph = build_graph_for_mode(sessions, parse_graph_mode(c.mode), options);
    write_graph_file(c.output, graph.data());
}

void run_resolve(const RunConfig& c, std::ostream& out) {
    const MarkovGraph graph(read_graph_file(c.graph));
    const auto source = Hypothesis::parse(c.hypothesis);
    const auto id = graph.states().find(source);
    if (!id || !graph.is_transient(*id)) throw LookupError("hypothesis not in graph: " + source.format());
    std::string text = "rank\tsource\ttarget\tscore\n";
    const auto ranked = top_rewrites(graph, *id, c.k, c.min_support, solver_of(c));
    for (std::size_t r = 0; r < ranked.size(); ++r)
        text += std::to_string(r + 1) + '\t' + source.format() + '\t' +
                graph.states().hypothesis(ranked[r].target).format() + '\t' + io::format_double(ranked[r].score) +
                '\n';
    emit(c.output, text, out);
}

WorldModel world_of(const RunConfig& c) {
    if (c.scenario == "type1") return scenario_type1();
    if (c.scenario == "type2") return scenario_type2();
    return benchmark_world(*c.seed, c.intents);
}

void run_simulate(const RunConfig& c, std::ostream& out) {
    const auto world = world_of(c);
    SimulationConfig sc;
    sc.mode = parse_graph_mode(c.mode);
    sc.days = c.days;
    sc.sessions_per_day = c.sessions;
    sc.seed = *c.seed;
    sc.rewrite_support = c.min_support;
    sc.build.min_state_support = c.min_state_support;
    sc.gate = gate_of(c);
    sc.iq_threshold = c.iq_threshold;
    sc.solver = solver_of(c);
    sc.keep_snapshots = !c.snapshots.empty();
    const auto result = run_loop(world, sc);

    emit(c.output, serialize_simlog(result), out);
    if (!c.csv.empty()) io::write_file_atomic(c.csv, simlog_csv(result));
    if (!c.evalset_out.empty()) write_evalset_file(c.evalset_out, world.eval_set());
    if (!c.snapshots.empty()) {
        std::filesystem::create_directories(c.snapshots);
        for (std::size_t d = 0; d < result.snapshots.size(); ++d) {
            char name[32];
            std::snprintf(name, sizeof name, "day_%03zu.graph", d);
            write_graph_file((std::filesystem::path(c.snapshots) / name).string(), result.snapshots[d]);
        }
    }
}

void run_evaluate(const RunConfig& c, std::ostream& out) {
    const MarkovGraph graph(read_graph_file(c.graph));
    const auto summary = evaluate(graph, read_evalset_file(c.evalset), solver_of(c));
    emit(c.output, summary_json(summary), out);
    if (!c.curve.empty()) {
        if (!summary.curve) throw UndefinedMetricError("no positive pairs; PR curve undefined");
        io::write_file_atomic(c.curve, curve_csv(*summary.curve));
    }
}

void add_solver_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--eps", c.eps, "Solver residual tolerance")->check(CLI::PositiveNumber);
}

void add_gate_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--eta", c.eta, "Wilson lower-bound threshold")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--confidence", c.confidence, "Wilson interval confidence")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--iq-threshold", c.iq_threshold, "IQ success threshold")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--min-state-support", c.min_state_support, "Prune states seen fewer times");
}

void build_app(CLI::App& app, RunConfig& c) {
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", [] {
        std::string v = "mqr formats:";
        for (auto f : supported_formats()) v += ' ' + std::string(f);
        return v;
    });
    app.add_option("--config", "Flat key=value file; flags override it");

    auto* ingest = app.add_subcommand("ingest", "Segment a turn log into scored sessions");
    ingest->add_option("--log", c.input, "Turn log")->required();
    ingest->add_option("--out", c.output, "Sessions file")->required();
    ingest->add_option("--max-gap", c.max_gap, "Seconds of silence that end a session")->check(CLI::NonNegativeNumber);
    ingest->add_option("--iq-threshold", c.iq_threshold)->check(CLI::Range(0.0, 1.0));
    ingest->add_option("--scorer", c.scorer)->check(CLI::IsMember({"annotated", "heuristic"}));
    ingest->add_option("--lexicon", c.lexicon, "Interjection list")->check(CLI::ExistingFile);

    auto* abridge = app.add_subcommand("abridge", "Compress clarification dialogs");
    abridge->add_option("--sessions", c.input)->required();
    abridge->add_option("--templates", c.templates)->required();
    abridge->add_option("--out", c.output)->required();
    abridge->add_option("--language", c.language);
    abridge->add_option("--template-support", c.template_support);
    abridge->add_option("--lexicon", c.lexicon)->check(CLI::ExistingFile);
    abridge->add_option("--articles", c.articles)->check(CLI::ExistingFile);

    auto* train = app.add_subcommand("train", "Build a graph snapshot from sessions");
    train->add_option("--sessions", c.input)->required();
    train->add_option("--out", c.output)->required();
    train->add_option("--mode", c.mode)->check(CLI::IsMember(kModes));
    train->add_option("--scorer", c.scorer)->check(CLI::IsMember({"annotated", "heuristic"}));
    train->add_option("--lexicon", c.lexicon)->check(CLI::ExistingFile);
    add_gate_options(train, c);

    auto* resolve = app.add_subcommand("resolve", "Rank rewrites of one hypothesis");
    resolve->add_option("--graph", c.graph)->required();
    resolve->add_option("--hypothesis", c.hypothesis, "Domain|Intent|Slot:value...")->required();
    resolve->add_option("--k", c.k, "Rewrites to list, 0 for all");
    resolve->add_option("--min-support", c.min_support);
    resolve->add_option("--out", c.output);
    add_solver_options(resolve, c);

    auto* simulate = app.add_subcommand("simulate", "Run the deployment feedback loop");
    simulate->add_option("--seed", c.seed)->required();
    simulate->add_option("--scenario", c.scenario)->check(CLI::IsMember({"type1", "type2", "benchmark"}));
    simulate->add_option("--mode", c.mode)->check(CLI::IsMember(kModes));
    simulate->add_option("--days", c.days)->check(CLI::PositiveNumber);
    simulate->add_option("--sessions", c.sessions, "Sessions per day")->check(CLI::PositiveNumber);
    simulate->add_option("--intents", c.intents, "Benchmark intents")->check(CLI::PositiveNumber);
    simulate->add_option("--min-support", c.min_support, "Support of a deployed rewrite");
    simulate->add_option("--out", c.output, "Simlog");
    simulate->add_option("--csv", c.csv);
    simulate->add_option("--snapshots", c.snapshots, "Directory for daily graphs");
    simulate->add_option("--evalset-out", c.evalset_out);
    add_gate_options(simulate, c);
    add_solver_options(simulate, c);

    auto* eval = app.add_subcommand("evaluate", "Score a graph against an evaluation set");
    eval->add_option("--graph", c.graph)->required();
    eval->add_option("--evalset", c.evalset)->required();
    eval->add_option("--out", c.output, "Summary JSON");
    eval->add_option("--curve", c.curve, "PR curve CSV");
    add_solver_options(eval, c);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Appends the config entries of the chosen subcommand that are not already
// given as flags.
std::vector<std::string> merge_config(std::vector<std::string> args, CLI::App& app) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    CLI::App* sub = nullptr;
    for (const auto& a : args)
        if (auto* s = app.get_subcommand_no_throw(a)) {
            sub = s;
            break;
        }
    if (sub == nullptr) return args;
    for (const auto& [key, value] : parse_config(io::read_file(path))) {
        const std::string flag = "--" + key;
        if (sub->get_option_no_throw(flag) == nullptr)
            throw ConfigError(path + ": unknown key '" + key + "' for " + sub->get_name());
        if (!has_flag(args, flag)) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config(std::string_view contents) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto lines = text::split(contents, '\n');
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = text::trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(i + 1) + ": missing '='");
        auto key = text::trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(i + 1) + ": empty key");
        out.emplace_back(std::move(key), text::trim(line.substr(eq + 1)));
    }
    return out;
}

std::vector<std::string_view> supported_formats() {
    return {kSessionsHeader, kGraphHeader, kTemplatesHeader, kDagsHeader, kEvalSetHeader, kSimlogHeader};
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app("Markov-chain query rewriting", "mqr");
    build_app(app, c);
    app.failure_message(CLI::FailureMessage::help);
    try {
        auto merged = merge_config(args, app);
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        if (c.command == "ingest") run_ingest(c);
        else if (c.command == "abridge") run_abridge(c);
        else if (c.command == "train") run_train(c);
        else if (c.command == "resolve") run_resolve(c, out);
        else if (c.command == "simulate") run_simulate(c, out);
        else if (c.command == "evaluate") run_evaluate(c, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace mqr
