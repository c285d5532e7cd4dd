#include "mqr/graph_io.hpp"

#include "mqr/error.hpp"
#include "mqr/io.hpp"
#include "mqr/text.hpp"

namespace mqr {

namespace {

class LineReader {
public:
    explicit LineReader(std::vector<std::string> lines) : lines_(std::move(lines)) {}

    std::vector<std::string> fields(std::size_t expected) {
        if (pos_ >= lines_.size()) throw FormatError("graph snapshot truncated");
        auto f = text::split(lines_[pos_], '\t');
        if (f.size() != expected)
            throw FormatError("graph snapshot line " + std::to_string(pos_ + 2) + ": expected " +
                              std::to_string(expected) + " fields");
        ++pos_;
        return f;
    }

    std::size_t section(std::string_view name) {
        auto f = fields(2);
        if (f[0] != name) throw FormatError("expected section '" + std::string(name) + "', got '" + f[0] + "'");
        return static_cast<std::size_t>(io::parse_int(f[1]));
    }

    bool done() const { return pos_ == lines_.size(); }

private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

StateId parse_state(const std::string& s, std::size_t n) {
    const long long v = io::parse_int(s);
    if (v < 0 || static_cast<std::size_t>(v) >= n) throw FormatError("state id out of range: " + s);
    return static_cast<StateId>(v);
}

}  // namespace

std::string serialize_graph(const GraphData& data) {
    std::string out(kGraphHeader);
    out += "\nmode\t";
    out += to_string(data.mode);
    out += "\nstates\t" + std::to_string(data.states.transient_count()) + "\n";
    for (StateId id = kFirstTransient; id < data.states.size(); ++id) {
        out += std::to_string(id);
        out.push_back('\t');
        out += data.states.canonical(id);
        out.push_back('\n');
    }
    out += "counts\t" + std::to_string(data.counts.size()) + "\n";
    for (const auto& [key, n] : data.counts) {
        out += std::to_string(key.src) + "\t" + std::to_string(key.dst) + "\t" + std::to_string(n) + "\n";
    }
    out += "meta\t" + std::to_string(data.meta.size()) + "\n";
    for (const auto& [key, p] : data.meta) {
        out += std::to_string(key.src) + "\t" + std::to_string(key.dst);
        for (double v : {p.j_alpha, p.j_beta, p.j_gamma, p.j_eps, p.alpha, p.beta, p.gamma}) {
            out.push_back('\t');
            out += io::format_double(v);
        }
        out.push_back('\t');
        out += to_string(p.tier);
        out.push_back('\n');
    }
    return out;
}

GraphData parse_graph(std::string_view contents) {
    LineReader reader(io::body_lines(contents, kGraphHeader));
    GraphData data;

    auto mode = reader.fields(2);
    if (mode[0] != "mode") throw FormatError("expected mode line");
    data.mode = parse_graph_mode(mode[1]);

    const std::size_t n_states = reader.section("states");
    std::vector<Hypothesis> hyps;
    std::vector<std::string> canon;
    hyps.reserve(n_states);
    for (std::size_t k = 0; k < n_states; ++k) {
        auto f = reader.fields(2);
        if (io::parse_int(f[0]) != static_cast<long long>(k + kFirstTransient))
            throw FormatError("state ids must be dense and ordered");
        hyps.push_back(Hypothesis::parse(f[1]));
        canon.push_back(f[1]);
    }
    data.states = StateSpace(std::move(hyps));
    for (std::size_t k = 0; k < n_states; ++k) {
        if (data.states.canonical(static_cast<StateId>(k + kFirstTransient)) != canon[k])
            throw FormatError("state table is not in canonical order at '" + canon[k] + "'");
    }

    const std::size_t n = data.states.size();
    const std::size_t n_counts = reader.section("counts");
    for (std::size_t k = 0; k < n_counts; ++k) {
        auto f = reader.fields(3);
        const EdgeKey key{parse_state(f[0], n), parse_state(f[1], n)};
        const long long c = io::parse_int(f[2]);
        if (c <= 0) throw FormatError("edge counts must be positive");
        if (!data.counts.emplace(key, static_cast<std::uint64_t>(c)).second)
            throw FormatError("duplicate edge in counts section");
    }

    const std::size_t n_meta = reader.section("meta");
    for (std::size_t k = 0; k < n_meta; ++k) {
        auto f = reader.fields(10);
        const EdgeKey key{parse_state(f[0], n), parse_state(f[1], n)};
        EdgeParams p;
        p.j_alpha = io::parse_double(f[2]);
        p.j_beta = io::parse_double(f[3]);
        p.j_gamma = io::parse_double(f[4]);
        p.j_eps = io::parse_double(f[5]);
        p.alpha = io::parse_double(f[6]);
        p.beta = io::parse_double(f[7]);
        p.gamma = io::parse_double(f[8]);
        p.tier = parse_alpha_tier(f[9]);
        if (!data.counts.count(key)) throw FormatError("meta record for an edge with no count");
        if (!data.meta.emplace(key, p).second) throw FormatError("duplicate edge in meta section");
    }
    if (!reader.done()) throw FormatError("trailing lines after meta section");
    return data;
}

void write_graph_file(const std::string& path, const GraphData& data) {
    io::write_file_atomic(path, serialize_graph(data));
}

GraphData read_graph_file(const std::string& path) { return parse_graph(io::read_file(path)); }

}  // namespace mqr
