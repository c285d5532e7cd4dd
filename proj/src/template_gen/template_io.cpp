#include "mqr/template_io.hpp"

#include "json.hpp"
#include "mqr/error.hpp"
#include "mqr/io.hpp"

namespace mqr {

using nlohmann::json;

namespace {

json token_to_json(const Token& t) {
    json j;
    if (t.is_placeholder()) {
        j["placeholder"] = t.text;
    } else {
        j["literal"] = t.text;
        if (t.article) j["article"] = true;
    }
    return j;
}

Token token_from_json(const json& j) {
    if (j.contains("placeholder")) {
        auto type = j.at("placeholder").get<std::string>();
        if (type.empty()) throw FormatError("placeholder without an entity type");
        return Token::placeholder(std::move(type));
    }
    return Token::literal(j.at("literal").get<std::string>(), j.value("article", false));
}

template <typename Fn>
void for_each_record(std::string_view contents, std::string_view header, Fn&& fn) {
    const auto lines = io::body_lines(contents, header);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            fn(json::parse(lines[i]));
        } catch (const json::exception& e) {
            throw FormatError("record " + std::to_string(i + 1) + ": " + e.what());
        }
    }
}

}  // namespace

std::string serialize_templates(const std::vector<Template>& templates) {
    std::string out(kTemplatesHeader);
    out.push_back('\n');
    for (const auto& t : templates) {
        json j;
        j["intent"] = t.intent;
        j["language"] = t.language;
        j["tokens"] = json::array();
        for (const auto& tok : t.tokens) j["tokens"].push_back(token_to_json(tok));
        j["z"] = t.confidence_samples;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<Template> parse_templates(std::string_view contents) {
    std::vector<Template> out;
    for_each_record(contents, kTemplatesHeader, [&](const json& j) {
        Template t;
        t.intent = j.at("intent").get<std::string>();
        t.language = j.value("language", std::string("en"));
        for (const auto& tok : j.at("tokens")) t.tokens.push_back(token_from_json(tok));
        if (t.tokens.empty()) throw FormatError("template without tokens");
        t.confidence_samples = j.value("z", std::vector<double>{});
        for (double z : t.confidence_samples)
            if (!(z >= 0.0 && z <= 1.0)) throw FormatError("confidence sample outside [0,1]");
        out.push_back(std::move(t));
    });
    return out;
}

std::vector<Template> read_templates_file(const std::string& path) { return parse_templates(io::read_file(path)); }

void write_templates_file(const std::string& path, const std::vector<Template>& templates) {
    io::write_file_atomic(path, serialize_templates(templates));
}

std::string serialize_dags(const DagStore& store) {
    std::string out(kDagsHeader);
    out.push_back('\n');
    for (const auto& [key, dags] : store) {
        for (const auto& d : dags) {
            json j;
            j["intent"] = d.intent;
            j["language"] = d.language;
            j["nodes"] = json::array();
            for (const auto& n : d.nodes) {
                json node = token_to_json(n.token);
                node["occurrence"] = n.occurrence;
                j["nodes"].push_back(node);
            }
            j["edges"] = json::array();
            for (const auto& [a, b] : d.edges) j["edges"].push_back({a, b});
            j["entries"] = d.entries;
            j["exits"] = d.exits;
            j["sources"] = d.sources;
            out += j.dump();
            out.push_back('\n');
        }
    }
    return out;
}

DagStore parse_dags(std::string_view contents) {
    DagStore store;
    for_each_record(contents, kDagsHeader, [&](const json& j) {
        TemplateDag d;
        d.intent = j.at("intent").get<std::string>();
        d.language = j.at("language").get<std::string>();
        for (const auto& n : j.at("nodes")) d.nodes.push_back({token_from_json(n), n.at("occurrence").get<std::size_t>()});
        for (const auto& e : j.at("edges")) d.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        d.entries = j.at("entries").get<std::vector<std::size_t>>();
        d.exits = j.at("exits").get<std::vector<std::size_t>>();
        d.sources = j.value("sources", std::vector<std::string>{});
        const auto n = d.nodes.size();
        for (const auto& [a, b] : d.edges)
            if (a >= n || b >= n) throw FormatError("dag edge refers to a missing node");
        for (auto v : d.entries)
            if (v >= n) throw FormatError("dag entry refers to a missing node");
        for (auto v : d.exits)
            if (v >= n) throw FormatError("dag exit refers to a missing node");
        if (!d.is_acyclic()) throw FormatError("dag record contains a cycle");
        store[{d.intent, d.language}].push_back(std::move(d));
    });
    return store;
}

void write_dags_file(const std::string& path, const DagStore& store) {
    io::write_file_atomic(path, serialize_dags(store));
}

DagStore read_dags_file(const std::string& path) { return parse_dags(io::read_file(path)); }

}  // namespace mqr
