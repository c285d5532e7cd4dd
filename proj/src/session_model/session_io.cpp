#include "mqr/session_io.hpp"

#include "json.hpp"
#include "mqr/error.hpp"
#include "mqr/io.hpp"

namespace mqr {

using nlohmann::json;

namespace {

json turn_to_json(const Turn& t) {
    json j;
    j["utterance"] = t.utterance;
    j["hypothesis"] = t.hypothesis.format();
    j["timestamp"] = t.timestamp;
    j["kind"] = std::string(to_string(t.kind));
    if (t.iq) j["iq"] = *t.iq;
    if (t.solicited) j["solicited"] = true;
    return j;
}

Turn turn_from_json(const json& j) {
    Turn t;
    t.utterance = j.at("utterance").get<std::string>();
    t.hypothesis = Hypothesis::parse(j.at("hypothesis").get<std::string>());
    t.timestamp = j.at("timestamp").get<std::int64_t>();
    t.kind = parse_turn_kind(j.value("kind", std::string("user")));
    if (j.contains("iq") && !j["iq"].is_null()) {
        double iq = j["iq"].get<double>();
        if (!(iq >= 0.0 && iq <= 1.0)) throw FormatError("iq outside [0,1]");
        t.iq = iq;
    }
    t.solicited = j.value("solicited", false);
    return t;
}

template <typename Fn>
auto parse_records(std::string_view contents, Fn&& fn) {
    std::vector<decltype(fn(json{}))> out;
    const auto lines = io::body_lines(contents, kSessionsHeader);
    out.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(fn(json::parse(lines[i])));
        } catch (const json::exception& e) {
            throw FormatError("record " + std::to_string(i + 1) + ": " + e.what());
        } catch (const Error& e) {
            throw FormatError("record " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

std::string serialize_log(const std::vector<LogRecord>& records) {
    std::string out(kSessionsHeader);
    out.push_back('\n');
    for (const auto& r : records) {
        json j = turn_to_json(r.turn);
        j["customer"] = r.customer_id;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<LogRecord> parse_log(std::string_view contents) {
    return parse_records(contents, [](const json& j) {
        if (j.contains("turns")) throw FormatError("session record found in a turn log");
        return LogRecord{j.at("customer").get<std::string>(), turn_from_json(j)};
    });
}

std::string serialize_sessions(const std::vector<Session>& sessions) {
    std::string out(kSessionsHeader);
    out.push_back('\n');
    for (const auto& s : sessions) {
        json j;
        j["customer"] = s.customer_id;
        j["outcome"] = s.outcome ? json(std::string(to_string(*s.outcome))) : json(nullptr);
        json turns = json::array();
        for (const auto& t : s.turns) turns.push_back(turn_to_json(t));
        j["turns"] = std::move(turns);
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<Session> parse_sessions(std::string_view contents) {
    return parse_records(contents, [](const json& j) {
        Session s;
        s.customer_id = j.at("customer").get<std::string>();
        const json& oc = j.at("outcome");
        if (!oc.is_null()) s.outcome = parse_outcome(oc.get<std::string>());
        for (const auto& tj : j.at("turns")) s.turns.push_back(turn_from_json(tj));
        validate_session(s);
        return s;
    });
}

std::vector<LogRecord> read_log_file(const std::string& path) { return parse_log(io::read_file(path)); }

std::vector<Session> read_sessions_file(const std::string& path) {
    return parse_sessions(io::read_file(path));
}

void write_sessions_file(const std::string& path, const std::vector<Session>& sessions) {
    io::write_file_atomic(path, serialize_sessions(sessions));
}

}  // namespace mqr
