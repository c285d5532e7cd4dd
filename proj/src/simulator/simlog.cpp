#include "json.hpp"
#include "mqr/error.hpp"
#include "mqr/io.hpp"
#include "mqr/simulator.hpp"

namespace mqr {

using nlohmann::json;

namespace {

std::string csv_number(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

}  // namespace

std::string serialize_simlog(const SimulationResult& result) {
    std::string out(kSimlogHeader);
    out.push_back('\n');
    for (const auto& d : result.days) {
        json j;
        j["day"] = d.day;
        j["mode"] = std::string(to_string(d.mode));
        j["sessions"] = d.sessions;
        j["defective_turns"] = d.defective_turns;
        j["failed_sessions"] = d.failed_sessions;
        j["rewrites"] = d.rewrites;
        j["defect_rate"] = io::format_double(d.defect_rate);
        j["flips"] = d.flips;
        if (d.partition) {
            j["precision"] = io::format_double(d.partition->precision);
            j["recall"] = io::format_double(d.partition->recall);
            j["accuracy"] = io::format_double(d.partition->accuracy);
            j["f1"] = io::format_double(d.partition->f1);
        }
        j["pr_auc"] = d.pr_auc ? json(io::format_double(*d.pr_auc)) : json(nullptr);
        j["equivalence_f1"] = d.equivalence_f1 ? json(io::format_double(*d.equivalence_f1)) : json(nullptr);
        j["digest"] = d.digest;
        json table = json::object();
        for (const auto& [k, v] : d.table)
            if (!v.empty()) table[k] = v;
        j["rewrites_table"] = std::move(table);
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<DayRecord> parse_simlog(std::string_view contents) {
    std::vector<DayRecord> out;
    const auto lines = io::body_lines(contents, kSimlogHeader);
    auto number = [](const json& j, const char* key) -> std::optional<double> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return io::parse_double(j.at(key).get<std::string>());
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            const auto j = json::parse(lines[i]);
            DayRecord d;
            d.day = j.at("day").get<std::size_t>();
            d.mode = parse_graph_mode(j.at("mode").get<std::string>());
            d.sessions = j.at("sessions").get<std::size_t>();
            d.defective_turns = j.at("defective_turns").get<std::size_t>();
            d.failed_sessions = j.at("failed_sessions").get<std::size_t>();
            d.rewrites = j.at("rewrites").get<std::size_t>();
            d.defect_rate = *number(j, "defect_rate");
            d.flips = j.at("flips").get<std::size_t>();
            if (j.contains("precision")) {
                PartitionMetrics m;
                m.precision = *number(j, "precision");
                m.recall = *number(j, "recall");
                m.accuracy = *number(j, "accuracy");
                m.f1 = *number(j, "f1");
                d.partition = m;
            }
            d.pr_auc = number(j, "pr_auc");
            d.equivalence_f1 = number(j, "equivalence_f1");
            d.digest = j.at("digest").get<std::string>();
            for (const auto& [k, v] : j.at("rewrites_table").items()) d.table[k] = v.get<std::string>();
            out.push_back(std::move(d));
        } catch (const json::exception& e) {
            throw FormatError("simlog record " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

std::string simlog_csv(const SimulationResult& result) {
    std::string out =
        "day,mode,sessions,defective_turns,failed_sessions,rewrites,defect_rate,flips,precision,recall,accuracy,f1,"
        "pr_auc,equivalence_f1,digest\n";
    for (const auto& d : result.days) {
        out += std::to_string(d.day) + ',' + std::string(to_string(d.mode)) + ',' + std::to_string(d.sessions) + ',' +
               std::to_string(d.defective_turns) + ',' + std::to_string(d.failed_sessions) + ',' +
               std::to_string(d.rewrites) + ',' + io::format_double(d.defect_rate) + ',' + std::to_string(d.flips);
        for (auto v : {d.partition ? std::optional(d.partition->precision) : std::nullopt,
                       d.partition ? std::optional(d.partition->recall) : std::nullopt,
                       d.partition ? std::optional(d.partition->accuracy) : std::nullopt,
                       d.partition ? std::optional(d.partition->f1) : std::nullopt, d.pr_auc, d.equivalence_f1})
            out += ',' + csv_number(v);
        out += ',' + d.digest + '\n';
    }
    return out;
}

}  // namespace mqr
