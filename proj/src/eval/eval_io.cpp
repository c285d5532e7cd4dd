#include "mqr/eval_io.hpp"

#include "json.hpp"
#include "mqr/error.hpp"
#include "mqr/io.hpp"

namespace mqr {

using nlohmann::json;

namespace {

json hyps_to_json(const std::vector<Hypothesis>& hs) {
    json a = json::array();
    for (const auto& h : hs) a.push_back(h.format());
    return a;
}

std::vector<Hypothesis> hyps_from_json(const json& a) {
    std::vector<Hypothesis> out;
    for (const auto& v : a) out.push_back(Hypothesis::parse(v.get<std::string>()));
    return out;
}

}  // namespace

std::string serialize_evalset(const std::vector<EvalRecord>& records) {
    std::string out(kEvalSetHeader);
    out.push_back('\n');
    for (const auto& r : records) {
        json j;
        j["request"] = r.request.format();
        j["positives"] = hyps_to_json(r.positives);
        j["negatives"] = hyps_to_json(r.negatives);
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<EvalRecord> parse_evalset(std::string_view contents) {
    std::vector<EvalRecord> out;
    const auto lines = io::body_lines(contents, kEvalSetHeader);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            const auto j = json::parse(lines[i]);
            EvalRecord r;
            r.request = Hypothesis::parse(j.at("request").get<std::string>());
            r.positives = hyps_from_json(j.value("positives", json::array()));
            r.negatives = hyps_from_json(j.value("negatives", json::array()));
            r.validate();
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw FormatError("evalset record " + std::to_string(i + 1) + ": " + e.what());
        } catch (const Error& e) {
            throw FormatError("evalset record " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

std::vector<EvalRecord> read_evalset_file(const std::string& path) { return parse_evalset(io::read_file(path)); }

void write_evalset_file(const std::string& path, const std::vector<EvalRecord>& records) {
    io::write_file_atomic(path, serialize_evalset(records));
}

std::string curve_csv(const PrCurve& curve) {
    std::string out = "threshold,precision,recall\n";
    for (const auto& p : curve.points)
        out += io::format_double(p.threshold) + ',' + io::format_double(p.precision) + ',' +
               io::format_double(p.recall) + '\n';
    return out;
}

std::string summary_json(const EvalSummary& s) {
    json j;
    j["requests"] = s.requests;
    j["pairs"] = s.pairs;
    j["precision"] = s.partition.precision;
    j["recall"] = s.partition.recall;
    j["accuracy"] = s.partition.accuracy;
    j["f1"] = s.partition.f1;
    if (s.curve) {
        j["pr_auc"] = s.curve->area;
        j["equivalence_f1"] = s.curve->max_f1();
    } else {
        j["pr_auc"] = nullptr;
        j["equivalence_f1"] = nullptr;
    }
    return j.dump();
}

}  // namespace mqr
