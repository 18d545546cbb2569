#include "appforge/backend/fault.hpp"

#include <algorithm>

#include "appforge/model/serialize.hpp"

namespace appforge::backend {

bool FaultRule::applies(int occurrence) const {
    if (!occurrences.empty()) {
        return std::find(occurrences.begin(), occurrences.end(), occurrence) !=
               occurrences.end();
    }
    if (rate <= 0.0 || occurrence > horizon) {
        return false;
    }
    int threshold = static_cast<int>(rate * 10000.0 + 0.5);
    std::string key = std::to_string(seed) + "|" + to_token(kind) + "|" + module + "|" +
                      std::to_string(occurrence);
    return static_cast<int>(fnv1a_32(key) % 10000u) < threshold;
}

json FaultSchedule::to_json() const {
    json out = json::array();
    for (const auto& rule : rules) {
        json r{{"kind", to_token(rule.kind)},
               {"module", rule.module},
               {"marker", model::to_json(rule.marker)}};
        if (!rule.occurrences.empty()) {
            r["occurrences"] = json(rule.occurrences);
        } else {
            r["rate"] = rule.rate;
            r["seed"] = rule.seed;
            r["horizon"] = rule.horizon;
        }
        out.push_back(std::move(r));
    }
    return json{{"rules", out}};
}

FaultSchedule FaultSchedule::from_json(const json& j) {
    expect_fields(j, "fault schedule", {"rules"});
    FaultSchedule schedule;
    for (const auto& r : j.at("rules")) {
        expect_fields(r, "fault rule", {"kind", "module", "marker"},
                      {"occurrences", "rate", "seed", "horizon"});
        FaultRule rule;
        rule.kind = request_kind_from(require_string(r, "fault rule", "kind"));
        rule.module = require_string(r, "fault rule", "module");
        rule.marker = model::defect_marker_from_json(r.at("marker"));
        if (r.contains("occurrences")) {
            for (const auto& o : r.at("occurrences")) {
                rule.occurrences.push_back(o.get<int>());
            }
        }
        if (r.contains("rate")) {
            rule.rate = r.at("rate").get<double>();
        }
        if (r.contains("seed")) {
            rule.seed = r.at("seed").get<std::uint64_t>();
        }
        if (r.contains("horizon")) {
            rule.horizon = r.at("horizon").get<int>();
        }
        schedule.rules.push_back(std::move(rule));
    }
    return schedule;
}

FaultSchedule FaultSchedule::load_file(const std::string& path) {
    return from_json(load_json_file(path));
}

namespace {

void inject_marker(json& body, const model::DefectMarker& marker) {
    body["defect_markers"].push_back(model::to_json(marker));
}

}  // namespace

GenResponse FaultInjectingBackend::generate(const GenRequest& request) {
    GenResponse response = inner_->generate(request);

    std::string module;
    if (request.context.is_object() && request.context.contains("module_id")) {
        module = request.context.at("module_id").get<std::string>();
    }
    std::string counter_key = to_token(request.kind) + "|" + module;
    int occurrence = ++occurrences_[counter_key];

    for (const auto& rule : schedule_.rules) {
        if (rule.kind != request.kind || !rule.applies(occurrence)) {
            continue;
        }
        if (request.schema_id == "stub-body/v1") {
            if (rule.module == module) {
                inject_marker(response.payload, rule.marker);
            }
        } else if (request.schema_id == "rectification/v1") {
            json& bodies = response.payload.at("unit_bodies");
            if (bodies.contains(rule.module)) {
                inject_marker(bodies.at(rule.module), rule.marker);
            }
        }
    }
    return response;
}

}  // namespace appforge::backend
