#include "appforge/backend/gen.hpp"

#include "appforge/model/serialize.hpp"

namespace appforge::backend {

std::string to_token(RequestKind kind) {
    switch (kind) {
        case RequestKind::PlanProposal: return "plan-proposal";
        case RequestKind::PlanRevision: return "plan-revision";
        case RequestKind::SourceUnit: return "source-unit";
        case RequestKind::FixSnippet: return "fix-snippet";
        case RequestKind::Rectification: return "rectification";
        case RequestKind::ApiProposal: return "api-proposal";
    }
    return {};
}

RequestKind request_kind_from(const std::string& token) {
    if (token == "plan-proposal") return RequestKind::PlanProposal;
    if (token == "plan-revision") return RequestKind::PlanRevision;
    if (token == "source-unit") return RequestKind::SourceUnit;
    if (token == "fix-snippet") return RequestKind::FixSnippet;
    if (token == "rectification") return RequestKind::Rectification;
    if (token == "api-proposal") return RequestKind::ApiProposal;
    throw SchemaError("invalid request kind '" + token + "'");
}

std::string schema_for_kind(RequestKind kind) {
    switch (kind) {
        case RequestKind::PlanProposal:
        case RequestKind::PlanRevision:
            return "plan-proposal/v1";
        case RequestKind::SourceUnit:
        case RequestKind::FixSnippet:
            return "stub-body/v1";
        case RequestKind::Rectification:
            return "rectification/v1";
        case RequestKind::ApiProposal:
            return "api-proposal/v1";
    }
    return {};
}

void validate_payload(const std::string& schema_id, const json& payload) {
    if (schema_id == "plan-proposal/v1") {
        expect_fields(payload, "plan proposal",
                      {"steps", "dep_graph", "packages", "arrangement_rules"});
        for (const auto& step : payload.at("steps")) {
            model::plan_step_from_json(step);
        }
        if (!payload.at("dep_graph").is_object()) {
            throw SchemaError("plan proposal.dep_graph: expected an object");
        }
        model::package_node_from_json(payload.at("packages"));
        model::arrangement_rules_from_json(payload.at("arrangement_rules"));
        return;
    }
    if (schema_id == "stub-body/v1") {
        model::stub_body_from_json(payload);
        return;
    }
    if (schema_id == "rectification/v1") {
        expect_fields(payload, "rectification", {"unit_bodies"}, {"api_updates"});
        const json& bodies = payload.at("unit_bodies");
        if (!bodies.is_object()) {
            throw SchemaError("rectification.unit_bodies: expected an object");
        }
        for (auto it = bodies.begin(); it != bodies.end(); ++it) {
            model::stub_body_from_json(it.value());
        }
        if (payload.contains("api_updates")) {
            for (const auto& entry : payload.at("api_updates")) {
                model::api_entry_from_json(entry);
            }
        }
        return;
    }
    if (schema_id == "api-proposal/v1") {
        expect_fields(payload, "api proposal", {"entries"});
        for (const auto& entry : payload.at("entries")) {
            model::api_entry_from_json(entry);
        }
        return;
    }
    throw SchemaError("unknown schema id '" + schema_id + "'");
}

std::string fingerprint(RequestKind kind, const json& context) {
    return fnv1a_hex(to_token(kind) + "\n" + compact_dump(context));
}

GenRequest make_request(RequestKind kind, json context) {
    GenRequest request;
    request.kind = kind;
    request.schema_id = schema_for_kind(kind);
    request.fingerprint = fingerprint(kind, context);
    request.context = std::move(context);
    return request;
}

std::string context_summary(const json& context) {
    std::string summary;
    if (context.is_object()) {
        for (auto it = context.begin(); it != context.end(); ++it) {
            if (!summary.empty()) {
                summary += ", ";
            }
            summary += it.key() + "=";
            if (it.value().is_string()) {
                summary += it.value().get<std::string>();
            } else if (it.value().is_number()) {
                summary += it.value().dump();
            } else {
                summary += "<" + fnv1a_hex(compact_dump(it.value())).substr(0, 8) + ">";
            }
        }
    } else {
        summary = compact_dump(context);
    }
    if (summary.size() > 240) {
        summary.resize(240);
        summary += "...";
    }
    return summary;
}

}  // namespace appforge::backend
