#pragma once

#include <string>

#include "appforge/json_util.hpp"

namespace appforge::backend {

/// Request kinds for every generative step in the pipeline.
enum class RequestKind {
    PlanProposal,
    PlanRevision,
    SourceUnit,
    FixSnippet,
    Rectification,
    ApiProposal,
};

std::string to_token(RequestKind kind);
RequestKind request_kind_from(const std::string& token);

/// Schema id a given request kind expects its response payload to satisfy.
std::string schema_for_kind(RequestKind kind);

/// Validates `payload` against the named schema; throws SchemaError with
/// the offending field on mismatch.
void validate_payload(const std::string& schema_id, const json& payload);

/// Stable hash of (kind, canonicalized context). Field order inside the
/// context is irrelevant; equal content yields equal fingerprints.
std::string fingerprint(RequestKind kind, const json& context);

struct GenRequest {
    RequestKind kind = RequestKind::PlanProposal;
    json context;  // artifact references and KB excerpts
    std::string schema_id;
    std::string fingerprint;
};

/// Builds a well-formed request for `kind` over `context`.
GenRequest make_request(RequestKind kind, json context);

struct GenResponse {
    json payload;
    std::string advisory;
};

/// The contract every generator implementation satisfies. Payloads are
/// schema-validated before they are returned to callers.
class Backend {
public:
    virtual ~Backend() = default;
    virtual GenResponse generate(const GenRequest& request) = 0;
};

/// Short human-readable digest of a request context, used in fixture-gap
/// reports so a missing fixture can be authored from the message alone.
std::string context_summary(const json& context);

}  // namespace appforge::backend
