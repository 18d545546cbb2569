#pragma once

#include <string>

#include "appforge/backend/gen.hpp"

namespace appforge::backend {

/// Connection settings for the remote text-generation service. Values
/// come from CLI flags or APPFORGE_* environment variables.
struct RemoteConfig {
    std::string base_url = "http://127.0.0.1:8080";
    int timeout_seconds = 30;
    int retries = 2;

    /// Applies APPFORGE_BASE_URL / APPFORGE_TIMEOUT / APPFORGE_RETRIES
    /// on top of the given defaults.
    static RemoteConfig from_env(RemoteConfig defaults);
    static RemoteConfig from_env();
};

/// HTTP client for POST /generate. The request body is
/// {kind, schema_id, context}; the response is {payload, advisory}.
/// Connection failures are retried, then raised as TransportError.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(RemoteConfig config) : config_(std::move(config)) {}

    GenResponse generate(const GenRequest& request) override;

private:
    RemoteConfig config_;
};

}  // namespace appforge::backend
