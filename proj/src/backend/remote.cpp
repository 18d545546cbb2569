#include "appforge/backend/remote.hpp"

#include <cstdlib>

#include <httplib.h>

namespace appforge::backend {

RemoteConfig RemoteConfig::from_env() { return from_env(RemoteConfig{}); }

RemoteConfig RemoteConfig::from_env(RemoteConfig defaults) {
    if (const char* url = std::getenv("APPFORGE_BASE_URL")) {
        defaults.base_url = url;
    }
    if (const char* timeout = std::getenv("APPFORGE_TIMEOUT")) {
        defaults.timeout_seconds = std::atoi(timeout);
    }
    if (const char* retries = std::getenv("APPFORGE_RETRIES")) {
        defaults.retries = std::atoi(retries);
    }
    return defaults;
}

GenResponse RemoteBackend::generate(const GenRequest& request) {
    json body{{"kind", to_token(request.kind)},
              {"schema_id", request.schema_id},
              {"context", request.context}};
    std::string payload = compact_dump(body);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);

        auto result = client.Post("/generate", payload, "application/json");
        if (!result) {
            last_error = httplib::to_string(result.error());
            continue;
        }
        if (result->status != 200) {
            throw TransportError("generate endpoint returned status " +
                                 std::to_string(result->status));
        }
        json parsed = parse_json(result->body, "remote response");
        expect_fields(parsed, "remote response", {"payload"}, {"advisory"});
        validate_payload(request.schema_id, parsed.at("payload"));
        GenResponse response;
        response.payload = parsed.at("payload");
        if (parsed.contains("advisory")) {
            response.advisory = parsed.at("advisory").get<std::string>();
        }
        return response;
    }
    throw TransportError("generate request failed after " +
                         std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

}  // namespace appforge::backend
