#include "appforge/backend/scripted.hpp"

#include <algorithm>
#include <filesystem>
#include <vector>

namespace appforge::backend {

namespace fs = std::filesystem;

json Fixture::to_json() const {
    json out{{"kind", kind},
             {"schema_id", schema_id},
             {"fingerprint", fingerprint},
             {"payload", payload}};
    if (!note.empty()) {
        out["note"] = note;
    }
    return out;
}

Fixture Fixture::from_json(const json& j) {
    expect_fields(j, "fixture", {"kind", "schema_id", "fingerprint", "payload"}, {"note"});
    Fixture f;
    f.kind = require_string(j, "fixture", "kind");
    f.schema_id = require_string(j, "fixture", "schema_id");
    f.fingerprint = require_string(j, "fixture", "fingerprint");
    f.payload = j.at("payload");
    if (j.contains("note")) {
        f.note = require_string(j, "fixture", "note");
    }
    return f;
}

void FixtureSet::add(Fixture fixture) {
    std::string key = fixture.fingerprint;
    fixtures_[key] = std::move(fixture);
}

void FixtureSet::add_response(const GenRequest& request, json payload, const std::string& note) {
    Fixture f;
    f.kind = to_token(request.kind);
    f.schema_id = request.schema_id;
    f.fingerprint = request.fingerprint;
    f.payload = std::move(payload);
    f.note = note;
    add(std::move(f));
}

const Fixture* FixtureSet::find(const std::string& fingerprint) const {
    auto it = fixtures_.find(fingerprint);
    return it == fixtures_.end() ? nullptr : &it->second;
}

void FixtureSet::write_dir(const std::string& directory) const {
    fs::create_directories(directory);
    for (const auto& [fingerprint, fixture] : fixtures_) {
        std::string name = fixture.kind + "-" + fingerprint + ".json";
        write_text_file((fs::path(directory) / name).string(),
                        canonical_dump(fixture.to_json()));
    }
}

FixtureSet FixtureSet::load_dir(const std::string& directory) {
    if (!fs::exists(directory)) {
        throw NotFoundError("fixture directory not found: " + directory);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    FixtureSet set;
    for (const auto& file : files) {
        set.add(Fixture::from_json(load_json_file(file.string())));
    }
    return set;
}

void FixtureSet::merge(const FixtureSet& overrides) {
    for (const auto& [fingerprint, fixture] : overrides.fixtures_) {
        fixtures_[fingerprint] = fixture;
    }
}

GenResponse ScriptedBackend::generate(const GenRequest& request) {
    const Fixture* fixture = fixtures_.find(request.fingerprint);
    if (fixture == nullptr) {
        throw NoFixtureError("no fixture for " + to_token(request.kind) + " request " +
                             request.fingerprint + " (context: " +
                             context_summary(request.context) + ")");
    }
    validate_payload(request.schema_id, fixture->payload);
    GenResponse response;
    response.payload = fixture->payload;
    response.advisory = fixture->note;
    return response;
}

}  // namespace appforge::backend
