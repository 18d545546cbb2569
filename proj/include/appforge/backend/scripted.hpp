#pragma once

#include <map>
#include <optional>
#include <string>

#include "appforge/backend/gen.hpp"

namespace appforge::backend {

/// One canned response: the request fingerprint it answers plus the
/// payload to return. Files in a fixture directory carry this shape.
struct Fixture {
    std::string kind;
    std::string schema_id;
    std::string fingerprint;
    json payload;
    std::string note;

    json to_json() const;
    static Fixture from_json(const json& j);
};

/// A keyed fixture table. Later inserts for the same fingerprint replace
/// earlier ones, which is how audit amendments override scenario fixtures.
class FixtureSet {
public:
    void add(Fixture fixture);
    void add_response(const GenRequest& request, json payload, const std::string& note = "");
    const Fixture* find(const std::string& fingerprint) const;
    size_t size() const { return fixtures_.size(); }

    /// Writes one `<kind>-<fingerprint>.json` file per fixture.
    void write_dir(const std::string& directory) const;
    static FixtureSet load_dir(const std::string& directory);
    void merge(const FixtureSet& overrides);

private:
    std::map<std::string, Fixture> fixtures_;
};

/// Deterministic table-lookup backend: equal fingerprints always return
/// identical payloads. Unknown fingerprints raise NoFixtureError carrying
/// the request kind and a context digest.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(FixtureSet fixtures) : fixtures_(std::move(fixtures)) {}

    GenResponse generate(const GenRequest& request) override;

private:
    FixtureSet fixtures_;
};

}  // namespace appforge::backend
