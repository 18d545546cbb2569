#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "appforge/backend/gen.hpp"
#include "appforge/model/types.hpp"

namespace appforge::backend {

/// Schedules a defect marker into the Nth payloads of a given request
/// kind for a given module. Occurrences are either listed explicitly or
/// drawn deterministically from (rate, seed) per occurrence index.
struct FaultRule {
    RequestKind kind = RequestKind::SourceUnit;
    std::string module;
    model::DefectMarker marker;
    std::vector<int> occurrences;  // explicit 1-based indexes
    double rate = 0.0;             // used when occurrences is empty
    std::uint64_t seed = 0;
    int horizon = 64;  // highest occurrence index the rate applies to

    bool applies(int occurrence) const;
};

struct FaultSchedule {
    std::vector<FaultRule> rules;

    json to_json() const;
    static FaultSchedule from_json(const json& j);
    static FaultSchedule load_file(const std::string& path);
};

/// Wraps another backend and injects scheduled defect markers into
/// matching payloads. Payloads outside the schedule pass through
/// untouched; occurrence counters are keyed by (kind, module).
class FaultInjectingBackend : public Backend {
public:
    FaultInjectingBackend(std::shared_ptr<Backend> inner, FaultSchedule schedule)
        : inner_(std::move(inner)), schedule_(std::move(schedule)) {}

    GenResponse generate(const GenRequest& request) override;

private:
    std::shared_ptr<Backend> inner_;
    FaultSchedule schedule_;
    std::map<std::string, int> occurrences_;
};

}  // namespace appforge::backend
