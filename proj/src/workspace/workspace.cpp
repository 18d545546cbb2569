#include "appforge/workspace/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>

namespace appforge::workspace {

namespace fs = std::filesystem;

Lock::Lock(const std::string& root) {
    path_ = (fs::path(root) / ".appforge.lock").string();
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        throw LockError("workspace is locked by another writer: " + path_);
    }
    ::write(fd, "locked\n", 7);
    ::close(fd);
}

Lock::~Lock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

namespace {

const char* kLayout[] = {"inputs", "artifacts", "src", "tests", "audit"};

std::string read_rel(const std::string& root, const std::string& rel) {
    return read_text_file((fs::path(root) / rel).string());
}

}  // namespace

Workspace Workspace::init(const std::string& root, const std::string& srs_text,
                          const std::string& add_text, bool force) {
    fs::path base(root);
    if (fs::exists(base) && !fs::is_empty(base)) {
        if (!force) {
            throw NotEmptyError("workspace root is not empty: " + root);
        }
        // Archive the previous tree instead of deleting it.
        fs::path archive = base / "archive";
        int slot = 0;
        while (fs::exists(archive / std::to_string(slot))) {
            ++slot;
        }
        fs::path target = archive / std::to_string(slot);
        fs::create_directories(target);
        for (const auto& entry : fs::directory_iterator(base)) {
            if (entry.path().filename() == "archive") {
                continue;
            }
            fs::rename(entry.path(), target / entry.path().filename());
        }
    }

    // Inputs must parse before anything is written.
    model::srs_from_json(parse_json(srs_text, "srs"));
    model::add_from_json(parse_json(add_text, "add"));

    for (const char* dir : kLayout) {
        fs::create_directories(base / dir);
    }
    write_text_file((base / "inputs" / "srs.json").string(), srs_text);
    write_text_file((base / "inputs" / "add.json").string(), add_text);
    return Workspace(root);
}

Workspace Workspace::open(const std::string& root) {
    for (const char* dir : kLayout) {
        if (!fs::exists(fs::path(root) / dir)) {
            throw NotFoundError("not a workspace (missing " + std::string(dir) + "/): " + root);
        }
    }
    return Workspace(root);
}

std::string Workspace::absolute(const std::string& rel_path) const {
    return (fs::path(root_) / rel_path).string();
}

bool Workspace::exists(const std::string& rel_path) const {
    return fs::exists(absolute(rel_path));
}

void Workspace::remove(const std::string& rel_path) const {
    std::error_code ec;
    fs::remove(absolute(rel_path), ec);
}

json Workspace::read_json(const std::string& rel_path) const {
    return parse_json(read_rel(root_, rel_path), rel_path);
}

void Workspace::write_json(const std::string& rel_path, const json& value) const {
    write_text_file(absolute(rel_path), canonical_dump(value));
}

std::vector<model::RequirementItem> Workspace::srs() const {
    return model::srs_from_json(read_json("inputs/srs.json"));
}

std::vector<model::ArchElement> Workspace::add() const {
    return model::add_from_json(read_json("inputs/add.json"));
}

std::string Workspace::persist_plan(const model::CodePlan& plan) const {
    std::string rel = "artifacts/plan-v" + std::to_string(plan.version) + ".json";
    if (exists(rel)) {
        throw ConflictError("plan v" + std::to_string(plan.version) + " already persisted");
    }
    write_json(rel, model::to_json(plan));
    return rel;
}

model::CodePlan Workspace::load_plan(int version) const {
    std::string rel = "artifacts/plan-v" + std::to_string(version) + ".json";
    if (!exists(rel)) {
        throw NotFoundError("no plan v" + std::to_string(version));
    }
    return model::code_plan_from_json(read_json(rel));
}

int Workspace::latest_plan_version() const {
    int version = 0;
    while (exists("artifacts/plan-v" + std::to_string(version + 1) + ".json")) {
        ++version;
    }
    return version;
}

std::string Workspace::persist_compile_log(const model::CompilationLog& log) const {
    std::string rel = "artifacts/compile-" + std::to_string(log.ordinal) + ".json";
    if (exists(rel)) {
        throw ConflictError("compile log " + std::to_string(log.ordinal) + " already persisted");
    }
    write_json(rel, model::to_json(log));
    return rel;
}

model::CompilationLog Workspace::load_compile_log(int ordinal) const {
    std::string rel = "artifacts/compile-" + std::to_string(ordinal) + ".json";
    if (!exists(rel)) {
        throw NotFoundError("no compile log " + std::to_string(ordinal));
    }
    return model::compilation_log_from_json(read_json(rel));
}

std::vector<model::CompilationLog> Workspace::load_compile_logs() const {
    std::vector<model::CompilationLog> logs;
    for (int ordinal = 1; exists("artifacts/compile-" + std::to_string(ordinal) + ".json");
         ++ordinal) {
        logs.push_back(load_compile_log(ordinal));
    }
    return logs;
}

std::string Workspace::persist_report(const model::TestReport& report) const {
    std::string rel = "artifacts/report-" + std::to_string(report.ordinal) + ".json";
    if (exists(rel)) {
        throw ConflictError("report " + std::to_string(report.ordinal) + " already persisted");
    }
    write_json(rel, model::to_json(report));
    return rel;
}

model::TestReport Workspace::load_report(int ordinal) const {
    std::string rel = "artifacts/report-" + std::to_string(ordinal) + ".json";
    if (!exists(rel)) {
        throw NotFoundError("no report " + std::to_string(ordinal));
    }
    return model::test_report_from_json(read_json(rel));
}

int Workspace::latest_report_ordinal() const {
    int ordinal = 0;
    while (exists("artifacts/report-" + std::to_string(ordinal + 1) + ".json")) {
        ++ordinal;
    }
    return ordinal;
}

std::string Workspace::persist_event(const model::FeedbackEvent& event, int ordinal) const {
    std::string rel = "artifacts/event-" + std::to_string(ordinal) + ".json";
    if (exists(rel)) {
        throw ConflictError("event " + std::to_string(ordinal) + " already persisted");
    }
    if (!exists(event.payload_ref)) {
        throw NotFoundError("event payload_ref does not resolve: " + event.payload_ref);
    }
    write_json(rel, model::to_json(event));
    return rel;
}

model::FeedbackEvent Workspace::load_event(int ordinal) const {
    std::string rel = "artifacts/event-" + std::to_string(ordinal) + ".json";
    if (!exists(rel)) {
        throw NotFoundError("no event " + std::to_string(ordinal));
    }
    return model::feedback_event_from_json(read_json(rel));
}

model::ImprovementRecord Workspace::record_improvement(model::ImprovementRecord record) const {
    if (!exists(record.trigger)) {
        throw NotFoundError("improvement record trigger does not resolve: " + record.trigger);
    }
    if (record.plan_version_after < record.plan_version_before) {
        throw SchemaError("improvement record: plan version must not decrease");
    }
    auto existing = improvements();
    record.ordinal = static_cast<int>(existing.size()) + 1;

    json log = json::array();
    for (const auto& r : existing) {
        log.push_back(model::to_json(r));
    }
    log.push_back(model::to_json(record));
    write_json("artifacts/improvement-log.json", log);
    return record;
}

std::vector<model::ImprovementRecord> Workspace::improvements() const {
    if (!exists("artifacts/improvement-log.json")) {
        return {};
    }
    std::vector<model::ImprovementRecord> out;
    for (const auto& r : read_json("artifacts/improvement-log.json")) {
        out.push_back(model::improvement_record_from_json(r));
    }
    return out;
}

std::string Workspace::persist_structure(const model::ProjectStructure& structure) const {
    write_json("artifacts/structure.json", model::to_json(structure));
    return "artifacts/structure.json";
}

std::optional<model::ProjectStructure> Workspace::load_structure() const {
    if (!exists("artifacts/structure.json")) {
        return std::nullopt;
    }
    return model::structure_from_json(read_json("artifacts/structure.json"));
}

std::string Workspace::persist_manifest(const model::ApiManifest& manifest) const {
    write_json("artifacts/manifest.json", model::to_json(manifest));
    return "artifacts/manifest.json";
}

std::optional<model::ApiManifest> Workspace::load_manifest() const {
    if (!exists("artifacts/manifest.json")) {
        return std::nullopt;
    }
    return model::manifest_from_json(read_json("artifacts/manifest.json"));
}

std::string Workspace::persist_matrix(const model::TraceabilityMatrix& matrix) const {
    write_json("artifacts/trace-matrix.json", model::to_json(matrix));
    return "artifacts/trace-matrix.json";
}

std::optional<model::TraceabilityMatrix> Workspace::load_matrix() const {
    if (!exists("artifacts/trace-matrix.json")) {
        return std::nullopt;
    }
    return model::trace_matrix_from_json(read_json("artifacts/trace-matrix.json"));
}

std::string Workspace::persist_unit(const model::SourceUnit& unit) const {
    write_json(unit.path, model::to_json(unit));
    return unit.path;
}

std::vector<model::SourceUnit> Workspace::load_units() const {
    std::vector<model::SourceUnit> units;
    fs::path src = fs::path(root_) / "src";
    if (!fs::exists(src)) {
        return units;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(src)) {
        if (entry.is_regular_file() && entry.path().string().ends_with(".unit.json")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        units.push_back(model::source_unit_from_json(load_json_file(file.string())));
    }
    return units;
}

std::string Workspace::persist_state_trace(const std::vector<std::string>& states) const {
    write_json("artifacts/state-trace.json", json{{"states", json(states)}});
    return "artifacts/state-trace.json";
}

std::vector<std::string> Workspace::state_trace() const {
    if (!exists("artifacts/state-trace.json")) {
        return {};
    }
    std::vector<std::string> states;
    for (const auto& s : read_json("artifacts/state-trace.json").at("states")) {
        states.push_back(s.get<std::string>());
    }
    return states;
}

std::string Workspace::persist_cases(const std::string& module_id,
                                     const std::vector<model::TestCase>& cases) const {
    json out = json::array();
    for (const auto& test_case : cases) {
        out.push_back(model::to_json(test_case));
    }
    std::string rel = "tests/" + module_id + "/cases.json";
    write_json(rel, out);
    return rel;
}

std::vector<model::TestCase> Workspace::load_all_cases() const {
    std::vector<model::TestCase> cases;
    fs::path tests = fs::path(root_) / "tests";
    if (!fs::exists(tests)) {
        return cases;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(tests)) {
        if (entry.is_regular_file() && entry.path().filename() == "cases.json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        for (const auto& c : load_json_file(file.string())) {
            cases.push_back(model::test_case_from_json(c));
        }
    }
    return cases;
}

}  // namespace appforge::workspace
