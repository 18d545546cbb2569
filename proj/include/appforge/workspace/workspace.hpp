#pragma once

#include <optional>
#include <string>
#include <vector>

#include "appforge/model/serialize.hpp"

namespace appforge::workspace {

/// Exclusive-writer guard: creates `.appforge.lock` on acquisition and
/// removes it on destruction. A second writer gets LockError.
class Lock {
public:
    explicit Lock(const std::string& root);
    ~Lock();
    Lock(const Lock&) = delete;
    Lock& operator=(const Lock&) = delete;

private:
    std::string path_;
};

/// On-disk project layout:
///   inputs/        srs.json, add.json (stored verbatim)
///   artifacts/     plans, logs, reports, events, improvement log, traces
///   src/           generated source units
///   tests/         generated case files
///   audit/         queue.json
/// Plans and ordinal-numbered artifacts are append-only; current-state
/// artifacts (structure, manifest, matrix, traces) may be rewritten.
class Workspace {
public:
    /// Creates the layout under `root` and stores the input documents
    /// byte-for-byte. The root must be empty or absent; with `force` an
    /// existing tree is moved into archive/ first.
    static Workspace init(const std::string& root, const std::string& srs_text,
                          const std::string& add_text, bool force = false);

    /// Opens an existing workspace; NotFoundError if the layout is absent.
    static Workspace open(const std::string& root);

    const std::string& root() const { return root_; }
    std::string absolute(const std::string& rel_path) const;
    bool exists(const std::string& rel_path) const;
    void remove(const std::string& rel_path) const;

    json read_json(const std::string& rel_path) const;
    void write_json(const std::string& rel_path, const json& value) const;

    std::vector<model::RequirementItem> srs() const;
    std::vector<model::ArchElement> add() const;

    // Append-only, versioned: ConflictError on rewrite attempts.
    std::string persist_plan(const model::CodePlan& plan) const;
    model::CodePlan load_plan(int version) const;
    int latest_plan_version() const;

    std::string persist_compile_log(const model::CompilationLog& log) const;
    model::CompilationLog load_compile_log(int ordinal) const;
    std::vector<model::CompilationLog> load_compile_logs() const;

    std::string persist_report(const model::TestReport& report) const;
    model::TestReport load_report(int ordinal) const;
    int latest_report_ordinal() const;

    std::string persist_event(const model::FeedbackEvent& event, int ordinal) const;
    model::FeedbackEvent load_event(int ordinal) const;

    /// Appends to artifacts/improvement-log.json, assigning the next
    /// ordinal. The trigger artifact must exist.
    model::ImprovementRecord record_improvement(model::ImprovementRecord record) const;
    std::vector<model::ImprovementRecord> improvements() const;

    // Current-state artifacts.
    std::string persist_structure(const model::ProjectStructure& structure) const;
    std::optional<model::ProjectStructure> load_structure() const;
    std::string persist_manifest(const model::ApiManifest& manifest) const;
    std::optional<model::ApiManifest> load_manifest() const;
    std::string persist_matrix(const model::TraceabilityMatrix& matrix) const;
    std::optional<model::TraceabilityMatrix> load_matrix() const;

    std::string persist_unit(const model::SourceUnit& unit) const;
    std::vector<model::SourceUnit> load_units() const;

    std::string persist_state_trace(const std::vector<std::string>& states) const;
    std::vector<std::string> state_trace() const;

    std::string persist_cases(const std::string& module_id,
                              const std::vector<model::TestCase>& cases) const;
    std::vector<model::TestCase> load_all_cases() const;

private:
    explicit Workspace(std::string root) : root_(std::move(root)) {}

    std::string root_;
};

}  // namespace appforge::workspace
