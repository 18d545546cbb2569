#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "appforge/json_util.hpp"

namespace appforge::kb {

/// One knowledge document. Corpus/pillar pairs are restricted to the
/// fixed taxonomy; keywords are lowercase tokens used for overlap scoring.
struct KnowledgeDoc {
    std::string id;
    std::string corpus;  // srs-add | coding | testing
    std::string pillar;
    std::vector<std::string> keywords;
    std::string body;
};

json to_json(const KnowledgeDoc& doc);
KnowledgeDoc doc_from_json(const json& j);

bool valid_pillar(const std::string& corpus, const std::string& pillar);
const std::map<std::string, std::vector<std::string>>& pillar_taxonomy();

/// In-memory store with exact token-overlap retrieval. Query results are
/// ranked by descending overlap, ties broken by ascending doc id, and are
/// always a prefix of the full overlap-sorted list.
class Store {
public:
    /// Adds or replaces a document (same id wins last).
    /// Throws PillarError on an invalid corpus/pillar pair.
    std::string ingest(KnowledgeDoc doc);

    /// Top-k documents of `corpus` (and `pillar`, when non-empty) scored by
    /// keyword overlap. An empty keyword set matches every document with
    /// score zero so a whole pillar can be listed.
    std::vector<KnowledgeDoc> query(const std::string& corpus, const std::string& pillar,
                                    const std::set<std::string>& keywords, int k) const;

    const KnowledgeDoc* find(const std::string& id) const;
    size_t size() const { return docs_.size(); }

    /// Loads every *.json document in a pack directory.
    static Store load_pack(const std::string& directory);

private:
    std::map<std::string, KnowledgeDoc> docs_;
};

}  // namespace appforge::kb
