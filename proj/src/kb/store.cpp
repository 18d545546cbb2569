#include "appforge/kb/store.hpp"

#include <algorithm>
#include <filesystem>

#include "appforge/errors.hpp"

namespace appforge::kb {

namespace fs = std::filesystem;

json to_json(const KnowledgeDoc& doc) {
    return json{{"id", doc.id},
                {"corpus", doc.corpus},
                {"pillar", doc.pillar},
                {"keywords", json(doc.keywords)},
                {"body", doc.body}};
}

KnowledgeDoc doc_from_json(const json& j) {
    expect_fields(j, "knowledge doc", {"id", "corpus", "pillar", "keywords", "body"});
    KnowledgeDoc doc;
    doc.id = require_string(j, "knowledge doc", "id");
    doc.corpus = require_string(j, "knowledge doc", "corpus");
    doc.pillar = require_string(j, "knowledge doc", "pillar");
    for (const auto& kw : j.at("keywords")) {
        if (!kw.is_string()) {
            throw SchemaError("knowledge doc.keywords: expected strings");
        }
        doc.keywords.push_back(kw.get<std::string>());
    }
    doc.body = require_string(j, "knowledge doc", "body");
    return doc;
}

const std::map<std::string, std::vector<std::string>>& pillar_taxonomy() {
    static const std::map<std::string, std::vector<std::string>> taxonomy{
        {"srs-add", {"SRSs", "ADDs", "Standards"}},
        {"coding",
         {"Open Source Projects", "API Library", "Domain Experts", "Coding Standards",
          "Coding Tools"}},
        {"testing", {"Testing Projects", "Testing Criteria", "Testing Standards",
                     "Testing Tools"}},
    };
    return taxonomy;
}

bool valid_pillar(const std::string& corpus, const std::string& pillar) {
    const auto& taxonomy = pillar_taxonomy();
    auto it = taxonomy.find(corpus);
    if (it == taxonomy.end()) {
        return false;
    }
    return std::find(it->second.begin(), it->second.end(), pillar) != it->second.end();
}

std::string Store::ingest(KnowledgeDoc doc) {
    if (!valid_pillar(doc.corpus, doc.pillar)) {
        throw PillarError("pillar '" + doc.pillar + "' not valid for corpus '" + doc.corpus +
                          "'");
    }
    std::string id = doc.id;
    docs_[id] = std::move(doc);
    return id;
}

std::vector<KnowledgeDoc> Store::query(const std::string& corpus, const std::string& pillar,
                                       const std::set<std::string>& keywords, int k) const {
    if (k < 1) {
        throw SchemaError("query: k must be >= 1");
    }
    std::vector<std::pair<int, const KnowledgeDoc*>> scored;
    for (const auto& [id, doc] : docs_) {
        if (doc.corpus != corpus) {
            continue;
        }
        if (!pillar.empty() && doc.pillar != pillar) {
            continue;
        }
        int overlap = 0;
        for (const auto& kw : doc.keywords) {
            if (keywords.count(kw) > 0) {
                ++overlap;
            }
        }
        if (overlap > 0 || keywords.empty()) {
            scored.emplace_back(overlap, &doc);
        }
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) {
            return a.first > b.first;
        }
        return a.second->id < b.second->id;
    });
    std::vector<KnowledgeDoc> out;
    for (const auto& [overlap, doc] : scored) {
        if (static_cast<int>(out.size()) >= k) {
            break;
        }
        out.push_back(*doc);
    }
    return out;
}

const KnowledgeDoc* Store::find(const std::string& id) const {
    auto it = docs_.find(id);
    return it == docs_.end() ? nullptr : &it->second;
}

Store Store::load_pack(const std::string& directory) {
    Store store;
    if (!fs::exists(directory)) {
        throw NotFoundError("knowledge pack directory not found: " + directory);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        store.ingest(doc_from_json(load_json_file(file.string())));
    }
    return store;
}

}  // namespace appforge::kb
