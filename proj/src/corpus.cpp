#include "hostqual/corpus.hpp"

#include <algorithm>
#include <cctype>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

Genre parse_genre(const std::string& token) {
    if (token == "spam") return Genre::Spam;
    if (token == "news") return Genre::NewsEditorial;
    if (token == "commercial") return Genre::Commercial;
    if (token == "education") return Genre::EducationalResearch;
    if (token == "discussion") return Genre::Discussion;
    if (token == "personal") return Genre::PersonalLeisure;
    if (token == "other") return Genre::Other;
    throw DataError("unknown genre token '" + token + "'");
}

const char* genre_token(Genre g) {
    switch (g) {
        case Genre::Spam: return "spam";
        case Genre::NewsEditorial: return "news";
        case Genre::Commercial: return "commercial";
        case Genre::EducationalResearch: return "education";
        case Genre::Discussion: return "discussion";
        case Genre::PersonalLeisure: return "personal";
        case Genre::Other: return "other";
    }
    throw InternalError("unhandled genre value");
}

HostId canonicalize_host(std::string_view raw) {
    if (raw.empty()) {
        throw DataError("empty host name");
    }
    HostId name(raw);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    // Strip leading "www." labels; "www2." and interior labels stay. Repeats
    // until none is left so the result is a fixed point of canonicalization.
    while (name.rfind("www.", 0) == 0 && name.size() > 4) {
        name.erase(0, 4);
    }
    return name;
}

int derive_quality_class(const FacetLabels& labels) {
    if (labels.genre == Genre::Spam) {
        return 0;
    }
    int score = 3;
    if (labels.genre == Genre::NewsEditorial || labels.genre == Genre::EducationalResearch) {
        score = 5;
    } else if (labels.genre == Genre::Discussion) {
        score = 4;
    }
    if (labels.facts_or_trust) score += 2;
    if (labels.bias) score -= 2;
    return std::clamp(score, 0, 9);
}

std::map<HostId, FacetLabels> merge_duplicates(
    const std::vector<std::pair<HostId, FacetLabels>>& records) {
    std::map<HostId, FacetLabels> merged;
    for (const auto& [host, labels] : records) {
        auto [it, inserted] = merged.emplace(host, labels);
        if (!inserted && !(it->second == labels)) {
            throw DataError("conflicting labels for host '" + host + "'");
        }
    }
    return merged;
}

std::map<HostId, FacetLabels> read_labels_tsv(const std::filesystem::path& path) {
    std::vector<std::pair<HostId, FacetLabels>> records;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != 4) {
            throw DataError(context + ": expected 4 fields, got " + std::to_string(f.size()));
        }
        FacetLabels labels;
        try {
            labels.genre = parse_genre(f[1]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        int64_t ft = parse_int(f[2], context);
        int64_t bias = parse_int(f[3], context);
        if ((ft != 0 && ft != 1) || (bias != 0 && bias != 1)) {
            throw DataError(context + ": facts_or_trust and bias must be 0 or 1");
        }
        labels.facts_or_trust = ft == 1;
        labels.bias = bias == 1;
        try {
            records.emplace_back(canonicalize_host(f[0]), labels);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
    });
    return merge_duplicates(records);
}

}  // namespace hostqual
