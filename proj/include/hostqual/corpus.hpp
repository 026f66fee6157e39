#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hostqual {

// Canonical host name: lowercase, single leading "www." label stripped.
using HostId = std::string;

enum class Genre {
    Spam,
    NewsEditorial,
    Commercial,
    EducationalResearch,
    Discussion,
    PersonalLeisure,
    Other,
};

// labels.tsv tokens, case-sensitive: spam, news, commercial, education,
// discussion, personal, other.
Genre parse_genre(const std::string& token);
const char* genre_token(Genre g);

struct FacetLabels {
    Genre genre = Genre::Other;
    bool facts_or_trust = false;
    bool bias = false;

    bool operator==(const FacetLabels&) const = default;
};

// Idempotent; throws DataError on an empty name.
HostId canonicalize_host(std::string_view raw);

// Spam is fixed at 0. Other genres start from their base score
// (news/editorial and educational/research 5, discussion 4, everything else
// 3), gain 2 for facts-or-trust, lose 2 for bias, clamped to [0,9].
int derive_quality_class(const FacetLabels& labels);

// One record per host; identical duplicates collapse, contradictory labels
// for the same host raise a DataError naming it.
std::map<HostId, FacetLabels> merge_duplicates(
    const std::vector<std::pair<HostId, FacetLabels>>& records);

// host<TAB>genre<TAB>facts_or_trust(0|1)<TAB>bias(0|1); hosts are
// canonicalized and merged on read.
std::map<HostId, FacetLabels> read_labels_tsv(const std::filesystem::path& path);

}  // namespace hostqual
