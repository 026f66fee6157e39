#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hostqual/corpus.hpp"

namespace hostqual {

// Hosts x named numeric features; rows[i] belongs to hosts[i].
struct FeatureMatrix {
    std::vector<HostId> hosts;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    size_t width() const { return columns.size(); }
};

// Header row carries the column names; data rows are host + values. Hosts
// are canonicalized and sorted on read; a duplicate host is an error.
FeatureMatrix read_feature_tsv(const std::filesystem::path& path);
void write_feature_tsv(const FeatureMatrix& m, const std::filesystem::path& path);

// Feature blocks: page-level link (L), host-level link (H), content
// statistics (C), TFIDF (T). Fusion always concatenates in this order.
enum class Block : int { L = 0, H = 1, C = 2, T = 3 };
const char* block_tag(Block b);

struct FusionSpec {
    std::array<bool, 4> use{};

    // Accepts any ordering of the letters L/H/C/T, e.g. "H", "HCT", "TH".
    static FusionSpec parse(const std::string& s);
    std::string to_string() const;
    bool uses(Block b) const { return use[static_cast<int>(b)]; }
};

// Column-wise concatenation of the enabled blocks in canonical order, column
// names prefixed with "<tag>:". All blocks must cover the same host set;
// mismatches raise a DataError listing offending hosts.
FeatureMatrix fuse(const std::vector<std::pair<Block, const FeatureMatrix*>>& blocks,
                   const FusionSpec& spec);

}  // namespace hostqual
