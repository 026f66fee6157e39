#include "hostqual/featmat.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

FeatureMatrix read_feature_tsv(const std::filesystem::path& path) {
    FeatureMatrix m;
    bool have_header = false;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (!have_header) {
            m.columns = f;
            have_header = true;
            return;
        }
        if (f.size() != m.columns.size() + 1) {
            throw DataError(context + ": expected " + std::to_string(m.columns.size() + 1) +
                            " fields, got " + std::to_string(f.size()));
        }
        std::vector<double> row(m.columns.size());
        for (size_t i = 0; i < row.size(); ++i) {
            row[i] = parse_double(f[i + 1], context);
        }
        try {
            m.hosts.push_back(canonicalize_host(f[0]));
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        m.rows.push_back(std::move(row));
    });
    if (!have_header) {
        throw DataError(path.string() + ": missing header row");
    }
    // Sort rows by host for a canonical layout.
    std::vector<size_t> order(m.hosts.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return m.hosts[a] < m.hosts[b]; });
    FeatureMatrix sorted;
    sorted.columns = std::move(m.columns);
    sorted.hosts.reserve(m.hosts.size());
    sorted.rows.reserve(m.rows.size());
    for (size_t idx : order) {
        if (!sorted.hosts.empty() && sorted.hosts.back() == m.hosts[idx]) {
            throw DataError(path.string() + ": duplicate host '" + m.hosts[idx] + "'");
        }
        sorted.hosts.push_back(std::move(m.hosts[idx]));
        sorted.rows.push_back(std::move(m.rows[idx]));
    }
    return sorted;
}

void write_feature_tsv(const FeatureMatrix& m, const std::filesystem::path& path) {
    std::ostringstream out;
    for (size_t c = 0; c < m.columns.size(); ++c) {
        out << (c ? "\t" : "") << m.columns[c];
    }
    out << '\n';
    for (size_t i = 0; i < m.hosts.size(); ++i) {
        out << m.hosts[i];
        for (double v : m.rows[i]) {
            out << '\t' << format_double(v);
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

const char* block_tag(Block b) {
    switch (b) {
        case Block::L: return "L";
        case Block::H: return "H";
        case Block::C: return "C";
        case Block::T: return "T";
    }
    throw InternalError("unhandled block");
}

FusionSpec FusionSpec::parse(const std::string& s) {
    FusionSpec spec;
    if (s.empty()) {
        throw ConfigError("fusion spec is empty");
    }
    for (char raw : s) {
        switch (std::toupper(static_cast<unsigned char>(raw))) {
            case 'L': spec.use[0] = true; break;
            case 'H': spec.use[1] = true; break;
            case 'C': spec.use[2] = true; break;
            case 'T': spec.use[3] = true; break;
            default:
                throw ConfigError(std::string("bad fusion block '") + raw +
                                  "' (expected letters from LHCT)");
        }
    }
    return spec;
}

std::string FusionSpec::to_string() const {
    std::string s;
    for (int b = 0; b < 4; ++b) {
        if (use[b]) {
            s += block_tag(static_cast<Block>(b));
        }
    }
    return s;
}

FeatureMatrix fuse(const std::vector<std::pair<Block, const FeatureMatrix*>>& blocks,
                   const FusionSpec& spec) {
    // Gather the enabled blocks in canonical L,H,C,T order.
    std::array<const FeatureMatrix*, 4> slot{};
    for (const auto& [block, matrix] : blocks) {
        slot[static_cast<int>(block)] = matrix;
    }
    std::vector<std::pair<Block, const FeatureMatrix*>> enabled;
    for (int b = 0; b < 4; ++b) {
        if (!spec.use[b]) {
            continue;
        }
        if (!slot[b]) {
            throw ConfigError(std::string("fusion block ") + block_tag(static_cast<Block>(b)) +
                              " requested but not provided");
        }
        enabled.emplace_back(static_cast<Block>(b), slot[b]);
    }
    if (enabled.empty()) {
        throw ConfigError("fusion spec selects no blocks");
    }

    const FeatureMatrix& first = *enabled.front().second;
    for (const auto& [block, matrix] : enabled) {
        if (matrix->hosts == first.hosts) {
            continue;
        }
        std::vector<HostId> diff;
        std::set_symmetric_difference(matrix->hosts.begin(), matrix->hosts.end(),
                                      first.hosts.begin(), first.hosts.end(),
                                      std::back_inserter(diff));
        std::string msg = std::string("host sets differ between blocks ") +
                          block_tag(enabled.front().first) + " and " + block_tag(block) + ":";
        for (size_t i = 0; i < diff.size() && i < 10; ++i) {
            msg += " " + diff[i];
        }
        if (diff.size() > 10) {
            msg += " (+" + std::to_string(diff.size() - 10) + " more)";
        }
        throw DataError(msg);
    }

    FeatureMatrix fused;
    fused.hosts = first.hosts;
    size_t total_width = 0;
    for (const auto& [block, matrix] : enabled) {
        total_width += matrix->width();
        for (const auto& name : matrix->columns) {
            fused.columns.push_back(std::string(block_tag(block)) + ":" + name);
        }
    }
    fused.rows.resize(fused.hosts.size());
    for (size_t i = 0; i < fused.hosts.size(); ++i) {
        auto& row = fused.rows[i];
        row.reserve(total_width);
        for (const auto& [block, matrix] : enabled) {
            const auto& src = matrix->rows[i];
            row.insert(row.end(), src.begin(), src.end());
        }
    }
    return fused;
}

}  // namespace hostqual
