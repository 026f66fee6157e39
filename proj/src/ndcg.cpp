#include "hostqual/ndcg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

GainKind parse_gain_kind(const std::string& token) {
    if (token == "exp") return GainKind::Exp;
    if (token == "linear") return GainKind::Linear;
    throw ConfigError("gain must be 'exp' or 'linear', got '" + token + "'");
}

double dcg(std::span<const double> grades, GainKind gain, int cutoff) {
    size_t limit = grades.size();
    if (cutoff > 0) {
        limit = std::min(limit, static_cast<size_t>(cutoff));
    }
    double total = 0.0;
    for (size_t r = 0; r < limit; ++r) {
        double rel = grades[r];
        if (rel < 0) {
            throw DataError("relevance grades must be >= 0");
        }
        double g = gain == GainKind::Exp ? std::exp2(rel) - 1.0 : rel;
        total += g / std::log2(static_cast<double>(r) + 2.0);
    }
    return total;
}

double ndcg(std::span<const double> grades, GainKind gain, int cutoff) {
    if (grades.empty()) {
        throw DataError("ndcg needs a nonempty ranking");
    }
    std::vector<double> ideal(grades.begin(), grades.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double ideal_dcg = dcg(ideal, gain, cutoff);
    if (ideal_dcg == 0.0) {
        return 1.0;  // all grades zero: any order is ideal
    }
    return dcg(grades, gain, cutoff) / ideal_dcg;
}

std::map<HostId, double> read_qrels_tsv(const std::filesystem::path& path) {
    std::map<HostId, double> qrels;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != 2) {
            throw DataError(context + ": expected 2 fields, got " + std::to_string(f.size()));
        }
        double grade = parse_double(f[1], context);
        if (grade < 0 || !std::isfinite(grade)) {
            throw DataError(context + ": grade must be finite and >= 0");
        }
        HostId host;
        try {
            host = canonicalize_host(f[0]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        auto [it, inserted] = qrels.emplace(host, grade);
        if (!inserted && it->second != grade) {
            throw DataError(context + ": conflicting grades for host '" + host + "'");
        }
    });
    return qrels;
}

std::vector<double> align_grades(const std::vector<HostId>& ranked,
                                 const std::map<HostId, double>& qrels) {
    std::vector<double> grades;
    grades.reserve(qrels.size());
    std::set<HostId> seen;
    for (const auto& host : ranked) {
        if (!seen.insert(host).second) {
            throw DataError("duplicate host '" + host + "' in ranking");
        }
        auto it = qrels.find(host);
        grades.push_back(it == qrels.end() ? 0.0 : it->second);
    }
    // qrels is name-ordered, so omitted judged hosts append in name order.
    for (const auto& [host, grade] : qrels) {
        if (!seen.count(host)) {
            grades.push_back(grade);
        }
    }
    return grades;
}

}  // namespace hostqual
