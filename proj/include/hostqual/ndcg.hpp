#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "hostqual/corpus.hpp"

namespace hostqual {

enum class GainKind { Exp, Linear };

GainKind parse_gain_kind(const std::string& token);

// Discounted cumulative gain of grades in ranked order:
// sum over ranks r of gain(rel_r) / log2(r + 1), where gain is 2^rel - 1
// (Exp) or rel (Linear). cutoff 0 means no cutoff.
double dcg(std::span<const double> grades, GainKind gain = GainKind::Exp, int cutoff = 0);

// dcg / ideal dcg, where the ideal sorts grades descending. 1.0 when the
// ideal DCG is 0 (all grades zero).
double ndcg(std::span<const double> grades, GainKind gain = GainKind::Exp, int cutoff = 0);

// host<TAB>grade, grades nonnegative.
std::map<HostId, double> read_qrels_tsv(const std::filesystem::path& path);

// Grades for a predicted host order. Judged hosts missing from the
// prediction are appended in name order (penalizing omission); predicted
// hosts without a judgment score 0.
std::vector<double> align_grades(const std::vector<HostId>& ranked,
                                 const std::map<HostId, double>& qrels);

}  // namespace hostqual
