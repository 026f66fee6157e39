#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace hostqual {

// Iterates the tab-separated rows of a file, skipping blank lines and lines
// starting with '#'. The callback receives the fields and the 1-based line
// number for error context. Trailing '\r' is stripped.
void for_each_tsv_row(
    const std::filesystem::path& path,
    const std::function<void(const std::vector<std::string>&, size_t)>& fn);

// Strict numeric parsing; `context` (e.g. "labels.tsv:12") prefixes the error.
int64_t parse_int(const std::string& s, const std::string& context);
double parse_double(const std::string& s, const std::string& context);

// Full round-trip precision for doubles (17 significant digits).
std::string format_double(double v);

// Writes to a sibling temp file and renames it into place, so the target
// path never holds a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace hostqual
