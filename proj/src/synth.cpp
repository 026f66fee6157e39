#include "hostqual/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

namespace {

// Raw engine output only; std distributions are not byte-stable across
// implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Irwin-Hall(4) centered at 0, range [-2,2], roughly normal.
double noise(std::mt19937_64& rng) {
    return uniform01(rng) + uniform01(rng) + uniform01(rng) + uniform01(rng) - 2.0;
}

size_t pick_weighted(std::mt19937_64& rng, const std::vector<double>& weights,
                     double total) {
    double target = uniform01(rng) * total;
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) {
            return i;
        }
    }
    return weights.size() - 1;
}

std::string host_name(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "s%04d.d%04d.net", i, i / 2);
    return buf;
}

std::string domain_name(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "d%04d.net", i);
    return buf;
}

}  // namespace

void gen_synthetic(const SynthParams& p, const std::filesystem::path& outdir) {
    if (p.n_hosts < 20) {
        throw ConfigError("synthetic corpus needs at least 20 hosts");
    }
    if (p.signal < 0.0 || p.signal > 1.0) {
        throw ConfigError("signal strength must lie in [0, 1]");
    }
    std::filesystem::create_directories(outdir);

    const int n = p.n_hosts;
    const double s = p.signal;
    std::mt19937_64 rng(p.seed);

    // Latent quality classes and the facet labels that produce them.
    static const int kClasses[] = {0, 3, 4, 5, 7};
    static const char* kLabelRow[] = {
        "spam\t0\t0",        // class 0
        "commercial\t0\t0",  // class 3
        "discussion\t0\t0",  // class 4
        "education\t0\t0",   // class 5
        "news\t1\t0",        // class 7: news base 5 + facts/trust bonus
    };
    std::vector<int> class_of(n);
    std::vector<int> class_idx(n);
    for (int i = 0; i < n; ++i) {
        class_idx[i] = static_cast<int>(rng() % 5);
        class_of[i] = kClasses[class_idx[i]];
    }

    {
        std::ostringstream out;
        for (int i = 0; i < n; ++i) {
            out << host_name(i) << '\t' << kLabelRow[class_idx[i]] << '\n';
        }
        write_file_atomic(outdir / "labels.tsv", out.str());
    }
    {
        std::ostringstream out;
        for (int i = 0; i < n; ++i) {
            out << host_name(i) << '\t' << class_of[i] << '\n';
        }
        write_file_atomic(outdir / "qrels.tsv", out.str());
    }
    {
        std::ostringstream train, test;
        for (int i = 0; i < n; ++i) {
            (i % 2 == 0 ? train : test) << host_name(i) << '\n';
        }
        write_file_atomic(outdir / "train.txt", train.str());
        write_file_atomic(outdir / "test.txt", test.str());
    }

    // Host graph: targets drawn by an attractiveness that interpolates
    // between pure preferential attachment (s=0) and pure class quality
    // (s=1); hyperlink multiplicity also tracks the target class at s=1.
    {
        std::vector<double> indeg(n, 0.0);
        std::vector<double> attract(n);
        std::map<std::pair<int, int>, int64_t> counts;
        for (int src = 0; src < n; ++src) {
            double total = 0.0;
            for (int v = 0; v < n; ++v) {
                double quality = (1.0 + class_of[v]) * (1.0 + class_of[v]) *
                                 (1.0 + class_of[v]);
                attract[v] = (1.0 - s) * (indeg[v] + 1.0) + s * quality;
                total += attract[v];
            }
            int out_degree = 4 + static_cast<int>(rng() % 5);
            for (int e = 0; e < out_degree; ++e) {
                int dst = static_cast<int>(pick_weighted(rng, attract, total));
                if (dst == src) {
                    continue;
                }
                int64_t count = 1;
                if (uniform01(rng) < s) {
                    count += static_cast<int64_t>(rng() % (1 + class_of[dst]));
                } else {
                    count += static_cast<int64_t>(rng() % 2);
                }
                counts[{src, dst}] += count;
                indeg[dst] += 1.0;
            }
        }
        std::ostringstream out;
        for (const auto& [key, count] : counts) {
            out << host_name(key.first) << '\t' << host_name(key.second) << '\t'
                << count << '\n';
        }
        write_file_atomic(outdir / "edges.tsv", out.str());
    }

    // Terms: 8 indicator terms per class plus a shared noise vocabulary.
    // Each token is class-indicative with probability 0.7*s.
    {
        const int kIndicatorsPerClass = 8;
        const int kNoiseTerms = 600;
        std::ostringstream out;
        std::map<std::string, int64_t> counts;
        for (int i = 0; i < n; ++i) {
            counts.clear();
            int tokens = 40 + static_cast<int>(rng() % 40);
            for (int t = 0; t < tokens; ++t) {
                char term[32];
                if (uniform01(rng) < 0.7 * s) {
                    std::snprintf(term, sizeof(term), "kw%dx%d", class_of[i],
                                  static_cast<int>(rng() % kIndicatorsPerClass));
                } else {
                    std::snprintf(term, sizeof(term), "n%04d",
                                  static_cast<int>(rng() % kNoiseTerms));
                }
                ++counts[term];
            }
            for (const auto& [term, count] : counts) {
                out << host_name(i) << '\t' << term << '\t' << count << '\n';
            }
        }
        write_file_atomic(outdir / "termfreq.tsv", out.str());
    }

    // DomainPR table: one entry per two-host domain.
    {
        std::ostringstream out;
        for (int d = 0; d * 2 < n; ++d) {
            double mean_class = class_of[d * 2];
            int members = 1;
            if (d * 2 + 1 < n) {
                mean_class += class_of[d * 2 + 1];
                members = 2;
            }
            mean_class /= members;
            double value = s * mean_class + 0.5 * uniform01(rng);
            out << domain_name(d) << '\t' << format_double(value) << '\n';
        }
        write_file_atomic(outdir / "domainpr.tsv", out.str());
    }

    // Opaque page-level link (L) and content (C) blocks: noisy class
    // functions at strength s.
    auto write_block = [&](const char* path, const char* prefix, int width,
                           const double* slope, const double* jitter) {
        std::ostringstream out;
        for (int c = 0; c < width; ++c) {
            out << (c ? "\t" : "") << prefix << c;
        }
        out << '\n';
        for (int i = 0; i < n; ++i) {
            out << host_name(i);
            for (int c = 0; c < width; ++c) {
                double v = s * slope[c] * class_of[i] + jitter[c] * noise(rng);
                out << '\t' << format_double(v);
            }
            out << '\n';
        }
        write_file_atomic(outdir / path, out.str());
    };
    {
        static const double slope[] = {0.8, 0.5, 1.2, 0.3, 1.0};
        static const double jitter[] = {0.6, 0.9, 0.7, 1.1, 0.5};
        write_block("lfeat.tsv", "pl", 5, slope, jitter);
    }
    {
        static const double slope[] = {0.6, 1.1, 0.4, 0.9, 0.2, 0.7};
        static const double jitter[] = {0.8, 0.5, 1.0, 0.6, 1.2, 0.9};
        write_block("cfeat.tsv", "cs", 6, slope, jitter);
    }

    {
        std::ostringstream out;
        out << "# synthetic corpus: n=" << n << " signal=" << format_double(s)
            << " seed=" << p.seed << '\n';
        out << "labels=labels.tsv\n";
        out << "edges=edges.tsv\n";
        out << "termfreq=termfreq.tsv\n";
        out << "domainpr=domainpr.tsv\n";
        out << "lfeat=lfeat.tsv\n";
        out << "cfeat=cfeat.tsv\n";
        out << "train=train.txt\n";
        out << "test=test.txt\n";
        out << "qrels=qrels.tsv\n";
        out << "outdir=out\n";
        out << "fusion=LHCT\n";
        out << "n-trees=90\n";
        out << "k=500\n";
        out << "seed=" << p.seed << '\n';
        write_file_atomic(outdir / "run.cfg", out.str());
    }
}

}  // namespace hostqual
