#pragma once

#include <cstdint>
#include <filesystem>

namespace hostqual {

// Desk-scale corpus with a planted class signal of strength s in [0,1]:
// at s=1 link volume, term usage, and the opaque feature blocks all track
// the latent quality class; at s=0 everything is class-independent noise.
struct SynthParams {
    int n_hosts = 200;
    double signal = 1.0;
    uint64_t seed = 0;
};

// Writes labels.tsv, edges.tsv, termfreq.tsv, qrels.tsv, domainpr.tsv,
// lfeat.tsv, cfeat.tsv, an even/odd train/test split, and a ready-to-run
// run.cfg into outdir. Regenerating with the same parameters is
// byte-identical.
void gen_synthetic(const SynthParams& p, const std::filesystem::path& outdir);

}  // namespace hostqual
