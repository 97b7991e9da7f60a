#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbrgda/case.hpp"

namespace cbrgda {

using Vector = std::vector<double>;

// Deterministic stand-in for a learned text embedder: character n-grams are
// feature-hashed into `dim` signed buckets, then L2-normalized. Swappable —
// anything that maps text to a fixed-dim vector can sit behind the same
// library file as long as the config digest matches.
struct EmbedderConfig {
    std::size_t dim = 256;
    std::size_t ngram = 3;
    std::uint64_t seed = 1;

    void validate() const;
    // Stable digest; libraries built under different embedder configs are
    // not comparable and refuse to load.
    std::string digest() const;
};

// Unit-norm for any non-empty text, zero vector for empty text.
Vector embed(const std::string& text, const EmbedderConfig& cfg);

// Embeds the canonical serialization of the problem component only.
Vector embed_case(const Case& c, const EmbedderConfig& cfg);
Vector embed_problem(const FeatureMap& problem, const EmbedderConfig& cfg);

// In [-1,1]; 0 when either operand has zero norm. Throws DimMismatch.
double cosine(const Vector& a, const Vector& b);

double l2_norm(const Vector& v);

}  // namespace cbrgda
