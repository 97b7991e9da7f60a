#include "cbrgda/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cbrgda/errors.hpp"

namespace cbrgda {

namespace {

// splitmix64-style avalanche; stable across platforms.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_gram(const std::string& text, std::size_t pos, std::size_t len,
                        std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ mix64(seed);
    for (std::size_t i = pos; i < pos + len; ++i) {
        h ^= static_cast<unsigned char>(text[i]);
        h *= 1099511628211ULL;
    }
    return mix64(h);
}

}  // namespace

void EmbedderConfig::validate() const {
    require(dim >= 2, Errc::invalid_config, "embedder dim must be >= 2");
    require(ngram >= 1, Errc::invalid_config, "embedder ngram must be >= 1");
}

std::string EmbedderConfig::digest() const {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ dim);
    h = mix64(h ^ ngram);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Vector embed(const std::string& text, const EmbedderConfig& cfg) {
    cfg.validate();
    Vector v(cfg.dim, 0.0);
    if (text.empty()) return v;
    for (std::size_t i = 0; i < text.size(); ++i) {
        std::size_t len = std::min(cfg.ngram, text.size() - i);
        std::uint64_t h = hash_gram(text, i, len, cfg.seed);
        std::size_t bucket = static_cast<std::size_t>(h % cfg.dim);
        double sign = ((h >> 63) & 1) ? -1.0 : 1.0;
        v[bucket] += sign;
    }
    double norm = l2_norm(v);
    if (norm == 0.0) {
        // Sign cancellation wiped every bucket; fall back to a single
        // deterministic bucket so non-empty text is always unit norm.
        v[hash_gram(text, 0, text.size(), cfg.seed) % cfg.dim] = 1.0;
        return v;
    }
    for (double& x : v) x /= norm;
    return v;
}

Vector embed_problem(const FeatureMap& problem, const EmbedderConfig& cfg) {
    return embed(format_feature_map(problem), cfg);
}

Vector embed_case(const Case& c, const EmbedderConfig& cfg) {
    return embed_problem(c.problem, cfg);
}

double l2_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double cosine(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), Errc::dim_mismatch,
            "cosine over dims " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    double na = l2_norm(a), nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

}  // namespace cbrgda
