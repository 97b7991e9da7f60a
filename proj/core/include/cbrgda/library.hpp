#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbrgda/case.hpp"
#include "cbrgda/embed.hpp"

namespace cbrgda {

// Inverted index: (feature-name, canonical value text) -> sorted case ids.
using FeatureIndex = std::map<std::pair<std::string, std::string>, std::vector<std::string>>;

struct Cluster {
    Vector leader;  // embedding of the first-inserted member
    std::vector<std::string> member_ids;
};

struct ClusterHierarchy {
    std::vector<Cluster> clusters;
};

// Indexed case collection: cases in insertion order, their problem
// embeddings, the feature inverted index, and a single-level greedy leader
// clustering. Mutations need exclusive access; lookups are const.
class CaseLibrary {
public:
    explicit CaseLibrary(EmbedderConfig embedder = {}, double cluster_threshold = 0.7);

    // Embeds, posts every feature pair, and assigns the case to the first
    // cluster whose leader cosine clears the threshold (else founds one).
    // Throws DuplicateId.
    void index_case(const Case& c);

    // Rebuilds the hierarchy in insertion order under a new threshold.
    const ClusterHierarchy& organize(double threshold);

    std::size_t size() const { return cases_.size(); }
    bool empty() const { return cases_.empty(); }
    bool contains(const std::string& id) const { return by_id_.count(id) > 0; }

    const Case& case_at(std::size_t i) const { return cases_[i]; }
    const Vector& embedding_at(std::size_t i) const { return embeddings_[i]; }
    const Case& case_by_id(const std::string& id) const;

    const std::vector<Case>& cases() const { return cases_; }
    const FeatureIndex& feature_index() const { return index_; }
    const ClusterHierarchy& hierarchy() const { return hierarchy_; }
    const EmbedderConfig& embedder() const { return embedder_; }
    double cluster_threshold() const { return cluster_threshold_; }

    // Ids posted under one (name, value) pair; empty when unseen.
    std::vector<std::string> lookup_feature(const std::string& name, const FeatureValue& value) const;

private:
    void assign_to_cluster(std::size_t case_index);

    EmbedderConfig embedder_;
    double cluster_threshold_;
    std::vector<Case> cases_;
    std::vector<Vector> embeddings_;
    std::map<std::string, std::size_t> by_id_;
    FeatureIndex index_;
    ClusterHierarchy hierarchy_;
};

}  // namespace cbrgda
