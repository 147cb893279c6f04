#pragma once
// Top-down temporal clustering of majors: one tree level per semester stage.
// Each open group is split into the connected components of its thresholded
// stage similarity graph.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecamp/affinity.hpp"
#include "ecamp/config.hpp"
#include "ecamp/records.hpp"

namespace ecamp {

// Dropout bar attached by the dropout module.
struct NodeDropout {
    bool attached = false;
    std::uint64_t graduates = 0;
    std::uint64_t dropouts = 0;
    std::optional<double> rate;        // dropouts / (dropouts + graduates)
    std::optional<double> confidence;  // average overlap; unset without attributed students
    double gray = 0.0;
    double red = 0.0;
    double opacity = 0.0;
};

struct MajorTreeNode {
    int id = 0;
    int stage = 0;  // 0 = root
    int parent = -1;
    std::vector<MajorIx> members;  // ascending
    std::vector<int> children;
    std::uint64_t population = 0;
    NodeDropout dropout;
};

struct MajorHierarchy {
    std::vector<MajorTreeNode> nodes;  // nodes[i].id == i, parents before children
    int root = 0;
    int stages = 8;
    std::vector<double> thetas;         // threshold used at stage t = thetas[t-1]
    std::vector<std::string> warnings;

    std::vector<int> leaves() const;
};

// Stage-t similarity over every catalog major, t = 1..stages.
std::vector<MajorSimilarityMatrix> stage_similarity_matrices(const EnrollmentCounts& counts,
                                                             const SemesterCourseSets& sets, int stages);

// Connected components of the graph with an edge wherever M >= theta * max
// off-diagonal entry. All-zero off-diagonals give singletons. Components are
// returned in order of their smallest member; members stay ascending.
std::vector<std::vector<MajorIx>> split_group(const MajorSimilarityMatrix& matrix, double theta);

std::uint64_t node_population(const RecordStore& store, std::span<const MajorIx> members);

MajorHierarchy build_hierarchy(const RecordStore& store, std::span<const MajorSimilarityMatrix> stage_matrices,
                               const HierarchyConfig& config);

// Groups of major codes at stage t: nodes of that stage plus singleton
// leaves that closed earlier. Sorted groups, sorted by first code.
using CodePartition = std::vector<std::vector<std::string>>;
CodePartition partition_at_stage(const MajorHierarchy& h, const RecordStore& store, int stage);
std::vector<CodePartition> partition_sequence(const MajorHierarchy& h, const RecordStore& store);

// Size of the symmetric difference between the cluster sets of two
// partition sequences (each distinct group counted once).
std::size_t robinson_foulds(std::span<const CodePartition> a, std::span<const CodePartition> b);

inline constexpr int kHierarchySchemaVersion = 1;
nlohmann::json hierarchy_json(const MajorHierarchy& h, const RecordStore& store);

} // namespace ecamp
