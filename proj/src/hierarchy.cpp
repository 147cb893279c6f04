#include <algorithm>
#include <numeric>
#include <set>

#include "ecamp/error.hpp"
#include "ecamp/hierarchy.hpp"
#include "ecamp/parallel.hpp"

namespace ecamp {

std::vector<int> MajorHierarchy::leaves() const {
    std::vector<int> out;
    for (const auto& n : nodes)
        if (n.children.empty()) out.push_back(n.id);
    return out;
}

std::vector<MajorSimilarityMatrix> stage_similarity_matrices(const EnrollmentCounts& counts,
                                                             const SemesterCourseSets& sets, int stages) {
    std::vector<MajorIx> all(counts.num_majors());
    std::iota(all.begin(), all.end(), 0);
    std::vector<MajorSimilarityMatrix> out(static_cast<std::size_t>(stages));
    parallel_for(out.size(), [&](std::size_t i) {
        const int t = static_cast<int>(i) + 1;
        const std::span<const CourseIx> set =
            i < sets.sets.size() ? std::span<const CourseIx>(sets.sets[i]) : std::span<const CourseIx>();
        out[i] = similarity_matrix(counts, all, set, t);
    });
    return out;
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

std::vector<std::vector<MajorIx>> split_group(const MajorSimilarityMatrix& matrix, double theta) {
    const std::size_t n = matrix.size();
    if (n < 2) throw ModelError("split_group needs at least two members");
    // Members ascending so component order and membership order follow codes.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return matrix.majors[a] < matrix.majors[b]; });

    double max_off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) max_off = std::max(max_off, matrix.at(i, j));

    std::vector<std::vector<MajorIx>> out;
    if (max_off <= 0.0) {
        for (auto i : order) out.push_back({matrix.majors[i]});
        return out;
    }
    const double cut = theta * max_off;
    DisjointSets ds(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (matrix.at(order[a], order[b]) >= cut || matrix.at(order[b], order[a]) >= cut) ds.unite(a, b);
    // Roots are the smallest position in each component, so first-seen order
    // is smallest-member order.
    std::vector<std::int64_t> slot(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
        const auto r = ds.find(a);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::int64_t>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[r])].push_back(matrix.majors[order[a]]);
    }
    return out;
}

std::uint64_t node_population(const RecordStore& store, std::span<const MajorIx> members) {
    std::uint64_t p = 0;
    for (MajorIx m : members) p += store.graduate_count(m);
    return p;
}

MajorHierarchy build_hierarchy(const RecordStore& store, std::span<const MajorSimilarityMatrix> stage_matrices,
                               const HierarchyConfig& config) {
    MajorHierarchy h;
    h.stages = config.stages;
    if (static_cast<int>(stage_matrices.size()) < config.stages)
        throw ModelError("missing stage similarity matrices");

    MajorTreeNode root;
    root.members.resize(store.num_majors());
    std::iota(root.members.begin(), root.members.end(), 0);
    root.population = node_population(store, root.members);
    h.nodes.push_back(std::move(root));

    auto add_child = [&](int parent, int stage, std::vector<MajorIx> members) {
        MajorTreeNode n;
        n.id = static_cast<int>(h.nodes.size());
        n.stage = stage;
        n.parent = parent;
        n.population = node_population(store, members);
        n.members = std::move(members);
        h.nodes[static_cast<std::size_t>(parent)].children.push_back(n.id);
        h.nodes.push_back(std::move(n));
        return h.nodes.back().id;
    };

    std::vector<int> open{h.root};
    if (store.num_majors() == 0) open.clear();
    for (int t = 1; t <= config.stages; ++t) {
        const auto& global = stage_matrices[static_cast<std::size_t>(t - 1)];
        const double theta = config.theta_for(t);
        h.thetas.push_back(theta);
        const bool empty_stage = global.course_count == 0;
        if (empty_stage && store.num_majors() > 1)
            h.warnings.push_back("stage " + std::to_string(t) + ": empty course sets, no splits");

        // Row of each major in the global matrix.
        std::vector<std::size_t> row(store.num_majors());
        for (std::size_t i = 0; i < global.majors.size(); ++i) row[global.majors[i]] = i;

        std::vector<int> next;
        for (int id : open) {
            const auto members = h.nodes[static_cast<std::size_t>(id)].members;
            std::vector<std::vector<MajorIx>> parts;
            if (members.size() < 2 || empty_stage) {
                parts.push_back(members);
            } else {
                std::vector<std::size_t> rows;
                for (MajorIx m : members) rows.push_back(row[m]);
                parts = split_group(global.restrict_to(rows), theta);
            }
            for (auto& part : parts) {
                const bool singleton = part.size() < 2;
                const int child = add_child(id, t, std::move(part));
                if (!singleton) next.push_back(child);
            }
        }
        open = std::move(next);
    }
    return h;
}

CodePartition partition_at_stage(const MajorHierarchy& h, const RecordStore& store, int stage) {
    CodePartition out;
    for (const auto& n : h.nodes) {
        const bool at_stage = n.stage == stage;
        const bool closed_before = n.stage < stage && n.stage > 0 && n.children.empty();
        if (!at_stage && !closed_before) continue;
        std::vector<std::string> codes;
        for (MajorIx m : n.members) codes.push_back(store.majors()[m].code);
        std::sort(codes.begin(), codes.end());
        out.push_back(std::move(codes));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CodePartition> partition_sequence(const MajorHierarchy& h, const RecordStore& store) {
    std::vector<CodePartition> out;
    for (int t = 1; t <= h.stages; ++t) out.push_back(partition_at_stage(h, store, t));
    return out;
}

std::size_t robinson_foulds(std::span<const CodePartition> a, std::span<const CodePartition> b) {
    auto clusters = [](std::span<const CodePartition> seq) {
        std::set<std::vector<std::string>> s;
        for (const auto& p : seq)
            for (auto g : p) {
                std::sort(g.begin(), g.end());
                s.insert(std::move(g));
            }
        return s;
    };
    const auto ca = clusters(a);
    const auto cb = clusters(b);
    std::size_t d = 0;
    for (const auto& g : ca) d += cb.count(g) ? 0 : 1;
    for (const auto& g : cb) d += ca.count(g) ? 0 : 1;
    return d;
}

nlohmann::json hierarchy_json(const MajorHierarchy& h, const RecordStore& store) {
    nlohmann::json j;
    j["schema_version"] = kHierarchySchemaVersion;
    j["stages"] = h.stages;
    j["thetas"] = h.thetas;
    auto nodes = nlohmann::json::array();
    for (const auto& n : h.nodes) {
        nlohmann::json node;
        node["id"] = n.id;
        node["stage"] = n.stage;
        node["parent"] = n.parent < 0 ? nlohmann::json(nullptr) : nlohmann::json(n.parent);
        auto members = nlohmann::json::array();
        for (MajorIx m : n.members) members.push_back(store.majors()[m].code);
        node["members"] = std::move(members);
        node["children"] = n.children;
        node["population"] = n.population;
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    j["warnings"] = h.warnings;
    return j;
}

} // namespace ecamp
