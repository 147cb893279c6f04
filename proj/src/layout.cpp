#include <algorithm>
#include <cmath>
#include <numbers>

#include "ecamp/error.hpp"
#include "ecamp/layout.hpp"

namespace ecamp {

double ribbon_width(std::uint64_t population, const LayoutConfig& config) {
    return config.w_min + config.w_scale * std::log10(static_cast<double>(std::max<std::uint64_t>(population, 1)));
}

RadialScene layout_radial(const MajorHierarchy& h, const LayoutConfig& config) {
    RadialScene scene;
    const std::size_t n = h.nodes.size();
    scene.nodes.resize(n);
    if (n == 0) return scene;

    auto ordered_children = [&](const MajorTreeNode& node) {
        std::vector<int> kids = node.children;
        std::stable_sort(kids.begin(), kids.end(), [&](int a, int b) {
            const auto& na = h.nodes[static_cast<std::size_t>(a)];
            const auto& nb = h.nodes[static_cast<std::size_t>(b)];
            if (na.population != nb.population) return na.population > nb.population;
            return na.members.front() < nb.members.front();
        });
        return kids;
    };

    // Iterative preorder; children pushed in reverse so they pop in order.
    std::vector<int> preorder;
    std::vector<int> stack{h.root};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        preorder.push_back(id);
        const auto kids = ordered_children(h.nodes[static_cast<std::size_t>(id)]);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
        for (int k : kids) scene.ribbons.push_back({id, k, ribbon_width(h.nodes[static_cast<std::size_t>(k)].population, config)});
        if (kids.empty()) scene.leaf_order.push_back(id);
    }

    const double step = 2.0 * std::numbers::pi / static_cast<double>(scene.leaf_order.size());
    for (std::size_t i = 0; i < scene.leaf_order.size(); ++i)
        scene.nodes[static_cast<std::size_t>(scene.leaf_order[i])].angle = (static_cast<double>(i) + 0.5) * step;

    // Children appear after their parent in preorder, so a reverse sweep
    // finalizes every child before its parent.
    for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
        const auto& node = h.nodes[static_cast<std::size_t>(*it)];
        auto& out = scene.nodes[static_cast<std::size_t>(*it)];
        out.id = node.id;
        const bool leaf = node.children.empty();
        out.radius = config.ring_step *
                     (leaf && config.leaf_radius == LeafRadiusMode::Outer ? h.stages : node.stage);
        if (leaf) continue;
        double wsum = 0.0, asum = 0.0, plain = 0.0;
        for (int k : node.children) {
            const double a = scene.nodes[static_cast<std::size_t>(k)].angle;
            const double w = static_cast<double>(h.nodes[static_cast<std::size_t>(k)].population);
            wsum += w;
            asum += w * a;
            plain += a;
        }
        out.angle = wsum > 0.0 ? asum / wsum : plain / static_cast<double>(node.children.size());
    }
    return scene;
}

NodeLinkScene layout_nodelink(const CourseGraph& g, const LayoutConfig& config) {
    NodeLinkScene scene;
    scene.major = g.major;
    scene.edge_floor = config.edge_floor;
    scene.k = config.k;
    const std::size_t n = g.size();
    scene.courses.resize(n);
    if (n == 0) return scene;

    double max_total = -INFINITY, max_fail = 0.0;
    for (const auto& s : g.stats) {
        max_total = std::max(max_total, s.total_c);
        max_fail = std::max(max_fail, s.failure_rate);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = g.stats[i];
        auto& c = scene.courses[i];
        c.course = s.course;
        c.core_rank = s.core_rank;
        c.core = s.core_rank <= config.k;
        c.x = s.avg_semester;
        if (max_fail > 0.0) {
            const double f = s.failure_rate / max_fail;
            c.radius = (1.0 - f) * config.r_min + f * config.r_max;
        } else {
            c.radius = config.r_min;
        }
        if (n == 1) continue;
        double mag = max_total > 0.0
                         ? (1.0 - s.total_c / max_total) * config.y_max
                         : static_cast<double>(s.core_rank - 1) / static_cast<double>(n - 1) * config.y_max;
        // Non-core courses sit strictly outside every core course.
        if (!c.core) mag += config.min_separation;
        c.base_y = (s.core_rank % 2 == 1) ? mag : -mag;
        c.y = c.base_y;
    }

    // y-only relaxation: push overlapping pairs apart vertically until every
    // pair is at least min_separation apart or the iteration cap is hit.
    const double sep = config.min_separation;
    int it = 0;
    for (; it < config.relax_iterations && n > 1; ++it) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                auto& a = scene.courses[i];
                auto& b = scene.courses[j];
                const double dx = a.x - b.x;
                if (std::abs(dx) >= sep) continue;
                const double dy = b.y - a.y;
                const double need = std::sqrt(sep * sep - dx * dx);
                if (std::abs(dy) >= need) continue;
                // Identical heights: the better-ranked course goes down.
                const double dir = dy > 0.0 || (dy == 0.0 && a.core_rank < b.core_rank) ? 1.0 : -1.0;
                const double push = (need - std::abs(dy)) / 2.0 * 1.0001;
                a.y -= dir * push;
                b.y += dir * push;
                moved = true;
            }
        if (!moved) break;
    }
    scene.relax_iterations_used = it;

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const double c = g.c_at(a, b);
            if (c >= config.edge_floor) scene.edges.push_back({a, b, c});
        }
    return scene;
}

NodeLinkScene filter_edges(const NodeLinkScene& scene, double theta) {
    if (!(theta >= scene.edge_floor)) throw ModelError("threshold below the edge floor");
    NodeLinkScene out = scene;
    out.edges.clear();
    for (const auto& e : scene.edges)
        if (e.c_value >= theta) out.edges.push_back(e);
    return out;
}

} // namespace ecamp
