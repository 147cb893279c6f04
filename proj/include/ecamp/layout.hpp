#pragma once
// Geometry for the two views, computed once and shipped as data: the radial
// tree of majors and the per-major course node-link diagram.

#include <cstdint>
#include <optional>
#include <vector>

#include "ecamp/config.hpp"
#include "ecamp/corrgraph.hpp"
#include "ecamp/hierarchy.hpp"

namespace ecamp {

struct RadialNode {
    int id = 0;
    double angle = 0.0;   // radians in [0, 2pi)
    double radius = 0.0;
};

struct Ribbon {
    int parent = 0;
    int child = 0;
    double width = 0.0;
};

struct RadialScene {
    std::vector<RadialNode> nodes;  // indexed by hierarchy node id
    std::vector<Ribbon> ribbons;    // parent before child, children in layout order
    std::vector<int> leaf_order;
};

double ribbon_width(std::uint64_t population, const LayoutConfig& config);

RadialScene layout_radial(const MajorHierarchy& h, const LayoutConfig& config);

struct NodeLinkCourse {
    CourseIx course = 0;
    double x = 0.0;
    double y = 0.0;
    double base_y = 0.0;  // before relaxation
    double radius = 0.0;
    int core_rank = 0;
    bool core = false;
};

struct NodeLinkEdge {
    std::size_t a = 0;  // positions into the course list, a < b
    std::size_t b = 0;
    double c_value = 0.0;
};

struct NodeLinkScene {
    MajorIx major = 0;
    double edge_floor = 0.0;
    int k = 0;
    int relax_iterations_used = 0;
    std::vector<NodeLinkCourse> courses;  // parallel to CourseGraph::courses
    std::vector<NodeLinkEdge> edges;      // ordered by (a, b)
};

NodeLinkScene layout_nodelink(const CourseGraph& g, const LayoutConfig& config);

// Keeps edges with C >= theta. Throws ModelError when theta is below the
// scene's edge floor.
NodeLinkScene filter_edges(const NodeLinkScene& scene, double theta);

} // namespace ecamp
