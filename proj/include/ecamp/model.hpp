#pragma once
// Everything the batch modeling phase produces, bundled so exporters and the
// API server read one immutable object.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecamp/affinity.hpp"
#include "ecamp/config.hpp"
#include "ecamp/corrgraph.hpp"
#include "ecamp/dropout.hpp"
#include "ecamp/hierarchy.hpp"
#include "ecamp/layout.hpp"
#include "ecamp/records.hpp"

namespace ecamp {

struct Model {
    Config config;
    RecordStore store;
    SemesterCourseSets semester_sets;
    std::vector<MajorSimilarityMatrix> stage_matrices;  // stage t at index t-1
    MajorHierarchy hierarchy;                           // with dropout bars attached
    CourseGraphSet graphs;
    std::vector<CurriculumSet> curricula;
    DropoutResult dropout;
    std::vector<MajorDropoutStats> dropout_stats;
    RadialScene radial;
    std::vector<std::optional<NodeLinkScene>> scenes;  // by MajorIx, default k and floor
    std::vector<std::string> warnings;

    const CourseGraph* graph(MajorIx m) const {
        return m < graphs.graphs.size() && graphs.graphs[m] ? &*graphs.graphs[m] : nullptr;
    }
};

struct ModelTimings {
    double timelines_s = 0.0;
    double affinity_s = 0.0;
    double hierarchy_s = 0.0;
    double corrgraph_s = 0.0;
    double dropout_s = 0.0;
    double layout_s = 0.0;
};

Model build_model(RecordStore store, const Config& config, ModelTimings* timings = nullptr);

void save_model(std::ostream& out, const Model& model);
Model load_model(std::istream& in);

} // namespace ecamp
