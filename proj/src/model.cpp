#include <chrono>
#include <istream>
#include <ostream>

#include "ecamp/binary_io.hpp"
#include "ecamp/model.hpp"
#include "ecamp/parallel.hpp"

namespace ecamp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

Model build_model(RecordStore store, const Config& config, ModelTimings* timings) {
    config.validate();
    ModelTimings tm;
    Model m;
    m.config = config;
    m.store = std::move(store);
    const auto& st = m.store;

    auto t0 = std::chrono::steady_clock::now();
    const auto timelines = build_timelines(st, config.records);
    m.semester_sets = build_semester_sets(st, timelines, config.records);
    for (int t : m.semester_sets.empty_stages)
        m.warnings.push_back("stage " + std::to_string(t) + " has an empty semester course set");
    for (StudentIx s : timelines.graduates_without_events)
        m.warnings.push_back("graduate " + st.student_ids()[s] + " has no grade events");
    tm.timelines_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const EnrollmentCounts counts(st);
    m.stage_matrices = stage_similarity_matrices(counts, m.semester_sets, config.hierarchy.stages);
    tm.affinity_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    m.hierarchy = build_hierarchy(st, m.stage_matrices, config.hierarchy);
    for (const auto& w : m.hierarchy.warnings) m.warnings.push_back(w);
    tm.hierarchy_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    m.graphs = build_all_course_graphs(st, timelines, config.corrgraph);
    for (const auto& s : m.graphs.skipped)
        m.warnings.push_back("major " + st.majors()[s.major].code + " skipped: " + s.reason);
    tm.corrgraph_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    m.curricula = build_curricula(st, config.dropout);
    std::vector<CoreSet> cores;
    for (const auto& g : m.graphs.graphs)
        if (g) cores.push_back(core_set(*g, config.corrgraph.core_k));
    const AttributionIndex index(st, m.curricula, cores);
    m.dropout = infer_intended_majors(st, timelines, index, config.dropout);
    m.dropout_stats = aggregate_dropouts(m.dropout, st);
    attach_to_hierarchy(m.hierarchy, m.dropout_stats, config.layout.bar_length);
    tm.dropout_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    m.radial = layout_radial(m.hierarchy, config.layout);
    m.scenes.resize(st.num_majors());
    parallel_for(st.num_majors(), [&](std::size_t i) {
        if (const auto* g = m.graph(static_cast<MajorIx>(i))) m.scenes[i] = layout_nodelink(*g, config.layout);
    });
    tm.layout_s = seconds_since(t0);

    if (timings) *timings = tm;
    return m;
}

// ---------------------------------------------------------------------------
// Binary artifact

namespace {

constexpr std::string_view kMagic = "ECAMPMODEL1";

void put(BinaryWriter& w, const MajorSimilarityMatrix& x) {
    w.write(x.stage);
    w.write(static_cast<std::uint64_t>(x.course_count));
    w.write(x.majors);
    w.write(x.values);
    std::vector<MajorIx> flat;
    for (const auto& [a, b] : x.empty_pairs) {
        flat.push_back(a);
        flat.push_back(b);
    }
    w.write(flat);
}
void get(BinaryReader& r, MajorSimilarityMatrix& x) {
    r.read(x.stage);
    x.course_count = r.get<std::uint64_t>();
    r.read(x.majors);
    r.read(x.values);
    std::vector<MajorIx> flat;
    r.read(flat);
    x.empty_pairs.clear();
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2) x.empty_pairs.emplace_back(flat[i], flat[i + 1]);
}

void put(BinaryWriter& w, const std::optional<double>& v) {
    w.write(static_cast<std::uint8_t>(v.has_value()));
    w.write(v.value_or(0.0));
}
void get(BinaryReader& r, std::optional<double>& v) {
    const bool has = r.get<std::uint8_t>() != 0;
    const double x = r.get<double>();
    v = has ? std::optional<double>(x) : std::nullopt;
}

void put(BinaryWriter& w, const MajorTreeNode& n) {
    w.write(n.id);
    w.write(n.stage);
    w.write(n.parent);
    w.write(n.members);
    w.write(n.children);
    w.write(n.population);
    const auto& d = n.dropout;
    w.write(static_cast<std::uint8_t>(d.attached));
    w.write(d.graduates);
    w.write(d.dropouts);
    put(w, d.rate);
    put(w, d.confidence);
    w.write(d.gray);
    w.write(d.red);
    w.write(d.opacity);
}
void get(BinaryReader& r, MajorTreeNode& n) {
    r.read(n.id);
    r.read(n.stage);
    r.read(n.parent);
    r.read(n.members);
    r.read(n.children);
    r.read(n.population);
    auto& d = n.dropout;
    d.attached = r.get<std::uint8_t>() != 0;
    r.read(d.graduates);
    r.read(d.dropouts);
    get(r, d.rate);
    get(r, d.confidence);
    r.read(d.gray);
    r.read(d.red);
    r.read(d.opacity);
}

void put(BinaryWriter& w, const CourseGraph& g) {
    w.write(g.major);
    w.write(g.courses);
    w.write(g.r);
    w.write(g.n);
    w.write(g.stats);
    w.write(std::vector<std::uint64_t>(g.by_rank.begin(), g.by_rank.end()));
}
void get(BinaryReader& r, CourseGraph& g) {
    r.read(g.major);
    r.read(g.courses);
    r.read(g.r);
    r.read(g.n);
    r.read(g.stats);
    std::vector<std::uint64_t> ranks;
    r.read(ranks);
    g.by_rank.assign(ranks.begin(), ranks.end());
}

void put(BinaryWriter& w, const NodeLinkScene& s) {
    w.write(s.major);
    w.write(s.edge_floor);
    w.write(s.k);
    w.write(s.relax_iterations_used);
    w.write(s.courses);
    w.write(s.edges);
}
void get(BinaryReader& r, NodeLinkScene& s) {
    r.read(s.major);
    r.read(s.edge_floor);
    r.read(s.k);
    r.read(s.relax_iterations_used);
    r.read(s.courses);
    r.read(s.edges);
}

template <typename T>
void put_optional(BinaryWriter& w, const std::optional<T>& v) {
    w.write(static_cast<std::uint8_t>(v.has_value()));
    if (v) put(w, *v);
}
template <typename T>
void get_optional(BinaryReader& r, std::optional<T>& v) {
    if (r.get<std::uint8_t>()) {
        v.emplace();
        get(r, *v);
    } else {
        v.reset();
    }
}

} // namespace

void save_model(std::ostream& out, const Model& m) {
    BinaryWriter w(out);
    w.tag(kMagic);
    w.write(canonical_config(m.config));
    m.store.save(out);

    const auto& ss = m.semester_sets;
    w.write(ss.sets);
    w.write(ss.mean_stage);
    w.write(ss.course_stage);
    w.write(ss.empty_stages);

    w.write(static_cast<std::uint64_t>(m.stage_matrices.size()));
    for (const auto& x : m.stage_matrices) put(w, x);

    const auto& h = m.hierarchy;
    w.write(h.root);
    w.write(h.stages);
    w.write(h.thetas);
    w.write(h.warnings);
    w.write(static_cast<std::uint64_t>(h.nodes.size()));
    for (const auto& n : h.nodes) put(w, n);

    w.write(static_cast<std::uint64_t>(m.graphs.graphs.size()));
    for (const auto& g : m.graphs.graphs) put_optional(w, g);
    w.write(static_cast<std::uint64_t>(m.graphs.skipped.size()));
    for (const auto& s : m.graphs.skipped) {
        w.write(s.major);
        w.write(s.reason);
    }

    w.write(static_cast<std::uint64_t>(m.curricula.size()));
    for (const auto& c : m.curricula) {
        w.write(c.major);
        w.write(c.courses);
    }
    w.write(m.dropout.attributions);
    w.write(m.dropout.unattributed);
    w.write(static_cast<std::uint64_t>(m.dropout.withdrawn_total));
    w.write(static_cast<std::uint64_t>(m.dropout_stats.size()));
    for (const auto& s : m.dropout_stats) {
        w.write(s.major);
        w.write(s.graduates);
        w.write(s.dropouts);
        w.write(s.overlap_sum);
        put(w, s.average_overlap);
    }

    w.write(m.radial.nodes);
    w.write(m.radial.ribbons);
    w.write(m.radial.leaf_order);
    w.write(static_cast<std::uint64_t>(m.scenes.size()));
    for (const auto& s : m.scenes) put_optional(w, s);
    w.write(m.warnings);
    w.tag(kMagic);
}

Model load_model(std::istream& in) {
    BinaryReader r(in);
    r.expect(kMagic);
    Model m;
    std::string cfg;
    r.read(cfg);
    try {
        m.config = config_from_json(nlohmann::json::parse(cfg));
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactError(std::string("model artifact: bad config snapshot: ") + e.what());
    }
    m.store = RecordStore::load(in);

    auto& ss = m.semester_sets;
    r.read(ss.sets);
    r.read(ss.mean_stage);
    r.read(ss.course_stage);
    r.read(ss.empty_stages);

    m.stage_matrices.resize(r.get<std::uint64_t>());
    for (auto& x : m.stage_matrices) get(r, x);

    auto& h = m.hierarchy;
    r.read(h.root);
    r.read(h.stages);
    r.read(h.thetas);
    r.read(h.warnings);
    h.nodes.resize(r.get<std::uint64_t>());
    for (auto& n : h.nodes) get(r, n);

    m.graphs.graphs.resize(r.get<std::uint64_t>());
    for (auto& g : m.graphs.graphs) get_optional(r, g);
    m.graphs.skipped.resize(r.get<std::uint64_t>());
    for (auto& s : m.graphs.skipped) {
        r.read(s.major);
        r.read(s.reason);
    }

    m.curricula.resize(r.get<std::uint64_t>());
    for (auto& c : m.curricula) {
        r.read(c.major);
        r.read(c.courses);
    }
    r.read(m.dropout.attributions);
    r.read(m.dropout.unattributed);
    m.dropout.withdrawn_total = r.get<std::uint64_t>();
    m.dropout_stats.resize(r.get<std::uint64_t>());
    for (auto& s : m.dropout_stats) {
        r.read(s.major);
        r.read(s.graduates);
        r.read(s.dropouts);
        r.read(s.overlap_sum);
        get(r, s.average_overlap);
    }

    r.read(m.radial.nodes);
    r.read(m.radial.ribbons);
    r.read(m.radial.leaf_order);
    m.scenes.resize(r.get<std::uint64_t>());
    for (auto& s : m.scenes) get_optional(r, s);
    r.read(m.warnings);
    r.expect(kMagic);

    if (m.hierarchy.nodes.size() != m.radial.nodes.size() || m.scenes.size() != m.store.num_majors() ||
        m.graphs.graphs.size() != m.store.num_majors() || m.dropout_stats.size() != m.store.num_majors())
        throw ArtifactError("model artifact: inconsistent section sizes");
    return m;
}

} // namespace ecamp
