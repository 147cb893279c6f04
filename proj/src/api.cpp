#include <cerrno>
#include <cstdlib>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ecamp/api.hpp"
#include "ecamp/error.hpp"
#include "ecamp/export.hpp"

namespace ecamp {

using nlohmann::json;

ApiResponse api_error(int code, std::string_view reason, std::string_view message) {
    json j;
    j["schema_version"] = kApiSchemaVersion;
    j["error"] = {{"code", code}, {"reason", reason}, {"message", message}};
    return {code, j.dump()};
}

ApiService::ApiService(std::shared_ptr<const Model> model) : state_(make_state(std::move(model))) {}

std::shared_ptr<const ApiService::State> ApiService::make_state(std::shared_ptr<const Model> model) {
    if (!model) throw ModelError("api service needs a model");
    auto s = std::make_shared<State>();
    s->tree = render_tree_json(*model);
    for (MajorIx m = 0; m < model->store.num_majors(); ++m) s->by_code.emplace(model->store.majors()[m].code, m);
    s->model = std::move(model);
    return s;
}

void ApiService::swap(std::shared_ptr<const Model> model) {
    auto next = make_state(std::move(model));
    std::lock_guard lock(mu_);
    state_ = std::move(next);
}

std::shared_ptr<const ApiService::State> ApiService::state() const {
    std::lock_guard lock(mu_);
    return state_;
}

std::shared_ptr<const Model> ApiService::model() const { return state()->model; }

namespace {

std::vector<std::string_view> segments(std::string_view path) {
    std::vector<std::string_view> out;
    while (!path.empty()) {
        const auto slash = path.find('/');
        const auto part = path.substr(0, slash);
        if (!part.empty()) out.push_back(part);
        if (slash == std::string_view::npos) break;
        path.remove_prefix(slash + 1);
    }
    return out;
}

const std::string* param(const std::multimap<std::string, std::string>& params, const std::string& key) {
    const auto it = params.find(key);
    return it == params.end() ? nullptr : &it->second;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || std::isnan(v)) return std::nullopt;
    return v;
}

std::optional<long> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
    return v;
}

ApiResponse ok(std::string body) { return {200, std::move(body)}; }

} // namespace

ApiResponse ApiService::handle(std::string_view method, std::string_view path,
                               const std::multimap<std::string, std::string>& params) const {
    const auto st = state();
    const Model& model = *st->model;
    const auto seg = segments(path);
    if (seg.empty() || seg[0] != "api") return api_error(404, "unknown_route", "no route for " + std::string(path));
    if (method != "GET") return api_error(405, "method_not_allowed", "only GET is supported");

    auto find_major = [&](std::string_view code) -> std::optional<MajorIx> {
        const auto it = st->by_code.find(code);
        if (it == st->by_code.end()) return std::nullopt;
        return it->second;
    };
    auto unknown_major = [](std::string_view code) {
        return api_error(404, "unknown_major", "unknown major code '" + std::string(code) + "'");
    };

    if (seg.size() == 2 && seg[1] == "majors") return ok(majors_json(model).dump());
    if (seg.size() == 2 && seg[1] == "tree") return ok(st->tree);

    if (seg.size() >= 4 && seg[1] == "major") {
        const auto m = find_major(seg[2]);
        if (!m) return unknown_major(seg[2]);
        const CourseGraph* g = model.graph(*m);
        if (!g) return api_error(404, "major_not_modeled",
                                 "major '" + std::string(seg[2]) + "' has too few graduates for a course graph");

        if (seg.size() == 4 && seg[3] == "graph") {
            const auto* threshold = param(params, "threshold");
            const auto* cores = param(params, "cores");
            if (!threshold && !cores) return ok(render_major_json(model, *m));
            NodeLinkScene scene = *model.scenes[*m];
            if (cores) {
                const auto k = parse_int(*cores);
                if (!k || *k < 1) return api_error(400, "invalid_parameter", "cores must be a positive integer");
                LayoutConfig cfg = model.config.layout;
                cfg.k = static_cast<int>(*k);
                scene = layout_nodelink(*g, cfg);
            }
            if (threshold) {
                const auto theta = parse_double(*threshold);
                if (!theta) return api_error(400, "invalid_parameter", "threshold must be a number");
                if (*theta < scene.edge_floor)
                    return api_error(400, "invalid_parameter",
                                     "threshold " + *threshold + " is below the edge floor " +
                                         json(scene.edge_floor).dump());
                scene = filter_edges(scene, *theta);
            }
            return ok(major_graph_json(model, scene).dump());
        }
        if (seg.size() == 5 && seg[3] == "course") {
            const auto c = model.store.find_course(seg[4]);
            const auto pos = c ? g->position(*c) : std::nullopt;
            if (!pos)
                return api_error(404, "unknown_course",
                                 "course '" + std::string(seg[4]) + "' is not in the graph of '" +
                                     std::string(seg[2]) + "'");
            return ok(course_detail_json(model, *m, *pos).dump());
        }
    }

    if (seg.size() == 3 && seg[1] == "similarity") {
        const auto m = find_major(seg[2]);
        if (!m) return unknown_major(seg[2]);
        std::optional<int> stage;
        if (const auto* s = param(params, "stage")) {
            const auto t = parse_int(*s);
            if (!t || *t < 1 || *t > static_cast<long>(model.stage_matrices.size()))
                return api_error(400, "invalid_parameter",
                                 "stage must be an integer in 1.." + std::to_string(model.stage_matrices.size()));
            stage = static_cast<int>(*t);
        }
        return ok(similarity_vector_json(model, *m, stage).dump());
    }

    return api_error(404, "unknown_route", "no route for " + std::string(path));
}

ApiServer::ApiServer(ApiService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        std::multimap<std::string, std::string> params(req.params.begin(), req.params.end());
        ApiResponse r;
        try {
            r = service_.handle(req.method, req.path, params);
        } catch (const std::exception& e) {
            r = api_error(500, "internal_error", e.what());
        }
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    server_->Get(".*", handler);
    server_->Post(".*", handler);
    server_->Put(".*", handler);
    server_->Delete(".*", handler);
    server_->Patch(".*", handler);
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int p = server_->bind_to_any_port(host);
        if (p <= 0) throw Error("cannot bind " + host);
        return p;
    }
    if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void ApiServer::run() { server_->listen_after_bind(); }

void ApiServer::start() {
    thread_ = std::thread([this] { run(); });
    server_->wait_until_ready();
}

void ApiServer::stop() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

} // namespace ecamp
