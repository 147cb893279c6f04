#pragma once
// Read-only JSON API over a built model.
//
//   GET /api/majors
//   GET /api/tree
//   GET /api/major/{code}/graph?threshold=&cores=
//   GET /api/major/{code}/course/{id}
//   GET /api/similarity/{code}?stage=
//
// Errors are {"schema_version", "error": {"code", "reason", "message"}} with
// reason one of unknown_route, unknown_major, major_not_modeled,
// unknown_course, invalid_parameter, method_not_allowed.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "ecamp/model.hpp"

namespace httplib {
class Server;
}

namespace ecamp {

struct ApiResponse {
    int status = 200;
    std::string body;
};

ApiResponse api_error(int code, std::string_view reason, std::string_view message);

class ApiService {
public:
    explicit ApiService(std::shared_ptr<const Model> model);

    // Replaces the served model; in-flight requests finish on the old one.
    void swap(std::shared_ptr<const Model> model);
    std::shared_ptr<const Model> model() const;

    ApiResponse handle(std::string_view method, std::string_view path,
                       const std::multimap<std::string, std::string>& params) const;

private:
    struct State {
        std::shared_ptr<const Model> model;
        std::string tree;  // rendered once per model
        std::map<std::string, MajorIx, std::less<>> by_code;
    };
    std::shared_ptr<const State> state() const;
    static std::shared_ptr<const State> make_state(std::shared_ptr<const Model> model);

    mutable std::mutex mu_;
    std::shared_ptr<const State> state_;
};

class ApiServer {
public:
    explicit ApiServer(ApiService& service);
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Binds the port (0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void run();
    // run() on a background thread.
    void start();
    void stop();

private:
    ApiService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

} // namespace ecamp
