#include <httplib.h>

#include "mathdup/error.hpp"
#include "mathdup/service.hpp"

namespace mathdup {

struct HttpServer::Impl {
    explicit Impl(ReviewApi& a) : api(a) {}

    void route(const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> params;
        for (const auto& [k, v] : req.params) params.emplace(k, v);
        const auto out = api.handle(req.method, req.path, params, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    }

    ReviewApi& api;
    httplib::Server server;
};

HttpServer::HttpServer(ReviewApi& api) : impl_(std::make_unique<Impl>(api)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->route(req, res); };
    impl_->server.Get(".*", handler);
    impl_->server.Post(".*", handler);
    impl_->server.Put(".*", handler);
    impl_->server.Delete(".*", handler);
    impl_->server.Patch(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int p = impl_->server.bind_to_any_port(host);
        if (p < 0) throw StorageUnavailable("cannot bind " + host);
        return p;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw StorageUnavailable("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace mathdup
