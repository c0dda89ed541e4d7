#include "pkv/http_server.hpp"

#include "httplib.h"
#include "pkv/api.hpp"

namespace pkv {

struct HttpServer::Impl {
  Impl(const SimilarityIndex& index, ServerOptions opts) : api(index), options(std::move(opts)) {}

  SearchApi api;
  ServerOptions options;
  httplib::Server server;
};

HttpServer::HttpServer(const SimilarityIndex& index, ServerOptions options)
    : impl_(std::make_unique<Impl>(index, std::move(options))) {
  auto& srv = impl_->server;
  const std::string cors = impl_->options.cors_origin;

  auto respond = [this, cors](const httplib::Request& req, httplib::Response& res) {
    QueryParams params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);  // first value wins
    const ApiResponse out = impl_->api.handle(req.path, params);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
    if (!cors.empty()) res.set_header("Access-Control-Allow-Origin", cors);
  };
  srv.Get("/api/search", respond);
  srv.Get("/api/phrase-by-text", respond);
  srv.Get(R"(/api/phrase/([^/]+))", respond);
  srv.Get("/healthz", respond);

  if (!cors.empty()) {
    srv.Options(R"(/.*)", [cors](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", cors);
      res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
  if (!impl_->options.static_dir.empty()) srv.set_mount_point("/", impl_->options.static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& srv = impl_->server;
  const auto& opts = impl_->options;
  int port = opts.port;
  if (port == 0) {
    port = srv.bind_to_any_port(opts.host);
  } else if (!srv.bind_to_port(opts.host, port)) {
    port = -1;
  }
  if (port < 0) throw Error(ErrorCode::IoFailure, "cannot bind " + opts.host + ":" + std::to_string(opts.port));
  return port;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace pkv
