#pragma once

#include <memory>
#include <string>

#include "pkv/index.hpp"

namespace pkv {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;           // 0 picks a free port
  std::string cors_origin;   // empty disables CORS headers
  std::string static_dir;    // optional directory served at "/"
};

/// HTTP front end for SearchApi. The index must outlive the server.
class HttpServer {
 public:
  HttpServer(const SimilarityIndex& index, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; returns the bound port. Throws Error(IoFailure).
  int bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pkv
