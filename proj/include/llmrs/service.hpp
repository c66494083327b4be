#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "llmrs/config.hpp"
#include "llmrs/engine.hpp"

namespace httplib {
class Server;
}

namespace llmrs {

/// Parses a POST /v1/query body. Throws a validation error on bad input.
QueryRequest parse_query_body(const std::string& body, std::size_t default_preselect_m);

// HTTP front end over an immutable Engine snapshot. reload() builds a new
// snapshot from disk and swaps it in; in-flight requests keep the old one.
class Service {
 public:
  explicit Service(EngineConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  std::shared_ptr<const Engine> snapshot() const;
  void reload();

  /// Binds and serves until stop(); returns false when the port cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); serve with listen_after_bind().
  int bind_any(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  void install_routes();

  EngineConfig config_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Engine> engine_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace llmrs
