#include "llmrs/service.hpp"

#include "httplib.h"
#include "llmrs/error.hpp"
#include "llmrs/report.hpp"

namespace llmrs {

using nlohmann::json;

QueryRequest parse_query_body(const std::string& body, std::size_t default_preselect_m) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw validation_error("request body must be a JSON object");
  QueryRequest req;
  req.preselect_m = default_preselect_m;
  if (!j.contains("text") || !j["text"].is_string()) throw validation_error("text must be a string");
  req.text = j["text"].get<std::string>();

  auto bound = [](const json& obj, const char* key) -> std::optional<Money> {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_number()) throw validation_error(std::string(key) + " must be a number");
    return obj[key].get<double>();
  };
  if (j.contains("constraints")) {
    const auto& c = j["constraints"];
    if (!c.is_object()) throw validation_error("constraints must be an object");
    req.budget.max_price = bound(c, "max_price");
    req.budget.max_license_fee = bound(c, "max_license_fee");
    req.budget.max_implementation_cost = bound(c, "max_implementation_cost");
    req.budget.max_maintenance_cost = bound(c, "max_maintenance_cost");
  }
  auto count = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 1) {
      throw validation_error(std::string(key) + " must be an integer >= 1");
    }
    out = j[key].get<std::size_t>();
  };
  count("top_k", req.top_k);
  count("preselect_m", req.preselect_m);
  if (j.contains("ranker")) {
    auto ranker = j["ranker"].is_string() ? parse_ranker(j["ranker"].get<std::string>()) : std::nullopt;
    if (!ranker) throw validation_error("ranker must be \"llmrs\" or \"baseline\"");
    req.ranker = *ranker;
  }
  req.validate();
  return req;
}

namespace {

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kValidation: send_error(res, 400, e.what()); break;
      case ErrorKind::kProvider: send_error(res, 502, e.what()); break;
      default: send_error(res, 500, e.what()); break;
    }
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

Service::Service(EngineConfig config)
    : config_(std::move(config)), engine_(Engine::load(config_)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Service::~Service() { stop(); }

std::shared_ptr<const Engine> Service::snapshot() const {
  std::lock_guard lock(mutex_);
  return engine_;
}

void Service::reload() {
  auto fresh = Engine::load(config_);
  std::lock_guard lock(mutex_);
  engine_ = std::move(fresh);
}

void Service::install_routes() {
  server_->Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    auto engine = snapshot();
    res.set_content(json{{"status", "ok"}, {"products", engine->catalog().products.size()}}.dump(),
                    "application/json");
  });

  server_->Post("/v1/query", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto engine = snapshot();
      auto request = parse_query_body(req.body, engine->config().preselect_m);
      res.set_content(to_json(engine->query(request)).dump(), "application/json");
    });
  });

  server_->Get(R"(/v1/products/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto engine = snapshot();
      const Product* p = engine->catalog().find(req.matches[1].str());
      if (!p) return send_error(res, 404, "unknown product " + req.matches[1].str());
      res.set_content(product_to_json(*p).dump(), "application/json");
    });
  });
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::wait_until_ready() const { server_->wait_until_ready(); }

void Service::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace llmrs
