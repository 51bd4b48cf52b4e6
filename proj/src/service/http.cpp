#include "httplib.h"

#include "dukego/service.hpp"

namespace dukego::service {

struct HttpServer::Impl {
  GameService& service;
  httplib::Server server;

  explicit Impl(GameService& s) : service(s) {}

  static void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename F>
  static httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, 200, f(req));
      } catch (const ServiceError& e) {
        reply(res, e.status(), e.body());
      } catch (const Json::exception& e) {
        reply(res, 400, {{"code", "bad_request"}, {"message", std::string("malformed JSON: ") + e.what()}});
      } catch (const std::exception& e) {
        reply(res, 500, {{"code", "internal"}, {"message", e.what()}});
      }
    };
  }

  static Json body(const httplib::Request& req) { return req.body.empty() ? Json::object() : Json::parse(req.body); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Get("/health", guarded([this](const httplib::Request&) { return service.health(); }));
    server.Post("/games", guarded([this](const httplib::Request& req) { return service.create_game(body(req)); }));
    server.Get(R"(/games/([^/]+))",
               guarded([this](const httplib::Request& req) { return service.get_game(req.matches[1]); }));
    server.Post(R"(/games/([^/]+)/moves)", guarded([this](const httplib::Request& req) {
                  return service.submit_move(req.matches[1], body(req));
                }));
    server.Post(R"(/games/([^/]+)/undo)",
                guarded([this](const httplib::Request& req) { return service.undo(req.matches[1]); }));
    server.Get(R"(/games/([^/]+)/hint)",
               guarded([this](const httplib::Request& req) { return service.hint(req.matches[1]); }));
    server.Get(R"(/games/([^/]+)/eval)",
               guarded([this](const httplib::Request& req) { return service.evaluate(req.matches[1]); }));
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) reply(res, res.status, {{"code", "not_found"}, {"message", "no such endpoint"}});
    });
  }
};

HttpServer::HttpServer(GameService& service) : impl_(std::make_unique<Impl>(service)) { impl_->routes(); }

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace dukego::service
