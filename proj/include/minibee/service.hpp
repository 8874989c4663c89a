#pragma once

#include "minibee/animator.hpp"
#include "minibee/corpus.hpp"
#include "minibee/reports.hpp"
#include "minibee/scope.hpp"
#include "minibee/validate.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>

namespace minibee {

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Interactive animation sessions over HTTP+JSON. Routing lives in `handle`
/// so it can be exercised without a socket; `install` binds it to a server.
class SessionService {
public:
  explicit SessionService(std::optional<Corpus> corpus = std::nullopt) : corpus_(std::move(corpus)) {}

  HttpReply handle(const std::string &method, const std::string &path, const std::string &body) {
    static const std::regex session_route(R"(^/sessions/([A-Za-z0-9_-]+)/(state|options|fire|undo|graph)$)");
    try {
      if (path == "/specs" && method == "GET")
        return list_specs();
      if (path == "/sessions" && method == "POST")
        return create(body);
      std::smatch m;
      if (std::regex_match(path, m, session_route)) {
        const std::string action = m[2];
        const bool post = action == "fire" || action == "undo";
        if (method != (post ? "POST" : "GET"))
          return error(405, "MethodNotAllowed", method + " is not supported on " + path);
        auto slot = find(m[1]);
        if (!slot)
          return error(404, "UnknownSession", "no session " + std::string(m[1]));
        std::lock_guard lock(slot->mutex);
        if (action == "state")
          return ok(state_view(*slot));
        if (action == "options")
          return ok(options_view(*slot));
        if (action == "graph") {
          const auto &s = slot->session;
          return {200, "text/vnd.graphviz", reduced_view(s.model(), s.visited().states(), s.edges())};
        }
        if (action == "undo") {
          slot->session.undo();
          return ok(state_view(*slot));
        }
        return fire(*slot, body);
      }
      return error(404, "NotFound", "no route for " + method + " " + path);
    } catch (const IllegalChoice &e) {
      return error(409, e.error_class(), e.what());
    } catch (const EmptyHistory &e) {
      return error(409, e.error_class(), e.what());
    } catch (const json::exception &e) {
      return error(400, "BadRequest", e.what());
    }
  }

  void install(httplib::Server &server) {
    auto forward = [this](const httplib::Request &req, httplib::Response &res) {
      const HttpReply r = handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    server.Get(R"(/.*)", forward);
    server.Post(R"(/.*)", forward);
    server.Options(R"(/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
  }

private:
  struct Slot {
    Slot(std::string i, Model m) : id(std::move(i)), session(std::move(m)) {}
    std::string id;
    Session session;
    std::mutex mutex;
  };

  static HttpReply ok(const json &j, int status = 200) { return {status, "application/json", j.dump()}; }

  static HttpReply error(int status, const std::string &cls, const std::string &message) {
    return ok(json{{"error", cls}, {"message", message}}, status);
  }

  std::shared_ptr<Slot> find(const std::string &id) {
    std::lock_guard lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  HttpReply list_specs() const {
    json specs = json::array();
    if (corpus_) {
      for (const auto &e : corpus_->entries) {
        json events = json::array();
        for (const auto &ev : e.system.events)
          events.push_back(ev.name);
        specs.push_back({{"id", e.id}, {"role", e.role}, {"system", e.system.name}, {"events", events}});
      }
    }
    return ok(json{{"specs", specs},
                   {"default_scope", corpus_ ? scope_to_json(corpus_->scope) : json(nullptr)}});
  }

  HttpReply create(const std::string &body) {
    const json req = body.empty() ? json::object() : json::parse(body);
    AbstractSystem sys;
    Scope scope;
    try {
      if (req.contains("spec_id")) {
        if (!corpus_)
          return error(404, "UnknownSpec", "no corpus is loaded");
        const auto id = req.at("spec_id").get<std::string>();
        const auto it = std::find_if(corpus_->entries.begin(), corpus_->entries.end(),
                                     [&](const CorpusEntry &e) { return e.id == id; });
        if (it == corpus_->entries.end())
          return error(404, "UnknownSpec", "no corpus entry " + id);
        sys = it->system;
        scope = corpus_->scope;
      } else if (req.contains("source")) {
        sys = parse_system(req.at("source").get<std::string>());
      } else {
        return error(400, "BadRequest", "expected spec_id or source");
      }
      if (req.contains("scope"))
        scope = scope_from_json(req.at("scope"));
      Model model(std::move(sys), scope);
      std::shared_ptr<Slot> slot;
      {
        std::lock_guard lock(sessions_mutex_);
        const std::string id = "s" + std::to_string(++next_id_);
        slot = std::make_shared<Slot>(id, std::move(model));
        sessions_.emplace(id, slot);
      }
      std::lock_guard lock(slot->mutex);
      return ok(state_view(*slot), 201);
    } catch (const Error &e) {
      return error(422, e.error_class(), e.what());
    }
  }

  static json state_view(const Slot &slot) {
    const auto &s = slot.session;
    const auto &sys = s.model().system();
    json inv = json::array();
    std::size_t i = 0;
    for (const auto &[text, holds] : invariant_conjunct_values(s.model(), s.current()))
      inv.push_back({{"index", i++}, {"conjunct", text}, {"holds", holds}});
    return {{"session_id", slot.id},
            {"system", sys.name},
            {"state", render_state(sys, s.current())},
            {"values", state_to_json(sys, s.current())},
            {"invariant", inv},
            {"history_size", s.history_size()},
            {"visited", s.visited().size()}};
  }

  static json options_view(const Slot &slot) {
    const auto &s = slot.session;
    const auto &sys = s.model().system();
    json opts = json::array();
    const auto options = s.step_options();
    for (std::size_t i = 0; i < options.size(); ++i) {
      const auto &ev = sys.events[options[i].event];
      opts.push_back({{"index", i},
                      {"event", ev.name},
                      {"binding", binding_to_json(sys, ev, options[i].binding)},
                      {"label", render_step(sys, ev, options[i].binding)}});
    }
    json j{{"session_id", slot.id}, {"options", opts}, {"deadlocked", options.empty()}};
    if (options.empty()) {
      json reasons = json::array();
      for (const auto &ev : sys.events)
        reasons.push_back(reason_to_json(s.model(), explain_disabled(s.model(), ev, s.current())));
      j["diagnosis"] = reasons;
    }
    return j;
  }

  static HttpReply fire(Slot &slot, const std::string &body) {
    const json req = json::parse(body);
    std::map<std::string, std::string> binding;
    if (req.contains("binding"))
      binding = req.at("binding").get<std::map<std::string, std::string>>();
    const Choice c = slot.session.choice_from_names(req.at("event").get<std::string>(), binding);
    slot.session.fire(c);
    return ok(state_view(slot));
  }

  std::optional<Corpus> corpus_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t next_id_ = 0;
};

} // namespace minibee
