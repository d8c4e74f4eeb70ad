#include "service.hpp"

#include "httplib.h"

namespace sd::service {

using nlohmann::json;

std::string SessionStore::create(Dpi dpi, SessionConfig config) {
  auto entry = std::make_shared<SessionEntry>(std::move(dpi), std::move(config));
  entry->last_used = std::chrono::steady_clock::now();
  std::lock_guard lock(mutex_);
  std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::move(entry));
  return id;
}

std::shared_ptr<SessionEntry> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  return it->second;
}

std::size_t SessionStore::size() {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void SessionStore::purge_expired() {
  auto now = std::chrono::steady_clock::now();
  std::lock_guard lock(mutex_);
  std::erase_if(sessions_, [&](const auto& kv) {
    std::unique_lock entry_lock(kv.second->mutex, std::try_to_lock);
    return entry_lock.owns_lock() && now - kv.second->last_used > ttl_;
  });
}

SessionConfig parse_config(const json& j) {
  SessionConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  double threshold = -1;
  for (const auto& [key, v] : j.items()) {
    if (key == "n") {
      auto n = v.get<long long>();
      if (n < 1) throw std::invalid_argument("n must be positive");
      c.leading = static_cast<std::size_t>(n);
    } else if (key == "measure") {
      auto m = v.get<std::string>();
      if (m == "ent") {
        c.measure = Measure::entropy();
      } else if (m == "spl") {
        c.measure = Measure::split_in_half();
      } else {
        throw std::invalid_argument("measure must be ent or spl");
      }
    } else if (key == "criterion") {
      auto s = v.get<std::string>();
      if (s == "card") {
        c.criterion = CriterionKind::MinCardinality;
      } else if (s == "sumprob") {
        c.criterion = CriterionKind::MinSumProbability;
      } else if (s == "maxprob") {
        c.criterion = CriterionKind::MinMaxProbability;
      } else {
        throw std::invalid_argument("criterion must be card, sumprob or maxprob");
      }
    } else if (key == "rank") {
      auto s = v.get<std::string>();
      if (s != "card" && s != "prob") throw std::invalid_argument("rank must be card or prob");
      c.rank = s == "card" ? DiagnosisRank::MinCardinality : DiagnosisRank::MaxProbability;
    } else if (key == "enrich") {
      c.enrich = v.get<bool>();
    } else if (key == "sigma") {
      c.sigma = v.get<double>();
    } else if (key == "threshold") {
      threshold = v.get<double>();
      if (threshold < 0) throw std::invalid_argument("threshold must be non-negative");
    } else if (key == "budget") {
      c.node_budget = v.get<std::size_t>();
    } else if (key == "seed") {
      c.seed = v.get<std::uint64_t>();
    } else {
      throw std::invalid_argument("unknown config key " + key);
    }
  }
  if (threshold >= 0) c.measure.threshold = threshold;
  return c;
}

namespace {

json formula_list(const Dpi& dpi, const Diagnosis& d) {
  json texts = json::array();
  d.for_each([&](std::size_t i) { texts.push_back(dpi.formula_text(dpi.kb()[i])); });
  return texts;
}

json lists(const DiagnosisIds& ids, std::span<const Diagnosis> diagnoses) {
  json out = json::array();
  ids.for_each([&](std::size_t i) { out.push_back(one_based(diagnoses[i])); });
  return out;
}

json diagnosis_list(const std::vector<Diagnosis>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back(one_based(d));
  return out;
}

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void error(httplib::Response& res, int status, const std::string& message) { send(res, status, {{"error", message}}); }

}  // namespace

json diagnoses_json(const Session& s) {
  json out = json::array();
  for (std::size_t i = 0; i < s.diagnoses().size(); ++i) {
    const auto& d = s.diagnoses()[i];
    out.push_back({{"formulas", one_based(d)}, {"texts", formula_list(s.dpi(), d)}, {"probability", s.probabilities()[i]}});
  }
  return out;
}

json query_json(const Session& s, const PendingQuery& q) {
  json query = json::array();
  json explicit_ids = json::array();
  for (const auto& f : q.formulas) {
    query.push_back(s.dpi().formula_text(f.formula));
    explicit_ids.push_back(f.kb_index ? json(*f.kb_index + 1) : json(nullptr));
  }
  return {{"query", query},
          {"kb_ids", explicit_ids},
          {"qpartition",
           {{"dplus", lists(q.partition.dplus, s.diagnoses())},
            {"dminus", lists(q.partition.dminus, s.diagnoses())},
            {"dzero", lists(q.partition.dzero, s.diagnoses())}}},
          {"phase_timings", {{"p1", q.timings_ms.p1}, {"p2", q.timings_ms.p2}, {"p3", q.timings_ms.p3}, {"p4", q.timings_ms.p4}}},
          {"reasoner_calls",
           {{"p1", static_cast<std::uint64_t>(q.reasoner_calls.p1)},
            {"p2", static_cast<std::uint64_t>(q.reasoner_calls.p2)},
            {"p3", static_cast<std::uint64_t>(q.reasoner_calls.p3)},
            {"p4", static_cast<std::uint64_t>(q.reasoner_calls.p4)}}},
          {"measure_value", q.measure_value},
          {"threshold_met", q.threshold_met}};
}

namespace {

json state_json(const std::string& id, const Session& s) {
  json j{{"id", id}, {"diagnoses", diagnoses_json(s)}, {"finished", s.finished()}};
  if (auto f = s.final_diagnosis()) j["final_diagnosis"] = one_based(*f);
  if (s.ambiguous()) j["ambiguous"] = true;
  if (s.diagnoses().size() < 2) j["warning"] = "insufficient diagnoses for querying";
  return j;
}

}  // namespace

void install_routes(httplib::Server& server, SessionStore& store, const ServiceOptions& opts) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  if (opts.static_dir) server.set_mount_point("/", opts.static_dir->string());

  server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    store.purge_expired();
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      return error(res, 400, std::string("malformed JSON: ") + e.what());
    }
    if (!body.is_object() || !body.contains("dpi") || !body["dpi"].is_string())
      return error(res, 400, "body must contain the DPI text under \"dpi\"");
    try {
      auto config = parse_config(body.value("config", json()));
      auto dpi = parse_dpi(body["dpi"].get<std::string>());
      std::string id = store.create(std::move(dpi), std::move(config));
      auto entry = store.find(id);
      std::lock_guard lock(entry->mutex);
      send(res, 200, state_json(id, entry->session));
    } catch (const ParseError& e) {
      error(res, 400, std::string("parse error: ") + e.what());
    } catch (const AdmissibilityError& e) {
      error(res, 400, std::string("admissibility: ") + e.what());
    } catch (const json::exception& e) {
      error(res, 400, std::string("bad config: ") + e.what());
    } catch (const std::invalid_argument& e) {
      error(res, 400, e.what());
    }
  });

  auto with_entry = [&store](const httplib::Request& req, httplib::Response& res, auto&& fn) {
    auto entry = store.find(req.matches[1]);
    if (!entry) return error(res, 404, "unknown session");
    std::lock_guard lock(entry->mutex);
    entry->last_used = std::chrono::steady_clock::now();
    fn(*entry);
  };

  server.Get(R"(/sessions/([^/]+))", [with_entry](const httplib::Request& req, httplib::Response& res) {
    with_entry(req, res, [&](SessionEntry& e) { send(res, 200, state_json(req.matches[1], e.session)); });
  });

  server.Get(R"(/sessions/([^/]+)/query)", [with_entry](const httplib::Request& req, httplib::Response& res) {
    with_entry(req, res, [&](SessionEntry& e) {
      if (e.session.finished()) return error(res, 409, "session finished");
      try {
        const auto& q = e.session.next_query();
        send(res, 200, query_json(e.session, q));
      } catch (const InsufficientDiagnoses& ex) {
        error(res, 409, ex.what());
      }
    });
  });

  server.Post(R"(/sessions/([^/]+)/answer)", [with_entry](const httplib::Request& req, httplib::Response& res) {
    with_entry(req, res, [&](SessionEntry& e) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("answer") || !body["answer"].is_boolean())
        return error(res, 400, "body must be {\"answer\": true|false}");
      if (!e.session.has_pending()) return error(res, 409, "no pending query");
      auto out = e.session.submit_answer(body["answer"].get<bool>());
      json j{{"eliminated", diagnosis_list(out.eliminated)},
             {"remaining", diagnosis_list(out.remaining)},
             {"finished", out.finished}};
      if (out.final_diagnosis) j["final_diagnosis"] = one_based(*out.final_diagnosis);
      send(res, 200, j);
    });
  });

  server.Get(R"(/sessions/([^/]+)/history)", [with_entry](const httplib::Request& req, httplib::Response& res) {
    with_entry(req, res, [&](SessionEntry& e) {
      json out = json::array();
      for (const auto& r : e.session.history()) out.push_back(json::parse(to_json(r)));
      send(res, 200, out);
    });
  });
}

}  // namespace sd::service
