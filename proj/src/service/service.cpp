#include "quasim/service/service.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdio>

#include "quasim/error.hpp"

namespace quasim::service {
namespace {

constexpr const char* kJson = "application/json";

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Json record_view(const JobRecord& r) {
  Json v;
  v["id"] = r.id;
  v["kind"] = jobs::job_kind_name(r.kind);
  v["status"] = status_name(r.status);
  v["seed"] = r.seed;
  v["submitted_ms"] = r.submitted_ms;
  if (r.started_ms) v["started_ms"] = *r.started_ms;
  if (r.finished_ms) v["finished_ms"] = *r.finished_ms;
  if (r.status == JobStatus::Done) v["result"] = r.result;
  if (r.status == JobStatus::Failed) v["error"] = r.error;
  return v;
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, Json{{"error", message}});
}

}  // namespace

const char* status_name(JobStatus s) {
  switch (s) {
    case JobStatus::Queued: return "queued";
    case JobStatus::Running: return "running";
    case JobStatus::Done: return "done";
    case JobStatus::Failed: return "failed";
  }
  return "?";
}

JobService::JobService(std::size_t workers) { start_workers(workers); }

JobService::~JobService() { stop(); }

void JobService::start_workers(std::size_t count) {
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < count; ++i) workers_.emplace_back([this] { worker_loop(); });
}

void JobService::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  changed_.notify_all();
  for (std::thread& t : workers_)
    if (t.joinable()) t.join();
  workers_.clear();
}

std::string JobService::submit(jobs::JobKind kind, const Json& payload, std::uint64_t seed) {
  jobs::JobRequest request = jobs::parse_job(kind, payload, seed);
  std::string id;
  {
    std::lock_guard lock(mu_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "job-%06llu", static_cast<unsigned long long>(next_id_++));
    id = buf;
    JobRecord rec;
    rec.id = id;
    rec.kind = kind;
    rec.seed = seed;
    rec.submitted_ms = now_ms();
    jobs_.emplace(id, Entry{std::move(rec), std::move(request)});
    queue_.push_back(id);
  }
  changed_.notify_all();
  return id;
}

std::optional<Json> JobService::view(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return record_view(it->second.record);
}

std::optional<JobStatus> JobService::status(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second.record.status;
}

bool JobService::wait(const std::string& id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return changed_.wait_for(lock, timeout, [&] {
    const auto it = jobs_.find(id);
    if (it == jobs_.end()) return true;
    const JobStatus s = it->second.record.status;
    return s == JobStatus::Done || s == JobStatus::Failed;
  });
}

void JobService::worker_loop() {
  for (;;) {
    std::string id;
    const jobs::JobRequest* request = nullptr;
    {
      std::unique_lock lock(mu_);
      changed_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      Entry& e = jobs_.at(id);
      e.record.status = JobStatus::Running;
      e.record.started_ms = now_ms();
      request = &e.request;  // map nodes are stable and requests are never modified
    }
    changed_.notify_all();

    Json result;
    std::string error;
    bool ok = true;
    try {
      result = jobs::run_job(*request);
    } catch (const std::exception& ex) {
      ok = false;
      error = ex.what();
      if (error.empty()) error = "job failed";
    }

    {
      std::lock_guard lock(mu_);
      JobRecord& r = jobs_.at(id).record;
      r.finished_ms = now_ms();
      if (ok) {
        r.status = JobStatus::Done;
        r.result = std::move(result);
      } else {
        r.status = JobStatus::Failed;
        r.error = std::move(error);
      }
    }
    changed_.notify_all();
  }
}

void install_routes(httplib::Server& server, JobService& jobs) {
  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, Json{{"status", "ok"}});
  });

  server.Post("/jobs", [&jobs](const httplib::Request& req, httplib::Response& res) {
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const Json::parse_error& e) {
      return reply_error(res, 400, std::string("request body is not valid JSON: ") + e.what());
    }
    try {
      io::reject_unknown_keys(body, {"kind", "payload", "seed"}, "job request");
      const Json& kind_field = io::require(body, "kind");
      if (!kind_field.is_string()) throw InvalidArgument("'kind' must be a string");
      const auto kind = jobs::parse_job_kind(kind_field.get<std::string>());
      if (!kind) throw InvalidArgument("unknown job kind '" + kind_field.get<std::string>() + "'");
      const std::uint64_t seed = body.contains("seed") ? io::get_count(body, "seed") : 0;
      const std::string id = jobs.submit(*kind, io::require(body, "payload"), seed);
      reply(res, 202, Json{{"id", id}});
    } catch (const CapacityError& e) {
      reply_error(res, 422, e.what());
    } catch (const std::exception& e) {
      reply_error(res, 400, e.what());
    }
  });

  server.Get(R"(/jobs/([A-Za-z0-9_-]+))", [&jobs](const httplib::Request& req, httplib::Response& res) {
    const auto v = jobs.view(req.matches[1].str());
    if (!v) return reply_error(res, 404, "unknown job id '" + req.matches[1].str() + "'");
    reply(res, 200, *v);
  });
}

}  // namespace quasim::service
