#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "quasim/jobs/jobs.hpp"

namespace httplib {
class Server;
}

namespace quasim::service {

using io::Json;

enum class JobStatus { Queued, Running, Done, Failed };
const char* status_name(JobStatus s);

struct JobRecord {
  std::string id;
  jobs::JobKind kind{};
  std::uint64_t seed = 0;
  JobStatus status = JobStatus::Queued;
  Json result;        // Done
  std::string error;  // Failed
  std::int64_t submitted_ms = 0;
  std::optional<std::int64_t> started_ms;
  std::optional<std::int64_t> finished_ms;
};

/// In-memory job store with a FIFO queue drained by worker threads. Ids are
/// sequential ("job-000001") and forgotten when the service is destroyed.
class JobService {
 public:
  /// `workers` = 0 leaves jobs queued until start_workers is called.
  explicit JobService(std::size_t workers = 1);
  ~JobService();
  JobService(const JobService&) = delete;
  JobService& operator=(const JobService&) = delete;

  /// Validates and enqueues. Throws InvalidArgument (malformed) or
  /// CapacityError (beyond simulator limits); nothing is stored then.
  std::string submit(jobs::JobKind kind, const Json& payload, std::uint64_t seed);

  /// {id, kind, status, seed, submitted_ms[, started_ms][, finished_ms][, result | error]}.
  std::optional<Json> view(const std::string& id) const;
  std::optional<JobStatus> status(const std::string& id) const;

  /// Blocks until the job is done or failed, or the timeout passes.
  bool wait(const std::string& id, std::chrono::milliseconds timeout) const;

  void start_workers(std::size_t count);
  void stop();

 private:
  struct Entry {
    JobRecord record;
    jobs::JobRequest request;
  };

  void worker_loop();

  mutable std::mutex mu_;
  mutable std::condition_variable changed_;
  std::map<std::string, Entry> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_id_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

/// POST /jobs, GET /jobs/{id}, GET /healthz.
void install_routes(httplib::Server& server, JobService& jobs);

}  // namespace quasim::service
