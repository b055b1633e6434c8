#include <gtest/gtest.h>

// Eigen before httplib: <resolv.h> defines a _res macro.
#include "support.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

#include "quasim/cli/cli.hpp"
#include "quasim/error.hpp"
#include "quasim/io/formats.hpp"
#include "quasim/jobs/jobs.hpp"
#include "quasim/service/service.hpp"

using namespace quasim;
using namespace quasim::service;
using namespace quasim::testing;
using namespace std::chrono_literals;
using io::Json;

namespace {

Json two_dof_payload() { return io::fem_to_json(two_dof()); }

Json qpe_job_payload(int n_ancilla = 8) {
  Json p = two_dof_payload();
  p["n_ancilla"] = n_ancilla;
  p["shots"] = 500;
  p["input_state"] = "uniform";
  return p;
}

Json tiny_model() {
  qgnn::QgnnModel m = qgnn::QgnnModel::initialize(std::vector<std::size_t>{2, 3, 4}, {0.0, 1.0}, 7);
  return io::model_to_json(m);
}

Json predict_job_payload(double decode_bias = 0.0) {
  Json model = tiny_model();
  for (Json& p : model["parameters"]) p["decode_bias"] = decode_bias;
  return {{"model", model}, {"nx", 3}, {"ny", 3}, {"frame", io::frame_to_json({0, std::vector<double>(9, 0.4)})},
          {"steps", 2}};
}

/// Runs install_routes on an ephemeral localhost port for the lifetime of the object.
class TestServer {
 public:
  explicit TestServer(JobService& jobs) {
    install_routes(server_, jobs);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

struct Reply {
  int status;
  Json body;
};

Reply post_job(const TestServer& srv, const Json& body) {
  auto res = srv.client().Post("/jobs", body.dump(), "application/json");
  if (!res) return {0, {}};
  return {res->status, Json::parse(res->body)};
}

Reply get(const TestServer& srv, const std::string& path) {
  auto res = srv.client().Get(path);
  if (!res) return {0, {}};
  return {res->status, Json::parse(res->body)};
}

Json finished_view(JobService& jobs, const std::string& id) {
  EXPECT_TRUE(jobs.wait(id, 60s));
  return *jobs.view(id);
}

}  // namespace

// ---------- HTTP layer ----------

TEST(ServiceHttp, HealthAndUnknownId) {
  JobService jobs;
  TestServer srv(jobs);
  const Reply h = get(srv, "/healthz");
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(h.body["status"], "ok");
  EXPECT_EQ(get(srv, "/jobs/job-999999").status, 404);
  EXPECT_EQ(srv.client().Get("/jobs/job-000001")->get_header_value("Content-Type"), "application/json");
}

TEST(ServiceHttp, SubmitPollAndResult) {
  JobService jobs;
  TestServer srv(jobs);
  const Reply r = post_job(srv, {{"kind", "qpe"}, {"payload", qpe_job_payload()}, {"seed", 3}});
  ASSERT_EQ(r.status, 202);
  const std::string id = r.body["id"];
  ASSERT_TRUE(jobs.wait(id, 60s));
  const Reply v = get(srv, "/jobs/" + id);
  EXPECT_EQ(v.status, 200);
  EXPECT_EQ(v.body["status"], "done");
  EXPECT_EQ(v.body["kind"], "qpe");
  EXPECT_EQ(v.body["seed"], 3);
  EXPECT_EQ(v.body["result"]["kind"], "qpe");
  EXPECT_TRUE(v.body.contains("finished_ms"));
}

TEST(ServiceHttp, MalformedRequestsAre400) {
  JobService jobs;
  TestServer srv(jobs);
  Json p = two_dof_payload();
  p.erase("stiffness");
  Reply r = post_job(srv, {{"kind", "modal"}, {"payload", p}});
  EXPECT_EQ(r.status, 400);
  EXPECT_NE(r.body["error"].get<std::string>().find("stiffness"), std::string::npos);
  EXPECT_EQ(post_job(srv, {{"kind", "heat"}, {"payload", two_dof_payload()}}).status, 400);
  EXPECT_EQ(post_job(srv, {{"payload", two_dof_payload()}}).status, 400);
  EXPECT_EQ(post_job(srv, {{"kind", "modal"}}).status, 400);
  EXPECT_EQ(post_job(srv, {{"kind", "modal"}, {"payload", two_dof_payload()}, {"seed", -1}}).status, 400);
  EXPECT_EQ(post_job(srv, {{"kind", "modal"}, {"payload", two_dof_payload()}, {"priority", 1}}).status, 400);
  auto res = srv.client().Post("/jobs", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST(ServiceHttp, AncillaCapIs422) {
  JobService jobs;
  TestServer srv(jobs);
  const Reply r = post_job(srv, {{"kind", "qpe"}, {"payload", qpe_job_payload(13)}});
  EXPECT_EQ(r.status, 422);
  EXPECT_NE(r.body["error"].get<std::string>().find("ancilla cap"), std::string::npos);
}

// ---------- job store ----------

TEST(ServiceJobs, QueuedJobHasNoResult) {
  JobService jobs(0);
  const std::string id = jobs.submit(jobs::JobKind::Modal, two_dof_payload(), 0);
  const Json v = *jobs.view(id);
  EXPECT_EQ(v["status"], "queued");
  EXPECT_FALSE(v.contains("result"));
  EXPECT_FALSE(v.contains("started_ms"));
  jobs.start_workers(1);
  EXPECT_EQ(finished_view(jobs, id)["status"], "done");
}

TEST(ServiceJobs, FifoOrder) {
  JobService jobs(0);
  const std::string a = jobs.submit(jobs::JobKind::Qpe, qpe_job_payload(10), 1);
  const std::string b = jobs.submit(jobs::JobKind::Modal, two_dof_payload(), 1);
  EXPECT_LT(a, b);
  jobs.start_workers(1);
  const Json va = finished_view(jobs, a), vb = finished_view(jobs, b);
  EXPECT_LE(va["finished_ms"].get<std::int64_t>(), vb["started_ms"].get<std::int64_t>());
}

TEST(ServiceJobs, FailureIsIsolated) {
  JobService jobs;
  Json bad = two_dof_payload();
  bad["mass"] = {1, 0, 0, -1};
  const std::string f1 = jobs.submit(jobs::JobKind::Modal, bad, 0);
  const std::string f2 = jobs.submit(jobs::JobKind::QgnnPredict, predict_job_payload(-50.0), 0);
  const std::string ok = jobs.submit(jobs::JobKind::Modal, two_dof_payload(), 0);
  for (const auto& id : {f1, f2}) {
    const Json v = finished_view(jobs, id);
    EXPECT_EQ(v["status"], "failed");
    EXPECT_FALSE(v["error"].get<std::string>().empty());
    EXPECT_FALSE(v.contains("result"));
  }
  const Json v = finished_view(jobs, ok);
  EXPECT_EQ(v["status"], "done");
  EXPECT_EQ(v["result"], jobs::run_modal(jobs::parse_modal_request(two_dof_payload())));
}

TEST(ServiceJobs, StatusNeverRegresses) {
  JobService jobs;
  const std::string id = jobs.submit(jobs::JobKind::Qpe, qpe_job_payload(11), 0);
  int last = 0;
  for (;;) {
    const JobStatus s = *jobs.status(id);
    EXPECT_GE(static_cast<int>(s), last);
    last = static_cast<int>(s);
    if (s == JobStatus::Done || s == JobStatus::Failed) break;
    std::this_thread::sleep_for(1ms);
  }
  EXPECT_EQ(last, static_cast<int>(JobStatus::Done));
}

TEST(ServiceJobs, FreshStoreForgetsIds) {
  std::string id;
  {
    JobService jobs;
    id = jobs.submit(jobs::JobKind::Modal, two_dof_payload(), 0);
    jobs.wait(id, 60s);
  }
  JobService restarted(0);
  EXPECT_FALSE(restarted.view("job-999999").has_value());
  // Ids restart, so an old id may name a new job but never the old record.
  EXPECT_FALSE(restarted.view(id).has_value());
}

TEST(ServiceJobs, SubmitValidatesBeforeStoring) {
  JobService jobs(0);
  EXPECT_THROW(jobs.submit(jobs::JobKind::Qpe, qpe_job_payload(13), 0), CapacityError);
  EXPECT_THROW(jobs.submit(jobs::JobKind::Modal, Json::object(), 0), InvalidArgument);
  EXPECT_EQ(jobs.submit(jobs::JobKind::Modal, two_dof_payload(), 0), "job-000001");
}

// ---------- CLI equivalence ----------

TEST(ServiceEquivalence, MatchesCliOutputs) {
  const auto dir = fresh_dir("service-equivalence");
  io::write_text_file(dir / "m.json", two_dof_payload().dump());
  ::testing::internal::CaptureStderr();
  ASSERT_EQ(cli::run_cli({"--seed", "21", "--output-dir", dir.string(), "qpe", "--matrix", (dir / "m.json").string(),
                          "--ancillas", "6", "--shots", "700", "--input-state", "uniform"}),
            0);
  ASSERT_EQ(cli::run_cli({"--output-dir", dir.string(), "modal", "--matrix", (dir / "m.json").string(),
                          "--mode-shapes"}),
            0);
  io::write_text_file(dir / "model.json", tiny_model().dump());
  io::write_text_file(dir / "frame.json", io::frame_to_json({0, std::vector<double>(9, 0.4)}).dump());
  ASSERT_EQ(cli::run_cli({"--output-dir", dir.string(), "predict", "--model", (dir / "model.json").string(),
                          "--frame", (dir / "frame.json").string(), "--nx", "3", "--ny", "3", "--steps", "2"}),
            0);
  ::testing::internal::GetCapturedStderr();

  JobService jobs;
  TestServer srv(jobs);
  Json qp = two_dof_payload();
  qp["n_ancilla"] = 6;
  qp["shots"] = 700;
  qp["input_state"] = "uniform";
  Json modal = two_dof_payload();
  modal["mode_shapes"] = true;
  const std::vector<std::pair<Json, std::string>> cases{
      {{{"kind", "qpe"}, {"payload", qp}, {"seed", 21}}, "qpe.json"},
      {{{"kind", "modal"}, {"payload", modal}}, "modal.json"},
      {{{"kind", "qgnn_predict"}, {"payload", predict_job_payload()}}, "prediction.json"},
  };
  for (const auto& [request, file] : cases) {
    const Reply r = post_job(srv, request);
    ASSERT_EQ(r.status, 202) << r.body.dump();
    ASSERT_TRUE(jobs.wait(r.body["id"], 60s));
    const Reply v = get(srv, "/jobs/" + r.body["id"].get<std::string>());
    ASSERT_EQ(v.body["status"], "done") << v.body.dump();
    EXPECT_EQ(v.body["result"], io::read_json_file(dir / file)) << file;
  }
}
