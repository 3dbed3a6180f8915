#include "geoharvest/sitegen/server.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"

namespace geoharvest::sitegen {

namespace fs = std::filesystem;
using SteadyClock = std::chrono::steady_clock;

struct FixtureServer::Impl {
  std::string root;
  FailureScript script;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  SteadyClock::time_point epoch = SteadyClock::now();

  mutable std::mutex mu;
  std::vector<Request> log;
  std::map<std::string, size_t> script_pos;

  double now_ms() const {
    return std::chrono::duration<double, std::milli>(SteadyClock::now() - epoch).count();
  }

  void record(const std::string& method, const std::string& path, int status) {
    std::lock_guard<std::mutex> lock(mu);
    log.push_back({now_ms(), method, path, status});
  }

  // resolve to a file inside root; rejects traversal
  std::optional<std::string> read_site_file(const std::string& path) {
    if (path.find("..") != std::string::npos) return std::nullopt;
    fs::path p = fs::path(root) / fs::path(path).relative_path();
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int scripted_status(const std::string& path) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = script.sequences.find(path);
    if (it == script.sequences.end()) return 0;
    size_t& pos = script_pos[path];
    if (pos >= it->second.size()) return 0;
    return it->second[pos++];
  }
};

FixtureServer::FixtureServer(std::string root_dir, int port, FailureScript script)
    : impl_(std::make_unique<Impl>()) {
  impl_->root = std::move(root_dir);
  impl_->script = std::move(script);

  impl_->server.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
    // timestamp taken at receipt, before any handling work
    const double t = impl_->now_ms();
    int status = impl_->scripted_status(req.path);
    if (status != 0 && status != 200) {
      res.status = status;
      res.set_content("scripted failure", "text/plain");
    } else {
      auto body = impl_->read_site_file(req.path);
      if (!body) {
        res.status = 404;
        res.set_content("not found", "text/plain");
      } else {
        res.status = 200;
        const bool is_txt = req.path.size() >= 4 &&
                            req.path.compare(req.path.size() - 4, 4, ".txt") == 0;
        res.set_content(*body, is_txt ? "text/plain; charset=utf-8"
                                      : "text/html; charset=utf-8");
      }
    }
    {
      std::lock_guard<std::mutex> lock(impl_->mu);
      impl_->log.push_back({t, req.method, req.path, res.status});
    }
  });

  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) throw IoError("fixture server: could not bind an ephemeral port");
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port))
      throw IoError("fixture server: port " + std::to_string(port) + " unavailable");
    impl_->port = port;
  }

  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  for (int i = 0; i < 200 && !impl_->server.is_running(); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  if (!impl_->server.is_running()) throw IoError("fixture server failed to start");
}

FixtureServer::~FixtureServer() { stop(); }

int FixtureServer::port() const { return impl_->port; }

std::string FixtureServer::origin() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

std::vector<FixtureServer::Request> FixtureServer::requests() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->log;
}

std::string FixtureServer::request_log_jsonl() const {
  std::string out;
  for (const auto& r : requests()) {
    nlohmann::json j{{"t_mono_ms", r.t_mono_ms},
                     {"method", r.method},
                     {"path", r.path},
                     {"status", r.status}};
    out += j.dump() + "\n";
  }
  return out;
}

void FixtureServer::write_request_log(const std::string& path) const {
  fsio::write_file(path, request_log_jsonl());
}

void FixtureServer::stop() {
  if (!impl_) return;
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace geoharvest::sitegen
