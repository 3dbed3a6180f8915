#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace geoharvest::sitegen {

// Per-path scripted status sequences: each request pops the next status;
// a 200 (or an exhausted script) falls through to the file on disk.
struct FailureScript {
  std::map<std::string, std::vector<int>> sequences;
};

// Serves a generated site tree over HTTP and logs every request with a
// monotonic timestamp — the politeness oracle for fetcher tests.
class FixtureServer {
 public:
  struct Request {
    double t_mono_ms = 0.0;
    std::string method;
    std::string path;
    int status = 0;
  };

  // port 0 picks a free ephemeral port. Throws IoError when binding fails.
  FixtureServer(std::string root_dir, int port = 0, FailureScript script = {});
  ~FixtureServer();

  FixtureServer(const FixtureServer&) = delete;
  FixtureServer& operator=(const FixtureServer&) = delete;

  int port() const;
  std::string origin() const;  // http://127.0.0.1:port

  std::vector<Request> requests() const;  // snapshot
  std::string request_log_jsonl() const;
  void write_request_log(const std::string& path) const;

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geoharvest::sitegen
