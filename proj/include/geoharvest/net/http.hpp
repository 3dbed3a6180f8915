#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace geoharvest::net {

struct HttpResponse {
  int status = 0;           // 0 on network error
  std::string body;
  bool network_error = false;
  std::string error;
};

// The single place library code makes HTTP requests. The process-wide
// request counter lets tests assert that non-fetch/geocode stages never
// touch the network.
class HttpSession {
 public:
  // origin: "http://host[:port]"
  HttpSession(std::string origin, std::string user_agent, double timeout_s = 15.0);
  ~HttpSession();

  HttpSession(const HttpSession&) = delete;
  HttpSession& operator=(const HttpSession&) = delete;

  HttpResponse get(const std::string& path_and_query);

  static uint64_t total_requests();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string url_encode(std::string_view s);

}  // namespace geoharvest::net
