#include "geoharvest/net/http.hpp"

#include <httplib.h>

#include <atomic>
#include <cmath>

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/url.hpp"

namespace geoharvest::net {

namespace {
std::atomic<uint64_t> g_requests{0};
}

struct HttpSession::Impl {
  httplib::Client client;
  std::string user_agent;

  Impl(const std::string& host, int port, std::string ua, double timeout_s)
      : client(host, port), user_agent(std::move(ua)) {
    auto secs = static_cast<time_t>(timeout_s);
    auto usecs = static_cast<time_t>((timeout_s - std::floor(timeout_s)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_keep_alive(false);
  }
};

HttpSession::HttpSession(std::string origin, std::string user_agent, double timeout_s) {
  auto u = url::parse(origin);
  if (!u || u->scheme != "http")
    throw ValidationError("http session: expected http://host[:port] origin, got '" + origin +
                          "'");
  int port = u->port >= 0 ? u->port : 80;
  impl_ = std::make_unique<Impl>(u->host, port, std::move(user_agent), timeout_s);
}

HttpSession::~HttpSession() = default;

HttpResponse HttpSession::get(const std::string& path_and_query) {
  g_requests.fetch_add(1, std::memory_order_relaxed);
  httplib::Headers headers = {{"User-Agent", impl_->user_agent}};
  auto res = impl_->client.Get(path_and_query, headers);
  HttpResponse out;
  if (!res) {
    out.network_error = true;
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

uint64_t HttpSession::total_requests() { return g_requests.load(std::memory_order_relaxed); }

std::string url_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

}  // namespace geoharvest::net
