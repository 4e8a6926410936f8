#pragma once

// HTTP client for the model-server protocol in rtt/wire.hpp.
//
// A fresh connection is opened per request, so one RemoteClient can be shared
// by concurrent callers. Large batches are split into chunks of max_batch and
// reassembled in request order.

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "rtt/backends.hpp"
#include "rtt/errors.hpp"
#include "rtt/wire.hpp"

namespace rtt {

struct RemoteEndpoint {
  std::string url;  // http://host:port[/prefix]
  int timeout_ms = 30000;
  std::size_t max_batch = 64;
};

class RemoteClient {
 public:
  explicit RemoteClient(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    constexpr std::string_view kScheme = "http://";
    const auto& url = endpoint_.url;
    if (url.rfind(kScheme, 0) != 0) throw ConfigError("endpoint must be an http:// URL: " + url);
    auto slash = url.find('/', kScheme.size());
    origin_ = url.substr(0, slash);
    if (slash != std::string::npos) prefix_ = url.substr(slash);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    if (origin_.size() == kScheme.size()) throw ConfigError("endpoint has no host: " + url);
    if (endpoint_.timeout_ms <= 0) throw ConfigError("endpoint timeout must be positive");
    if (endpoint_.max_batch == 0) throw ConfigError("max batch must be at least 1");
  }

  const RemoteEndpoint& endpoint() const noexcept { return endpoint_; }

  // POSTs a JSON body and returns the parsed 200 response.
  nlohmann::json call(const std::string& path, const nlohmann::json& request) const {
    httplib::Client cli(origin_);
    auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);

    auto res = cli.Post(prefix_ + path, request.dump(), "application/json");
    if (!res) {
      auto err = res.error();
      auto what = httplib::to_string(err) + " calling " + origin_ + prefix_ + path;
      switch (err) {
        case httplib::Error::Connection:
          throw ConnectionError(what);
        case httplib::Error::ConnectionTimeout:
        case httplib::Error::Read:
          throw TimeoutError(what);
        default:
          throw BackendError(what);
      }
    }
    if (res->status != 200) {
      std::string body = res->body;
      auto parsed = nlohmann::json::parse(body, nullptr, false);
      if (!parsed.is_discarded() && parsed.is_object() && parsed.contains("error") &&
          parsed["error"].is_string()) {
        body = parsed["error"].get<std::string>();
      }
      throw StatusError(res->status, body);
    }
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) throw SchemaError("response body is not JSON");
    return parsed;
  }

  // Splits texts into max_batch chunks, calls fn(chunk) for each and
  // concatenates the results in order.
  template <typename T, typename Fn>
  std::vector<T> batched(std::span<const std::string> texts, Fn&& fn) const {
    std::vector<T> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); i += endpoint_.max_batch) {
      auto chunk = texts.subspan(i, std::min(endpoint_.max_batch, texts.size() - i));
      auto part = fn(chunk);
      for (auto& x : part) out.push_back(std::move(x));
    }
    return out;
  }

 private:
  RemoteEndpoint endpoint_;
  std::string origin_;
  std::string prefix_;
};

class RemoteClassifier final : public Classifier {
 public:
  explicit RemoteClassifier(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}

  std::vector<Prediction> classify(std::span<const std::string> texts) const override {
    return client_->batched<Prediction>(texts, [&](std::span<const std::string> chunk) {
      auto body = client_->call(wire::kClassifyPath, wire::classify_request(chunk));
      return wire::parse_classify_response(body, chunk.size());
    });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemoteTranslator final : public Translator {
 public:
  explicit RemoteTranslator(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}

  std::vector<std::string> translate(std::span<const std::string> texts, const LanguageId& src,
                                     const LanguageId& tgt) const override {
    return client_->batched<std::string>(texts, [&](std::span<const std::string> chunk) {
      auto body = client_->call(wire::kTranslatePath, wire::translate_request(chunk, src, tgt));
      return wire::parse_translate_response(body, chunk.size());
    });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

class RemoteEncoder final : public Encoder {
 public:
  explicit RemoteEncoder(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}

  std::vector<Vector> encode(std::span<const std::string> texts) const override {
    return client_->batched<Vector>(texts, [&](std::span<const std::string> chunk) {
      auto body = client_->call(wire::kEncodePath, wire::encode_request(chunk));
      return wire::parse_encode_response(body, chunk.size());
    });
  }

 private:
  std::shared_ptr<const RemoteClient> client_;
};

inline BackendSuite make_remote_backends(const RemoteEndpoint& endpoint) {
  auto client = std::make_shared<const RemoteClient>(endpoint);
  BackendSuite suite;
  suite.victim = std::make_shared<RemoteClassifier>(client);
  suite.translator = std::make_shared<RemoteTranslator>(client);
  suite.encoder = std::make_shared<RemoteEncoder>(client);
  return suite;
}

}  // namespace rtt
