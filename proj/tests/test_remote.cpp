#include <gtest/gtest.h>

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "rtt/remote.hpp"
#include "rtt/wire.hpp"
#include "support/fixtures.hpp"
#include "support/stub_server.hpp"

using nlohmann::json;

namespace {

json golden(const std::string& name) {
  std::ifstream in(testing_support::fixture("wire/" + name));
  return json::parse(in);
}

using testing_support::reply;
using testing_support::serve_builtins;
using testing_support::StubServer;

rtt::RemoteEndpoint endpoint(const std::string& url, int timeout_ms = 2000, std::size_t max_batch = 64) {
  rtt::RemoteEndpoint ep;
  ep.url = url;
  ep.timeout_ms = timeout_ms;
  ep.max_batch = max_batch;
  return ep;
}

}  // namespace

// ---------------------------------------------------------------------------
// Codec

TEST(WireCodec, RequestsMatchGoldenFixtures) {
  std::vector<std::string> c{"good movie", "awful film"};
  EXPECT_EQ(rtt::wire::classify_request(c), golden("classify_request.json"));
  std::vector<std::string> t{"awful film", "good movie"};
  EXPECT_EQ(rtt::wire::translate_request(t, rtt::LanguageId("en"), rtt::LanguageId("es")),
            golden("translate_request.json"));
  std::vector<std::string> e{"good movie", "", "film"};
  EXPECT_EQ(rtt::wire::encode_request(e), golden("encode_request.json"));
}

TEST(WireCodec, ParsesGoldenResponses) {
  auto preds = rtt::wire::parse_classify_response(golden("classify_response.json"), 2);
  ASSERT_EQ(preds.size(), 2u);
  EXPECT_EQ(preds[0].label, 1);
  EXPECT_EQ(preds[0].probs, (std::vector<double>{0.25, 0.75}));
  EXPECT_EQ(preds[0].confidence, 0.75);
  EXPECT_EQ(preds[1].label, 0);
  EXPECT_EQ(preds[1].confidence, 0.875);
  EXPECT_EQ(rtt::wire::parse_translate_response(golden("translate_response.json"), 2),
            (std::vector<std::string>{"terrible_es film", "good movie"}));
  auto vecs = rtt::wire::parse_encode_response(golden("encode_response.json"), 3);
  EXPECT_EQ(vecs[0], (rtt::Vector{0.6, 0.8, 0.0}));
}

TEST(WireCodec, SchemaViolations) {
  using rtt::SchemaError;
  EXPECT_THROW(rtt::wire::parse_classify_response(json::parse(R"({"predictions":[{"label":1}]})"), 1), SchemaError);
  EXPECT_THROW(rtt::wire::parse_classify_response(json::parse(R"({"predictions":[]})"), 1), SchemaError);
  EXPECT_THROW(rtt::wire::parse_classify_response(json::parse(R"({"preds":[]})"), 0), SchemaError);
  EXPECT_THROW(rtt::wire::parse_classify_response(
                   json::parse(R"({"predictions":[{"label":1,"probs":[0.3,0.3]}]})"), 1),
               SchemaError);
  EXPECT_THROW(rtt::wire::parse_classify_response(
                   json::parse(R"({"predictions":[{"label":2,"probs":[0.5,0.5]}]})"), 1),
               SchemaError);
  EXPECT_THROW(rtt::wire::parse_classify_response(
                   json::parse(R"({"predictions":[{"label":"1","probs":[0.5,0.5]}]})"), 1),
               SchemaError);
  EXPECT_THROW(rtt::wire::parse_translate_response(json::parse(R"({"texts":[1]})"), 1), SchemaError);
  EXPECT_THROW(rtt::wire::parse_encode_response(json::parse(R"({"vectors":[[1],[1,2]]})"), 2), SchemaError);
  EXPECT_THROW(rtt::wire::parse_encode_response(json::parse(R"({"vectors":[["x"]]})"), 1), SchemaError);
}

TEST(WireCodec, PredictionJsonRoundTrips) {
  auto p = rtt::Prediction::from_probs({0.125, 0.875});
  EXPECT_EQ(rtt::wire::parse_prediction(rtt::wire::prediction_json(p)), p);
}

TEST(WireCodec, RequestParser) {
  EXPECT_EQ(rtt::wire::parse_texts_request(golden("classify_request.json")),
            (std::vector<std::string>{"good movie", "awful film"}));
  EXPECT_THROW(rtt::wire::parse_texts_request(json::parse(R"({"texts":"x"})")), rtt::SchemaError);
}

// ---------------------------------------------------------------------------
// HTTP client against stub servers

TEST(RemoteClientTest, RejectsBadEndpoints) {
  EXPECT_THROW(rtt::RemoteClient(endpoint("https://x")), rtt::ConfigError);
  EXPECT_THROW(rtt::RemoteClient(endpoint("http://")), rtt::ConfigError);
  EXPECT_THROW(rtt::RemoteClient(endpoint("http://x", 0)), rtt::ConfigError);
}

TEST(RemoteClientTest, GoldenReplay) {
  StubServer stub;
  std::atomic<int> bad_requests{0};
  stub.server().Post("/api/v1/classify", [&](const httplib::Request& req, httplib::Response& res) {
    if (json::parse(req.body) != golden("classify_request.json")) ++bad_requests;
    reply(res, golden("classify_response.json"));
  });
  stub.server().Post("/api/v1/translate", [&](const httplib::Request& req, httplib::Response& res) {
    if (json::parse(req.body) != golden("translate_request.json")) ++bad_requests;
    reply(res, golden("translate_response.json"));
  });
  stub.server().Post("/api/v1/encode", [&](const httplib::Request& req, httplib::Response& res) {
    if (json::parse(req.body) != golden("encode_request.json")) ++bad_requests;
    reply(res, golden("encode_response.json"));
  });
  stub.start();
  auto suite = rtt::make_remote_backends(endpoint(stub.url("/api/")));

  auto preds = suite.victim->classify(std::vector<std::string>{"good movie", "awful film"});
  EXPECT_EQ(preds, rtt::wire::parse_classify_response(golden("classify_response.json"), 2));
  auto texts = suite.translator->translate(std::vector<std::string>{"awful film", "good movie"}, rtt::english(),
                                           rtt::LanguageId("es"));
  EXPECT_EQ(texts, (std::vector<std::string>{"terrible_es film", "good movie"}));
  auto vecs = suite.encoder->encode(std::vector<std::string>{"good movie", "", "film"});
  EXPECT_EQ(vecs[2], (rtt::Vector{0, 0, 1}));
  EXPECT_EQ(bad_requests.load(), 0);
}

TEST(RemoteClientTest, LoopbackMatchesBuiltinsAndPreservesOrderAcrossChunks) {
  auto builtin = rtt::make_builtin_backends(testing_support::fixture_resources());
  StubServer stub;
  std::atomic<int> calls{0};
  stub.server().set_pre_routing_handler([&](const httplib::Request&, httplib::Response&) {
    ++calls;
    return httplib::Server::HandlerResponse::Unhandled;
  });
  serve_builtins(stub.server(), builtin);
  stub.start();
  auto remote = rtt::make_remote_backends(endpoint(stub.url(), 5000, 7));

  std::vector<std::string> texts;
  for (const auto& ex : testing_support::fixture_corpus()) texts.push_back(ex.text);
  auto rp = remote.victim->classify(texts);
  auto bp = builtin.victim->classify(texts);
  ASSERT_EQ(rp.size(), bp.size());
  for (std::size_t i = 0; i < rp.size(); ++i) {
    EXPECT_EQ(rp[i].label, bp[i].label);
    EXPECT_NEAR(rp[i].prob(1), bp[i].prob(1), 1e-12);
  }
  EXPECT_EQ(calls.load(), static_cast<int>((texts.size() + 6) / 7));
  EXPECT_EQ(remote.translator->translate(texts, rtt::english(), rtt::LanguageId("es")),
            builtin.translator->translate(texts, rtt::english(), rtt::LanguageId("es")));
  auto rv = remote.encoder->encode(texts);
  auto bv = builtin.encoder->encode(texts);
  for (std::size_t i = 0; i < rv.size(); ++i) {
    for (std::size_t k = 0; k < rv[i].size(); ++k) ASSERT_NEAR(rv[i][k], bv[i][k], 1e-12);
  }
}

TEST(RemoteClientTest, EmptyBatchMakesNoCall) {
  auto suite = rtt::make_remote_backends(endpoint("http://127.0.0.1:1"));
  EXPECT_TRUE(suite.victim->classify(std::vector<std::string>{}).empty());
}

TEST(RemoteClientTest, Non200IsStatusErrorWithBody) {
  StubServer stub;
  stub.server().Post(rtt::wire::kClassifyPath, [](const httplib::Request&, httplib::Response& res) {
    reply(res, golden("error_response.json"), 503);
  });
  stub.start();
  auto suite = rtt::make_remote_backends(endpoint(stub.url()));
  try {
    suite.victim->classify(std::vector<std::string>{"x"});
    FAIL();
  } catch (const rtt::StatusError& e) {
    EXPECT_EQ(e.status(), 503);
    EXPECT_NE(std::string(e.what()).find("model not loaded"), std::string::npos);
  }
}

TEST(RemoteClientTest, MissingProbabilitiesIsSchemaError) {
  StubServer stub;
  stub.server().Post(rtt::wire::kClassifyPath, [](const httplib::Request&, httplib::Response& res) {
    reply(res, json::parse(R"({"predictions":[{"label":1}]})"));
  });
  stub.server().Post(rtt::wire::kEncodePath, [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  stub.start();
  auto suite = rtt::make_remote_backends(endpoint(stub.url()));
  EXPECT_THROW(suite.victim->classify(std::vector<std::string>{"x"}), rtt::SchemaError);
  EXPECT_THROW(suite.encoder->encode(std::vector<std::string>{"x"}), rtt::SchemaError);
}

TEST(RemoteClientTest, WrongCountIsSchemaError) {
  StubServer stub;
  stub.server().Post(rtt::wire::kTranslatePath, [](const httplib::Request&, httplib::Response& res) {
    reply(res, json::parse(R"({"texts":["only one"]})"));
  });
  stub.start();
  auto suite = rtt::make_remote_backends(endpoint(stub.url()));
  EXPECT_THROW(suite.translator->translate(std::vector<std::string>{"a", "b"}, rtt::english(), rtt::LanguageId("es")),
               rtt::SchemaError);
}

TEST(RemoteClientTest, SlowServerIsTimeout) {
  StubServer stub;
  stub.server().Post(rtt::wire::kClassifyPath, [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    reply(res, golden("classify_response.json"));
  });
  stub.start();
  auto suite = rtt::make_remote_backends(endpoint(stub.url(), 100));
  EXPECT_THROW(suite.victim->classify(std::vector<std::string>{"good movie", "awful film"}), rtt::TimeoutError);
}

TEST(RemoteClientTest, RefusedConnectionIsConnectionError) {
  // Bound but never listening, so connects are refused.
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  ASSERT_GE(fd, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
  socklen_t len = sizeof addr;
  ASSERT_EQ(::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len), 0);
  int port = ntohs(addr.sin_port);
  auto suite = rtt::make_remote_backends(endpoint("http://127.0.0.1:" + std::to_string(port)));
  EXPECT_THROW(suite.victim->classify(std::vector<std::string>{"x"}), rtt::ConnectionError);
  ::close(fd);
}

TEST(RemoteClientTest, ErrorsAreDistinctBackendErrors) {
  // Every transport failure must be catchable as BackendError by the engine.
  static_assert(std::is_base_of_v<rtt::BackendError, rtt::TimeoutError>);
  static_assert(std::is_base_of_v<rtt::BackendError, rtt::ConnectionError>);
  static_assert(std::is_base_of_v<rtt::BackendError, rtt::SchemaError>);
  static_assert(std::is_base_of_v<rtt::BackendError, rtt::StatusError>);
  static_assert(!std::is_base_of_v<rtt::TimeoutError, rtt::ConnectionError>);
  SUCCEED();
}
